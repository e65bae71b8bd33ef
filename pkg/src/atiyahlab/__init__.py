"""Exact-arithmetic linear systems on the ruled surface of the nonsplit
extension bundle over an elliptic curve."""

from .errors import (
    AtiyahLabError,
    CertificationError,
    ConfigError,
    CutoffInstabilityError,
    SeriesPrecisionError,
    VerificationError,
)
from .fields import QQ, FieldElem, FiniteField, make_extension_field, solve_quadratic
from .curve import (
    CurvePoint,
    Divisor,
    WeierstrassCurve,
    certify_non_torsion,
    certify_not_p_torsion,
    reduce_curve_mod_p,
    reduce_point_mod_p,
)
from .funcfield import FuncElem
from .riemann_roch import RRSpace, rr_basis
from .surface import (
    AtiyahSurface,
    CechCocycle,
    CechCover,
    SectionSpace,
    SectionVector,
    build_cocycle,
    h0_fiber_twist,
    h0_multiple_section,
    make_surface,
    sym_transition,
)
from .fat_points import (
    EvalMatrix,
    FatPoint,
    FatSystem,
    LambdaRecord,
    MuRecord,
    WitnessDivisor,
    char_p_witness,
    expected_dimension,
    fat_system,
    genericity_scan,
    h0_fat,
    jet_matrix,
    max_multiplicity,
    min_level,
    mu,
    multiplicity_step_check,
    sample_fat_point,
    translate_marked_fiber,
    verify_jets,
)
from .config import ExperimentConfig, JobSpec, load_config
from .jobs import ResultRow, run_config

__all__ = [
    "AtiyahLabError",
    "CertificationError",
    "ConfigError",
    "CutoffInstabilityError",
    "SeriesPrecisionError",
    "VerificationError",
    "QQ",
    "FieldElem",
    "FiniteField",
    "make_extension_field",
    "solve_quadratic",
    "CurvePoint",
    "Divisor",
    "WeierstrassCurve",
    "certify_non_torsion",
    "certify_not_p_torsion",
    "reduce_curve_mod_p",
    "reduce_point_mod_p",
    "FuncElem",
    "RRSpace",
    "rr_basis",
    "AtiyahSurface",
    "CechCocycle",
    "CechCover",
    "SectionSpace",
    "SectionVector",
    "build_cocycle",
    "h0_fiber_twist",
    "h0_multiple_section",
    "make_surface",
    "sym_transition",
    "EvalMatrix",
    "FatPoint",
    "FatSystem",
    "LambdaRecord",
    "MuRecord",
    "WitnessDivisor",
    "char_p_witness",
    "expected_dimension",
    "fat_system",
    "genericity_scan",
    "h0_fat",
    "jet_matrix",
    "max_multiplicity",
    "min_level",
    "mu",
    "multiplicity_step_check",
    "sample_fat_point",
    "translate_marked_fiber",
    "verify_jets",
    "ExperimentConfig",
    "JobSpec",
    "load_config",
    "ResultRow",
    "run_config",
]

__version__ = "0.1.0"
