"""Job dispatch: turns an ExperimentConfig into a list of ResultRows.

Each job is pure given its parameters and its own deterministically seeded
RNG (derived from the run seed and the job's position), so a work pool may
execute them in any order; rows are assembled in config order regardless.
Verdicts are PASS/FAIL only for jobs that check a stated expectation; plain
measurements report INFO.  Any library exception is captured as an ERROR row
with the job id attached rather than aborting the whole run.
"""

from __future__ import annotations

import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor

from .config import (ExperimentConfig, JobSpec, parse_bool, parse_fat_points,
                     parse_int, parse_int_list, parse_level_mult_pairs,
                     parse_plain_points)
from .curve import (WeierstrassCurve, certify_non_torsion,
                    certify_not_p_torsion, reduce_curve_mod_p,
                    reduce_point_mod_p)
from .errors import AtiyahLabError, ConfigError
from .fat_points import (FatPoint, char_p_witness, fat_system, h0_fat,
                         max_multiplicity, min_level, multiplicity_step_check,
                         sample_fat_point)
from .fields import FieldElem, field_from_config
from .surface import make_surface


class ResultRow:
    def __init__(self, ident, kind, params, status, values, certificates,
                 error=None, wall_time=0.0):
        self.ident = ident
        self.kind = kind
        self.params = dict(params)
        self.status = status            # PASS | FAIL | INFO | ERROR
        self.values = values
        self.certificates = certificates
        self.error = error
        self.wall_time = wall_time

    def to_json_obj(self) -> dict:
        # wall time deliberately excluded: the JSON record is byte-stable
        return {
            "id": self.ident,
            "type": self.kind,
            "inputs": self.params,
            "status": self.status,
            "values": self.values,
            "certificates": self.certificates,
            "error": self.error,
        }


class RunContext:
    """Field, curve and surface shared by the jobs of a run (lazy, locked)."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        try:
            self.field = field_from_config(config.p, config.k)
            self.curve = WeierstrassCurve(self.field,
                                          *[self.field.elem(c)
                                            for c in config.curve_coeffs])
            self.q = self.curve.point(self.field.elem(config.q[0]),
                                      self.field.elem(config.q[1]))
            self.T = None
            if config.T is not None:
                self.T = self.curve.point(self.field.elem(config.T[0]),
                                          self.field.elem(config.T[1]))
                if self.T == self.q:
                    raise ValueError("T must differ from the marked point q")
        except (ValueError, ArithmeticError) as exc:
            raise ConfigError(f"inconsistent field/curve data: {exc}") from exc
        self._surface = None
        self._lock = threading.Lock()

    @property
    def surface(self):
        if self._surface is None:
            with self._lock:
                if self._surface is None:
                    self._surface = make_surface(self.curve, self.q, T=self.T)
        return self._surface


def _job_rng(config: ExperimentConfig, index: int) -> random.Random:
    return random.Random((config.seed << 20) ^ (index * 0x9E3779B1 + 1))


def _parse_point(ctx: RunContext, text: str, what: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"{what}: expected x,y, got {text!r}")
    return ctx.curve.point(ctx.field.elem(parts[0]), ctx.field.elem(parts[1]))


def _resolve_fat_point(ctx, params, m, rng, certified=False) -> FatPoint:
    base = params.get("base", "random").strip()
    w0 = params.get("w0", "random").strip()
    if base == "random":
        fp = sample_fat_point(ctx.surface, rng, m, certified=certified)
        if w0 != "random":
            fp = FatPoint(fp.base, ctx.field.elem(w0), m)
        return fp
    P = _parse_point(ctx, base, "base")
    w = (FieldElem(ctx.field, ctx.field.random(rng)) if w0 == "random"
         else ctx.field.elem(w0))
    return FatPoint(P, w, m)


# --- individual job runners (values, certificates, status) -------------------

def _run_h0(ctx, params, rng):
    levels = parse_int_list(params.get("levels", "0..4"), "levels")
    mode = params.get("twisted", "false").strip().lower()
    variants = {"false": [False], "true": [True],
                "both": [False, True]}.get(mode)
    if variants is None:
        raise ConfigError(f"twisted must be true/false/both, got {mode!r}")
    dims, certs = {}, {}
    for tw in variants:
        key = "twisted" if tw else "plain"
        dims[key] = {}
        certs[key] = {}
        for level in levels:
            space = ctx.surface.h0(level, twisted=tw)
            dims[key][str(level)] = space.dim
            certs[key][str(level)] = space.serialize()
    return {"dims": dims}, {"spaces": certs}, "INFO"


def _run_h0_fat(ctx, params, rng):
    level = parse_int(params.get("level", "1"), "level")
    pts = []
    for x, y, w0, m in parse_fat_points(params["points"], "points"):
        P = ctx.curve.point(ctx.field.elem(x), ctx.field.elem(y))
        pts.append(FatPoint(P, ctx.field.elem(w0), m))
    system = fat_system(ctx.surface, level, pts)
    values = {"dim": system.dim,
              "projective_dim": system.dim - 1,
              "expected_projective_dim": system.expected,
              "superabundant": system.superabundant}
    return values, {"system": system.serialize()}, "INFO"


def _run_lambda(ctx, params, rng):
    ms = parse_int_list(params.get("m", "1"), "m")
    cap = parse_int(params["cap"], "cap") if params.get("cap") else None
    certify = parse_bool(params.get("certify", "true"), "certify")
    trials = parse_int(params.get("trials", "1"), "trials")
    values, certs = {}, {}
    for m in ms:
        per_trial = []
        for t in range(trials):
            fp = _resolve_fat_point(ctx, params, m, rng, certified=certify)
            rec = min_level(ctx.surface, m, fp, cap=cap, certify=certify)
            per_trial.append(rec)
        best = min((r for r in per_trial if r.value is not None),
                   key=lambda r: r.value, default=per_trial[0])
        values[str(m)] = {"value": best.value, "status": best.status,
                          "observed": [r.value for r in per_trial]}
        certs[str(m)] = [r.serialize() for r in per_trial]
    return {"lambda": values}, {"records": certs}, "INFO"


def _run_mu(ctx, params, rng):
    levels = parse_int_list(params.get("levels", "1"), "levels")
    values, certs = {}, {}
    for level in levels:
        fp = _resolve_fat_point(ctx, params, 1, rng)
        rec = max_multiplicity(ctx.surface, level, fp)
        values[str(level)] = rec.value
        certs[str(level)] = rec.serialize()
    return {"mu": values}, {"records": certs}, "INFO"


def _run_verify_multiple_section(ctx, params, rng):
    p = ctx.field.characteristic
    default = "0..6" if p == 0 else f"0..{2 * p + 2}"
    ns = parse_int_list(params.get("n", default), "n")
    dims, certs, ok = {}, {}, True
    for n in ns:
        space = ctx.surface.h0(n, twisted=False)
        expect = 1 if p == 0 else n // p + 1
        dims[str(n)] = {"dim": space.dim, "expected": expect}
        certs[str(n)] = space.serialize()
        ok = ok and space.dim == expect
    return ({"dims": dims, "all_match": ok}, {"spaces": certs},
            "PASS" if ok else "FAIL")


def _run_verify_twist_dimension(ctx, params, rng):
    levels = parse_int_list(params.get("levels", "0..8"), "levels")
    dims, certs, ok = {}, {}, True
    for level in levels:
        space = ctx.surface.h0(level, twisted=True)
        dims[str(level)] = {"dim": space.dim, "expected": level + 1}
        certs[str(level)] = space.serialize()
        ok = ok and space.dim == level + 1
    return ({"dims": dims, "all_match": ok}, {"spaces": certs},
            "PASS" if ok else "FAIL")


def _run_verify_step(ctx, params, rng):
    if ctx.field.characteristic == 0:
        raise ConfigError("the step check needs positive characteristic")
    fp = _resolve_fat_point(ctx, params, 1, rng, certified=True)
    rec_prev, rec_p, holds = multiplicity_step_check(ctx.surface, fp)
    p = ctx.field.characteristic
    values = {"p": p, "lambda_prev": rec_prev.value, "lambda_p": rec_p.value,
              "bound": p + rec_prev.value, "holds": holds}
    certs = {"prev": rec_prev.serialize(), "p": rec_p.serialize()}
    return values, certs, "PASS" if holds else "FAIL"


def _run_example_theorem(ctx, params, rng):
    level = parse_int(params.get("level", "11"), "level")
    mults = parse_int_list(params.get("multiplicities", "5"), "multiplicities")
    p = ctx.field.characteristic
    pts = []
    if params.get("points", "random").strip() == "random":
        avoid = set()
        for m in mults:
            for _ in range(200):
                fp = sample_fat_point(ctx.surface, rng, m, certified=True)
                if fp.base not in avoid:
                    break
            avoid.add(fp.base)
            pts.append(fp)
    else:
        triples = parse_plain_points(params["points"], "points")
        if len(triples) != len(mults):
            raise ConfigError("one point per multiplicity required")
        for (x, y, w0), m in zip(triples, mults):
            P = ctx.curve.point(ctx.field.elem(x), ctx.field.elem(y))
            pts.append(FatPoint(P, ctx.field.elem(w0), m))
    if p == 0:
        for fp in pts:
            certify_non_torsion(fp.class_point(ctx.surface))
        dim = h0_fat(ctx.surface, level, pts)
        values = {"characteristic": 0, "dim": dim, "expected_empty": True,
                  "empty": dim == 0}
        system = fat_system(ctx.surface, level, pts)
        return (values, {"system": system.serialize()},
                "PASS" if dim == 0 else "FAIL")
    witness = char_p_witness(ctx.surface, level, mults, pts)
    dim = h0_fat(ctx.surface, level, pts)
    values = {"characteristic": p, "dim": dim, "nonempty": dim >= 1,
              "witness_ok": True, "leftover": witness.leftover}
    return (values, {"witness": witness.serialize()},
            "PASS" if dim >= 1 else "FAIL")


def _run_group_order(ctx, params, rng):
    if ctx.field.characteristic == 0:
        raise ConfigError("group enumeration needs a finite field")
    gs = ctx.curve.group_structure_small()
    values = {"order": gs.order, "cyclic": gs.cyclic, "exponent": gs.exponent,
              "generator": None if gs.generator.is_infinity else
              [gs.generator.x.to_text(), gs.generator.y.to_text()]}
    status = "INFO"
    checks = {}
    if params.get("expect_order"):
        want = parse_int(params["expect_order"], "expect_order")
        checks["order"] = (gs.order == want)
    if params.get("expect_cyclic"):
        want = parse_bool(params["expect_cyclic"], "expect_cyclic")
        checks["cyclic"] = (gs.cyclic == want)
    if checks:
        status = "PASS" if all(checks.values()) else "FAIL"
        values["checks"] = checks
    return values, {}, status


def _run_compare_char(ctx, params, rng):
    if ctx.field.characteristic != 0:
        raise ConfigError("the comparison harness starts from a rational model")
    p = parse_int(params.get("p", "3"), "p")
    k = parse_int(params.get("k", "1"), "k")
    pairs = parse_level_mult_pairs(params.get("pairs", "3:2; 6:3"), "pairs")
    base = params.get("base")
    if not base:
        raise ConfigError("compare-char needs an integral base point 'base'")
    w0_text = params.get("w0", "1").strip()

    P0 = _parse_point(ctx, base, "base")
    certify_non_torsion(P0 - ctx.q)
    curve_p = reduce_curve_mod_p(ctx.curve, p, k)
    q_p = reduce_point_mod_p(ctx.q, curve_p)
    T_p = reduce_point_mod_p(ctx.surface.T, curve_p)
    P0_p = reduce_point_mod_p(P0, curve_p)
    certify_not_p_torsion(P0_p - q_p)
    surface_p = make_surface(curve_p, q_p, T=T_p)

    rows, ok = [], True
    for level, m in pairs:
        d0 = h0_fat(ctx.surface, level,
                    [FatPoint(P0, ctx.field.elem(w0_text), m)])
        dp = h0_fat(surface_p, level,
                    [FatPoint(P0_p, curve_p.field.elem(w0_text), m)])
        rows.append({"level": level, "m": m, "char0": d0, f"char{p}": dp,
                     "semicontinuous": dp >= d0})
        ok = ok and dp >= d0
    values = {"p": p, "k": k, "rows": rows, "all_semicontinuous": ok}
    return values, {"rows": rows}, "PASS" if ok else "FAIL"


_RUNNERS = {
    "h0": _run_h0,
    "h0-fat": _run_h0_fat,
    "lambda": _run_lambda,
    "mu": _run_mu,
    "verify-prop22": _run_verify_multiple_section,
    "verify-prop23": _run_verify_twist_dimension,
    "verify-prop27": _run_verify_step,
    "example-theorem": _run_example_theorem,
    "group-order": _run_group_order,
    "compare-char": _run_compare_char,
}


def run_job(ctx: RunContext, spec: JobSpec, index: int) -> ResultRow:
    rng = _job_rng(ctx.config, index)
    start = time.perf_counter()
    try:
        values, certs, status = _RUNNERS[spec.kind](ctx, spec.params, rng)
        return ResultRow(spec.ident, spec.kind, spec.params, status, values,
                         certs, wall_time=time.perf_counter() - start)
    except (AtiyahLabError, ValueError, ZeroDivisionError, KeyError) as exc:
        return ResultRow(spec.ident, spec.kind, spec.params, "ERROR", {}, {},
                         error=f"{type(exc).__name__}: {exc}",
                         wall_time=time.perf_counter() - start)


def run_config(config: ExperimentConfig, parallelism: int = 1) -> list:
    """All jobs of the config, rows in config order whatever the pool does."""
    ctx = RunContext(config)
    if parallelism <= 1 or len(config.jobs) <= 1:
        return [run_job(ctx, spec, i) for i, spec in enumerate(config.jobs)]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        futures = [pool.submit(run_job, ctx, spec, i)
                   for i, spec in enumerate(config.jobs)]
        return [f.result() for f in futures]
