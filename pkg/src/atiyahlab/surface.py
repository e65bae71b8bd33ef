"""The ruled surface of the nonsplit self-extension of O_E over an elliptic curve.

Model: two charts over E, U0 = E - {inf} and U1 = E - {T}, glued along the
overlap by the fiber-coordinate shift w0 = w1 + g, where the gluing function g
is regular on the overlap, has poles only in {inf, T}, and is *not* a
difference f0 - f1 of functions regular on U0 resp. U1 (that nontriviality is
exactly what makes the extension nonsplit, and is certified at construction
time by a cokernel computation).  The section "at infinity" of the ruling is
the locus w = infinity in every fiber.

A global section of O(F_q + level * E_inf) is a tuple (s_0, ..., s_level) of
functions on E, polynomial in w0 on the first chart as sum s_a w0^a, with

    t_j = sum_{a >= j} C(a, j) g^(a-j) s_a

the chart-1 coefficients.  Regularity requirements: each s_a has poles only at
inf (plus a simple pole at the marked fiber point q when twisted); each t_j
has nonnegative valuation at inf.  The solver turns this into one exact
kernel computation per (level, twisted) with per-component pole cutoffs
N_a = (level - a) * k_inf + margin — the inverse shift shows true sections
satisfy the margin-0 bound, so the cutoff loses nothing — and re-checks the
dimension at margin + 2, raising CutoffInstabilityError on disagreement.
"""

from __future__ import annotations

import threading
from math import comb

from .curve import CurvePoint, Divisor, WeierstrassCurve
from .errors import CutoffInstabilityError, VerificationError
from .fields import FieldElem
from .funcfield import FuncElem, linear_combination
from .linalg import Matrix, rank_and_kernel, rank
from .riemann_roch import monomial_basis, rr_basis

DEFAULT_MARGIN = 4


class CechCover:
    """The two affine charts U0 = E - {inf}, U1 = E - {T}."""

    def __init__(self, curve: WeierstrassCurve, T: CurvePoint):
        if T.is_infinity:
            raise ValueError("the second chart point T must be affine")
        self.curve = curve
        self.T = T

    def __repr__(self):
        return f"CechCover(U0 = E - {{inf}}, U1 = E - {{{self.T}}})"


class CechCocycle:
    """The gluing function g together with its nontriviality certificate."""

    def __init__(self, cover, g, order, pole_inf, pole_T, certificate):
        self.cover = cover
        self.curve = cover.curve
        self.T = cover.T
        self.g = g
        self.order = order
        self.pole_inf = pole_inf
        self.pole_T = pole_T
        self.certificate = certificate
        self._g_powers = [FuncElem.one(self.curve), g]
        self._g_series = {}
        self._lock = threading.Lock()

    def g_power(self, m: int) -> FuncElem:
        if len(self._g_powers) <= m:
            with self._lock:
                while len(self._g_powers) <= m:
                    self._g_powers.append(self._g_powers[-1] * self.g)
        return self._g_powers[m]

    def g_series_at_inf(self, m: int, horizon: int):
        """Expansion of g^m at inf with knowledge window reaching >= horizon."""
        cached = self._g_series.get(m)
        if cached is not None and cached.hi >= horizon:
            return cached
        s = self.g_power(m).expand(self.curve.infinity, horizon + m * self.pole_inf + 2)
        self._g_series[m] = s
        return s

    def __repr__(self):
        return f"CechCocycle(order={self.order}, g={self.g.to_text()})"


def _jet_vector(fn, infinity, lo, hi, prec_pad=4):
    s = fn.expand(infinity, (hi - lo) + prec_pad)
    return [s.coefficient(e) for e in range(lo, hi)]


def build_cocycle(curve: WeierstrassCurve, T: CurvePoint, max_order: int = 6) -> CechCocycle:
    """Gluing function of the nonsplit extension, with certificate.

    Searches k = 1, 2, ... for an element of L(k(inf + T)) outside
    L(k inf) + L(k T); the certificate records the cokernel dimension at the
    chosen k and at the two next cutoffs (a genuinely split gluing would give
    cokernel 0 at every k, so a positive stable cokernel pins nontriviality).
    """
    cover = CechCover(curve, T)
    inf = curve.infinity
    field = curve.field
    for k in range(1, max_order + 1):
        both = rr_basis(curve, Divisor(curve, {inf: k, T: k}), check=False)
        lo, hi = -k, k + 1
        image_rows = []
        for f in monomial_basis(curve, k):
            image_rows.append(_jet_vector(f, inf, lo, hi))
        for f in rr_basis(curve, Divisor(curve, {T: k}), check=False).basis:
            image_rows.append(_jet_vector(f, inf, lo, hi))
        base_rank = rank(Matrix(field, image_rows, hi - lo))
        cokernel = both.dim - base_rank
        if cokernel < 1:
            continue
        g = None
        for f in both.basis:
            v = _jet_vector(f, inf, lo, hi)
            if rank(Matrix(field, image_rows + [v], hi - lo)) > base_rank:
                g = f
                break
        if g is None:
            raise VerificationError("positive cokernel but no witness element")
        gs = g.expand(inf, 2 * k + 4)
        lead = gs.coefficient(gs.valuation())
        g = g * FieldElem(field, field.inv(lead))
        pole_inf = -g.expand(inf, 4).valuation()
        pole_T = -g.expand(T, 4).valuation()
        if pole_inf < 1 or pole_T < 1:
            raise VerificationError("gluing candidate lacks a pole at a chart point")
        cert = {"order": k, "cokernel_dims": {k: cokernel}}
        for kk in (k + 1, k + 2):
            cert["cokernel_dims"][kk] = _cokernel_dim(curve, T, kk)
        if any(c < 1 for c in cert["cokernel_dims"].values()):
            raise VerificationError(f"cokernel not stable: {cert}")
        cert["pole_inf"] = pole_inf
        cert["pole_T"] = pole_T
        return CechCocycle(cover, g, k, pole_inf, pole_T, cert)
    raise VerificationError(f"no nontrivial gluing found up to order {max_order}")


def _cokernel_dim(curve, T, k) -> int:
    inf = curve.infinity
    both = rr_basis(curve, Divisor(curve, {inf: k, T: k}), check=False)
    lo, hi = -k, k + 1
    rows = [_jet_vector(f, inf, lo, hi) for f in monomial_basis(curve, k)]
    rows += [
        _jet_vector(f, inf, lo, hi)
        for f in rr_basis(curve, Divisor(curve, {T: k}), check=False).basis
    ]
    return both.dim - rank(Matrix(curve.field, rows, hi - lo))


def is_coboundary_jet(cocycle, fn) -> bool:
    """True iff fn (poles only in {inf, T}, order <= cocycle.order) splits as
    f0 - f1 with f0 in L(k inf), f1 in L(k T).  The zero function trivially
    does (f0 = f1 = 0)."""
    curve, T, k = cocycle.curve, cocycle.T, cocycle.order
    if fn.is_zero():
        return True
    inf = curve.infinity
    lo, hi = -k, k + 1
    rows = [_jet_vector(f, inf, lo, hi) for f in monomial_basis(curve, k)]
    rows += [
        _jet_vector(f, inf, lo, hi)
        for f in rr_basis(curve, Divisor(curve, {T: k}), check=False).basis
    ]
    base = rank(Matrix(curve.field, rows, hi - lo))
    v = _jet_vector(fn, inf, lo, hi)
    return rank(Matrix(curve.field, rows + [v], hi - lo)) == base


def sym_transition(cocycle: CechCocycle, level: int):
    """(level+1) x (level+1) chart-change matrix: entry[j][a] = C(a,j) g^(a-j).

    Upper triangular with unit diagonal (so determinant 1); row j gives
    t_j = sum_a entry[j][a] s_a.
    """
    curve = cocycle.curve
    field = curve.field
    rows = []
    for j in range(level + 1):
        row = []
        for a in range(level + 1):
            if a < j:
                row.append(FuncElem.zero(curve))
                continue
            c = field.from_int(comb(a, j))
            if field.is_zero(c):
                row.append(FuncElem.zero(curve))
            else:
                row.append(cocycle.g_power(a - j) * FieldElem(field, c))
        rows.append(row)
    return rows


class SectionVector:
    """One global section as its chart-0 coefficient tuple (s_0, ..., s_level)."""

    __slots__ = ("surface", "level", "twisted", "components")

    def __init__(self, surface, level, twisted, components):
        self.surface = surface
        self.level = level
        self.twisted = twisted
        self.components = tuple(components)
        if len(self.components) != level + 1:
            raise ValueError("component count must be level + 1")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def transformed(self):
        """Chart-1 coefficients t_j = sum_{a>=j} C(a,j) g^(a-j) s_a."""
        cocycle = self.surface.cocycle
        field = self.surface.field
        out = []
        for j in range(self.level + 1):
            t = FuncElem.zero(self.surface.curve)
            for a in range(j, self.level + 1):
                c = field.from_int(comb(a, j))
                if field.is_zero(c) or self.components[a].is_zero():
                    continue
                t = t + cocycle.g_power(a - j) * self.components[a] * FieldElem(field, c)
            out.append(t)
        return out

    def validate(self, prec_pad: int = 4) -> None:
        """Independent regularity re-check (never looks at solver matrices).

        Raises VerificationError if any chart-0 component has a forbidden
        pole or any transformed component has a pole at infinity.
        """
        surf = self.surface
        inf = surf.curve.infinity
        for a, s in enumerate(self.components):
            if s.is_zero():
                continue
            if surf.q is not None:
                vq = s.expand(surf.q, prec_pad + 2).valuation()
                allowed = -1 if self.twisted else 0
                if vq is not None and vq < allowed:
                    raise VerificationError(
                        f"component {a} has a pole of order {-vq} at the marked "
                        f"fiber point (allowed {-allowed})"
                    )
        for j, t in enumerate(self.transformed()):
            if t.is_zero():
                continue
            v = t.expand(inf, prec_pad).valuation()
            if v is not None and v < 0:
                raise VerificationError(
                    f"transformed component {j} has a pole of order {-v} at infinity"
                )

    def value_at(self, P: CurvePoint, w_raw) -> FieldElem:
        """Value of sum s_a w^a at an affine point off the poles."""
        field = self.surface.field
        acc = field.zero
        wp = field.one
        for s in self.components:
            if not s.is_zero():
                acc = field.add(acc, field.mul(s.evaluate(P).raw, wp))
            wp = field.mul(wp, w_raw)
        return FieldElem(field, acc)

    def scaled(self, c_raw):
        field = self.surface.field
        return SectionVector(
            self.surface, self.level, self.twisted,
            [s * FieldElem(field, c_raw) for s in self.components],
        )

    def __mul__(self, other: "SectionVector"):
        """Product section (polynomial multiplication in the fiber coordinate)."""
        if self.surface is not other.surface:
            raise ValueError("sections live on different surfaces")
        if self.twisted and other.twisted:
            raise ValueError("product of two twisted sections leaves the family")
        curve = self.surface.curve
        level = self.level + other.level
        comps = [FuncElem.zero(curve) for _ in range(level + 1)]
        for a, s in enumerate(self.components):
            if s.is_zero():
                continue
            for b, t in enumerate(other.components):
                if not t.is_zero():
                    comps[a + b] = comps[a + b] + s * t
        return SectionVector(self.surface, level, self.twisted or other.twisted, comps)

    def padded_to(self, level: int):
        """The same section viewed at a higher level (times the canonical
        section of the extra multiple of the infinity section)."""
        if level < self.level:
            raise ValueError("cannot pad downward")
        curve = self.surface.curve
        comps = list(self.components) + [
            FuncElem.zero(curve) for _ in range(level - self.level)
        ]
        return SectionVector(self.surface, level, self.twisted, comps)

    def serialize(self) -> dict:
        return {
            "level": self.level,
            "twisted": self.twisted,
            "components": [s.to_text() for s in self.components],
        }

    def __repr__(self):
        return f"SectionVector(level={self.level}, twisted={self.twisted})"


class SectionSpace:
    """Basis + diagnostics for one h^0 computation."""

    def __init__(self, level, twisted, sections, diagnostics):
        self.level = level
        self.twisted = twisted
        self.sections = tuple(sections)
        self.diagnostics = diagnostics

    @property
    def dim(self) -> int:
        return len(self.sections)

    def serialize(self) -> dict:
        return {
            "level": self.level,
            "twisted": self.twisted,
            "dim": self.dim,
            "sections": [s.serialize() for s in self.sections],
            "diagnostics": self.diagnostics,
        }

    def __repr__(self):
        return (f"SectionSpace(level={self.level}, twisted={self.twisted}, "
                f"dim={self.dim})")


class AtiyahSurface:
    """The ruled surface with a marked fiber over q (and its caches)."""

    def __init__(self, cocycle: CechCocycle, q: CurvePoint):
        if q.is_infinity or q == cocycle.T:
            raise ValueError("marked fiber point q must avoid {inf, T}")
        self.cocycle = cocycle
        self.curve = cocycle.curve
        self.field = cocycle.curve.field
        self.T = cocycle.T
        self.q = q
        self.margin = DEFAULT_MARGIN
        self._ambient = {}       # (twisted) -> (funcs, pole_orders)
        self._ambient_series = {}  # (twisted) -> {i: series}
        self._h0 = {}            # (level, twisted) -> SectionSpace

    # -- ambient bases -------------------------------------------------------

    def _one_pole_function(self):
        """The element of L((inf) + (q)) with a simple pole at both points."""
        space = rr_basis(self.curve, Divisor(self.curve, {self.curve.infinity: 1,
                                                          self.q: 1}), check=False)
        for f in space.basis:
            if f.expand(self.curve.infinity, 4).valuation() == -1:
                return f
        raise VerificationError("no degree-(1,1) function in L(inf + q)")

    def ambient_basis(self, twisted: bool, n: int):
        """Functions with pole orders at inf equal to 0,1,2,...  (twisted:
        poles <= 1 at q allowed) spanning L(N inf (+q)) by taking prefixes."""
        funcs, orders = self._ambient.get(twisted, ([], []))
        if not funcs:
            if twisted:
                funcs = [FuncElem.one(self.curve), self._one_pole_function()]
                orders = [0, 1]
            else:
                funcs = [FuncElem.one(self.curve)]
                orders = [0]
        if orders[-1] < n:
            x = FuncElem.x_function(self.curve)
            y = FuncElem.y_function(self.curve)
            for m in range(orders[-1] + 1, n + 1):
                if m == 1:
                    continue  # no untwisted function with a simple pole only
                funcs = funcs + [x ** (m // 2) if m % 2 == 0
                                 else x ** ((m - 3) // 2) * y]
                orders = orders + [m]
        self._ambient[twisted] = (funcs, orders)
        idx = 0
        while idx < len(orders) and orders[idx] <= n:
            idx += 1
        return funcs[:idx], orders[:idx]

    def _ambient_series_at_inf(self, twisted: bool, i: int, fn, horizon: int):
        cache = self._ambient_series.setdefault(twisted, {})
        s = cache.get(i)
        if s is None or s.hi < horizon:
            s = fn.expand(self.curve.infinity, horizon + 2 * len(fn.d) + 8)
            if s.hi < horizon:
                s = fn.expand(self.curve.infinity, horizon + abs(s.start) + 8)
            cache[i] = s
        return s

    # -- the solver ---------------------------------------------------------------

    def _solve(self, level: int, twisted: bool, margin: int, want_kernel: bool):
        kinf = self.cocycle.pole_inf
        caps = [(level - j) * kinf + margin for j in range(level + 1)]
        master_n = caps[0]
        funcs, orders = self.ambient_basis(twisted, master_n)
        dims = []
        for a in range(level + 1):
            cnt = 0
            while cnt < len(orders) and orders[cnt] <= caps[a]:
                cnt += 1
            dims.append(cnt)
        columns = [(a, i) for a in range(level, -1, -1) for i in range(dims[a])]
        col_of = {key: idx for idx, key in enumerate(columns)}

        field = self.field
        horizon_b = level * kinf + 6
        horizon_g = master_n + 6
        bser = [
            self._ambient_series_at_inf(twisted, i, fn, horizon_b)
            for i, fn in enumerate(funcs)
        ]
        gser = [self.cocycle.g_series_at_inf(m, horizon_g) for m in range(level + 1)]
        prod = {}
        for m in range(level + 1):
            max_dim = max((dims[j + m] for j in range(level + 1 - m)), default=0)
            for i in range(max_dim):
                prod[(m, i)] = gser[m] * bser[i] if m else bser[i]

        rows = []
        for j in range(level, -1, -1):
            binoms = {}
            for a in range(j, level + 1):
                c = field.from_int(comb(a, j))
                if not field.is_zero(c):
                    binoms[a] = c
            for e in range(-caps[j], 0):
                row = [field.zero] * len(columns)
                for a, c in binoms.items():
                    m = a - j
                    for i in range(dims[a]):
                        coeff = prod[(m, i)].coefficient(e)
                        if not field.is_zero(coeff):
                            row[col_of[(a, i)]] = field.mul(c, coeff)
                rows.append(row)
        mat = Matrix(field, rows, len(columns))
        if not want_kernel:
            r = rank(mat)
            return len(columns) - r, None, mat, columns, funcs
        r, kernel = rank_and_kernel(mat)
        return len(columns) - r, kernel, mat, columns, funcs

    def h0(self, level: int, twisted: bool) -> SectionSpace:
        """Global sections of O(level * E_inf) (twisted: O(F_q + level * E_inf)).

        Result cached; every basis vector is re-validated symbolically, and
        the dimension is recomputed at an enlarged cutoff before anything is
        returned (CutoffInstabilityError if the two disagree).
        """
        if level < 0:
            raise ValueError("level must be >= 0")
        key = (level, twisted)
        space = self._h0.get(key)
        if space is not None:
            return space
        dim, kernel, _, columns, funcs = self._solve(level, twisted, self.margin, True)
        dim2 = self._solve(level, twisted, self.margin + 2, False)[0]
        if dim != dim2:
            raise CutoffInstabilityError(level, twisted, self.margin, dim, dim2)
        sections = []
        for vec in kernel:
            comps = []
            for a in range(level + 1):
                coeffs, fns = [], []
                for idx, (aa, i) in enumerate(columns):
                    if aa == a and not self.field.is_zero(vec[idx]):
                        coeffs.append(vec[idx])
                        fns.append(funcs[i])
                comps.append(
                    linear_combination(fns, coeffs) if fns
                    else FuncElem.zero(self.curve)
                )
            sections.append(SectionVector(self, level, twisted, comps))
        for s in sections:
            s.validate()
        space = SectionSpace(
            level, twisted, sections,
            {"margin": self.margin, "stability_margin": self.margin + 2,
             "stable": True, "cutoffs": [(level - j) * self.cocycle.pole_inf
                                         + self.margin for j in range(level + 1)]},
        )
        self._h0[key] = space
        return space

    def __repr__(self):
        return f"AtiyahSurface(q={self.q}, T={self.T}, over {self.curve!r})"


def h0_multiple_section(surface: AtiyahSurface, n: int) -> SectionSpace:
    """h^0 of the n-fold multiple of the infinity section."""
    return surface.h0(n, twisted=False)


def h0_fiber_twist(surface: AtiyahSurface, level: int) -> SectionSpace:
    """h^0 of (marked fiber) + level * (infinity section)."""
    return surface.h0(level, twisted=True)


def make_surface(curve: WeierstrassCurve, q: CurvePoint,
                 T: CurvePoint | None = None, max_order: int = 6) -> AtiyahSurface:
    """Build the surface with marked fiber q; T defaults to -q (or, when q is
    2-torsion, the first enumerable point distinct from inf, q)."""
    if q.is_infinity:
        raise ValueError("marked fiber point q must be affine")
    if T is None:
        T = -q
        if T.is_infinity or T == q:
            T = curve.first_point(avoid={curve.infinity, q})
    cocycle = build_cocycle(curve, T, max_order=max_order)
    return AtiyahSurface(cocycle, q)
