"""Elements of the function field of a Weierstrass curve, and local expansion.

A :class:`FuncElem` is stored as (a(x) + b(x) y) / d(x) with dense polynomial
parts, reduced so that gcd(a, b, d) = 1 and d is monic — a canonical form, so
equality is coefficient equality.  Products reduce y^2 through the curve
relation y^2 = S(x) + T(x) y with S = x^3 + a2 x^2 + a4 x + a6 and
T = -(a1 x + a3); inverses go through the conjugate (a + bT) - b y and the
norm a^2 + a b T - b^2 S.

Local parameters are fixed once and for all:

* affine P with 2 y_P + a1 x_P + a3 != 0:  t = x - x_P,
* affine P on the ramification locus:      t = y - y_P,
* the point at infinity:                   t = x / y.

Expansions are computed by Newton iteration on the curve equation and cached
per (curve, point) at the largest precision seen so far.
"""

from __future__ import annotations

from . import poly
from .curve import CurvePoint, WeierstrassCurve
from .errors import SeriesPrecisionError
from .fields import FieldElem
from .series import LaurentSeries, eval_poly


def _curve_st(curve):
    """Coefficient lists of S and T with y^2 = S + T y (cached on the curve)."""
    st = getattr(curve, "_st", None)
    if st is None:
        f = curve.field
        S = poly.trim(f, [curve.a6.raw, curve.a4.raw, curve.a2.raw, f.one])
        T = poly.trim(f, [f.neg(curve.a3.raw), f.neg(curve.a1.raw)])
        st = curve._st = (S, T)
    return st


class FuncElem:
    __slots__ = ("curve", "a", "b", "d")

    def __init__(self, curve, a, b, d, reduce: bool = True):
        self.curve = curve
        field = curve.field
        a, b, d = poly.trim(field, a), poly.trim(field, b), poly.trim(field, d)
        if not d:
            raise ZeroDivisionError("denominator polynomial is zero")
        if reduce:
            g = poly.gcd(field, poly.gcd(field, a, b), d)
            if poly.degree(g) > 0:
                a, _ = poly.divmod_poly(field, a, g)
                b, _ = poly.divmod_poly(field, b, g)
                d, _ = poly.divmod_poly(field, d, g)
            lead = d[-1]
            if lead != field.one:
                inv = field.inv(lead)
                a = poly.scalar_mul(field, inv, a)
                b = poly.scalar_mul(field, inv, b)
                d = poly.scalar_mul(field, inv, d)
        self.a, self.b, self.d = a, b, d

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, curve):
        return cls(curve, [], [], [curve.field.one], reduce=False)

    @classmethod
    def one(cls, curve):
        return cls(curve, [curve.field.one], [], [curve.field.one], reduce=False)

    @classmethod
    def constant(cls, curve, c):
        raw = curve.field.parse(c)
        return cls(curve, poly.const(curve.field, raw), [], [curve.field.one],
                   reduce=False)

    @classmethod
    def x_function(cls, curve):
        f = curve.field
        return cls(curve, [f.zero, f.one], [], [f.one], reduce=False)

    @classmethod
    def y_function(cls, curve):
        f = curve.field
        return cls(curve, [], [f.one], [f.one], reduce=False)

    @classmethod
    def from_x_poly(cls, curve, coeffs):
        return cls(curve, coeffs, [], [curve.field.one])

    # -- predicates / conversions ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.a and not self.b

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if not isinstance(other, FuncElem):
            return NotImplemented
        return (
            self.curve == other.curve
            and self.a == other.a
            and self.b == other.b
            and self.d == other.d
        )

    def u(self):
        """The y^0 part as a (numerator, denominator) pair."""
        return list(self.a), list(self.d)

    def v(self):
        """The y^1 part as a (numerator, denominator) pair."""
        return list(self.b), list(self.d)

    def to_text(self) -> str:
        f = self.curve.field
        num_a = poly.to_text(f, self.a)
        if not self.b:
            num = num_a
        else:
            bt = poly.to_text(f, self.b)
            num = f"({bt})*y" if self.a == [] else f"{num_a} + ({bt})*y"
        den = poly.to_text(f, self.d)
        return num if den == "1" else f"({num})/({den})"

    def __repr__(self):
        return f"FuncElem[{self.to_text()}]"

    # -- arithmetic ------------------------------------------------------------

    def _require_same_curve(self, other):
        if self.curve != other.curve:
            raise ValueError("operands live on different curves")

    def __add__(self, other):
        if isinstance(other, (int, FieldElem)):
            other = FuncElem.constant(self.curve, other)
        self._require_same_curve(other)
        f = self.curve.field
        a = poly.add(f, poly.mul(f, self.a, other.d), poly.mul(f, other.a, self.d))
        b = poly.add(f, poly.mul(f, self.b, other.d), poly.mul(f, other.b, self.d))
        d = poly.mul(f, self.d, other.d)
        return FuncElem(self.curve, a, b, d)

    __radd__ = __add__

    def __neg__(self):
        f = self.curve.field
        return FuncElem(self.curve, poly.neg(f, self.a), poly.neg(f, self.b),
                        self.d, reduce=False)

    def __sub__(self, other):
        if isinstance(other, (int, FieldElem)):
            other = FuncElem.constant(self.curve, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, FieldElem)):
            c = self.curve.field.parse(other)
            f = self.curve.field
            return FuncElem(self.curve, poly.scalar_mul(f, c, self.a),
                            poly.scalar_mul(f, c, self.b), self.d)
        self._require_same_curve(other)
        f = self.curve.field
        S, T = _curve_st(self.curve)
        aa = poly.mul(f, self.a, other.a)
        bb = poly.mul(f, self.b, other.b)
        ab = poly.add(f, poly.mul(f, self.a, other.b), poly.mul(f, self.b, other.a))
        a = poly.add(f, aa, poly.mul(f, bb, S))
        b = poly.add(f, ab, poly.mul(f, bb, T))
        d = poly.mul(f, self.d, other.d)
        return FuncElem(self.curve, a, b, d)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        f = self.curve.field
        S, T = _curve_st(self.curve)
        # norm of a + b y over k(x): (a + by)(a + b(T - y)) = a^2 + abT - b^2 S
        norm = poly.add(
            f,
            poly.add(f, poly.mul(f, self.a, self.a),
                     poly.mul(f, poly.mul(f, self.a, self.b), T)),
            poly.neg(f, poly.mul(f, poly.mul(f, self.b, self.b), S)),
        )
        conj_a = poly.add(f, self.a, poly.mul(f, self.b, T))
        a = poly.mul(f, conj_a, self.d)
        b = poly.neg(f, poly.mul(f, self.b, self.d))
        return FuncElem(self.curve, a, b, norm)

    def __truediv__(self, other):
        if isinstance(other, (int, FieldElem)):
            inv = self.curve.field.inv(self.curve.field.parse(other))
            return self * FieldElem(self.curve.field, inv)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = FuncElem.one(self.curve)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- evaluation and expansion --------------------------------------------------

    def evaluate(self, P: CurvePoint) -> FieldElem:
        """Value at an affine point where the function is regular."""
        if P.is_infinity:
            raise ValueError("use expand() at the point at infinity")
        f = self.curve.field
        dv = poly.evaluate(f, self.d, P.x.raw)
        if not f.is_zero(dv):
            av = poly.evaluate(f, self.a, P.x.raw)
            bv = poly.evaluate(f, self.b, P.x.raw)
            val = f.div(f.add(av, f.mul(bv, P.y.raw)), dv)
            return FieldElem(f, val)
        s = self.expand(P, 2)
        v = s.valuation()
        if v is not None and v < 0:
            raise ZeroDivisionError(f"pole of order {-v} at {P}")
        return FieldElem(f, s.coefficient(0))

    def expand(self, P: CurvePoint, prec: int) -> LaurentSeries:
        """Laurent expansion at P in the canonical local parameter.

        Guarantees at least ``prec`` known coefficients past the valuation
        (or, if the function is zero, an exact zero window).
        """
        if self.is_zero():
            return LaurentSeries.zero(self.curve.field, prec + 4)
        f = self.curve.field
        H = prec + poly.degree(self.d) * 2 + 8
        for _ in range(6):
            xs, ys = point_expansion(self.curve, P, H)
            num = eval_poly(f, self.a, xs)
            if self.b:
                num = num + eval_poly(f, self.b, xs) * ys
            den = eval_poly(f, self.d, xs)
            if den.is_zero_to_precision():
                H *= 2
                continue
            res = num * den.inverse()
            if res.is_zero_to_precision() or res.precision_past_valuation() < prec:
                H *= 2
                continue
            return res
        raise SeriesPrecisionError(
            f"expansion of {self!r} at {P} did not stabilize at precision {prec}"
        )

    def valuation_at(self, P: CurvePoint, search_prec: int = 8) -> int:
        return self.expand(P, search_prec).valuation()


def linear_combination(funcs, coeffs_raw):
    """sum coeff_i * f_i with raw field coefficients (skips zero terms)."""
    if not funcs:
        raise ValueError("empty combination")
    curve = funcs[0].curve
    f = curve.field
    acc = FuncElem.zero(curve)
    for fn, c in zip(funcs, coeffs_raw):
        if not f.is_zero(c):
            acc = acc + fn * FieldElem(f, c)
    return acc


def linearly_independent(funcs) -> bool:
    """Linear independence over the base field via coefficient vectors."""
    from .linalg import Matrix, rank

    if not funcs:
        return True
    curve = funcs[0].curve
    f = curve.field
    den = [f.one]
    for fn in funcs:
        den = poly.lcm(f, den, fn.d)
    rows = []
    width_a = width_b = 0
    cleared = []
    for fn in funcs:
        m, _ = poly.divmod_poly(f, den, fn.d)
        ca = poly.mul(f, fn.a, m)
        cb = poly.mul(f, fn.b, m)
        cleared.append((ca, cb))
        width_a = max(width_a, len(ca))
        width_b = max(width_b, len(cb))
    for ca, cb in cleared:
        row = list(ca) + [f.zero] * (width_a - len(ca))
        row += list(cb) + [f.zero] * (width_b - len(cb))
        rows.append(row)
    return rank(Matrix(f, rows, width_a + width_b)) == len(funcs)


# -- local expansions of the coordinate functions --------------------------------


def point_expansion(curve: WeierstrassCurve, P: CurvePoint, prec: int):
    """Series (x(t), y(t)) at P to horizon >= prec in the canonical parameter."""
    cache = curve._expansion_cache
    entry = cache.get(P)
    if entry is not None and entry[0] >= prec:
        _, xs, ys = entry
        return xs.truncate(prec) if xs.hi > prec else xs, \
            ys.truncate(prec) if ys.hi > prec else ys
    H = max(prec, 8)
    xs, ys = _expand_uncached(curve, P, H)
    cache[P] = (H, xs, ys)
    return xs.truncate(prec) if xs.hi > prec else xs, \
        ys.truncate(prec) if ys.hi > prec else ys


def _expand_uncached(curve, P, H):
    f = curve.field
    S, T = _curve_st(curve)
    if P.is_infinity:
        return _expand_at_infinity(curve, H)
    tangent_den = f.add(
        f.add(f.mul(f.from_int(2), P.y.raw), f.mul(curve.a1.raw, P.x.raw)),
        curve.a3.raw,
    )
    if not f.is_zero(tangent_den):
        # t = x - x_P, solve y(t) by Newton on C(x, y) = y^2 - T y - S
        xs = LaurentSeries(f, 0, [P.x.raw, f.one] + [f.zero] * (H - 2), H)
        Ts = eval_poly(f, T, xs)
        Ss = eval_poly(f, S, xs)
        y = LaurentSeries.constant(f, P.y.raw, H)
        for _ in range(H.bit_length() + 3):
            c = y * y - Ts * y - Ss
            if c.is_zero_to_precision():
                break
            cy = y + y - Ts
            y = y - c * cy.inverse()
        else:
            raise SeriesPrecisionError(f"Newton failed to converge at {P}")
        return xs, y
    # ramified: t = y - y_P, solve x(t); smoothness gives C_x(P) != 0
    ys = LaurentSeries(f, 0, [P.y.raw, f.one] + [f.zero] * (H - 2), H)
    Sx = poly.trim(f, [curve.a4.raw, f.mul(f.from_int(2), curve.a2.raw),
                       f.from_int(3)])
    x = LaurentSeries.constant(f, P.x.raw, H)
    for _ in range(H.bit_length() + 3):
        Txs = eval_poly(f, T, x)
        Sxs = eval_poly(f, S, x)
        c = ys * ys - Txs * ys - Sxs
        if c.is_zero_to_precision():
            break
        # dC/dx = -T'(x) y - S'(x) with T' = -a1
        cx = ys.scale(curve.a1.raw) - eval_poly(f, Sx, x)
        x = x - c * cx.inverse()
    else:
        raise SeriesPrecisionError(f"Newton failed to converge at {P}")
    return x, ys


def _expand_at_infinity(curve, H):
    """t = x/y; w = 1/y satisfies w = t^3 + a2 t^2 w + a4 t w^2 + a6 w^3 - a1 t w - a3 w^2."""
    f = curve.field
    Hw = H + 6
    t = LaurentSeries.t_power(f, 1, Hw)
    a1, a2, a3, a4, a6 = (curve.a1.raw, curve.a2.raw, curve.a3.raw,
                          curve.a4.raw, curve.a6.raw)
    w = LaurentSeries.t_power(f, 3, Hw)
    one = LaurentSeries.one(f, Hw)
    t2, t3 = t * t, t * t * t
    for _ in range(Hw.bit_length() + 3):
        rhs = t3 + (t2.scale(a2) - t.scale(a1)) * w \
            + (t.scale(a4) - one.scale(a3)) * (w * w) + (w * w * w).scale(a6)
        c = w - rhs
        if c.is_zero_to_precision():
            break
        # F'(w) = 1 - a2 t^2 - 2 a4 t w - 3 a6 w^2 + a1 t + 2 a3 w
        fp = one - t2.scale(a2) + t.scale(a1) \
            - (t * w).scale(f.mul(f.from_int(2), a4)) \
            + w.scale(f.mul(f.from_int(2), a3)) \
            - (w * w).scale(f.mul(f.from_int(3), a6))
        w = w - c * fp.inverse()
    else:
        raise SeriesPrecisionError("Newton failed to converge at infinity")
    ys = w.inverse()
    xs = t * ys
    return xs.truncate(H), ys.truncate(H)


def pair_function(P: CurvePoint, Q: CurvePoint) -> FuncElem:
    """h with div(h) = (P) + (Q) - (P + Q) - (infinity); h = 1 if either is infinity."""
    curve = P.curve
    f = curve.field
    if P.is_infinity or Q.is_infinity:
        return FuncElem.one(curve)
    R = P + Q
    if R.is_infinity:
        # vertical line x - x_P
        return FuncElem(curve, [f.neg(P.x.raw), f.one], [], [f.one], reduce=False)
    if P.x == Q.x and P.y == Q.y:
        den = 2 * P.y + curve.a1 * P.x + curve.a3
        lam = (3 * P.x * P.x + 2 * curve.a2 * P.x + curve.a4 - curve.a1 * P.y) / den
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    nu = P.y - lam * P.x
    # (y - lam x - nu) / (x - x_R)
    a = poly.trim(f, [f.neg(nu.raw), f.neg(lam.raw)])
    return FuncElem(curve, a, [f.one], [f.neg(R.x.raw), f.one])


def local_expand(fn: FuncElem, P: CurvePoint, prec: int) -> LaurentSeries:
    """Module-level alias for :meth:`FuncElem.expand`."""
    return fn.expand(P, prec)
