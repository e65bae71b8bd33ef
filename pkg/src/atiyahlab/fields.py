"""Exact coefficient fields: the rationals and finite fields F_{p^k}.

Every field object exposes the same small protocol on *raw* element values
(opaque, hashable, canonical — equal values compare equal with ``==``):

    zero, one, add(a, b), sub(a, b), neg(a), mul(a, b), inv(a), div(a, b),
    pow(a, n), is_zero(a), from_int(n), parse(text), to_text(a)

Hot code (polynomials, series, matrices) stores raw values and calls these
methods; the :class:`FieldElem` wrapper adds operator sugar for the geometric
layers on top.

Raw representations
-------------------
* rationals: ``fractions.Fraction``.
* F_p (k = 1): ints in ``[0, p)``.
* F_{p^k}, k >= 2, p^k <= _TABLE_LIMIT: discrete logs to a fixed generator
  (ints in ``[0, q-1)``, with ``q-1`` standing for zero), so multiplication is
  index addition and addition is one Zech-logarithm lookup.
* F_{p^k} above the table limit: coefficient tuples of length k.

Externally (printing, serialization, enumeration order) an element of F_{p^k}
is always the packed integer ``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` of its
coefficients against the power basis of the canonical modulus, whatever the
internal form is.  The canonical modulus for given (p, k) is the monic
irreducible whose coefficient tuple ``(c_{k-1}, ..., c_1, c_0)`` is
lexicographically least; ``k = 1`` uses the identity polynomial ``z``.
"""

from __future__ import annotations

from fractions import Fraction

_TABLE_LIMIT = 1 << 20
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for every n below 3.3e24."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RationalField:
    """The field Q with Fraction raw values."""

    kind = "rationals"
    p = 0
    k = 1
    characteristic = 0
    modulus = None
    zero = Fraction(0)
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def div(self, a, b):
        if not b:
            raise ZeroDivisionError("division by zero")
        return a / b

    def pow(self, a, n):
        if n < 0 and not a:
            raise ZeroDivisionError("inverse of zero")
        return a ** n

    def is_zero(self, a) -> bool:
        return not a

    def from_int(self, n: int):
        return Fraction(n)

    def parse(self, text):
        if isinstance(text, FieldElem):
            if text.field is not self:
                raise ValueError("mixed field descriptors")
            return text.raw
        if isinstance(text, Fraction):
            return text
        if isinstance(text, int):
            return Fraction(text)
        return Fraction(str(text).strip())

    def to_text(self, a) -> str:
        return str(a)

    def elem(self, value) -> "FieldElem":
        return FieldElem(self, self.parse(value))

    def sqrt(self, a):
        """Exact square root, or None when a is not a rational square."""
        if a < 0:
            return None
        rn = _isqrt_exact(a.numerator)
        rd = _isqrt_exact(a.denominator)
        if rn is None or rd is None:
            return None
        return Fraction(rn, rd)

    def __repr__(self):
        return "QQ"


def _isqrt_exact(n: int):
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


QQ = RationalField()


def _poly_mul_mod(p: int, f, g, mod):
    """Product of coefficient tuples f, g modulo the monic tuple ``mod``."""
    k = len(mod) - 1
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] = (out[i + j] + fi * gj) % p
    for i in range(len(out) - 1, k - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(k):
                out[i - k + j] = (out[i - k + j] - c * mod[j]) % p
    out = out[:k]
    while len(out) > 1 and out and out[-1] == 0:
        out.pop()
    return tuple(out) if out else (0,)


def _poly_pow_mod(p: int, f, e: int, mod):
    result = (1,)
    base = f
    while e:
        if e & 1:
            result = _poly_mul_mod(p, result, base, mod)
        base = _poly_mul_mod(p, base, base, mod)
        e >>= 1
    return result


def _poly_gcd_modp(p: int, f: list, g: list) -> list:
    f, g = list(f), list(g)
    while any(g):
        while g and g[-1] == 0:
            g.pop()
        if not g:
            break
        inv_lead = pow(g[-1], p - 2, p)
        f = list(f)
        while True:
            while f and f[-1] == 0:
                f.pop()
            if len(f) < len(g):
                break
            c = f[-1] * inv_lead % p
            off = len(f) - len(g)
            for i, gi in enumerate(g):
                f[off + i] = (f[off + i] - c * gi) % p
        f, g = g, f
    while f and f[-1] == 0:
        f.pop()
    return f


def _is_irreducible(p: int, coeffs) -> bool:
    """Irreducibility of the monic polynomial with coefficient tuple coeffs."""
    k = len(coeffs) - 1
    if k == 1:
        return True
    mod = tuple(c % p for c in coeffs)
    x = (0, 1)
    # x^(p^k) == x mod f, and gcd(x^(p^(k/r)) - x, f) = 1 for prime r | k.
    frob = x
    powers = []
    for _ in range(k):
        frob = _poly_pow_mod(p, frob, p, mod)
        powers.append(frob)
    xk = list(powers[-1])
    while len(xk) < 2:
        xk.append(0)
    xk[1] = (xk[1] - 1) % p
    if any(xk):
        return False
    for r in _prime_divisors(k):
        fr = list(powers[k // r - 1])
        while len(fr) < 2:
            fr.append(0)
        fr[1] = (fr[1] - 1) % p
        g = _poly_gcd_modp(p, list(mod), fr)
        if len(g) != 1:
            return False
    return True


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _canonical_modulus(p: int, k: int):
    """Lex-least monic irreducible of degree k over F_p.

    Candidates are ordered by the tuple (c_{k-1}, ..., c_1, c_0); the counter
    below enumerates exactly that order.
    """
    if k == 1:
        return (0, 1)
    for counter in range(p ** k):
        digits = []
        v = counter
        for _ in range(k):
            digits.append(v % p)
            v //= p
        # lex order on (c_{k-1}, ..., c_1, c_0): c_0 is the fastest-cycling
        # (least significant) counter digit, c_{k-1} the slowest.
        coeffs = tuple(digits) + (1,)
        if coeffs[0] == 0:
            continue  # reducible: z divides
        if _is_irreducible(p, coeffs):
            return coeffs
    raise ValueError(f"no irreducible polynomial found for p={p}, k={k}")


class FiniteField:
    """F_{p^k} with canonical modulus and three internal gears (see module doc)."""

    characteristic: int

    def __init__(self, p: int, k: int = 1):
        if not is_probable_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if not 1 <= k <= 24:
            raise ValueError(f"extension degree {k} outside [1, 24]")
        self.p = p
        self.k = k
        self.q = p ** k
        self.characteristic = p
        self.kind = "prime-field" if k == 1 else "extension-field"
        self.modulus = _canonical_modulus(p, k)
        if k == 1:
            self._mode = "prime"
            self.zero, self.one = 0, 1
        elif self.q <= _TABLE_LIMIT:
            self._mode = "table"
            self._build_tables()
            self.zero = self.q - 1  # log-form sentinel
            self.one = 0
        else:
            self._mode = "poly"
            self.zero = (0,) * k
            self.one = (1,) + (0,) * (k - 1)
            self._red_rows = self._reduction_rows()

    # -- table construction -------------------------------------------------

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        mod = self.modulus
        gen = self._find_generator(mod)
        exp = [0] * (q - 1)
        acc = (1,)
        for i in range(q - 1):
            exp[i] = _pack(p, acc)
            acc = _poly_mul_mod(p, acc, gen, mod)
        if _pack(p, acc) != 1:
            raise AssertionError("generator order mismatch")
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        zech = [0] * (q - 1)
        zero = q - 1
        for d in range(q - 1):
            v = exp[d]
            # add 1 in packed base-p form (lowest digit)
            lo = v % p
            v1 = v - lo + (lo + 1) % p
            zech[d] = zero if v1 == 0 else log[v1]
        self._exp, self._log, self._zech = exp, log, zech
        self._gen_packed = _pack(p, gen)

    def _find_generator(self, mod):
        p, q = self.p, self.q
        factors = _prime_divisors(q - 1)
        for packed in range(2, q):
            cand = _unpack(p, self.k, packed)
            ok = True
            for r in factors:
                if _pack(p, _poly_pow_mod(p, cand, (q - 1) // r, mod)) == 1:
                    ok = False
                    break
            if ok:
                return cand
        raise AssertionError("no multiplicative generator found")

    def _reduction_rows(self):
        # z^(k+i) mod modulus, as coefficient tuples, for i in [0, k-1)
        p, k = self.p, self.k
        rows = []
        cur = tuple((-c) % p for c in self.modulus[:k])  # z^k
        rows.append(cur)
        for _ in range(k - 2):
            shifted = (0,) + cur[: k - 1]
            carry = cur[k - 1]
            if carry:
                shifted = tuple((s + carry * r) % p for s, r in zip(shifted, rows[0]))
            cur = shifted
            rows.append(cur)
        return rows

    # -- raw arithmetic ------------------------------------------------------

    def add(self, a, b):
        m = self._mode
        if m == "prime":
            return (a + b) % self.p
        if m == "table":
            qm1 = self.q - 1
            if a == qm1:
                return b
            if b == qm1:
                return a
            if a > b:
                a, b = b, a
            z = self._zech[b - a]
            return qm1 if z == qm1 else (a + z) % qm1
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        m = self._mode
        if m == "prime":
            return (-a) % self.p
        if m == "table":
            qm1 = self.q - 1
            if a == qm1 or self.p == 2:
                return a
            return (a + qm1 // 2) % qm1
        return tuple((-x) % self.p for x in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        m = self._mode
        if m == "prime":
            return a * b % self.p
        if m == "table":
            qm1 = self.q - 1
            if a == qm1 or b == qm1:
                return qm1
            return (a + b) % qm1
        out = [0] * (2 * self.k - 1)
        p = self.p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        for i in range(2 * self.k - 2, self.k - 1, -1):
            c = out[i]
            if c:
                row = self._red_rows[i - self.k]
                for j in range(self.k):
                    out[j] = (out[j] + c * row[j]) % p
        return tuple(out[: self.k])

    def inv(self, a):
        m = self._mode
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if m == "prime":
            return pow(a, self.p - 2, self.p)
        if m == "table":
            qm1 = self.q - 1
            return (-a) % qm1
        return self.pow(a, self.q - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self._mode == "table":
            if a == self.q - 1:
                if n == 0:
                    return self.one
                return a
            return a * n % (self.q - 1)
        result, base = self.one, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def is_zero(self, a) -> bool:
        if self._mode == "poly":
            return not any(a)
        return a == self.zero

    # -- conversions ----------------------------------------------------------

    def from_int(self, n: int):
        return self.from_packed(n % self.p)

    def from_packed(self, v: int):
        """Element from its canonical packed integer in [0, p^k)."""
        if not 0 <= v < self.q:
            raise ValueError(f"packed value {v} outside [0, {self.q})")
        m = self._mode
        if m == "prime":
            return v
        if m == "table":
            return self.q - 1 if v == 0 else self._log[v]
        return _unpack(self.p, self.k, v) if v else self.zero

    def to_packed(self, a) -> int:
        m = self._mode
        if m == "prime":
            return a
        if m == "table":
            return 0 if a == self.q - 1 else self._exp[a]
        return _pack(self.p, a)

    def from_coeffs(self, coeffs):
        cs = [int(c) % self.p for c in coeffs]
        if len(cs) > self.k:
            raise ValueError("too many coefficients")
        cs += [0] * (self.k - len(cs))
        return self.from_packed(_pack(self.p, cs))

    def to_coeffs(self, a):
        return _unpack(self.p, self.k, self.to_packed(a))

    def parse(self, text):
        """Raw value from packed int, Fraction text like '3/4', or coeff list."""
        if isinstance(text, FieldElem):
            if text.field is not self:
                raise ValueError("mixed field descriptors")
            return text.raw
        if isinstance(text, int):
            return self.from_int(text)
        if isinstance(text, (list, tuple)):
            return self.from_coeffs(text)
        fr = Fraction(str(text).strip())
        den = fr.denominator % self.p
        if den == 0:
            raise ValueError(f"denominator of {text} vanishes in characteristic {self.p}")
        num = self.from_int(fr.numerator)
        return self.mul(num, self.inv(self.from_int(den)))

    def to_text(self, a) -> str:
        return str(self.to_packed(a))

    def elem(self, value) -> "FieldElem":
        return FieldElem(self, self.parse(value))

    def elements(self):
        """All raw values in canonical (packed-integer) order."""
        for v in range(self.q):
            yield self.from_packed(v)

    def random(self, rng):
        return self.from_packed(rng.randrange(self.q))

    # -- square roots / quadratics ---------------------------------------------

    def sqrt(self, a):
        """A square root of a, or None if a is a non-residue. Deterministic."""
        if self.is_zero(a):
            return self.zero
        if self.p == 2:
            # squaring is bijective: sqrt = a^(q/2)
            return self.pow(a, self.q // 2)
        if self._mode == "table":
            if a % 2:
                return None
            r = a // 2
            return min(r, (r + (self.q - 1) // 2) % (self.q - 1))
        if self.pow(a, (self.q - 1) // 2) != self.one:
            return None
        r = self._tonelli(a)
        rn = self.neg(r)
        return r if self.to_packed(r) <= self.to_packed(rn) else rn

    def _tonelli(self, a):
        q = self.q
        s, t = 0, q - 1
        while t % 2 == 0:
            t //= 2
            s += 1
        # first non-residue in canonical order
        for v in range(2, q):
            n = self.from_packed(v)
            if self.pow(n, (q - 1) // 2) != self.one:
                break
        else:
            raise AssertionError("no quadratic non-residue found")
        c = self.pow(n, t)
        r = self.pow(a, (t + 1) // 2)
        u = self.pow(a, t)
        m = s
        while u != self.one:
            i, z = 0, u
            while z != self.one:
                z = self.mul(z, z)
                i += 1
            b = self.pow(c, 1 << (m - i - 1))
            r = self.mul(r, b)
            c = self.mul(b, b)
            u = self.mul(u, c)
            m = i
        return r

    def trace(self, a):
        """Absolute trace to F_p, returned as a raw value of this field."""
        acc, cur = self.zero, a
        for _ in range(self.k):
            acc = self.add(acc, cur)
            cur = self.pow(cur, self.p)
        return acc

    def solve_artin_schreier(self, d):
        """A solution z of z^2 + z = d in characteristic 2, or None.

        Solvable iff Tr(d) = 0; a solution is sum_i s_i delta^(2^i) with
        s_i = sum_{j>i} d^(2^j) for any delta of trace 1.
        """
        if self.p != 2:
            raise ValueError("Artin-Schreier solver requires characteristic 2")
        if not self.is_zero(self.trace(d)):
            return None
        delta = None
        for v in range(1, self.q):
            cand = self.from_packed(v)
            if not self.is_zero(self.trace(cand)):
                delta = cand
                break
        powers_d = [d]
        powers_delta = [delta]
        for _ in range(self.k - 1):
            powers_d.append(self.mul(powers_d[-1], powers_d[-1]))
            powers_delta.append(self.mul(powers_delta[-1], powers_delta[-1]))
        z = self.zero
        s = self.zero
        for i in range(self.k - 2, -1, -1):
            s = self.add(s, powers_d[i + 1])
            z = self.add(z, self.mul(s, powers_delta[i]))
        return z

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k})"


def _pack(p: int, coeffs) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * p + c % p
    return v


def _unpack(p: int, k: int, v: int):
    out = []
    for _ in range(k):
        out.append(v % p)
        v //= p
    return tuple(out)


_field_cache: dict = {}


def make_extension_field(p: int, k: int = 1) -> FiniteField:
    """The finite field F_{p^k} with the canonical (lex-least) modulus.

    Instances are cached, so fields compare by identity.
    """
    key = (p, k)
    f = _field_cache.get(key)
    if f is None:
        f = _field_cache[key] = FiniteField(p, k)
    return f


def solve_quadratic(field, a, b, c):
    """Roots in ``field`` of a z^2 + b z + c = 0 (a != 0), as a sorted raw list.

    Works in every characteristic, including 2.  Double roots are listed once.
    """
    if field.is_zero(a):
        raise ValueError("leading coefficient is zero")
    if field.characteristic == 2:
        if field.is_zero(b):
            # z^2 = c/a has the unique root (c/a)^(q/2)
            return [field.sqrt(field.div(c, a))]
        # substitute z = (b/a) w:  w^2 + w = ac/b^2
        d = field.div(field.mul(a, c), field.mul(b, b))
        w = field.solve_artin_schreier(d)
        if w is None:
            return []
        scale = field.div(b, a)
        r1 = field.mul(scale, w)
        r2 = field.add(r1, scale)
        roots = sorted({field.to_packed(r1), field.to_packed(r2)})
        return [field.from_packed(v) for v in roots]
    disc = field.sub(field.mul(b, b), field.mul(field.from_int(4), field.mul(a, c)))
    if field.characteristic == 0:
        root = field.sqrt(disc)
    else:
        root = field.sqrt(disc)
    if root is None:
        return []
    two_a = field.mul(field.from_int(2), a)
    r1 = field.div(field.sub(root, b), two_a)
    r2 = field.div(field.sub(field.neg(root), b), two_a)
    if r1 == r2:
        return [r1]
    if field.characteristic == 0:
        return sorted([r1, r2])
    roots = sorted({field.to_packed(r1), field.to_packed(r2)})
    return [field.from_packed(v) for v in roots]


class FieldElem:
    """A field element bound to its field, with operator sugar.

    Mixing elements of different fields raises ValueError.
    """

    __slots__ = ("field", "raw")

    def __init__(self, field, raw):
        self.field = field
        self.raw = raw

    def to_text(self) -> str:
        return self.field.to_text(self.raw)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise ValueError("mixed field descriptors")
            return other.raw
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field.add(self.raw, raw))

    __radd__ = __add__

    def __sub__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field.sub(self.raw, raw))

    def __rsub__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field.sub(raw, self.raw))

    def __mul__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field.mul(self.raw, raw))

    __rmul__ = __mul__

    def __truediv__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field.div(self.raw, raw))

    def __rtruediv__(self, other):
        raw = self._coerce(other)
        if raw is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, self.field.div(raw, self.raw))

    def __pow__(self, n):
        return FieldElem(self.field, self.field.pow(self.raw, n))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.raw))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field is other.field and self.raw == other.raw
        if isinstance(other, int):
            return self.raw == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.raw))

    def __bool__(self):
        return not self.field.is_zero(self.raw)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.raw)

    def __str__(self):
        return self.field.to_text(self.raw)

    def __repr__(self):
        return f"FieldElem({self.field!r}, {self})"


def field_from_config(char_text: str, degree_text: str | None = None):
    """Field from configuration strings: characteristic 0 => Q, else F_{p^k}."""
    p = int(char_text)
    if p == 0:
        return QQ
    k = int(degree_text) if degree_text else 1
    return make_extension_field(p, k)
