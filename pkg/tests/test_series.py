import random
from fractions import Fraction

import pytest

from atiyahlab.errors import SeriesPrecisionError
from atiyahlab.fields import QQ, make_extension_field
from atiyahlab.series import LaurentSeries, eval_poly


def series_from_fracs(pairs, hi):
    """Helper: series over Q from {exponent: value} pairs."""
    if not pairs:
        return LaurentSeries.zero(QQ, hi)
    start = min(pairs)
    coeffs = [Fraction(pairs.get(e, 0)) for e in range(start, hi)]
    return LaurentSeries(QQ, start, coeffs, hi)


def test_constructors_and_coefficients():
    s = LaurentSeries.t_power(QQ, -2, 5)
    assert s.valuation() == -2
    assert s.coefficient(-2) == 1
    assert s.coefficient(0) == 0
    assert s.coefficient(-10) == 0       # below start: known zero
    with pytest.raises(SeriesPrecisionError):
        s.coefficient(5)                 # at/after horizon: unknown
    one = LaurentSeries.one(QQ, 3)
    assert one.coefficient(0) == 1 and one.valuation() == 0
    assert LaurentSeries.zero(QQ, 4).is_zero_to_precision()


def test_window_mismatch_rejected():
    with pytest.raises(ValueError):
        LaurentSeries(QQ, 0, [Fraction(1)], hi=3)


def test_addition_keeps_sharp_horizon():
    a = series_from_fracs({0: 1, 1: 2}, hi=5)
    b = series_from_fracs({1: -2, 3: 7}, hi=4)
    c = a + b
    assert c.hi == 4
    assert c.coefficient(0) == 1
    assert c.coefficient(1) == 0
    assert c.coefficient(3) == 7
    d = a - a
    assert d.is_zero_to_precision()


def test_multiplication_horizon_is_sound_and_sharp():
    # hi(a*b) = min(val(a)+hi(b), val(b)+hi(a)) for known-valuation operands
    a = series_from_fracs({-1: 1, 0: 1}, hi=4)        # val -1, hi 4
    b = series_from_fracs({2: 3}, hi=6)               # val 2, hi 6
    c = a * b
    assert c.hi == min(-1 + 6, 2 + 4)
    assert c.coefficient(1) == 3
    assert c.coefficient(2) == 3


def test_multiplication_values():
    # (1 + t)(1 - t) = 1 - t^2
    a = series_from_fracs({0: 1, 1: 1}, hi=8)
    b = series_from_fracs({0: 1, 1: -1}, hi=8)
    c = a * b
    assert c.coefficient(0) == 1
    assert c.coefficient(1) == 0
    assert c.coefficient(2) == -1


def test_geometric_inverse():
    # 1/(1 - t) = 1 + t + t^2 + ...
    s = series_from_fracs({0: 1, 1: -1}, hi=10)
    inv = s.inverse()
    for e in range(inv.hi):
        assert inv.coefficient(e) == 1
    prod = s * inv
    assert prod.coefficient(0) == 1
    for e in range(1, prod.hi):
        assert prod.coefficient(e) == 0


def test_inverse_of_nonunit_valuation():
    # 1/t^2(1+t): valuation must become -2
    s = series_from_fracs({2: 1, 3: 1}, hi=9)
    inv = s.inverse()
    assert inv.valuation() == -2
    prod = s * inv
    assert prod.coefficient(0) == 1


def test_inverse_requires_known_valuation():
    with pytest.raises((SeriesPrecisionError, ZeroDivisionError)):
        LaurentSeries.zero(QQ, 5).inverse()


def test_division_roundtrip_random():
    rng = random.Random(5)
    F = make_extension_field(7)
    for _ in range(20):
        v1, v2 = rng.randrange(-3, 3), rng.randrange(-3, 3)
        a = LaurentSeries(F, v1, [F.from_int(rng.randrange(1, 7))]
                          + [F.from_int(rng.randrange(7)) for _ in range(6)], v1 + 7)
        b = LaurentSeries(F, v2, [F.from_int(rng.randrange(1, 7))]
                          + [F.from_int(rng.randrange(7)) for _ in range(6)], v2 + 7)
        q = a / b
        back = q * b
        for e in range(max(back.start, a.start), back.hi):
            assert back.coefficient(e) == a.coefficient(e)


def test_shift_scale_truncate():
    s = series_from_fracs({0: 1, 2: 5}, hi=6)
    sh = s.shift(-3)
    assert sh.valuation() == -3 and sh.hi == 3
    assert sh.coefficient(-1) == 5
    sc = s.scale(Fraction(2))
    assert sc.coefficient(2) == 10
    tr = s.truncate(2)
    assert tr.hi == 2
    with pytest.raises(SeriesPrecisionError):
        tr.coefficient(2)


def test_equality_on_shared_window():
    a = series_from_fracs({1: 4}, hi=5)
    b = series_from_fracs({1: 4, 5: 9}, hi=6)    # differs only beyond a's horizon
    assert a == b.truncate(5)


def test_eval_poly_matches_direct_expansion():
    # p(z) = z^2 - z + 2 evaluated at s = t^-1 + 1
    s = series_from_fracs({-1: 1, 0: 1}, hi=5)
    out = eval_poly(QQ, [Fraction(2), Fraction(-1), Fraction(1)], s)
    # (t^-1 + 1)^2 - (t^-1 + 1) + 2 = t^-2 + t^-1 + 2
    assert out.coefficient(-2) == 1
    assert out.coefficient(-1) == 1
    assert out.coefficient(0) == 2
    assert out.coefficient(1) == 0


def test_eval_poly_empty_and_constant():
    s = series_from_fracs({1: 3}, hi=4)
    assert eval_poly(QQ, [], s).is_zero_to_precision()
    c = eval_poly(QQ, [Fraction(9)], s)
    assert c.coefficient(0) == 9


def test_mixed_field_rejected():
    a = LaurentSeries.one(QQ, 3)
    b = LaurentSeries.one(make_extension_field(5), 3)
    with pytest.raises(ValueError):
        _ = a + b
