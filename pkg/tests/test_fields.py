import random
from fractions import Fraction

import pytest

from atiyahlab.fields import (
    QQ,
    FieldElem,
    field_from_config,
    is_probable_prime,
    make_extension_field,
    solve_quadratic,
)


def test_canonical_moduli_small():
    # The modulus is the lexicographically least monic irreducible, so these
    # coefficient tuples are stable oracles across runs and platforms.
    assert make_extension_field(2, 2).modulus == (1, 1, 1)
    assert make_extension_field(3, 2).modulus == (1, 0, 1)
    assert make_extension_field(5, 2).modulus == (2, 0, 1)


def test_prime_field_basics():
    F = make_extension_field(7)
    assert F.p == 7 and F.k == 1 and F.q == 7
    a, b = F.elem(3), F.elem(5)
    assert a + b == 1
    assert a * b == 1
    assert a - b == 5
    assert a / b == 2          # 3 * 5^{-1} = 3 * 3 = 2
    assert -a == 4
    assert a ** 6 == 1 and a ** 0 == 1
    assert a ** -1 == 5        # 3 * 5 = 15 = 1 mod 7


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (3, 2), (5, 2), (2, 8)])
def test_field_axioms(p, k):
    F = make_extension_field(p, k)
    rng = random.Random(p * 100 + k)
    elems = [FieldElem(F, F.from_packed(i)) for i in range(min(F.q, 9))]
    elems.append(FieldElem(F, F.random(rng)))
    zero, one = F.elem(0), F.elem(1)
    for a in elems:
        for b in elems:
            assert a + b == b + a
            assert a * b == b * a
            assert a + zero == a
            assert a * one == a
            assert a - b == a + (-b)
            if not b.is_zero():
                assert (a / b) * b == a
    a, b, c = elems[0], elems[-1], elems[len(elems) // 2]
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_packed_roundtrip():
    for p, k in [(2, 2), (3, 2), (2, 8), (7, 1)]:
        F = make_extension_field(p, k)
        for i in range(min(F.q, 64)):
            assert F.to_packed(F.from_packed(i)) == i
    with pytest.raises(ValueError):
        make_extension_field(7).from_packed(7)


def test_parse_fractions():
    F = make_extension_field(7)
    assert F.elem("3/2") == F.elem(3) / F.elem(2)
    assert F.elem("-1") == -F.elem(1)
    assert QQ.elem("22/7").raw == Fraction(22, 7)
    with pytest.raises(ValueError):
        F.parse("1/7")        # denominator divisible by the characteristic


def test_parse_rejects_garbage():
    F = make_extension_field(5)
    with pytest.raises(ValueError):
        F.parse("x+1")
    with pytest.raises(ValueError):
        QQ.parse("")


def test_parse_coefficient_lists():
    F9 = make_extension_field(3, 2)
    a = F9.elem([1, 2])       # 1 + 2z
    assert F9.to_coeffs(a.raw) == (1, 2)
    with pytest.raises(ValueError):
        F9.parse([1, 2, 1])   # too many coefficients


def test_cross_field_guard():
    F5 = make_extension_field(5)
    F7 = make_extension_field(7)
    with pytest.raises(ValueError):
        F5.elem(1) + F7.elem(1)
    a = F5.elem(2)
    assert F5.parse(a) == a.raw       # same-field FieldElem passes through
    with pytest.raises(ValueError):
        F5.parse(F7.elem(2))


def test_sqrt_rationals():
    assert QQ.sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert QQ.sqrt(Fraction(2)) is None
    assert QQ.sqrt(Fraction(-1)) is None
    assert QQ.sqrt(Fraction(0)) == 0


def test_sqrt_large_prime_field():
    F = make_extension_field(1000003)
    a = F.from_int(123456789)
    sq = F.mul(a, a)
    r = F.sqrt(sq)
    assert r is not None and F.mul(r, r) == sq
    # find a non-residue and confirm sqrt rejects it
    for t in range(2, 60):
        cand = F.from_int(t)
        if F.pow(cand, (F.q - 1) // 2) != F.one:
            assert F.sqrt(cand) is None
            break
    else:
        pytest.fail("no quadratic non-residue below 60 (should be impossible)")


def test_sqrt_char2_is_total():
    F = make_extension_field(2, 8)
    for i in range(40):
        a = F.from_packed(i)
        r = F.sqrt(a)
        assert r is not None and F.mul(r, r) == a


def test_sqrt_extension_field():
    F9 = make_extension_field(3, 2)
    squares = set()
    for i in range(9):
        a = F9.from_packed(i)
        sq = F9.mul(a, a)
        squares.add(F9.to_packed(sq))
        r = F9.sqrt(sq)
        assert r is not None and F9.mul(r, r) == sq
    assert len(squares) == 5          # 0 plus (q-1)/2 nonzero squares
    for i in range(9):
        if i not in squares:
            assert F9.sqrt(F9.from_packed(i)) is None


def test_poly_mode_large_extension():
    # q = 2^21 is past the log-table threshold, exercising coefficient mode.
    F = make_extension_field(2, 21)
    assert F.q == 2 ** 21
    a = F.from_packed(123456)
    b = F.from_packed(789012)
    assert F.div(F.mul(a, b), b) == a
    assert F.pow(a, F.q - 1) == F.one
    assert F.to_packed(F.from_packed(54321)) == 54321


def test_solve_quadratic_all_characteristics():
    fields = [QQ, make_extension_field(7), make_extension_field(3, 2),
              make_extension_field(2, 2), make_extension_field(2, 8)]
    rng = random.Random(11)
    for F in fields:
        for _ in range(8):
            if F is QQ:
                b = Fraction(rng.randrange(-5, 6))
                c = Fraction(rng.randrange(-5, 6))
            else:
                b, c = F.random(rng), F.random(rng)
            roots = solve_quadratic(F, F.one, b, c)
            assert len(roots) <= 2
            for r in roots:
                lhs = F.add(F.add(F.mul(r, r), F.mul(b, r)), c)
                assert F.is_zero(lhs)
    with pytest.raises(ValueError):
        solve_quadratic(QQ, Fraction(0), Fraction(1), Fraction(1))


def test_solve_quadratic_counts_roots_exactly():
    # Exhaustive check over F_9: the number of roots of z^2 + bz + c matches
    # a brute-force scan of the whole field.
    F = make_extension_field(3, 2)
    all_elems = [F.from_packed(i) for i in range(9)]
    for b in all_elems:
        for c in all_elems:
            brute = [z for z in all_elems
                     if F.is_zero(F.add(F.add(F.mul(z, z), F.mul(b, z)), c))]
            got = solve_quadratic(F, F.one, b, c)
            assert sorted(F.to_packed(r) for r in got) == sorted(
                F.to_packed(z) for z in brute)


def test_artin_schreier_char2():
    F4 = make_extension_field(2, 2)
    seen_none = seen_two = False
    for i in range(4):
        d = F4.from_packed(i)
        z = F4.solve_artin_schreier(d)
        if z is None:
            assert not F4.is_zero(F4.trace(d))
            seen_none = True
        else:
            assert F4.add(F4.mul(z, z), z) == d
            seen_two = True
    assert seen_none and seen_two
    with pytest.raises(ValueError):
        make_extension_field(3).solve_artin_schreier(1)


def test_is_probable_prime():
    assert is_probable_prime(2) and is_probable_prime(3) and is_probable_prime(1000003)
    assert not is_probable_prime(1)
    assert not is_probable_prime(561)     # Carmichael number
    assert not is_probable_prime(2 ** 20)


def test_field_constructor_guards():
    with pytest.raises(ValueError):
        make_extension_field(4)
    with pytest.raises(ValueError):
        make_extension_field(3, 0)
    with pytest.raises(ValueError):
        make_extension_field(3, 25)


def test_field_from_config():
    assert field_from_config("0", "1") is QQ
    assert field_from_config("3", "2").q == 9
    assert field_from_config("5", None).q == 5
    with pytest.raises(ValueError):
        field_from_config("4", "1")


def test_extension_field_identity_cache():
    assert make_extension_field(3, 2) is make_extension_field(3, 2)
    assert make_extension_field(2, 8) is make_extension_field(2, 8)


def test_elem_text_roundtrip():
    F7 = make_extension_field(7)
    for i in range(7):
        a = F7.elem(i)
        assert F7.elem(a.to_text()) == a
    q = QQ.elem(Fraction(-7, 3))
    assert QQ.elem(q.to_text()) == q
    # extension fields round-trip through packed integers
    F9 = make_extension_field(3, 2)
    for i in range(9):
        a = FieldElem(F9, F9.from_packed(i))
        assert F9.from_packed(int(a.to_text())) == a.raw


def test_trace_surjects_onto_prime_field():
    F = make_extension_field(2, 8)
    traces = {F.to_packed(F.trace(F.from_packed(i))) for i in range(256)}
    assert traces == {0, 1}
