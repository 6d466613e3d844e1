from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extpow.rings import (
    DualNumbers,
    Integers,
    IntegersMod,
    NotInvertibleError,
    PolynomialRing,
    Rationals,
    RingElem,
    RingParseError,
    parse_ring,
    ring_ops,
)


@pytest.mark.parametrize("token,cls", [
    ("Z", Integers), ("Q", Rationals), ("Z/6", IntegersMod), ("F5", IntegersMod),
    ("F3[d]", DualNumbers), ("poly(Z; x, y)", PolynomialRing),
])
def test_parse_ring_tokens(token, cls):
    R = parse_ring(token)
    assert isinstance(R, cls)
    assert parse_ring(R.token) == R


@pytest.mark.parametrize("bad", ["Z/0", "Z/1", "F4", "F6[d]", "R", "poly(Z)", ""])
def test_parse_ring_rejects(bad):
    with pytest.raises(RingParseError):
        parse_ring(bad)


def test_field_flags():
    assert Rationals().is_field and IntegersMod(7).is_field
    assert not IntegersMod(6).is_field and not Integers().is_field
    assert not DualNumbers(5).is_field


def test_ops_over_z6():
    R = parse_ring("Z/6")
    ops = ring_ops(R(3), R(5))
    assert [str(ops[k]) for k in ("add", "sub", "mul", "neg")] == ["2", "4", "3", "3"]
    assert R(5).inverse() == R(5)
    with pytest.raises(NotInvertibleError):
        R(3).inverse()


def test_dual_number_oracle():
    # (a + b d)(c + e d) = ac + (ae + bc) d, and d is nilpotent
    D = DualNumbers(5)
    x, y = D.parse("2+3d"), D.parse("4-d")
    assert (x * y).value == ((2 * 4) % 5, (2 * -1 + 3 * 4) % 5)
    d = RingElem(D, D.eps())
    assert (d * d).is_zero() and not d.is_unit()
    assert (x * x.inverse()) == D.one()


def test_polynomial_arithmetic():
    P = parse_ring("poly(Q; xi)")
    xi = RingElem(P, P.gen("xi"))
    assert str((xi + 1) * (xi - 1)) == str(xi * xi - 1)
    assert P.parse("xi^2 - 1") == (xi + 1) * (xi - 1)
    assert not xi.is_unit() and RingElem(P, P.const(Fraction(1, 2))).is_unit()


rings = st.sampled_from([Integers(), Rationals(), IntegersMod(6), IntegersMod(7), DualNumbers(3)])


@settings(max_examples=60, deadline=None)
@given(rings, st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_commutative_ring_axioms(R, a, b, c):
    a, b, c = R(a), R(b), R(c)
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == R(0) and a * R(1) == a


@settings(max_examples=60, deadline=None)
@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rationals_roundtrip(num, den):
    Q = Rationals()
    x = Q(Fraction(num, den))
    assert Q.parse(str(x)) == x
    if num:
        assert x * x.inverse() == Q(1)


def test_ring_mismatch_raises():
    with pytest.raises(ValueError):
        IntegersMod(5)(1) + IntegersMod(7)(1)
