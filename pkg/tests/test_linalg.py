import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extpow.combinat import sign_sequence
from extpow.linalg import (
    RowEchelon,
    charpoly,
    det,
    identity,
    inverse,
    matmul,
    rank,
    solve_homogeneous,
    substitute_linear,
)
from extpow.rings import (
    IndeterminateError,
    Integers,
    IntegersMod,
    NotInvertibleError,
    PolynomialRing,
    Rationals,
    UnsupportedRingError,
)

Z, Q = Integers(), Rationals()


def leibniz(A, R):
    n = len(A)
    total = R.zero()
    for perm in itertools.permutations(range(n)):
        term = R.from_int(sign_sequence(perm))
        for i, j in enumerate(perm):
            term = R.mul(term, A[i][j])
        total = R.add(total, term)
    return total


def square(size):
    return st.lists(st.lists(st.integers(-9, 9), min_size=size, max_size=size), min_size=size, max_size=size)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(square), st.sampled_from([Z, Q, IntegersMod(6), IntegersMod(7)]))
def test_det_matches_leibniz(A, R):
    A = [[R.canon(x) for x in row] for row in A]
    assert det(A, R) == leibniz(A, R)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_inverse_over_q(A):
    A = [[Q.canon(x) for x in row] for row in A]
    if det(A, Q) == 0:
        with pytest.raises(NotInvertibleError):
            inverse(A, Q)
    else:
        assert matmul(A, inverse(A, Q), Q) == identity(len(A), Q)


def test_inverse_over_z_uses_unit_determinant():
    A = [[2, 1], [1, 1]]
    assert matmul(A, inverse(A, Z), Z) == identity(2, Z)
    with pytest.raises(NotInvertibleError):
        inverse([[2, 0], [0, 1]], Z)


def test_charpoly_constant_term():
    A = [[1, 2, 0], [3, 4, 5], [0, 6, 7]]
    cp = charpoly(A, Z)
    assert cp[0] == 1 and cp[1] == -12 and -cp[3] == det(A, Z)


def test_kernel_of_small_system():
    sp = solve_homogeneous([[1, 1, 0], [0, 1, 1]], Q)
    assert sp.dimension == 1 and sp.contains([1, -1, 1])
    assert not sp.contains([1, 1, 1])
    assert sp.project([0, 2]).dimension == 1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=4))
def test_rank_nullity(rows):
    sp = solve_homogeneous(rows, Q, ncols=5)
    assert rank(rows, Q) + sp.dimension == 5
    for v in sp.basis:
        assert all(sum(Fraction(a) * b for a, b in zip(r, v)) == 0 for r in rows)


def test_composite_modulus_is_indeterminate():
    ech = RowEchelon(IntegersMod(6))
    ech.add({0: 1, 1: 2})
    with pytest.raises(IndeterminateError):
        ech.add({1: 3})


def test_elimination_over_z_is_refused():
    with pytest.raises(UnsupportedRingError):
        RowEchelon(Z)
    with pytest.raises(UnsupportedRingError):
        solve_homogeneous([[1]], IntegersMod(6))


def test_substitute_composition_order():
    P = PolynomialRing(Z, ("a", "b"))
    p = P.parse("a^2 + 3*a*b - b")
    g = [[1, 2], [0, 1]]
    h = [[1, 0], [-1, 1]]
    names = ["a", "b"]
    lhs = substitute_linear(p, matmul(g, h, Z), names)
    rhs = substitute_linear(substitute_linear(p, g, names), h, names)
    assert lhs == rhs
    # a -> a + 2b, b -> b
    assert substitute_linear(p, g, names) == P.parse("a^2 + 7*a*b + 10*b^2 - b")
