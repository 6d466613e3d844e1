import itertools

import pytest

from extpow.extrep import exterior_torus, exterior_transvection
from extpow.forms import form_polarized
from extpow.liealg import (
    collapsed_polynomial,
    diagonal_relation,
    lie_dim_form_stabilizer,
    lie_dim_ideal_stabilizer,
    lie_fix_system,
    lie_report,
    structural_relations_check,
    verify_diagonal_relation,
)
from extpow.rings import DualNumbers, IntegersMod, PolynomialRing, Rationals, RingElem, UnsupportedRingError

Q = Rationals()


def derivative_images(n, m, p):
    """d(wedge^m)(z) for z = e_ab (a != b) and e_aa, read off from e + d z over F_p[d]."""
    D = DualNumbers(p)
    d = RingElem(D, D.eps())
    mats = [exterior_transvection(n, m, a, b, d, D) for a, b in itertools.permutations(range(1, n + 1), 2)]
    mats += [exterior_torus(n, m, a, d + 1, D) for a in range(1, n + 1)]
    N = mats[0].N
    out = []
    for g in mats:
        vec = [0] * (N * N)
        for r, c, v in g.triplets():
            vec[r * N + c] = v[1]
        out.append(vec)
    return out


@pytest.mark.parametrize("p", [3, 5])
def test_extended_space_is_the_image_of_gl(p):
    F = IntegersMod(p)
    space = lie_dim_form_stabilizer(6, 2, F, extended=True)
    images = derivative_images(6, 2, p)
    assert all(space.contains(v) for v in images)
    assert space.dimension == 36


def test_plain_space_contains_traceless_images():
    space = lie_dim_form_stabilizer(6, 2, IntegersMod(5), extended=False)
    images = derivative_images(6, 2, 5)
    assert all(space.contains(v) for v in images[:30])
    assert not space.contains(images[30])  # e_11 has trace 1
    assert space.dimension == 35


def test_collapsed_polynomial_gives_the_same_algebra():
    f = form_polarized(6, 2, Q)
    q = collapsed_polynomial(f)
    assert len(q.value) == 15  # 15 monomials x_I x_J x_K, each with coefficient 6 sign
    poly_space = lie_fix_system([q], Q, mode="fix")
    form_space = lie_dim_form_stabilizer(6, 2, Q, extended=False)
    assert poly_space.dimension == form_space.dimension == 35
    assert all(form_space.contains(v) for v in poly_space.basis)


def test_fix_system_small_example():
    P = PolynomialRing(Q, ("x1", "x2"))
    sp = lie_fix_system([P.parse("x1*x2")], Q, mode="fix")
    assert sp.dimension == 1 and sp.contains([1, 0, 0, -1])
    # the ideal (x1 x2) is also kept by the scalars
    assert lie_fix_system([P.parse("x1*x2")], Q, mode="ideal").dimension == 2


def test_plucker_and_ideal_dimensions():
    assert lie_report(5, 2, Q, "plucker")["dimension"] == 25
    assert lie_dim_ideal_stabilizer(5, 2, Q).dimension == 25
    for p in (2, 3):
        assert lie_report(5, 2, IntegersMod(p), "ideal")["dimension"] <= 25


@pytest.mark.parametrize("p", [2, 3, 5])
def test_structural_relations(p):
    rep = structural_relations_check(6, 2, IntegersMod(p), extended=True)
    assert rep["pass"] and rep["root_classes_contributing"] == 30


def test_diagonal_relation_coefficients():
    assert diagonal_relation(9, 3) == [
        ((1, 2, 3), 3), ((1, 2, 4), 3), ((1, 2, 5), -1), ((1, 2, 6), -1), ((1, 2, 7), -1),
        ((1, 2, 8), -1), ((1, 2, 9), -1), ((1, 3, 4), -2), ((2, 3, 4), -2),
    ]
    with pytest.raises(ValueError):
        diagonal_relation(7, 2)


def test_diagonal_relation_fails_on_scalars():
    # the identity is in the extended algebra and violates the plain-mode relation
    space = lie_dim_form_stabilizer(6, 2, Q, extended=True)
    assert not verify_diagonal_relation(6, 2, Q, space)
    assert verify_diagonal_relation(6, 2, Q)


def test_report_shape_and_field_check():
    rep = lie_report(6, 2, IntegersMod(2), "plain")
    assert set(rep) == {"n", "m", "field", "mode", "dimension", "bound", "relations_checked", "pass"}
    assert rep["bound"] == 35 and rep["dimension"] <= 35 and rep["pass"]
    with pytest.raises(UnsupportedRingError):
        lie_report(6, 2, IntegersMod(6), "plain")
