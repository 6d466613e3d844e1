import random

import pytest

from extpow.extrep import RepMatrix, cauchy_binet, exterior_transvection, gl_transvection, random_gl, random_rep_gl
from extpow.forms import form_polarized
from extpow.linalg import det, inverse, matmul
from extpow.normalizer import (
    MembershipVerdict,
    conjugate_det_is_one,
    conjugated_transvection,
    in_G_f,
    in_Gbar_F,
    in_Gbar_f,
    normalizer_equalities_demo,
    planted_negatives,
    transports_elementary,
)
from extpow.rings import Integers, IntegersMod, NotInvertibleError, PolynomialRing, Rationals, parse_ring

Z, Q, F5 = Integers(), Rationals(), IntegersMod(5)


def test_membership_of_images():
    rng = random.Random(1)
    h = random_gl(6, F5, rng)
    while det(h, F5) == 1:
        h = random_gl(6, F5, rng)
    g = cauchy_binet(h, 2, F5)
    assert in_Gbar_f(g).holds and not in_G_f(g).holds
    assert in_G_f(exterior_transvection(6, 2, 1, 5, F5(3), F5)).holds


def test_conjugate_matches_wedge_of_gl_conjugate():
    # g t g^-1 for g = wedge^2 h equals wedge^2 (h t h^-1), xi an indeterminate
    rng = random.Random(2)
    h = random_gl(4, Q, rng)
    P = PolynomialRing(Q, ("xi",))
    xi = P.gen("xi")
    hp = [[P.const(x) for x in row] for row in h]
    hi = [[P.const(x) for x in row] for row in inverse(h, Q)]
    conj = matmul(matmul(hp, gl_transvection(4, 1, 3, xi, P), P), hi, P)
    assert conjugated_transvection(cauchy_binet(h, 2, Q), 1, 3) == cauchy_binet(conj, 2, P)


@pytest.mark.parametrize("token", ["Q", "Z/5"])
def test_transporter_agrees_with_explicit_conjugates(token):
    R = parse_ring(token)
    rng = random.Random(3)
    f = form_polarized(6, 2, R)
    for g in (cauchy_binet(random_gl(6, R, rng), 2, R), random_rep_gl(6, 2, R, rng)):
        fast = transports_elementary(g, "G_f", f).holds
        P = PolynomialRing(R, ("xi",))
        fp = f.change_ring(P)
        explicit = all(in_G_f(conjugated_transvection(g, i, j), fp).holds for i, j in ((1, 2), (4, 6), (5, 3)))
        assert fast == explicit


def test_sparse_transporter_path_agrees():
    rng = random.Random(4)
    g = cauchy_binet(random_gl(6, Z, rng), 2, Z)
    P = PolynomialRing(Z, ("t",))
    pairs = [(1, 2), (3, 6)]
    for target in ("G_f", "Gbar_f"):
        a = transports_elementary(g, target, pairs=pairs)
        b = transports_elementary(g.change_ring(P), target, form_polarized(6, 2, P), pairs=pairs)
        assert a.result == b.result == "true"


def test_planted_negatives_rejected():
    for R in (F5, Q, Z, IntegersMod(6), IntegersMod(2)):
        for label, g in planted_negatives(6, 2, R):
            assert g.is_invertible(), label
            assert not in_Gbar_f(g).holds, label
            assert not transports_elementary(g, "Gbar_f").holds, label


def test_composite_modulus_transports():
    R = IntegersMod(6)
    g = cauchy_binet(random_gl(6, R, random.Random(5)), 2, R)
    assert transports_elementary(g, "Gbar_f").holds
    assert transports_elementary(g, "G_f").holds


def test_non_invertible_input():
    g = RepMatrix.identity(Z, 6, 2).scale(2)
    v = in_Gbar_f(g)
    assert v.result == "false" and v.witness["reason"] == "not invertible"
    with pytest.raises(NotInvertibleError):
        transports_elementary(g)


def test_det_of_conjugate():
    rng = random.Random(6)
    g = random_rep_gl(6, 2, F5, rng)
    assert conjugate_det_is_one(g, 2, 4, F5(1))


def test_ideal_membership_verdict():
    rng = random.Random(7)
    g = cauchy_binet(random_gl(5, Q, rng), 2, Q)
    v = in_Gbar_F(g)
    assert v.holds and "lambdas" in v.witness
    assert not in_Gbar_F(random_rep_gl(5, 2, Q, rng)).holds


def test_demo_empty_and_threads():
    empty = normalizer_equalities_demo(6, 2, F5, 0, 1)
    assert empty["samples"] == [] and empty["pass"] and empty["consistent"]
    one = normalizer_equalities_demo(6, 2, F5, 3, 11, threads=1)
    many = normalizer_equalities_demo(6, 2, F5, 3, 11, threads=4)
    assert one == many and one["pass"]
    assert one["counts"] == {"positive": 3, "negative": 3, "planted": 3}


def test_demo_preconditions():
    with pytest.raises(ValueError):
        normalizer_equalities_demo(6, 3, F5, 1, 0)
    with pytest.raises(ValueError):
        MembershipVerdict("nope", "true")
