import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extpow.combinat import subset_index, subset_tuples
from extpow.extrep import (
    RepMatrix,
    cauchy_binet,
    evaluate_word,
    exterior_transvection,
    random_gl,
    random_rep_gl,
    random_word,
)
from extpow.forms import (
    MultilinearForm,
    act_on_form,
    evaluate_form,
    form_polarized,
    ideal_F_generators,
    independent_mod_p,
    plucker_poly,
    plucker_set,
    semi_invariance_detail,
    semi_invariance_scalar,
    stabilizes_ideal_F,
    stabilizes_plucker,
)
from extpow.linalg import det, inverse
from extpow.rings import Integers, IntegersMod, PolynomialRing, Rationals, RingElem, parse_ring

Z, Q, F5 = Integers(), Rationals(), IntegersMod(5)


# -- Pluecker relations ---------------------------------------------------------------

@pytest.mark.parametrize("n,m,count", [(4, 2, 1), (5, 2, 5), (6, 2, 15), (5, 1, 0)])
def test_plucker_counts(n, m, count):
    # for m = 2 the quadrics are independent: C(n, 4) of them
    ps = plucker_set(n, m)
    assert len(ps) == count
    assert count == 0 or independent_mod_p(ps, 2)


def test_plucker_span_for_three_six():
    # quadrics in the ideal of Gr(3, 6): C(21, 2) - 175 = 35
    from extpow.linalg import rank
    rows = [{a * 20 + b: c for (a, b), c in q} for q in plucker_set(6, 3).quadrics]
    assert rank(rows, Rationals()) == 35


def test_plucker_poly_for_four_two():
    (p,) = plucker_set(4, 2).polys
    q = p.ring.parse("x12*x34 - x13*x24 + x14*x23")
    assert p == q or p == -q
    assert plucker_poly((1,), (2, 3, 4), 4) in (q, -q)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(4, 2), (5, 2), (6, 3)]), st.integers(0, 10**6))
def test_plucker_relations_vanish_on_decomposable_vectors(nm, seed):
    # the m x m minors of an n x m matrix are Pluecker coordinates
    n, m = nm
    rng = random.Random(seed)
    A = [[rng.randint(-3, 3) for _ in range(m)] for _ in range(n)]
    coords = [det([A[i - 1] for i in I], Z) for I in subset_tuples(n, m)]
    for q in plucker_set(n, m).quadrics:
        assert sum(c * coords[a] * coords[b] for (a, b), c in q) == 0


@pytest.mark.parametrize("token", ["Z", "Q", "Z/6"])
def test_plucker_stabilized_by_words(token):
    R = parse_ring(token)
    ps = plucker_set(5, 2)
    for seed in range(5):
        assert stabilizes_plucker(evaluate_word(random_word(5, 10, R, seed), 5, 2), ps)


def test_plucker_rejects_elementary_matrix_outside_image():
    idx = subset_index(5, 2)
    ent = {(r, r): 1 for r in range(10)}
    ent[(idx[(1, 2)], idx[(3, 4)])] = 1
    assert not stabilizes_plucker(RepMatrix(Z, 5, 2, ent))


def test_plucker_stabilization_ignores_invertibility():
    # q(g x) = 2 q for the image of diag(2, 1, 1, 1): the ideal is preserved over Z
    g = cauchy_binet([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 2, Z)
    assert stabilizes_plucker(g) and not g.is_invertible()
    assert stabilizes_plucker(g.change_ring(Q)) and g.change_ring(Q).is_invertible()


# -- the forms f ---------------------------------------------------------------------

def test_polarized_form_restricts_to_twice_the_pfaffian():
    f = form_polarized(4, 2, Q)
    assert f.nnz == 6
    x = [1, 2, -1, 3, 0, 5]  # coordinates x12, x13, x14, x23, x24, x34
    pf = x[0] * x[5] - x[1] * x[4] + x[2] * x[3]
    assert evaluate_form(f, [x, x]) == Q(2 * pf)
    assert f.coefficient(["13", "24"]) == Q(-1)


def test_form_json_roundtrip():
    f = form_polarized(6, 2, IntegersMod(7))
    assert MultilinearForm.from_json(f.to_json()) == f
    assert form_polarized((1, 2, 4, 5), 2, Z, n=5).V == (1, 2, 4, 5)


def test_act_on_form_composes_right_to_left():
    rng = random.Random(2)
    f = form_polarized(6, 2, F5)
    g = random_rep_gl(6, 2, F5, rng)
    h = random_rep_gl(6, 2, F5, rng)
    assert act_on_form(g @ h, f) == act_on_form(h, act_on_form(g, f))


def test_act_on_form_agrees_with_evaluation():
    rng = random.Random(6)
    f = form_polarized(4, 2, Q)
    g = random_rep_gl(4, 2, Q, rng)
    xs = [[Fraction(rng.randint(-3, 3)) for _ in range(6)] for _ in range(2)]
    gx = [[sum(g.dense()[a][b] * x[b] for b in range(6)) for a in range(6)] for x in xs]
    assert evaluate_form(act_on_form(g, f), xs) == evaluate_form(f, gx)


def test_sparse_and_dense_action_agree():
    P = PolynomialRing(Z, ("t",))
    rng = random.Random(8)
    g = cauchy_binet(random_gl(6, Z, rng), 2, Z)
    f = form_polarized(6, 2, Z)
    dense = act_on_form(g, f)
    sparse = act_on_form(g.change_ring(P), f.change_ring(P))
    assert sparse == dense.change_ring(P)


@pytest.mark.parametrize("token", ["Z", "Q", "Z/5", "Z/6"])
def test_semi_invariance_is_det(token):
    R = parse_ring(token)
    rng = random.Random(10)
    f = form_polarized(6, 2, R)
    for _ in range(4):
        h = random_gl(6, R, rng)
        assert semi_invariance_scalar(cauchy_binet(h, 2, R), f) == RingElem(R, det(h, R))


def test_symbolic_semi_invariance():
    P = PolynomialRing(Z, ("xi",))
    xi = RingElem(P, P.gen("xi"))
    f = form_polarized(6, 2, P)
    assert semi_invariance_scalar(exterior_transvection(6, 2, 2, 5, xi, P), f) == P.one()


def test_non_member_reports_failing_datum():
    rng = random.Random(1)
    f = form_polarized(6, 2, Q)
    lam, why = semi_invariance_detail(random_rep_gl(6, 2, Q, rng), f)
    assert lam is None and why["reason"] == "not proportional"
    lam, why = semi_invariance_detail(RepMatrix.identity(Z, 6, 2).scale(2), form_polarized(6, 2, Z))
    assert lam is None and why == {"reason": "scalar is not a unit", "lambda": "8"}


# -- the ideal F ---------------------------------------------------------------------

def test_ideal_generators():
    gens = ideal_F_generators(7, 2, Z)
    assert len(gens) == 7 and all(f.k == 3 for f in gens)
    for p in (2, 3, 5):
        assert independent_mod_p(gens, p)
    with pytest.raises(ValueError):
        ideal_F_generators(6, 2)


@pytest.mark.parametrize("token", ["Q", "F5", "Z/6"])
def test_ideal_stabilized_by_images(token):
    R = parse_ring(token)
    rng = random.Random(12)
    gens = ideal_F_generators(5, 2, R)
    for _ in range(4):
        w = stabilizes_ideal_F(cauchy_binet(random_gl(5, R, rng), 2, R), gens)
        assert w is not None and w.is_invertible()
    assert stabilizes_ideal_F(random_rep_gl(5, 2, R, rng), gens) is None


def test_ideal_diagonal_coefficient_formula():
    # lambda_V = +-det(h) (h^-1)_{cc}, c the index missing from V
    rng = random.Random(4)
    gens = ideal_F_generators(7, 2, F5)
    for _ in range(3):
        h = random_gl(7, F5, rng)
        d, hi = det(h, F5), inverse(h, F5)
        w = stabilizes_ideal_F(cauchy_binet(h, 2, F5), gens)
        for V, lam in w.lambdas.items():
            (c,) = set(range(1, 8)) - set(V)
            x = F5.mul(d, hi[c - 1][c - 1])
            assert lam.value in (x, F5.neg(x))


def test_permutation_gives_zero_lambda():
    # swapping 1 and 2 sends f_{2..7} to +-f_{1,3..7}: the ideal is preserved
    # but that diagonal coefficient is 0, so the unit-lambda variant rejects it
    swap = [[1 if (i, j) in ((0, 1), (1, 0)) or (i == j and i > 1) else 0 for j in range(7)] for i in range(7)]
    g = cauchy_binet(swap, 2, F5)
    w = stabilizes_ideal_F(g)
    assert w is not None and w.is_invertible() and not w.all_units()
    assert w.lambdas[(2, 3, 4, 5, 6, 7)].is_zero()
    assert stabilizes_ideal_F(g, require_unit_lambdas=True) is None
