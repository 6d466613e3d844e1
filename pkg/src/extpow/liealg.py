"""Lie algebras of the stabilizers, computed over dual numbers.

An element e + y d (d^2 = 0) stabilizes a form f iff the d-linear part of
f((e + y d) x1, ..., (e + y d) xk) vanishes (or equals mu f for the
semi-invariant version).  Both conditions are linear in the entries of y, so
each Lie algebra is the kernel of one sparse homogeneous system.

Unknowns: auxiliary scalars first, then y_{I,J} at offset + I N + J.  Putting
the scalars first makes elimination pivot on them immediately, which is the
same as solving the first equation containing each scalar and substituting.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .combinat import distance, enumerate_subsets, sign_adjoin, subset_index, subset_tuples
from .forms import MultilinearForm, form_polarized, ideal_F_generators, plucker_set
from .linalg import RowEchelon, SolutionSpace
from .rings import IntegersMod, PolynomialRing, Ring, RingElem, require_field


@dataclass
class LieSystem:
    """Homogeneous sparse system; the first ``n_aux`` columns are auxiliary scalars."""

    field: Ring
    n_aux: int
    n_main: int
    rows: list[dict] = field(default_factory=list)
    aux_names: list[str] = field(default_factory=list)

    @property
    def ncols(self) -> int:
        return self.n_aux + self.n_main

    def solve(self) -> SolutionSpace:
        ech = RowEchelon(self.field)
        for r in self.rows:
            if r:
                ech.add(r)
        return SolutionSpace(self.field, self.ncols, ech.kernel_basis(self.ncols))

    def main_space(self) -> SolutionSpace:
        """Solution space projected onto the non-auxiliary unknowns."""
        full = self.solve()
        if not self.n_aux:
            return full
        return full.project(range(self.n_aux, self.ncols))


def _coerce(F: Ring, c) -> object:
    """Map an integer or rational coefficient into the field F."""
    if isinstance(c, RingElem):
        c = c.value
    if isinstance(F, IntegersMod):
        num, den = getattr(c, "numerator", c), getattr(c, "denominator", 1)
        return F.mul(F.canon(int(num)), F.inv(F.canon(int(den))))
    return F.canon(c)


def _accumulate(eqs: dict, key, col: int, c, F: Ring) -> None:
    row = eqs.get(key)
    if row is None:
        row = eqs[key] = {}
    row[col] = F.add(row[col], c) if col in row else c


def _finish(eqs: dict, F: Ring) -> list[dict]:
    out = []
    for key in sorted(eqs):
        row = {c: v for c, v in eqs[key].items() if not F.is_zero(v)}
        if row:
            out.append(row)
    return out


# -- polynomial conditions -----------------------------------------------------------

def lie_fix_system(polys: Sequence[RingElem], field: Ring, mode: str = "fix",
                   variables: Sequence[str] | None = None) -> SolutionSpace:
    """Matrices z with sum_{a,b} z_{a,b} x_b d(phi)/dx_a = 0 for every phi (mode "fix"),
    or in the span of the phi of the same degree (mode "ideal").

    z acts on column vectors, x -> (e + z d) x; z_{a,b} has index a t + b.
    The transposed convention z_{a,b} x_a d/dx_b gives the transposed space.
    """
    require_field(field)
    if mode not in ("fix", "ideal"):
        raise ValueError(f"unknown mode {mode!r}")
    polys = list(polys)
    if variables is None:
        if not polys:
            raise ValueError("pass variables when the polynomial list is empty")
        variables = polys[0].ring.variables
    t = len(variables)
    for p in polys:
        if not isinstance(p.ring, PolynomialRing) or tuple(p.ring.variables) != tuple(variables):
            raise ValueError("all polynomials must live in one polynomial ring over the given variables")
    n_aux = len(polys) ** 2 if mode == "ideal" else 0
    eqs: dict = {}
    for h, p in enumerate(polys):
        for e, c in p.value:
            c = _coerce(field, c)
            for a, ea in enumerate(e):
                if not ea:
                    continue
                base = list(e)
                base[a] -= 1
                coeff = field.mul(c, field.canon(ea))
                if field.is_zero(coeff):
                    continue
                for b in range(t):
                    mono = list(base)
                    mono[b] += 1
                    _accumulate(eqs, (h, tuple(mono)), n_aux + a * t + b, coeff, field)
        if mode == "ideal":
            for h2, q in enumerate(polys):
                col = h * len(polys) + h2
                for e, c in q.value:
                    _accumulate(eqs, (h, e), col, field.neg(_coerce(field, c)), field)
    system = LieSystem(field, n_aux, t * t, _finish(eqs, field))
    return system.main_space()


# -- form conditions -----------------------------------------------------------------

def _form_equations(f: MultilinearForm, F: Ring, y_off: int, eqs: dict, tag=0) -> None:
    """y-part: sum_l f(x1, ..., y xl, ..., xk) on all basis tuples, keyed by (tag, tuple)."""
    N, k = f.N, f.k
    for K, c in f.coeffs.items():
        c = _coerce(F, c)
        for l in range(k):
            base = y_off + K[l] * N
            head, tail = K[:l], K[l + 1:]
            for J in range(N):
                _accumulate(eqs, (tag, head + (J,) + tail), base + J, c, F)


def _scalar_equations(f: MultilinearForm, F: Ring, col: int, eqs: dict, tag=0) -> None:
    for K, c in f.coeffs.items():
        _accumulate(eqs, (tag, K), col, F.neg(_coerce(F, c)), F)


def form_lie_system(n: int, m: int, field: Ring, extended: bool) -> LieSystem:
    require_field(field)
    if m <= 0 or n % m:
        raise ValueError(f"m = {m} does not divide n = {n}")
    if n // m < 3:
        raise ValueError(f"need n / m >= 3, got {n // m}")
    f = form_polarized(n, m)
    N = f.N
    n_aux = 1 if extended else 0
    eqs: dict = {}
    _form_equations(f, field, n_aux, eqs)
    if extended:
        _scalar_equations(f, field, 0, eqs)
    return LieSystem(field, n_aux, N * N, _finish(eqs, field), ["mu"] if extended else [])


def lie_dim_form_stabilizer(n: int, m: int, field: Ring, extended: bool = True) -> SolutionSpace:
    """Lie algebra of the semi-invariance group (extended) or of the invariance group (plain),
    as a space of y-matrices flattened to length N^2."""
    return form_lie_system(n, m, field, extended).main_space()


def ideal_lie_system(n: int, m: int, field: Ring) -> LieSystem:
    require_field(field)
    gens = ideal_F_generators(n, m)
    p = len(gens)
    N = gens[0].N
    # columns: mu_j (p of them), then c'_{j,l} for l != j, then y
    cross_cols = {}
    col = p
    for j in range(p):
        for l in range(p):
            if l != j:
                cross_cols[(j, l)] = col
                col += 1
    n_aux = col
    eqs: dict = {}
    for j, f in enumerate(gens):
        _form_equations(f, field, n_aux, eqs, tag=j)
        _scalar_equations(f, field, j, eqs, tag=j)
        for l, h in enumerate(gens):
            if l != j:
                _scalar_equations(h, field, cross_cols[(j, l)], eqs, tag=j)
    names = [f"mu_{j}" for j in range(p)] + [f"c_{j}_{l}" for (j, l) in cross_cols]
    return LieSystem(field, n_aux, N * N, _finish(eqs, field), names)


def lie_dim_ideal_stabilizer(n: int, m: int, field: Ring) -> SolutionSpace:
    return ideal_lie_system(n, m, field).main_space()


def collapsed_polynomial(f: MultilinearForm) -> RingElem:
    """q(x) = f(x, ..., x) as a polynomial in the x_I (zero when m is odd)."""
    names = tuple(s.var_name() for s in enumerate_subsets(f.n, f.m))
    P = PolynomialRing(f.ring, names)
    R = f.ring
    terms: dict = {}
    for K, c in f.coeffs.items():
        e = [0] * len(names)
        for a in K:
            e[a] += 1
        e = tuple(e)
        terms[e] = R.add(terms[e], c) if e in terms else c
    return RingElem(P, P._pack(terms))


# -- structural relations --------------------------------------------------------------

def _root_classes(n: int, m: int):
    """For each ordered pair (a, b): list of (row, col, sign) over L in (m-1)-subsets of [n] - {a, b}."""
    idx = subset_index(n, m)
    out = {}
    for a, b in itertools.permutations(range(1, n + 1), 2):
        rest = [t for t in range(1, n + 1) if t not in (a, b)]
        cls = []
        for L in itertools.combinations(rest, m - 1):
            s = sign_adjoin(L, a) * sign_adjoin(L, b)
            cls.append((idx[tuple(sorted(L + (a,)))], idx[tuple(sorted(L + (b,)))], s))
        out[(a, b)] = cls
    return out


def _diagonal_groups(n: int, m: int):
    subs = subset_tuples(n, m)
    groups = defaultdict(list)
    for i, I in enumerate(subs):
        for j, M in enumerate(subs):
            if i == j:
                continue
            diff = tuple((t in I) - (t in M) for t in range(1, n + 1))
            groups[diff].append((i, j))
    return [g for g in groups.values() if len(g) > 1]


def structural_relations_check(n: int, m: int, field: Ring, space: SolutionSpace | None = None,
                               extended: bool = True) -> dict:
    """Check the three relation families on every basis vector of the Lie space.

    - vanishing: y_{I,J} = 0 when d(I,J) <= m - 2;
    - roots: y_{aL,bL} sign(L,a) sign(L,b) does not depend on L;
    - diagonal: y_{I,I} - y_{M,M} depends only on the weight difference I - M.
    """
    if space is None:
        space = lie_dim_form_stabilizer(n, m, field, extended)
    F = space.field
    subs = enumerate_subsets(n, m)
    N = len(subs)
    far = [(i, j) for i in range(N) for j in range(N) if distance(subs[i], subs[j]) <= m - 2]
    roots = _root_classes(n, m)
    diag = _diagonal_groups(n, m)
    ok = {"vanishing": True, "roots": True, "diagonal": True}
    contributing = set()
    for v in space.basis:
        if any(not F.is_zero(v[i * N + j]) for i, j in far):
            ok["vanishing"] = False
        for ab, cls in roots.items():
            vals = [v[r * N + c] if s > 0 else F.neg(v[r * N + c]) for r, c, s in cls]
            if any(x != vals[0] for x in vals):
                ok["roots"] = False
            if not F.is_zero(vals[0]):
                contributing.add(ab)
        for grp in diag:
            vals = [F.sub(v[i * N + i], v[j * N + j]) for i, j in grp]
            if any(x != vals[0] for x in vals):
                ok["diagonal"] = False
    return {
        "n": n, "m": m, "field": F.token, "dimension": space.dimension,
        "checked": {
            "vanishing": len(far) * space.dimension,
            "roots": sum(len(c) - 1 for c in roots.values()) * space.dimension,
            "diagonal": sum(len(g) - 1 for g in diag) * space.dimension,
        },
        "root_classes": len(roots),
        "root_classes_contributing": len(contributing),
        "holds": ok,
        "pass": all(ok.values()),
    }


def diagonal_relation(n: int, m: int) -> list[tuple[tuple[int, ...], int]]:
    """Weights K_j with the coefficients of the diagonal relation for k = n / m.

    K_1, ..., K_{n-m+1} are {1, ..., m-1, p} for p = m, ..., n and the last m - 1
    are {1, ..., m+1} - {m - s} for s = 1, ..., m - 1.  Coefficients:
    m(k-1) - k, (m-1)(k-1) - 1, then -1, and -(k-1) on the last m - 1.
    Repeated weights have their coefficients merged.
    """
    if n % m:
        raise ValueError(f"m = {m} does not divide n = {n}")
    k = n // m
    head = tuple(range(1, m))
    weights = [head + (p,) for p in range(m, n + 1)]
    coeffs = [m * (k - 1) - k, (m - 1) * (k - 1) - 1] + [-1] * (len(weights) - 2)
    for s in range(1, m):
        weights.append(tuple(x for x in range(1, m + 2) if x != m - s))
        coeffs.append(-(k - 1))
    merged: dict = {}
    for K, c in zip(weights, coeffs):
        merged[K] = merged.get(K, 0) + c
    return [(K, c) for K, c in merged.items() if c]


def verify_diagonal_relation(n: int, m: int, field: Ring, space: SolutionSpace | None = None) -> bool:
    """The diagonal relation vanishes on every basis vector of Lie(G_f) (plain mode)."""
    if space is None:
        space = lie_dim_form_stabilizer(n, m, field, extended=False)
    F = space.field
    idx = subset_index(n, m)
    N = len(idx)
    terms = [(idx[K] * N + idx[K], F.canon(c)) for K, c in diagonal_relation(n, m)]
    for v in space.basis:
        acc = F.zero()
        for pos, c in terms:
            acc = F.add(acc, F.mul(c, v[pos]))
        if not F.is_zero(acc):
            return False
    return True


# -- reports ----------------------------------------------------------------------------

BOUNDS = {"extended": lambda n: n * n, "plain": lambda n: n * n - 1,
          "ideal": lambda n: n * n, "plucker": lambda n: n * n}


def lie_report(n: int, m: int, field: Ring, mode: str) -> dict:
    """Dimension of the Lie algebra for one of the modes plain, extended, ideal, plucker."""
    if mode not in BOUNDS:
        raise ValueError(f"unknown mode {mode!r}")
    require_field(field)
    relations: dict = {}
    if mode in ("plain", "extended"):
        space = lie_dim_form_stabilizer(n, m, field, extended=(mode == "extended"))
        rep = structural_relations_check(n, m, field, space)
        relations = dict(rep["checked"])
        relations["families_hold"] = rep["pass"]
        relations["root_classes_contributing"] = rep["root_classes_contributing"]
        if mode == "plain":
            relations["diagonal_relation"] = verify_diagonal_relation(n, m, field, space)
    elif mode == "ideal":
        space = lie_dim_ideal_stabilizer(n, m, field)
    else:
        ps = plucker_set(n, m)
        names = [s.var_name() for s in enumerate_subsets(n, m)]
        space = lie_fix_system(ps.polys, field, mode="ideal", variables=names)
    bound = BOUNDS[mode](n)
    ok = space.dimension <= bound and all(v for v in relations.values() if isinstance(v, bool))
    return {
        "n": n, "m": m, "field": field.token, "mode": mode,
        "dimension": space.dimension, "bound": bound,
        "relations_checked": relations, "pass": ok,
    }
