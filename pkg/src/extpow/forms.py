"""Plücker relations, the polarized forms f^m_V and their stabilizers.

A k-linear form on R^N is kept as a sparse map from k-tuples of subset
indices to coefficients.  ``act_on_form(g, f)`` is the form
``(x1, ..., xk) -> f(g x1, ..., g xk)``, so ``act(g @ h, f) == act(h, act(g, f))``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _fast
from .combinat import (
    Subset,
    enumerate_subsets,
    partitions,
    sign_sequence,
    subset_index,
    subset_tuples,
)
from .extrep import RepMatrix, exterior_transvection
from .linalg import RowEchelon, SolutionSpace, det
from .rings import (
    Integers,
    IntegersMod,
    PolynomialRing,
    Rationals,
    Ring,
    RingElem,
    RingError,
    UnsupportedRingError,
    parse_ring,
    require_field,
)

# dense tensors above this many entries go through the sparse route
DENSE_LIMIT = 3_000_000


# -- Plücker relations ---------------------------------------------------------

def _tuple(S) -> tuple[int, ...]:
    return tuple(S.elems) if isinstance(S, Subset) else tuple(S)


def plucker_quadric(I, J, n: int) -> dict[tuple[int, int], int]:
    """f_{I,J} as ``{(a, b): coeff}`` over subset indices a <= b."""
    I, J = _tuple(I), _tuple(J)
    m = len(I) + 1
    if len(J) != m + 1:
        raise ValueError(f"|J| must be |I| + 2, got |I|={len(I)}, |J|={len(J)}")
    idx = subset_index(n, m)
    out: dict[tuple[int, int], int] = {}
    for h, j in enumerate(J, start=1):
        seq = I + (j,)
        s = sign_sequence(seq)
        if s == 0:
            continue
        rest = J[:h - 1] + J[h:]
        a, b = idx[tuple(sorted(seq))], idx[rest]
        key = (min(a, b), max(a, b))
        c = s if h % 2 == 0 else -s
        out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def variable_names(n: int, m: int) -> list[str]:
    return [s.var_name() for s in enumerate_subsets(n, m)]


def quadric_to_poly(q: Mapping[tuple[int, int], object], n: int, m: int, ring: Ring | None = None) -> RingElem:
    base = ring or Integers()
    P = PolynomialRing(base, tuple(variable_names(n, m)))
    N = P.nvars
    terms = {}
    for (a, b), c in q.items():
        e = [0] * N
        e[a] += 1
        e[b] += 1
        terms[tuple(e)] = base.canon(c)
    return RingElem(P, P._pack(terms))


def poly_to_quadric(p: RingElem) -> dict[tuple[int, int], object]:
    out = {}
    for e, c in p.value:
        idx = [i for i, x in enumerate(e) for _ in range(x)]
        if len(idx) != 2:
            raise ValueError("polynomial is not a homogeneous quadric")
        out[(idx[0], idx[1])] = c
    return out


def plucker_poly(I, J, n: int | None = None, ring: Ring | None = None) -> RingElem:
    """f_{I,J} = sum_h (-1)^h x_{I j_h} x_{J - j_h}, with sign-extended coordinates."""
    if n is None:
        if isinstance(J, Subset):
            n = J.n
        else:
            raise ValueError("pass n when I, J are plain tuples")
    if isinstance(I, Subset) and isinstance(J, Subset) and I.n != J.n:
        raise ValueError("I and J live in different [n]")
    m = len(_tuple(I)) + 1
    return quadric_to_poly(plucker_quadric(I, J, n), n, m, ring)


def _normalize(q: dict) -> tuple | None:
    if not q:
        return None
    g = 0
    for v in q.values():
        g = gcd(g, v)
    lead = q[min(q)]
    if lead < 0:
        g = -g
    return tuple(sorted((k, v // g) for k, v in q.items()))


@dataclass(frozen=True)
class PluckerSet:
    """Normalized, duplicate-free quadratic Plücker relations over Z."""

    n: int
    m: int
    quadrics: tuple[tuple[tuple[tuple[int, int], int], ...], ...]

    def __len__(self):
        return len(self.quadrics)

    @property
    def polys(self) -> list[RingElem]:
        return [quadric_to_poly(dict(q), self.n, self.m) for q in self.quadrics]

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "ring": "Z", "polys": [str(p) for p in self.polys]}


def plucker_set(n: int, m: int) -> PluckerSet:
    if not (1 <= m <= n - 1):
        raise ValueError(f"need 1 <= m <= n - 1, got n={n}, m={m}")
    seen: set = set()
    out = []
    for I in subset_tuples(n, m - 1):
        for J in subset_tuples(n, m + 1):
            q = _normalize(plucker_quadric(I, J, n))
            if q is not None and q not in seen:
                seen.add(q)
                out.append(q)
    out.sort()
    return PluckerSet(n, m, tuple(out))


def _coefficient_rows(polys) -> list[dict]:
    if isinstance(polys, PluckerSet):
        N = len(subset_tuples(polys.n, polys.m))
        return [{a * N + b: c for (a, b), c in q} for q in polys.quadrics]
    rows = []
    for p in polys:
        if isinstance(p, MultilinearForm):
            rows.append({p.flat_index(K): RingElem(p.ring, v) for K, v in p.coeffs.items()})
        elif isinstance(p, RingElem):
            rows.append({e: RingElem(p.ring.base, c) for e, c in p.value})
        else:
            rows.append(dict(p))
    return rows


def independent_mod_p(polys, p: int) -> bool:
    """True iff the coefficient vectors are linearly independent over F_p."""
    F = IntegersMod(p)
    if not F.is_field:
        raise ValueError(f"{p} is not prime")
    rows = _coefficient_rows(polys)
    ech = RowEchelon(F)
    for r in rows:
        row = {}
        for c, v in r.items():
            v = _mod_p(v, F)
            if v:
                row[c] = v
        if not ech.add(row):
            return False
    return True


def _mod_p(v, F: IntegersMod) -> int:
    if isinstance(v, RingElem):
        v = v.value
    if isinstance(v, tuple):
        raise RingError("coefficients must be integers or rationals")
    num, den = getattr(v, "numerator", v), getattr(v, "denominator", 1)
    if den % F.modulus == 0:
        raise RingError(f"coefficient {v} has no image mod {F.modulus}")
    return F.mul(F.canon(int(num)), F.inv(F.canon(int(den))))


def _scaled(F: np.ndarray, c: int) -> np.ndarray:
    if F.dtype != object and abs(c) < 2 ** 40:
        return F * c
    return F.astype(object) * c


def _subst_quadric(q, rows: Mapping[int, list], R: Ring) -> dict:
    out: dict = {}
    add, mul = R.add, R.mul
    for (a, b), c in q:
        c = R.canon(c)
        for p, u in rows.get(a, ()):
            cu = mul(c, u)
            for r, w in rows.get(b, ()):
                key = (p, r) if p <= r else (r, p)
                v = mul(cu, w)
                out[key] = add(out[key], v) if key in out else v
    return {k: v for k, v in out.items() if not R.is_zero(v)}


def _solve_ring(R: Ring) -> Ring:
    if isinstance(R, Integers):
        return Rationals()
    if R.is_field or isinstance(R, IntegersMod):
        return R
    raise UnsupportedRingError(f"span membership over {R.token} is not offered")


def stabilizes_plucker(g: RepMatrix, pset: PluckerSet | None = None) -> bool:
    """True iff every substituted relation f_{I,J}(g x) is in the span of the relations.

    Over Z the witness is found over Q and must be integral; over Z/k with k
    composite a non-unit pivot raises :class:`IndeterminateError`.
    """
    if pset is None:
        pset = plucker_set(g.n, g.m)
    R = g.ring
    S = _solve_ring(R)
    N = g.N
    ncols = N * N
    rows: dict[int, list] = {}
    for r, c, v in g.triplets():
        rows.setdefault(r, []).append((c, v))
    ech = RowEchelon(S)
    # tag columns after the monomial columns track the combination used
    for h, q in enumerate(pset.quadrics):
        row = {a * N + b: S.canon(c) for (a, b), c in q}
        row[ncols + h] = S.one()
        ech.add(row)
    for q in pset.quadrics:
        img = _subst_quadric(q, rows, R)
        target = {a * N + b: S.canon(RingElem(R, v)) if S != R else v for (a, b), v in img.items()}
        rest = ech.reduce(target)
        if any(c < ncols for c in rest):
            return False
        if isinstance(R, Integers) and any(v.denominator != 1 for v in rest.values()):
            return False
    return True


# -- multilinear forms ---------------------------------------------------------------

class MultilinearForm:
    """k-linear form on R^N, N = C(n, m): ``coeffs[(a1, ..., ak)]`` multiplies x1_{a1} ... xk_{ak}.

    Keys are tuples of subset indices in lexicographic order.
    """

    __slots__ = ("ring", "n", "m", "k", "coeffs", "V", "_tensor")

    def __init__(self, ring: Ring, n: int, m: int, k: int, coeffs: Mapping[tuple, object], V: Sequence[int] | None = None):
        self.ring, self.n, self.m, self.k = ring, n, m, k
        N = len(subset_tuples(n, m))
        clean = {}
        for K, v in coeffs.items():
            K = tuple(K)
            if len(K) != k or not all(0 <= a < N for a in K):
                raise ValueError(f"bad key {K} for a {k}-linear form on R^{N}")
            if not ring.is_zero(v):
                clean[K] = v
        self.coeffs = clean
        self.V = tuple(V) if V is not None else None
        self._tensor = None

    @property
    def N(self) -> int:
        return len(subset_tuples(self.n, self.m))

    @property
    def nnz(self) -> int:
        return len(self.coeffs)

    def flat_index(self, K: Sequence[int]) -> int:
        out = 0
        for a in K:
            out = out * self.N + a
        return out

    def coefficient(self, blocks) -> RingElem:
        idx = subset_index(self.n, self.m)
        K = tuple(b if isinstance(b, int) else idx[Subset.parse(b, self.n).elems if isinstance(b, str) else _tuple(b)]
                  for b in blocks)
        return RingElem(self.ring, self.coeffs.get(K, self.ring.zero()))

    def __eq__(self, other):
        if not isinstance(other, MultilinearForm):
            return NotImplemented
        return (self.ring, self.n, self.m, self.k, self.coeffs) == (other.ring, other.n, other.m, other.k, other.coeffs)

    def __hash__(self):
        return hash((self.ring, self.n, self.m, self.k, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"MultilinearForm({self.ring.token}, n={self.n}, m={self.m}, k={self.k}, nnz={self.nnz})"

    def scale(self, c) -> "MultilinearForm":
        R = self.ring
        c = R.canon(c)
        return MultilinearForm(R, self.n, self.m, self.k, {K: R.mul(c, v) for K, v in self.coeffs.items()}, self.V)

    def change_ring(self, ring: Ring) -> "MultilinearForm":
        if ring == self.ring:
            return self
        src = self.ring
        return MultilinearForm(ring, self.n, self.m, self.k,
                               {K: ring.canon(RingElem(src, v)) for K, v in self.coeffs.items()}, self.V)

    def tensor(self) -> tuple[np.ndarray, int]:
        """Dense integer tensor and denominator (numeric rings only)."""
        if self._tensor is None:
            R = self.ring
            if not _fast.is_numeric(R):
                raise RingError(f"no dense tensor over {R.token}")
            D = 1
            if isinstance(R, Rationals):
                for v in self.coeffs.values():
                    D = D * v.denominator // gcd(D, v.denominator)
            T = np.zeros((self.N,) * self.k, dtype=np.int64)
            for K, v in self.coeffs.items():
                T[K] = int(v * D)
            self._tensor = (T, D)
        return self._tensor

    def to_json(self) -> dict:
        subs = [str(s) for s in enumerate_subsets(self.n, self.m)]
        fmt = self.ring.fmt
        return {
            "ring": self.ring.token, "n": self.n, "m": self.m, "k": self.k,
            "V": list(self.V) if self.V is not None else None,
            "coeffs": [{"blocks": [subs[a] for a in K], "value": fmt(v)} for K, v in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, doc) -> "MultilinearForm":
        if isinstance(doc, str):
            doc = json.loads(doc)
        ring = parse_ring(doc["ring"])
        n, m, k = int(doc["n"]), int(doc["m"]), int(doc["k"])
        idx = subset_index(n, m)
        coeffs = {}
        for item in doc["coeffs"]:
            K = tuple(idx[Subset.parse(b, n).elems] for b in item["blocks"])
            coeffs[K] = ring.parse_payload(item["value"])
        return cls(ring, n, m, k, coeffs, doc.get("V"))


def form_polarized(V, m: int, ring: Ring | None = None, n: int | None = None) -> MultilinearForm:
    """f^m_V: sum over ordered partitions (I1, ..., Ik) of V of sign(I1 ... Ik) x1_{I1} ... xk_{Ik}."""
    ring = ring or Integers()
    if isinstance(V, int):
        n = V if n is None else n
        V = tuple(range(1, V + 1))
    elif isinstance(V, Subset):
        n = V.n if n is None else n
        V = V.elems
    else:
        V = tuple(sorted(V))
        if n is None:
            raise ValueError("pass n together with an explicit V")
    if m <= 0 or len(V) % m:
        raise ValueError(f"|V| = {len(V)} is not divisible by m = {m}")
    if V and (V[0] < 1 or V[-1] > n):
        raise ValueError("V must lie inside [n]")
    idx = subset_index(n, m)
    one, mone = ring.one(), ring.neg(ring.one())
    coeffs = {}
    for P in partitions(V, m, ordered=True):
        coeffs[tuple(idx[b] for b in P.blocks)] = one if P.sign() > 0 else mone
    return MultilinearForm(ring, n, m, len(V) // m, coeffs, V)


def evaluate_form(f: MultilinearForm, vectors: Sequence[Sequence]) -> RingElem:
    R = f.ring
    if len(vectors) != f.k:
        raise ValueError(f"expected {f.k} vectors, got {len(vectors)}")
    xs = []
    for v in vectors:
        if len(v) != f.N:
            raise ValueError(f"vector length {len(v)} does not match N = {f.N}")
        xs.append([R.canon(x) for x in v])
    acc = R.zero()
    for K, c in f.coeffs.items():
        term = c
        for l, a in enumerate(K):
            x = xs[l][a]
            if R.is_zero(x):
                term = None
                break
            term = R.mul(term, x)
        if term is not None:
            acc = R.add(acc, term)
    return RingElem(R, acc)


def _sparse_rows(g: RepMatrix) -> dict[int, list]:
    rows: dict[int, list] = {}
    for r, c, v in g.triplets():
        rows.setdefault(r, []).append((c, v))
    return rows


def _act_sparse(rows: Mapping[int, list], coeffs: Mapping[tuple, object], k: int, R: Ring,
                slots: Iterable[int] | None = None) -> dict:
    cur = dict(coeffs)
    add, mul, is_zero = R.add, R.mul, R.is_zero
    for l in (range(k) if slots is None else slots):
        nxt: dict = {}
        for K, v in cur.items():
            for c, w in rows.get(K[l], ()):
                key = K[:l] + (c,) + K[l + 1:]
                p = mul(v, w)
                nxt[key] = add(nxt[key], p) if key in nxt else p
        cur = {K: v for K, v in nxt.items() if not is_zero(v)}
    return cur


def _use_dense(f: MultilinearForm, g: RepMatrix) -> bool:
    return _fast.is_numeric(g.ring) and f.N ** f.k <= DENSE_LIMIT and g.nnz > 2 * g.N


def _act_tensor(g: RepMatrix, f: MultilinearForm) -> tuple[np.ndarray, int]:
    F, Df = f.tensor()
    G, Dg = _fast.int_matrix(g.dense(), g.ring)
    T = _fast.contract(F, [G] * f.k, _fast.modulus_of(g.ring))
    return T, Df * Dg ** f.k


def _tensor_to_coeffs(T: np.ndarray, denom: int, R: Ring) -> dict:
    out = {}
    nz = np.nonzero(T)
    vals = T[nz]
    for key, v in zip(zip(*(a.tolist() for a in nz)), vals.tolist()):
        out[key] = R.canon(v) if denom == 1 else R.canon(_frac(v, denom))
    return out


def _frac(a, b):
    from fractions import Fraction
    return Fraction(int(a), int(b))


def _check_dims(g: RepMatrix, f: MultilinearForm) -> MultilinearForm:
    if (g.n, g.m) != (f.n, f.m):
        raise ValueError(f"matrix for (n, m) = ({g.n}, {g.m}) acting on a form for ({f.n}, {f.m})")
    return f.change_ring(g.ring)


def act_on_form(g: RepMatrix, f: MultilinearForm) -> MultilinearForm:
    """The form (x1, ..., xk) -> f(g x1, ..., g xk)."""
    f = _check_dims(g, f)
    R = g.ring
    if _use_dense(f, g):
        T, D = _act_tensor(g, f)
        coeffs = _tensor_to_coeffs(T, D, R)
    else:
        coeffs = _act_sparse(_sparse_rows(g), f.coeffs, f.k, R)
    return MultilinearForm(R, f.n, f.m, f.k, coeffs, f.V)


def _unit_key(f: MultilinearForm):
    for K, v in sorted(f.coeffs.items()):
        if f.ring.is_unit(v):
            return K
    return None


def semi_invariance_scalar(g: RepMatrix, f: MultilinearForm) -> RingElem | None:
    """lambda with act_on_form(g, f) == lambda * f and lambda a unit, else None."""
    return semi_invariance_detail(g, f)[0]


def semi_invariance_detail(g: RepMatrix, f: MultilinearForm) -> tuple[RingElem | None, dict | None]:
    """(lambda, None) on success, otherwise (None, failing datum).

    The failing datum names a coefficient key where act_on_form(g, f) is not
    lambda * f, or reports a non-unit lambda.
    """
    f = _check_dims(g, f)
    R = g.ring
    K0 = _unit_key(f)
    if K0 is None:
        raise ValueError("the form has no unit coefficient")
    f0 = f.coeffs[K0]
    subs = [str(s) for s in enumerate_subsets(f.n, f.m)]
    label = lambda K: [subs[a] for a in K]
    if _use_dense(f, g):
        T, D = _act_tensor(g, f)
        F, Df = f.tensor()
        t0, s0 = int(T[K0]), int(F[K0])
        # T / D == lam * F / Df  <=>  s0 * T == t0 * F  (s0 is a unit)
        k = _fast.modulus_of(R)
        diff = _scaled(T, s0) - _scaled(F, t0)
        if k is not None:
            diff = diff % k
        bad = np.argwhere(diff != 0)
        if len(bad):
            K = tuple(int(a) for a in bad[0])
            val = R.canon(int(T[K])) if D == 1 or k is not None else R.canon(_frac(int(T[K]), D))
            return None, {"reason": "not proportional", "probe": label(K0), "key": label(K),
                          "value": R.fmt(val), "form_value": R.fmt(f.coeffs.get(K, R.zero()))}
        if k is not None:
            lam = R.mul(R.canon(t0), R.inv(R.canon(s0)))
        else:
            lam = R.canon(_frac(t0 * Df, s0 * D))
    else:
        act = _act_sparse(_sparse_rows(g), f.coeffs, f.k, R)
        lam = R.mul(act.get(K0, R.zero()), R.inv(f0))
        for K in sorted(set(act) | set(f.coeffs)):
            want = R.mul(lam, f.coeffs.get(K, R.zero()))
            got = act.get(K, R.zero())
            if got != want:
                return None, {"reason": "not proportional", "probe": label(K0), "key": label(K),
                              "value": R.fmt(got), "form_value": R.fmt(f.coeffs.get(K, R.zero()))}
    if not R.is_unit(lam):
        return None, {"reason": "scalar is not a unit", "lambda": R.fmt(lam)}
    return RingElem(R, lam), None


def semi_invariant_space(n: int, m: int, field: Ring) -> SolutionSpace:
    """Forms of grading (1, ..., 1) invariant under every exterior transvection t_{i,j}(1).

    Unknowns are all N^k coefficients (N = C(n, m), k = n / m), flattened in
    lexicographic order of the k-tuples.  A unipotent generator can only
    carry the scalar 1 (its determinant), so semi-invariance under the
    generators is invariance.
    """
    require_field(field)
    if n % m:
        raise ValueError(f"m = {m} does not divide n = {n}")
    k = n // m
    N = len(subset_tuples(n, m))
    one = field.one()
    ncols = N ** k
    ech = RowEchelon(field)
    pw = [N ** (k - 1 - l) for l in range(k)]
    for i, j in itertools.permutations(range(1, n + 1), 2):
        t = exterior_transvection(n, m, i, j, one, field)
        off: dict[int, tuple[int, object]] = {}
        for r, c, v in t.triplets():
            if r != c:
                off[r] = (c, v)
        # equation at tuple J: sum_K a_K prod_l t[K_l][J_l] - a_J = 0
        eqs: dict[int, dict] = {}
        for K in itertools.product(range(N), repeat=k):
            moves = [l for l in range(k) if K[l] in off]
            if not moves:
                continue
            kf = sum(a * p for a, p in zip(K, pw))
            for r in range(1, len(moves) + 1):
                for S in itertools.combinations(moves, r):
                    J = kf
                    coeff = one
                    for l in S:
                        c, v = off[K[l]]
                        J += (c - K[l]) * pw[l]
                        coeff = field.mul(coeff, v)
                    row = eqs.setdefault(J, {})
                    row[kf] = field.add(row[kf], coeff) if kf in row else coeff
        for J in sorted(eqs):
            ech.add({c: v for c, v in eqs[J].items() if not field.is_zero(v)})
    return SolutionSpace(field, ncols, ech.kernel_basis(ncols))


def form_vector(f: MultilinearForm, ring: Ring | None = None) -> list:
    """Coefficients of f as a flat vector of length N^k."""
    R = ring or f.ring
    f = f.change_ring(R)
    vec = [R.zero()] * (f.N ** f.k)
    for K, v in f.coeffs.items():
        vec[f.flat_index(K)] = v
    return vec


# -- the ideal F -----------------------------------------------------------------

def ideal_F_generators(n: int, m: int, ring: Ring | None = None) -> list[MultilinearForm]:
    """f_V for every (l m)-subset V of [n], l = floor(n / m); needs m not dividing n."""
    if m <= 0 or n % m == 0:
        raise ValueError(f"m = {m} divides n = {n}; use form_polarized on [n]")
    l = n // m
    if l < 2:
        raise ValueError(f"need floor(n / m) >= 2, got {l}")
    return [form_polarized(V, m, ring, n) for V in itertools.combinations(range(1, n + 1), l * m)]


@dataclass
class IdealStabWitness:
    """act(g, f_{V_j}) = lambda_j f_{V_j} + sum_{l != j} c(V_j, V_l) f_{V_l}."""

    ring: Ring
    lambdas: dict[tuple, RingElem] = field(default_factory=dict)
    cross: dict[tuple[tuple, tuple], RingElem] = field(default_factory=dict)

    def all_units(self) -> bool:
        return all(l.is_unit() for l in self.lambdas.values())

    def matrix(self) -> list[list]:
        """Coefficient matrix C with act(g, f_{V_j}) = sum_l C[j][l] f_{V_l}."""
        Vs = list(self.lambdas)
        return [[self.lambdas[a].value if a == b else self.cross[(a, b)].value for b in Vs] for a in Vs]

    def is_invertible(self) -> bool:
        return self.ring.is_unit(det(self.matrix(), self.ring))

    def to_json(self) -> dict:
        lab = lambda V: "".join(map(str, V)) if max(V, default=0) <= 9 else ",".join(map(str, V))
        return {
            "ring": self.ring.token,
            "lambdas": {lab(V): str(v) for V, v in self.lambdas.items()},
            "cross": [[lab(a), lab(b), str(v)] for (a, b), v in self.cross.items() if not v.is_zero()],
        }


def stabilizes_ideal_F(g: RepMatrix, gens: Sequence[MultilinearForm] | None = None,
                       require_unit_lambdas: bool = False) -> IdealStabWitness | None:
    """Witness that g stabilizes F, or None.

    g stabilizes F when every act(g, f_{V_j}) lies in the span of the
    generators and the coefficient matrix C is invertible.  With
    ``require_unit_lambdas`` the diagonal entries lambda_j = C[j][j] must
    also be units.  That stricter condition fails for most of the image of
    GL_n: for n = l m + 1, lambda_V = +-det(h) (h^-1)_{c,c} with c the index
    missing from V, which vanishes e.g. for permutation matrices.

    The generators have pairwise disjoint supports and +-1 coefficients, so
    the only candidate for c(V_j, V_l) is read off one coefficient of f_{V_l};
    the candidate is then verified on every coefficient.  No division is
    needed, so this works over any ring.
    """
    if gens is None:
        gens = ideal_F_generators(g.n, g.m, g.ring)
    R = g.ring
    gens = [_check_dims(g, f) for f in gens]
    probes = []
    for f in gens:
        K0 = _unit_key(f)
        if K0 is None or not R.is_one(R.mul(f.coeffs[K0], f.coeffs[K0])):
            raise ValueError("generators must have +-1 coefficients")
        probes.append((K0, f.coeffs[K0]))
    dense = _use_dense(gens[0], g) and all(f.tensor()[1] == 1 for f in gens)
    if dense:
        G, Dg = _fast.int_matrix(g.dense(), R)
        k = _fast.modulus_of(R)
        tensors = [f.tensor()[0] for f in gens]
    else:
        rows = _sparse_rows(g)
    witness = IdealStabWitness(R)
    for j, f in enumerate(gens):
        if dense:
            T = _fast.contract(tensors[j], [G] * f.k, k)
            denom = Dg ** f.k
            cs = [int(T[K0]) * int(s) for K0, s in probes]
            if k is not None:
                cs = [c % k for c in cs]
            diff = T
            for F, c in zip(tensors, cs):
                if c:
                    diff = diff - _scaled(F, c)
            if k is not None:
                diff = diff % k
            if np.any(diff != 0):
                return None
            coeffs = [R.canon(c) if denom == 1 else R.canon(_frac(c, denom)) for c in cs]
        else:
            act = _act_sparse(rows, f.coeffs, f.k, R)
            coeffs = [R.mul(act.get(K0, R.zero()), s) for K0, s in probes]
            expect: dict = {}
            for c, h in zip(coeffs, gens):
                if R.is_zero(c):
                    continue
                for K, v in h.coeffs.items():
                    expect[K] = R.mul(c, v)
            if act != expect:
                return None
        for l, c in enumerate(coeffs):
            if l == j:
                witness.lambdas[gens[j].V] = RingElem(R, c)
            else:
                witness.cross[(gens[j].V, gens[l].V)] = RingElem(R, c)
    if not witness.is_invertible():
        return None
    if require_unit_lambdas and not witness.all_units():
        return None
    return witness
