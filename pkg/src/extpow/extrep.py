"""Exterior powers of matrices.

``cauchy_binet(g, m)`` is the matrix of m x m minors of g, rows and columns
indexed by the m-subsets of [n] in lexicographic order.  Exterior
transvections and torus elements also have closed forms which are built
directly and cross-checked against the minors.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _fast
from .combinat import Subset, enumerate_subsets, sign_adjoin, subset_index, subset_tuples
from .linalg import charpoly, det, inverse, matmul, rank
from .rings import (
    Integers,
    NotInvertibleError,
    Rationals,
    Ring,
    RingElem,
    RingError,
    parse_ring,
    require_field,
)


def _payload(ring: Ring, x):
    if isinstance(x, RingElem):
        return ring.canon(x)
    return ring.canon(x)


class RepMatrix:
    """N x N matrix over a ring, indexed by the m-subsets of [n] (N = C(n, m)).

    Stored sparsely as ``{(row, col): payload}`` of nonzero entries; dense
    rows are produced on demand.  Instances are treated as immutable.
    """

    __slots__ = ("ring", "n", "m", "N", "_entries", "_dense")

    def __init__(self, ring: Ring, n: int, m: int, entries: Mapping[tuple[int, int], object] | None = None):
        self.ring = ring
        self.n, self.m = n, m
        self.N = len(subset_tuples(n, m))
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < self.N and 0 <= c < self.N):
                raise IndexError(f"entry ({r}, {c}) outside a {self.N} x {self.N} matrix")
            if not ring.is_zero(v):
                clean[(r, c)] = v
        self._entries = clean
        self._dense = None

    # -- construction ---------------------------------------------------------
    @classmethod
    def from_dense(cls, ring: Ring, n: int, m: int, rows: Sequence[Sequence]) -> "RepMatrix":
        N = len(subset_tuples(n, m))
        if len(rows) != N or any(len(r) != N for r in rows):
            raise ValueError(f"expected a {N} x {N} matrix for n={n}, m={m}")
        entries = {}
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = _payload(ring, v)
                if not ring.is_zero(v):
                    entries[(i, j)] = v
        return cls(ring, n, m, entries)

    @classmethod
    def identity(cls, ring: Ring, n: int, m: int) -> "RepMatrix":
        N = len(subset_tuples(n, m))
        one = ring.one()
        return cls(ring, n, m, {(i, i): one for i in range(N)})

    # -- access ---------------------------------------------------------------
    def subsets(self) -> list[Subset]:
        return enumerate_subsets(self.n, self.m)

    def variable_names(self) -> list[str]:
        return [s.var_name() for s in self.subsets()]

    def index(self, key) -> int:
        if isinstance(key, int):
            return key
        if isinstance(key, str):
            key = Subset.parse(key, self.n)
        return subset_index(self.n, self.m)[tuple(key)]

    def entry(self, r: int, c: int):
        return self._entries.get((r, c), self.ring.zero())

    def __getitem__(self, rc) -> RingElem:
        r, c = rc
        return RingElem(self.ring, self.entry(self.index(r), self.index(c)))

    def triplets(self) -> list[tuple[int, int, object]]:
        return [(r, c, v) for (r, c), v in sorted(self._entries.items())]

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def dense(self) -> list[list]:
        if self._dense is None:
            z = self.ring.zero()
            rows = [[z] * self.N for _ in range(self.N)]
            for (r, c), v in self._entries.items():
                rows[r][c] = v
            self._dense = rows
        return [list(r) for r in self._dense]

    def __eq__(self, other):
        if not isinstance(other, RepMatrix):
            return NotImplemented
        return (self.ring, self.n, self.m, self._entries) == (other.ring, other.n, other.m, other._entries)

    def __hash__(self):
        return hash((self.ring, self.n, self.m, frozenset(self._entries.items())))

    def __repr__(self):
        return f"RepMatrix({self.ring.token}, n={self.n}, m={self.m}, nnz={self.nnz})"

    # -- arithmetic -----------------------------------------------------------
    def _check_same(self, other: "RepMatrix"):
        if (self.ring, self.n, self.m) != (other.ring, other.n, other.m):
            raise ValueError("matrices live over different rings or index sets")

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        self._check_same(other)
        R = self.ring
        if _fast.is_numeric(R) and self.nnz > 4 * self.N and other.nnz > 4 * self.N:
            A, da = _fast.int_matrix(self.dense(), R)
            B, db = _fast.int_matrix(other.dense(), R)
            C = _fast.contract(A, [None, B], _fast.modulus_of(R))
            return RepMatrix.from_dense(R, self.n, self.m, _fast.to_payloads(C, R, da * db))
        by_row: dict[int, list] = {}
        for (r, c), v in other._entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict = {}
        add, mul = R.add, R.mul
        for (r, k), a in self._entries.items():
            for c, b in by_row.get(k, ()):
                key = (r, c)
                p = mul(a, b)
                acc[key] = add(acc[key], p) if key in acc else p
        return RepMatrix(R, self.n, self.m, acc)

    def __add__(self, other: "RepMatrix") -> "RepMatrix":
        self._check_same(other)
        acc = dict(self._entries)
        for k, v in other._entries.items():
            acc[k] = self.ring.add(acc[k], v) if k in acc else v
        return RepMatrix(self.ring, self.n, self.m, acc)

    def __sub__(self, other: "RepMatrix") -> "RepMatrix":
        return self + other.scale(self.ring.neg(self.ring.one()))

    def scale(self, c) -> "RepMatrix":
        c = _payload(self.ring, c)
        return RepMatrix(self.ring, self.n, self.m, {k: self.ring.mul(c, v) for k, v in self._entries.items()})

    def change_ring(self, ring: Ring) -> "RepMatrix":
        src = self.ring
        return RepMatrix(ring, self.n, self.m,
                         {k: ring.canon(RingElem(src, v)) for k, v in self._entries.items()})

    def det(self) -> RingElem:
        return RingElem(self.ring, det(self.dense(), self.ring))

    def is_invertible(self) -> bool:
        return self.ring.is_unit(self.det().value)

    def inverse(self) -> "RepMatrix":
        return RepMatrix.from_dense(self.ring, self.n, self.m, inverse(self.dense(), self.ring))

    # -- serialization --------------------------------------------------------
    def to_json(self, storage: str = "sparse") -> dict:
        fmt = self.ring.fmt
        labels = [str(s) for s in self.subsets()]
        doc = {"ring": self.ring.token, "n": self.n, "m": self.m, "index_order": "lex", "storage": storage}
        if storage == "sparse":
            doc["entries"] = [[labels[r], labels[c], fmt(v)] for r, c, v in self.triplets()]
        elif storage == "dense":
            doc["entries"] = [[fmt(v) for v in row] for row in self.dense()]
        else:
            raise ValueError(f"unknown storage {storage!r}")
        return doc

    @classmethod
    def from_json(cls, doc: Mapping | str) -> "RepMatrix":
        if isinstance(doc, str):
            doc = json.loads(doc)
        if doc.get("index_order", "lex") != "lex":
            raise ValueError("only lexicographic index order is supported")
        ring = parse_ring(doc["ring"])
        n, m = int(doc["n"]), int(doc["m"])
        if doc.get("storage", "sparse") == "dense":
            return cls.from_dense(ring, n, m, [[ring.parse_payload(x) for x in row] for row in doc["entries"]])
        idx = subset_index(n, m)
        entries = {}
        for r, c, v in doc["entries"]:
            ri = idx[Subset.parse(r, n).elems]
            ci = idx[Subset.parse(c, n).elems]
            entries[(ri, ci)] = ring.parse_payload(v)
        return cls(ring, n, m, entries)


# -- GL_n helpers -----------------------------------------------------------------

def _square(g: Sequence[Sequence], ring: Ring) -> list[list]:
    n = len(g)
    if any(len(r) != n for r in g):
        raise ValueError("cauchy_binet needs a square matrix")
    return [[_payload(ring, x) for x in row] for row in g]


def gl_identity(n: int, ring: Ring) -> list[list]:
    z, o = ring.zero(), ring.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def gl_transvection(n: int, i: int, j: int, xi, ring: Ring) -> list[list]:
    """t_{i,j}(xi) = e + xi e_{i,j} (1-based indices)."""
    if i == j:
        raise ValueError("transvection needs i != j")
    g = gl_identity(n, ring)
    g[i - 1][j - 1] = _payload(ring, xi)
    return g


def gl_torus(n: int, i: int, xi, ring: Ring) -> list[list]:
    """d_i(xi) = e + (xi - 1) e_{i,i}."""
    g = gl_identity(n, ring)
    g[i - 1][i - 1] = _payload(ring, xi)
    return g


def _minor_laplace(g: list[list], rows: Sequence[int], cols: Sequence[int], ring: Ring):
    if len(rows) == 1:
        return g[rows[0]][cols[0]]
    r0, rest = rows[0], rows[1:]
    acc = ring.zero()
    for k, c in enumerate(cols):
        a = g[r0][c]
        if ring.is_zero(a):
            continue
        sub = _minor_laplace(g, rest, cols[:k] + cols[k + 1:], ring)
        if ring.is_zero(sub):
            continue
        term = ring.mul(a, sub)
        acc = ring.add(acc, ring.neg(term) if k & 1 else term)
    return acc


def minor(g: Sequence[Sequence], rows: Sequence[int], cols: Sequence[int], ring: Ring, method: str = "auto"):
    """Minor of g on 0-based ``rows`` x ``cols``: cofactor expansion up to 3x3, Berkowitz above."""
    if method == "auto":
        method = "laplace" if len(rows) <= 3 else "berkowitz"
    if method == "laplace":
        return _minor_laplace(g, list(rows), list(cols), ring)
    sub = [[g[r][c] for c in cols] for r in rows]
    cp = charpoly(sub, ring)
    k = len(rows)
    return cp[k] if k % 2 == 0 else ring.neg(cp[k])


def cauchy_binet(g: Sequence[Sequence], m: int, ring: Ring | None = None, method: str = "auto") -> RepMatrix:
    """Matrix of m x m minors of the n x n matrix g."""
    if ring is None:
        ring = _infer_ring(g)
    rows = _square(g, ring)
    n = len(rows)
    if not (1 <= m <= n):
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    subs = subset_tuples(n, m)
    if method == "auto" and m <= 3 and _fast.is_numeric(ring):
        G, D = _fast.int_matrix(rows, ring)
        idx = np.array([[x - 1 for x in s] for s in subs], dtype=np.int64)
        M = _fast.minors(G, idx, idx)
        k = _fast.modulus_of(ring)
        if k is not None:
            M = M % k
        return RepMatrix.from_dense(ring, n, m, _fast.to_payloads(M, ring, D ** m))
    zero_rows = {i for i in range(n) if all(ring.is_zero(x) for x in rows[i])}
    entries = {}
    for a, I in enumerate(subs):
        ri = [x - 1 for x in I]
        if zero_rows.intersection(ri):
            continue
        for b, J in enumerate(subs):
            v = minor(rows, ri, [x - 1 for x in J], ring, "auto" if method in ("auto", "numeric") else method)
            if not ring.is_zero(v):
                entries[(a, b)] = v
    return RepMatrix(ring, n, m, entries)


def _infer_ring(g) -> Ring:
    for row in g:
        for x in row:
            if isinstance(x, RingElem):
                return x.ring
    raise RingError("cannot infer the ring; pass ring= explicitly")


def _xi(xi, ring: Ring | None):
    if isinstance(xi, RingElem):
        if ring is not None and ring != xi.ring:
            return ring, ring.canon(xi)
        return xi.ring, xi.value
    if ring is None:
        raise RingError("pass a RingElem or ring=")
    return ring, ring.canon(xi)


def transvection_factors(n: int, m: int, i: int, j: int, xi, ring: Ring | None = None) -> list[tuple[Subset, Subset, RingElem]]:
    """Factors t_{L+i, L+j}(sign(L,i) sign(L,j) xi), L over (m-1)-subsets of [n] - {i, j}."""
    if i == j:
        raise ValueError("exterior transvection needs i != j")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("transvection indices out of range")
    if not (1 <= m <= n):
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    ring, x = _xi(xi, ring)
    rest = [t for t in range(1, n + 1) if t not in (i, j)]
    out = []
    for L in itertools.combinations(rest, m - 1):
        s = sign_adjoin(L, i) * sign_adjoin(L, j)
        coeff = x if s > 0 else ring.neg(x)
        out.append((Subset(n, tuple(sorted(L + (i,)))), Subset(n, tuple(sorted(L + (j,)))), RingElem(ring, coeff)))
    return out


def exterior_transvection(n: int, m: int, i: int, j: int, xi, ring: Ring | None = None) -> RepMatrix:
    """Closed form of the m-th exterior power of t_{i,j}(xi): identity plus C(n-2, m-1) entries."""
    ring, x = _xi(xi, ring)
    idx = subset_index(n, m)
    entries = {(r, r): ring.one() for r in range(len(idx))}
    for I, J, c in transvection_factors(n, m, i, j, x, ring):
        entries[(idx[I.elems], idx[J.elems])] = c.value
    return RepMatrix(ring, n, m, entries)


def exterior_torus(n: int, m: int, i: int, xi, ring: Ring | None = None) -> RepMatrix:
    """Diagonal matrix with xi at every subset containing i, 1 elsewhere."""
    if not (1 <= i <= n):
        raise ValueError("torus index out of range")
    ring, x = _xi(xi, ring)
    one = ring.one()
    return RepMatrix(ring, n, m, {(r, r): (x if i in s else one) for r, s in enumerate(subset_tuples(n, m))})


def residue(g: RepMatrix) -> int:
    """rank(g - e) over a field."""
    require_field(g.ring)
    diff = g - RepMatrix.identity(g.ring, g.n, g.m)
    rows: dict[int, dict] = {}
    for r, c, v in diff.triplets():
        rows.setdefault(r, {})[c] = v
    return rank(rows.values(), g.ring)


@dataclass(frozen=True)
class ElementaryWord:
    """Ordered product of elementary transvections t_{i,j}(xi)."""

    ring: Ring
    factors: tuple[tuple[int, int, object], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((int(i), int(j), self.ring.canon(x)) for i, j, x in self.factors))
        for i, j, _ in self.factors:
            if i == j:
                raise ValueError("transvection needs i != j")

    def __len__(self):
        return len(self.factors)

    def check(self, n: int) -> None:
        for i, j, _ in self.factors:
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"factor t_{{{i},{j}}} does not fit n={n}")

    def gl_matrix(self, n: int) -> list[list]:
        self.check(n)
        g = gl_identity(n, self.ring)
        for i, j, x in self.factors:
            g = matmul(g, gl_transvection(n, i, j, x, self.ring), self.ring)
        return g

    def inverse(self) -> "ElementaryWord":
        return ElementaryWord(self.ring, tuple((i, j, self.ring.neg(x)) for i, j, x in reversed(self.factors)))

    def to_json(self) -> dict:
        return {"ring": self.ring.token, "factors": [[i, j, self.ring.fmt(x)] for i, j, x in self.factors]}


def evaluate_word(word: ElementaryWord, n: int, m: int) -> RepMatrix:
    word.check(n)
    result = RepMatrix.identity(word.ring, n, m)
    for i, j, x in word.factors:
        result = result @ exterior_transvection(n, m, i, j, x, word.ring)
    return result


def random_word(n: int, length: int, ring: Ring, seed: int) -> ElementaryWord:
    """Deterministic random word; xi drawn from ``ring.sample_elements()``."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    rng = random.Random(seed)
    pairs = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    samples = ring.sample_elements()
    factors = []
    for _ in range(length):
        i, j = rng.choice(pairs)
        factors.append((i, j, rng.choice(samples)))
    return ElementaryWord(ring, tuple(factors))


def random_gl(n: int, ring: Ring, rng: random.Random, entries: Iterable | None = None) -> list[list]:
    """Random invertible n x n matrix.

    Over Z (and any ring without a finite pool) the matrix is P L D U with
    unitriangular L, U, a sign diagonal D and a permutation P; elsewhere by
    rejection sampling on the determinant.
    """
    if isinstance(ring, Integers) and entries is None:
        return _random_unimodular(n, ring, rng)
    if entries is None:
        if isinstance(ring, Rationals):
            entries = [ring.canon(x) for x in (-2, -1, 0, 1, 2, 3)] + [ring.parse_payload(t) for t in ("1/2", "-1/3")]
        elif hasattr(ring, "modulus"):
            entries = list(range(ring.modulus))
        else:
            entries = ring.sample_elements()
    pool = list(entries)
    for _ in range(1000):
        g = [[rng.choice(pool) for _ in range(n)] for _ in range(n)]
        if ring.is_unit(det(g, ring)):
            return g
    raise NotInvertibleError("could not sample an invertible matrix")


def _random_unimodular(n: int, ring: Ring, rng: random.Random) -> list[list]:
    pool = [ring.canon(x) for x in (-2, -1, 0, 0, 1, 2)]
    L, U = gl_identity(n, ring), gl_identity(n, ring)
    for i in range(n):
        for j in range(i):
            L[i][j] = rng.choice(pool)
            U[j][i] = rng.choice(pool)
        U[i][i] = ring.canon(rng.choice((1, -1)))
    perm = list(range(n))
    rng.shuffle(perm)
    LU = matmul(L, U, ring)
    return [LU[p] for p in perm]


def random_rep_gl(n: int, m: int, ring: Ring, rng: random.Random) -> RepMatrix:
    """Random element of GL_N (N = C(n, m)), generally not in the image of GL_n."""
    N = len(subset_tuples(n, m))
    return RepMatrix.from_dense(ring, n, m, random_gl(N, ring, rng))
