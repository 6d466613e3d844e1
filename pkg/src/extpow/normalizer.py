"""Membership in G_f / Gbar_f and the elementary transporters, checked on samples.

For a = g t g^-1 with t = e + xi T an exterior transvection (T^2 = 0), put
D = act_on_form(g, f), i.e. D(x) = f(g x).  Then

    f(a x) = f(x) for all x   <=>   D(t y) = D(y) for all y   (substitute x = g y),

so membership of the conjugate only needs D and t, never g^-1.  Expanding
t = e + xi T slot by slot, D(t y) = sum_d xi^d C_d with C_d the sum of D
contracted with T in d of the k slots.  The conjugate preserves f iff
C_d = 0 for d >= 1, and it scales f by a unit of R[xi] iff C_d = lambda_d D
with every lambda_d (d >= 1) nilpotent.  This is the generic check over the
polynomial extension R[xi].
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _fast
from .extrep import (
    RepMatrix,
    cauchy_binet,
    exterior_torus,
    exterior_transvection,
    random_gl,
    random_rep_gl,
    transvection_factors,
)
from .forms import (
    MultilinearForm,
    _act_sparse,
    _scaled,
    act_on_form,
    form_polarized,
    semi_invariance_detail,
)
from .rings import (
    Integers,
    IntegersMod,
    NotInvertibleError,
    PolynomialRing,
    Rationals,
    Ring,
    RingElem,
)

PREDICATES = ("G_f", "Gbar_f", "Gbar_F", "transports_E_to_SL", "transports_E_to_GL")


@dataclass
class MembershipVerdict:
    predicate: str
    result: str  # "true", "false" or "indeterminate"
    witness: dict | None = None

    def __post_init__(self):
        if self.predicate not in PREDICATES:
            raise ValueError(f"unknown predicate {self.predicate!r}")
        if self.result not in ("true", "false", "indeterminate"):
            raise ValueError(f"bad result {self.result!r}")

    @property
    def holds(self) -> bool:
        return self.result == "true"

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {"predicate": self.predicate, "result": self.result, "witness": self.witness}


def _form_for(g: RepMatrix, f: MultilinearForm | None) -> MultilinearForm:
    if f is None:
        if g.n % g.m:
            raise ValueError(f"m = {g.m} does not divide n = {g.n}")
        f = form_polarized(g.n, g.m, g.ring)
    return f


def _invertibility(g: RepMatrix) -> dict | None:
    d = g.det()
    if not d.is_unit():
        return {"reason": "not invertible", "det": str(d)}
    return None


def in_G_f(g: RepMatrix, f: MultilinearForm | None = None) -> MembershipVerdict:
    """g preserves f exactly."""
    f = _form_for(g, f)
    bad = _invertibility(g)
    if bad:
        return MembershipVerdict("G_f", "false", bad)
    lam, fail = semi_invariance_detail(g, f)
    if lam is None:
        return MembershipVerdict("G_f", "false", fail)
    if lam.value != g.ring.one():
        return MembershipVerdict("G_f", "false", {"reason": "scalar is not 1", "lambda": str(lam)})
    return MembershipVerdict("G_f", "true", {"lambda": str(lam)})


def in_Gbar_f(g: RepMatrix, f: MultilinearForm | None = None) -> MembershipVerdict:
    """g scales f by a unit lambda; the witness is lambda."""
    f = _form_for(g, f)
    bad = _invertibility(g)
    if bad:
        return MembershipVerdict("Gbar_f", "false", bad)
    lam, fail = semi_invariance_detail(g, f)
    if lam is None:
        return MembershipVerdict("Gbar_f", "false", fail)
    return MembershipVerdict("Gbar_f", "true", {"lambda": str(lam)})


def in_Gbar_F(g: RepMatrix, gens=None, require_unit_lambdas: bool = False) -> MembershipVerdict:
    from .forms import stabilizes_ideal_F

    bad = _invertibility(g)
    if bad:
        return MembershipVerdict("Gbar_F", "false", bad)
    w = stabilizes_ideal_F(g, gens, require_unit_lambdas)
    if w is None:
        return MembershipVerdict("Gbar_F", "false", {"reason": "ideal not preserved"})
    return MembershipVerdict("Gbar_F", "true", w.to_json())


# -- transporters ----------------------------------------------------------------

def _lambda_for(C, D, R: Ring, probe):
    """lambda with C == lambda * D, or None.  ``probe`` is an index with D[probe] != 0."""
    if isinstance(R, IntegersMod):
        k = R.modulus
        d0 = int(D[probe]) % k
        if R.is_unit(d0):
            cands = [R.mul(int(C[probe]) % k, R.inv(d0))]
        else:
            cands = [x for x in range(k) if (x * d0 - int(C[probe])) % k == 0]
        for lam in cands:
            if not np.any((C - _scaled(D, lam)) % k != 0):
                return lam
        return None
    c0, d0 = int(C[probe]), int(D[probe])
    if np.any(_scaled(C, d0) - _scaled(D, c0) != 0):
        return None
    if isinstance(R, Integers):
        return c0 // d0 if c0 % d0 == 0 else None
    return R.canon(_fraction(c0, d0))


def _fraction(a, b):
    from fractions import Fraction
    return Fraction(a, b)


def _transvection_T(n: int, m: int, i: int, j: int, R: Ring) -> list[tuple[int, int, object]]:
    """Nonzero entries of T with exterior t_{i,j}(xi) = e + xi T."""
    from .combinat import subset_index

    idx = subset_index(n, m)
    return [(idx[I.elems], idx[J.elems], c.value) for I, J, c in transvection_factors(n, m, i, j, R.one(), R)]


def _slot_contractions_dense(D: np.ndarray, T: np.ndarray, k: int, modulus):
    """C_d for d = 1..k: D contracted with T in every d-subset of slots."""
    out = []
    for d in range(1, k + 1):
        acc = None
        for S in itertools.combinations(range(k), d):
            C = _fast.contract(D, [T if l in S else None for l in range(k)], modulus)
            acc = C if acc is None else acc + C
        if modulus is not None:
            acc = acc % modulus
        out.append(acc)
    return out


def transports_elementary(g: RepMatrix, target: str = "G_f", f: MultilinearForm | None = None,
                          pairs: Sequence[tuple[int, int]] | None = None) -> MembershipVerdict:
    """g t_{i,j}(xi) g^-1 lies in the target for every pair (i, j), xi an indeterminate."""
    if target not in ("G_f", "Gbar_f"):
        raise ValueError("target must be G_f or Gbar_f")
    pred = "transports_E_to_SL" if target == "G_f" else "transports_E_to_GL"
    f = _form_for(g, f)
    R = g.ring
    if not g.det().is_unit():
        raise NotInvertibleError(str(g.det()))
    n, m, k, N = g.n, g.m, f.k, g.N
    if pairs is None:
        pairs = list(itertools.permutations(range(1, n + 1), 2))
    numeric = _fast.is_numeric(R) and N ** k <= 2_000_000
    if numeric:
        Dform = act_on_form(g, f)
        Dt = np.zeros((N,) * k, dtype=object)
        den = 1
        if isinstance(R, Rationals):
            for v in Dform.coeffs.values():
                den = den * v.denominator // _gcd(den, v.denominator)
        for K, v in Dform.coeffs.items():
            Dt[K] = int(v * den)
        Dt = _fast._fit(Dt)
        modulus = _fast.modulus_of(R)
        nz = np.argwhere(Dt != 0)
        units = [tuple(int(a) for a in K) for K in nz if R.is_unit(R.canon(int(Dt[tuple(K)])))]
        probe = units[0] if units else (tuple(int(a) for a in nz[0]) if len(nz) else None)
    else:
        Dcoeffs = act_on_form(g, f).coeffs
    for i, j in pairs:
        entries = _transvection_T(n, m, i, j, R)
        if numeric:
            Tm = np.zeros((N, N), dtype=np.int64)
            for r, c, v in entries:
                Tm[r, c] = int(v)
            for d, C in enumerate(_slot_contractions_dense(Dt, Tm, k, modulus), start=1):
                if target == "G_f":
                    if np.any(C != 0):
                        return MembershipVerdict(pred, "false", {"failing_pair": [i, j], "degree": d})
                    continue
                lam = _lambda_for(C, Dt, R, probe)
                if lam is None:
                    return MembershipVerdict(pred, "false", {"failing_pair": [i, j], "degree": d})
                if not R.is_nilpotent(lam):
                    return MembershipVerdict(pred, "false", {"failing_pair": [i, j], "degree": d,
                                                             "reason": "scalar is not a unit of R[xi]"})
        else:
            rows: dict = {}
            for r, c, v in entries:
                rows.setdefault(r, []).append((c, v))
            verdict = _transport_sparse(Dcoeffs, rows, k, R, target, pred, (i, j))
            if verdict is not None:
                return verdict
    return MembershipVerdict(pred, "true", {"pairs": len(pairs), "scalar": "1"})


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)


def _transport_sparse(D: dict, rows: dict, k: int, R: Ring, target: str, pred: str, pair):
    probe = next((K for K in sorted(D) if R.is_unit(D[K])), None)
    for d in range(1, k + 1):
        acc: dict = {}
        for S in itertools.combinations(range(k), d):
            part = D
            for l in S:
                part = _act_sparse(rows, part, k, R, slots=[l])
            for K, v in part.items():
                acc[K] = R.add(acc[K], v) if K in acc else v
        acc = {K: v for K, v in acc.items() if not R.is_zero(v)}
        if target == "G_f":
            if acc:
                return MembershipVerdict(pred, "false", {"failing_pair": list(pair), "degree": d})
            continue
        if probe is None:
            if not D:
                return MembershipVerdict(pred, "false", {"failing_pair": list(pair), "degree": d})
            return MembershipVerdict(pred, "indeterminate", {"failing_pair": list(pair), "degree": d,
                                                             "reason": "no unit coefficient to read the scalar"})
        lam = R.mul(acc.get(probe, R.zero()), R.inv(D[probe]))
        expect = {K: R.mul(lam, v) for K, v in D.items()}
        expect = {K: v for K, v in expect.items() if not R.is_zero(v)}
        if acc != expect or not R.is_nilpotent(lam):
            return MembershipVerdict(pred, "false", {"failing_pair": list(pair), "degree": d})
    return None


def conjugated_transvection(g: RepMatrix, i: int, j: int, xi=None) -> RepMatrix:
    """g t_{i,j}(xi) g^-1 explicitly; xi defaults to an indeterminate over the ring of g."""
    R = g.ring
    if xi is None:
        P = PolynomialRing(R, ("xi",))
        gp = g.change_ring(P)
        t = exterior_transvection(g.n, g.m, i, j, RingElem(P, P.gen("xi")), P)
        return gp @ t @ g.inverse().change_ring(P)
    t = exterior_transvection(g.n, g.m, i, j, xi, R)
    return g @ t @ g.inverse()


def conjugate_det_is_one(g: RepMatrix, i: int, j: int, xi) -> bool:
    """det(g t_{i,j}(xi) g^-1) == 1, by an exact determinant."""
    return conjugated_transvection(g, i, j, xi).det().value == g.ring.one()


# -- planted negatives and the demo ------------------------------------------------

def planted_negatives(n: int, m: int, R: Ring) -> list[tuple[str, RepMatrix]]:
    """Invertible matrices outside the image, rejected by construction."""
    from .combinat import subset_index

    idx = subset_index(n, m)
    N = len(idx)
    # a unit other than 1: 2 when invertible, else -1; F_2 has none
    zeta = next((z for z in (R.canon(2), R.neg(R.one())) if R.is_unit(z) and z != R.one()), None)
    first = idx[tuple(range(1, m + 1))]
    second = idx[tuple(range(1, m)) + (m + 1,)]
    block2 = idx[tuple(range(m + 1, 2 * m + 1))]
    perm = {a: a for a in range(N)}
    perm[first], perm[second] = second, first
    swap = RepMatrix(R, n, m, {(a, b): R.one() for a, b in perm.items()})
    off = RepMatrix.identity(R, n, m) + RepMatrix(R, n, m, {(first, block2): R.one()})
    if zeta is None:
        back = RepMatrix.identity(R, n, m) + RepMatrix(R, n, m, {(block2, first): R.one()})
        return [("swap", swap), ("unipotent_off_image", off), ("unipotent_off_image_transposed", back)]
    torus_swap = exterior_torus(n, m, 1, zeta, R) @ swap
    diag = RepMatrix(R, n, m, {(a, a): (zeta if a == first else R.one()) for a in range(N)})
    return [("torus_times_swap", torus_swap), ("unipotent_off_image", off), ("single_scaled_entry", diag)]


def _evaluate(job):
    kind, label, g, f, pair, xi0 = job
    v_bar = in_Gbar_f(g, f)
    v_sl = in_G_f(g, f)
    t_sl = transports_elementary(g, "G_f", f)
    t_gl = transports_elementary(g, "Gbar_f", f)
    det_ok = conjugate_det_is_one(g, pair[0], pair[1], xi0)
    triple = [v_bar.holds, t_sl.holds, t_gl.holds]
    consistent = len(set(triple)) == 1 and "indeterminate" not in (v_bar.result, t_sl.result, t_gl.result)
    expected = kind == "positive"
    return {
        "kind": kind,
        "label": label,
        "verdicts": {
            "Gbar_f": v_bar.result,
            "G_f": v_sl.result,
            "transports_E_to_SL": t_sl.result,
            "transports_E_to_GL": t_gl.result,
        },
        "witnesses": {
            "Gbar_f": v_bar.witness,
            "G_f": v_sl.witness,
            "transports_E_to_SL": t_sl.witness,
            "transports_E_to_GL": t_gl.witness,
        },
        "det_check": {"pair": list(pair), "xi": str(RingElem(g.ring, xi0)), "det_is_one": det_ok},
        "consistent": consistent,
        "pass": consistent and triple[0] == expected and det_ok,
    }


def normalizer_equalities_demo(n: int, m: int, ring: Ring, samples: int, seed: int,
                               threads: int = 1) -> dict:
    """Sample-level check that the images of GL_n are exactly the elements passing
    every predicate, and that the predicates agree on every sample.

    Positives are cauchy_binet(h, m) for random h; negatives are random GL_N
    elements plus three planted near misses (only when samples > 0).
    """
    if n < 4:
        raise ValueError("need n >= 4")
    if m <= 0 or n % m or n // m < 3:
        raise ValueError(f"need m | n with n / m >= 3, got n={n}, m={m}")
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    rng = random.Random(seed)
    f = form_polarized(n, m, ring)
    pairs = list(itertools.permutations(range(1, n + 1), 2))
    xi0 = ring.one()
    jobs = []
    for s in range(samples):
        h = random_gl(n, ring, rng)
        jobs.append(("positive", f"image_{s}", cauchy_binet(h, m, ring), f, rng.choice(pairs), xi0))
    for s in range(samples):
        jobs.append(("negative", f"random_{s}", random_rep_gl(n, m, ring, rng), f, rng.choice(pairs), xi0))
    if samples > 0:
        for label, g in planted_negatives(n, m, ring):
            jobs.append(("planted", label, g, f, rng.choice(pairs), xi0))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(_evaluate, jobs))
    else:
        rows = [_evaluate(j) for j in jobs]
    for i, r in enumerate(rows):
        r["index"] = i
    counts = {kind: sum(1 for r in rows if r["kind"] == kind) for kind in ("positive", "negative", "planted")}
    return {
        "params": {"n": n, "m": m, "ring": ring.token, "samples": samples, "seed": seed},
        "counts": counts,
        "samples": rows,
        "consistent": all(r["consistent"] for r in rows),
        "pass": all(r["pass"] for r in rows),
    }
