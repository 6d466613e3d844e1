"""Exact integer kernels on numpy arrays.

Used only for Z, Q (after clearing denominators) and Z/k.  Every stage checks
a worst-case magnitude bound and switches to ``object`` dtype (Python ints)
before int64 could overflow, so results are always exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .rings import Integers, IntegersMod, Rationals, Ring

_LIMIT = 2 ** 62
# float64 represents every integer below 2**53, so BLAS products stay exact
_FLOAT_LIMIT = 2 ** 53


def is_numeric(ring: Ring) -> bool:
    return isinstance(ring, (Integers, Rationals, IntegersMod))


def modulus_of(ring: Ring) -> int | None:
    return ring.modulus if isinstance(ring, IntegersMod) else None


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(x)) for x in a.flat)
    return int(np.abs(a).max())


def _fit(a: np.ndarray) -> np.ndarray:
    if a.dtype == object and (a.size == 0 or _maxabs(a) < _LIMIT):
        return a.astype(np.int64)
    return a


def int_matrix(rows: Sequence[Sequence], ring: Ring) -> tuple[np.ndarray, int]:
    """Integer array A and denominator D with ``rows == A / D`` (D = 1 unless Q)."""
    if isinstance(ring, Rationals):
        D = 1
        for r in rows:
            for x in r:
                if x.denominator != 1:
                    D = D * x.denominator // math.gcd(D, x.denominator)
        data = [[int(x * D) for x in r] for r in rows]
    else:
        D = 1
        data = [[int(x) for x in r] for r in rows]
    arr = np.array(data, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(len(rows), 0)
    return _fit(arr), D


def contract(T: np.ndarray, mats: Sequence[np.ndarray | None], modulus: int | None = None) -> np.ndarray:
    """Apply ``mats[l]`` along axis ``l``: result[.., J, ..] = sum_I T[.., I, ..] M[I, J]."""
    for axis, M in enumerate(mats):
        if M is None:
            continue
        colsum = int(np.abs(M.astype(object)).sum(axis=0).max()) if M.size else 0
        bound = _maxabs(T) * colsum
        if bound < _FLOAT_LIMIT and T.dtype != object and M.dtype != object:
            R = np.tensordot(T.astype(np.float64), M.astype(np.float64), axes=([axis], [0]))
            T = np.moveaxis(np.rint(R).astype(np.int64), -1, axis)
            if modulus is not None:
                T = T % modulus
            continue
        if bound >= _LIMIT:
            T, M = T.astype(object), M.astype(object)
        if T.dtype == object and M.dtype != object:
            M = M.astype(object)
        elif M.dtype == object and T.dtype != object:
            T = T.astype(object)
        T = np.moveaxis(np.tensordot(T, M, axes=([axis], [0])), -1, axis)
        if modulus is not None:
            T = T % modulus
        T = _fit(T) if T.dtype == object else T
    return T


def minors(G: np.ndarray, rows_idx: np.ndarray, cols_idx: np.ndarray) -> np.ndarray:
    """All m x m minors G[R, C] for m <= 3, vectorized; returns (len(R), len(C))."""
    m = rows_idx.shape[1]
    bound = math.factorial(m) * max(_maxabs(G), 1) ** m
    if bound >= _LIMIT and G.dtype != object:
        G = G.astype(object)
    sub = G[rows_idx[:, None, :, None], cols_idx[None, :, None, :]]
    if m == 1:
        return sub[:, :, 0, 0]
    if m == 2:
        return sub[:, :, 0, 0] * sub[:, :, 1, 1] - sub[:, :, 0, 1] * sub[:, :, 1, 0]
    if m == 3:
        a = sub
        return (
            a[:, :, 0, 0] * (a[:, :, 1, 1] * a[:, :, 2, 2] - a[:, :, 1, 2] * a[:, :, 2, 1])
            - a[:, :, 0, 1] * (a[:, :, 1, 0] * a[:, :, 2, 2] - a[:, :, 1, 2] * a[:, :, 2, 0])
            + a[:, :, 0, 2] * (a[:, :, 1, 0] * a[:, :, 2, 1] - a[:, :, 1, 1] * a[:, :, 2, 0])
        )
    raise ValueError("vectorized minors only for m <= 3")


def to_payloads(arr: np.ndarray, ring: Ring, denom: int = 1):
    """Convert an integer array (divided by ``denom``) back to ring payloads."""
    if isinstance(ring, Rationals):
        if denom == 1:
            return [[Fraction(int(x)) for x in row] for row in arr]
        return [[Fraction(int(x), denom) for x in row] for row in arr]
    if isinstance(ring, IntegersMod):
        k = ring.modulus
        return [[int(x) % k for x in row] for row in arr]
    return [[int(x) for x in row] for row in arr]
