"""Subsets of [n], permutation signs and partitions into m-element blocks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence


@dataclass(frozen=True, order=True)
class Subset:
    """Sorted m-element subset of {1, ..., n}."""

    n: int
    elems: tuple[int, ...]

    def __post_init__(self):
        e = tuple(self.elems)
        object.__setattr__(self, "elems", e)
        if any(b <= a for a, b in zip(e, e[1:])):
            raise ValueError(f"subset elements must be strictly increasing: {e}")
        if e and (e[0] < 1 or e[-1] > self.n):
            raise ValueError(f"subset {e} is not inside [1, {self.n}]")

    @property
    def m(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __len__(self):
        return len(self.elems)

    def __contains__(self, i):
        return i in self.elems

    def __str__(self):
        if self.n <= 9:
            return "".join(map(str, self.elems))
        return ",".join(map(str, self.elems))

    def var_name(self) -> str:
        if self.n <= 9:
            return "x" + "".join(map(str, self.elems))
        return "x_" + "_".join(map(str, self.elems))

    @classmethod
    def parse(cls, text: str, n: int) -> "Subset":
        text = text.strip()
        if "," in text:
            elems = [int(t) for t in text.split(",") if t]
        else:
            elems = [int(ch) for ch in text]
        return cls(n, tuple(sorted(elems)))


@lru_cache(maxsize=None)
def _subset_tuples(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(1, n + 1), m))


@lru_cache(maxsize=None)
def subset_index(n: int, m: int) -> dict[tuple[int, ...], int]:
    """Map from sorted element tuple to its lexicographic position."""
    return {s: i for i, s in enumerate(_subset_tuples(n, m))}


def enumerate_subsets(n: int, m: int) -> list[Subset]:
    """All m-subsets of [n] in lexicographic order; the position is the matrix index."""
    if not (1 <= m <= n):
        raise ValueError(f"need 1 <= m <= n, got n={n}, m={m}")
    return [Subset(n, s) for s in _subset_tuples(n, m)]


def subset_tuples(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    if not (0 <= m <= n):
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    return _subset_tuples(n, m)


def sign_sequence(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if an entry repeats."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    inversions = 0
    for i, a in enumerate(seq):
        for b in seq[i + 1:]:
            if a > b:
                inversions += 1
    return -1 if inversions & 1 else 1


def sign_adjoin(L: Iterable[int], i: int) -> int:
    """Sign of the sequence ``(i, *sorted(L))``: parity of the elements of L below i."""
    L = list(L)
    if i in L:
        return 0
    return -1 if sum(1 for x in L if x < i) & 1 else 1


def distance(I: Subset | Sequence[int], J: Subset | Sequence[int]) -> int:
    """|I ∩ J|."""
    a, b = tuple(I), tuple(J)
    if len(a) != len(b):
        raise ValueError("distance needs subsets of equal size")
    if isinstance(I, Subset) and isinstance(J, Subset) and I.n != J.n:
        raise ValueError("distance needs subsets of the same ambient set")
    return len(set(a) & set(b))


@dataclass(frozen=True)
class PartitionSeq:
    """Ordered list of pairwise disjoint blocks."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks:
            if seen & set(b):
                raise ValueError("partition blocks overlap")
            seen |= set(b)

    def concatenated(self) -> tuple[int, ...]:
        return tuple(x for b in self.blocks for x in b)

    def sign(self) -> int:
        return sign_sequence(self.concatenated())

    def covers(self, V: Iterable[int]) -> bool:
        return set(self.concatenated()) == set(V)

    def __str__(self):
        return "|".join("".join(map(str, b)) if max(b, default=0) <= 9 else ",".join(map(str, b))
                        for b in self.blocks)


def _block_sequences(V: tuple[int, ...], m: int, ordered: bool) -> Iterator[tuple[tuple[int, ...], ...]]:
    if not V:
        yield ()
        return
    if ordered:
        firsts = itertools.combinations(V, m)
    else:
        # the block holding min(V) comes first, which fixes one representative
        firsts = ((V[0],) + rest for rest in itertools.combinations(V[1:], m - 1))
    for block in firsts:
        rest = tuple(x for x in V if x not in block)
        for tail in _block_sequences(rest, m, ordered):
            yield (block,) + tail


def partitions(V: int | Iterable[int], m: int, ordered: bool = False) -> Iterator[PartitionSeq]:
    """Stream the partitions of V (or [V] for an int) into m-element blocks."""
    if isinstance(V, int):
        V = range(1, V + 1)
    V = tuple(sorted(V))
    if m <= 0 or len(V) % m:
        raise ValueError(f"|V| = {len(V)} is not divisible by m = {m}")
    for blocks in _block_sequences(V, m, ordered):
        yield PartitionSeq(blocks)


def partition_count(size: int, m: int, ordered: bool) -> int:
    if m <= 0 or size % m:
        raise ValueError(f"{size} is not divisible by {m}")
    k = size // m
    count = math.factorial(size) // math.factorial(m) ** k
    return count if ordered else count // math.factorial(k)
