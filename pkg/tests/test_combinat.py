import itertools
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extpow.combinat import (
    Subset,
    distance,
    enumerate_subsets,
    partition_count,
    partitions,
    sign_adjoin,
    sign_sequence,
    subset_index,
)


def _inversions(seq):
    return sum(1 for a, b in itertools.combinations(seq, 2) if a > b)


def test_enumeration_is_lex_and_complete():
    subs = enumerate_subsets(5, 3)
    assert [str(s) for s in subs[:4]] == ["123", "124", "125", "134"]
    assert len(subs) == comb(5, 3)
    assert [s.elems for s in subs] == sorted(s.elems for s in subs)
    idx = subset_index(5, 3)
    assert all(idx[s.elems] == k for k, s in enumerate(subs))


def test_subset_parse_and_labels():
    assert Subset.parse("245", 5).elems == (2, 4, 5)
    assert Subset.parse("3,10,11", 12).elems == (3, 10, 11)
    assert str(Subset(12, (3, 10, 11))) == "3,10,11"
    assert Subset(5, (1, 2)).var_name() == "x12"
    with pytest.raises(ValueError):
        Subset(4, (2, 5))
    with pytest.raises(ValueError):
        Subset(4, (3, 2))


@given(st.permutations(list(range(1, 8))))
def test_sign_matches_inversion_count(perm):
    assert sign_sequence(perm) == (-1) ** _inversions(perm)


def test_sign_repeated_entry_is_zero():
    assert sign_sequence((1, 3, 1)) == 0


@given(st.sets(st.integers(1, 9), max_size=5), st.integers(1, 9))
def test_sign_adjoin(L, i):
    expected = 0 if i in L else sign_sequence((i, *sorted(L)))
    assert sign_adjoin(L, i) == expected


def test_distance():
    assert distance((1, 2, 3), (2, 3, 4)) == 2
    assert distance(Subset(5, (1, 2)), Subset(5, (3, 4))) == 0
    with pytest.raises(ValueError):
        distance((1, 2), (1, 2, 3))


@pytest.mark.parametrize("size,m", [(4, 2), (6, 2), (6, 3), (9, 3), (8, 4)])
def test_partition_counts(size, m):
    for ordered in (False, True):
        parts = list(partitions(size, m, ordered=ordered))
        assert len(parts) == partition_count(size, m, ordered)
        assert all(p.covers(range(1, size + 1)) for p in parts)
        assert len({p.blocks for p in parts}) == len(parts)


def test_partition_sign_and_errors():
    (p,) = [q for q in partitions((1, 2, 3, 4), 2, ordered=True) if q.blocks == ((1, 3), (2, 4))]
    assert p.sign() == -1 and str(p) == "13|24"
    with pytest.raises(ValueError):
        list(partitions(5, 2))
