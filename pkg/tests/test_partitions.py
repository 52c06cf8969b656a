"""Set-partition enumeration: counts and structural invariants."""

import pytest

from char3lab.errors import TooLarge
from char3lab.partitions import (
    FAMILY_ALL,
    FAMILY_MAXBLOCK3,
    FAMILY_PERFECT_MATCHING,
    FAMILY_SIZES_12_2,
    enumerate_bipartite_partitions,
    enumerate_partitions,
    nested_pairs,
    subsets_k,
)


BELL = {0: 1, 1: 1, 2: 2, 3: 5, 4: 15, 5: 52, 6: 203}
DOUBLE_FACTORIAL = {0: 1, 2: 1, 4: 3, 6: 15}  # perfect matchings of 2k points


def test_bell_numbers():
    for n, count in BELL.items():
        parts = list(enumerate_partitions(range(n), FAMILY_ALL))
        assert len(parts) == count


def test_partitions_cover_ground():
    for part in enumerate_partitions(range(5), FAMILY_ALL):
        seen = sorted(x for block in part.blocks for x in block)
        assert seen == list(range(5))


def test_max_block_three():
    for part in enumerate_partitions(range(6), FAMILY_MAXBLOCK3):
        assert all(len(block) <= 3 for block in part.blocks)


def test_perfect_matchings():
    for n, count in DOUBLE_FACTORIAL.items():
        parts = list(enumerate_partitions(range(n), FAMILY_PERFECT_MATCHING))
        assert len(parts) == count
        for part in parts:
            assert all(len(block) == 2 for block in part.blocks)
    # odd ground sets have no perfect matching
    assert not list(enumerate_partitions(range(3), FAMILY_PERFECT_MATCHING))


def test_ground_set_cap():
    with pytest.raises(TooLarge):
        list(enumerate_partitions(range(13), FAMILY_ALL))


def test_subsets_k():
    subs = list(subsets_k(range(5), 2))
    assert len(subs) == 10
    assert len(set(subs)) == 10
    for s in subs:
        assert len(s) == 2 and tuple(sorted(s)) == s


def test_nested_pairs():
    # (I, J) with J inside I, |I| = p, |J| = q
    pairs = list(nested_pairs(range(4), 3, 2))
    assert len(pairs) == 4 * 3  # comb(4,3) * comb(3,2)
    for i_set, j_set in pairs:
        assert set(j_set) <= set(i_set)


def test_bipartite_partitions_block_sizes():
    parts = list(enumerate_bipartite_partitions(range(2), range(4),
                                                FAMILY_SIZES_12_2))
    assert parts
    for part in parts:
        for i1, i2 in part.blocks:
            assert 1 <= len(i1) <= 2
            assert len(i2) == 2
