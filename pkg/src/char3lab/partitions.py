"""Streaming enumerators for the partition families the permanent
expansions quantify over.

All enumerators are generators with deterministic output order: blocks are
listed by their minimal element (the order in which the restricted-growth
recursion creates them), and never materialize the whole family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import TooLarge

GROUND_SET_CAP = 12

FAMILY_ALL = "all"
FAMILY_MAXBLOCK3 = "maxblock3"
FAMILY_PERFECT_MATCHING = "perfect_matching"

FAMILY_SIZES_12_2 = "sizes_12_2"
FAMILY_SIZES_12_GE1 = "sizes_12_ge1"


@dataclass(frozen=True)
class Partition:
    """blocks: tuple of blocks; a block is a tuple of indices, or for the
    bipartite families a pair (left part, right part) of tuples."""

    blocks: tuple

    def __iter__(self):
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)


_MAX_BLOCK = {FAMILY_ALL: None, FAMILY_MAXBLOCK3: 3, FAMILY_PERFECT_MATCHING: 2}


def enumerate_partitions(ground: Iterable[int], family: str = FAMILY_ALL) -> Iterator[Partition]:
    items = sorted(ground)
    if len(items) > GROUND_SET_CAP:
        raise TooLarge(f"ground set of {len(items)} exceeds cap {GROUND_SET_CAP}")
    if family not in _MAX_BLOCK:
        raise ValueError(f"unknown partition family {family!r}")
    exact_pairs = family == FAMILY_PERFECT_MATCHING
    if exact_pairs and len(items) % 2 == 1:
        return
    max_block = _MAX_BLOCK[family]
    n = len(items)

    blocks: list[list[int]] = []

    def rec(i: int) -> Iterator[Partition]:
        if i == n:
            if not exact_pairs or all(len(b) == 2 for b in blocks):
                yield Partition(tuple(tuple(b) for b in blocks))
            return
        x = items[i]
        for b in blocks:
            if max_block is not None and len(b) >= max_block:
                continue
            b.append(x)
            yield from rec(i + 1)
            b.pop()
        blocks.append([x])
        yield from rec(i + 1)
        blocks.pop()

    yield from rec(0)


def enumerate_bipartite_partitions(left: Iterable[int], right: Iterable[int],
                                   family: str) -> Iterator[Partition]:
    """Partitions of left ∪ right into blocks (I′, I″) with 1 ≤ |I′| ≤ 2 and,
    per family, |I″| = 2 or |I″| ≥ 1."""
    l_items = tuple(sorted(left))
    r_items = tuple(sorted(right))
    if len(l_items) + len(r_items) > GROUND_SET_CAP:
        raise TooLarge("bipartite ground set exceeds cap")
    if family not in (FAMILY_SIZES_12_2, FAMILY_SIZES_12_GE1):
        raise ValueError(f"unknown bipartite family {family!r}")
    fixed_two = family == FAMILY_SIZES_12_2

    acc: list[tuple] = []

    def rec(rem_l: tuple, rem_r: tuple) -> Iterator[Partition]:
        if not rem_l:
            if not rem_r:
                yield Partition(tuple(acc))
            return
        a = rem_l[0]
        for extra in itertools.chain([()], ((x,) for x in rem_l[1:])):
            i1 = (a,) + extra
            rest_l = tuple(x for x in rem_l if x not in i1)
            if fixed_two:
                sizes: Iterable[int] = (2,)
            else:
                sizes = range(1, len(rem_r) + 1)
            for s in sizes:
                if s > len(rem_r):
                    continue
                for i2 in itertools.combinations(rem_r, s):
                    drop = set(i2)
                    rest_r = tuple(y for y in rem_r if y not in drop)
                    acc.append((i1, i2))
                    yield from rec(rest_l, rest_r)
                    acc.pop()

    yield from rec(l_items, r_items)


def subsets_k(ground: Iterable[int], k: int) -> Iterator[tuple]:
    items = tuple(sorted(ground))
    if not 0 <= k <= len(items):
        raise ValueError(f"subset size {k} out of range for |S| = {len(items)}")
    yield from itertools.combinations(items, k)


def nested_pairs(ground: Iterable[int], p: int, q: int) -> Iterator[tuple]:
    """All pairs (I, J) with J ⊆ I ⊆ ground, |I| = p, |J| = q."""
    if q > p:
        raise ValueError("inner size exceeds outer size")
    for big in subsets_k(ground, p):
        for small in itertools.combinations(big, q):
            yield big, small
