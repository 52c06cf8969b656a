"""Cauchy extension matrices, extension-plane algebra, and E-sum evaluation.

An extension-degree attaches to a node value a list of left (row) derivative
orders and right (column) derivative orders. The extension matrix has one
row per left order and one column per right order; its entries are the
normalized mixed derivatives of 1/(a_i - a_j), taken in closed form with the
binomial coefficient reduced mod 3 by Lucas' theorem (so no factorial
denominators are ever materialized). An E-sum sums weighted permanents of
extension matrices over all choices of degrees from each node's plane,
keeping only balanced (square) choices.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import CoincidentValues, TooLarge
from .linalg import Matrix, Vector, permanent_naive

DEFAULT_ESUM_BUDGET = 100_000


@dataclass(frozen=True)
class ExtensionDegree:
    left: tuple  # non-decreasing derivative orders (row block)
    right: tuple  # non-decreasing derivative orders (column block)

    def __post_init__(self):
        for part in (self.left, self.right):
            if any(k < 0 for k in part) or list(part) != sorted(part):
                raise ValueError("degree orders must be non-decreasing and >= 0")

    @property
    def height(self) -> int:
        return len(self.left)

    @property
    def width(self) -> int:
        return len(self.right)

    @property
    def bal(self) -> int:
        return self.height - self.width


def degree(left, right) -> ExtensionDegree:
    """left/right: None for empty, an int for a single order, or a sequence."""

    def norm(part):
        if part is None:
            return ()
        if isinstance(part, int):
            return (part,)
        return tuple(part)

    return ExtensionDegree(norm(left), norm(right))


EMPTY_DEGREE = degree(None, None)
WAVE_DEGREE = degree(0, 0)


@dataclass(frozen=True)
class ExtensionPlane:
    """A formal weighted sum of extension-degrees (weights in the kernel
    ring; distinct degrees)."""

    terms: tuple  # ((ExtensionDegree, weight), ...)

    def __post_init__(self):
        degs = [d for d, _ in self.terms]
        if len(set(degs)) != len(degs):
            raise ValueError("duplicate degree in plane")

    def __add__(self, other: "ExtensionPlane") -> "ExtensionPlane":
        acc = dict(self.terms)
        for d, w in other.terms:
            acc[d] = acc[d] + w if d in acc else w
        return ExtensionPlane(tuple((d, w) for d, w in acc.items() if not w.is_zero()))

    def scale(self, c) -> "ExtensionPlane":
        return ExtensionPlane(tuple((d, c * w) for d, w in self.terms if not (c * w).is_zero()))


def plane(*terms) -> ExtensionPlane:
    return ExtensionPlane(tuple(terms))


def wave_plane(ring, weight=None) -> ExtensionPlane:
    w = ring.one if weight is None else weight
    return plane((WAVE_DEGREE, w))


def bare_plane(ring, weight=None) -> ExtensionPlane:
    w = ring.one if weight is None else weight
    return plane((EMPTY_DEGREE, w))


def biwave_plane(ring) -> ExtensionPlane:
    """Theta = <<0,0>,<0,0>> + (0,1) - (1,0)."""
    return plane(
        (degree((0, 0), (0, 0)), ring.one),
        (degree(0, 1), ring.one),
        (degree(1, 0), -ring.one),
    )


@dataclass(frozen=True)
class VectorVariety:
    values: Vector
    planes: tuple  # ExtensionPlane per value

    def __post_init__(self):
        if self.values.dim != len(self.planes):
            raise ValueError("values and planes dimension mismatch")


def binom_mod3(n: int, k: int) -> int:
    """binom(n, k) mod 3 via Lucas' theorem."""
    if k < 0 or k > n:
        return 0
    r = 1
    while n or k:
        ni, ki = n % 3, k % 3
        if ki > ni:
            return 0
        r = (r * math.comb(ni, ki)) % 3
        n //= 3
        k //= 3
    return r


def _exactly_zero(e) -> bool:
    if hasattr(e, "trunc"):
        return e.is_zero() and e.trunc == math.inf
    return e.is_zero()


def extension_matrix(a: Vector, phi: Sequence[ExtensionDegree]) -> Matrix:
    """E(a, phi): row block i has a row per left order of phi_i, column
    block j a column per right order of phi_j. The ((i,k),(j,l)) entry is 0
    on the block diagonal and otherwise
    (-1)^f binom(f+s, f) (a_i - a_j)^{-(f+s+1)} for f = left order, s =
    right order."""
    if a.dim != len(phi):
        raise ValueError("value/degree dimension mismatch")
    ring = a.ring
    row_blocks = [(i, f) for i, d in enumerate(phi) for f in d.left]
    col_blocks = [(j, s) for j, d in enumerate(phi) for s in d.right]
    ent = []
    inv_cache: dict = {}
    for i, f in row_blocks:
        for j, s in col_blocks:
            if i == j:
                ent.append(ring.zero)
                continue
            c = binom_mod3(f + s, f)
            if f % 2 == 1:
                c = (-c) % 3
            if c == 0:
                ent.append(ring.zero)
                continue
            key = (i, j)
            if key not in inv_cache:
                d = a[i] - a[j]
                if _exactly_zero(d):
                    raise CoincidentValues(f"a[{i}] == a[{j}]")
                inv_cache[key] = d.inv()
            e = inv_cache[key] ** (f + s + 1)
            if c == 2:
                e = -e
            ent.append(e)
    return Matrix(ring, len(row_blocks), len(col_blocks), tuple(ent))


def c_tilde(x: Vector, y: Vector, z: Vector) -> Matrix:
    """C~(x, y, z): rows from x and z, columns from y and z, zero diagonal
    on the z block."""
    values = x.concat(y).concat(z)
    phi = ([degree(0, None)] * x.dim + [degree(None, 0)] * y.dim
           + [WAVE_DEGREE] * z.dim)
    return extension_matrix(values, phi)


def c_tilde_diag(z: Vector) -> Matrix:
    return extension_matrix(z, [WAVE_DEGREE] * z.dim)


def esum_evaluate(v: VectorVariety, budget: int = DEFAULT_ESUM_BUDGET):
    """Sum over all degree choices (one term per plane) of
    (product of weights) * per(E(a, phi)), restricted to balanced choices."""
    ring = v.values.ring
    n = v.values.dim
    term_lists = [p.terms for p in v.planes]
    size = 1
    for t in term_lists:
        if not t:
            return ring.zero
        size *= len(t)
    if size > budget:
        raise TooLarge(f"esum enumeration {size} exceeds budget {budget}")
    # suffix balance ranges for pruning
    min_suf = [0] * (n + 1)
    max_suf = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        bals = [d.bal for d, _ in term_lists[i]]
        min_suf[i] = min_suf[i + 1] + min(bals)
        max_suf[i] = max_suf[i + 1] + max(bals)

    total = ring.zero
    chosen: list[ExtensionDegree] = [EMPTY_DEGREE] * n

    def rec(i: int, bal: int, weight):
        nonlocal total
        if bal + min_suf[i] > 0 or bal + max_suf[i] < 0:
            return
        if i == n:
            e = extension_matrix(v.values, chosen)
            total = total + weight * permanent_naive(e)
            return
        for d, w in term_lists[i]:
            chosen[i] = d
            rec(i + 1, bal + d.bal, weight * w)
        chosen[i] = EMPTY_DEGREE

    rec(0, 0, ring.one)
    return total


def left_prolonged(ring, lam) -> ExtensionPlane:
    """(empty,empty) + lambda (0,empty)."""
    return bare_plane(ring) + plane((degree(0, None), lam)) if not lam.is_zero() else bare_plane(ring)


def right_prolonged(ring, lam) -> ExtensionPlane:
    return bare_plane(ring) + plane((degree(None, 0), lam)) if not lam.is_zero() else bare_plane(ring)


def prolongation_extend(v: VectorVariety, side: str, gamma: Vector, lam: Sequence) -> VectorVariety:
    """The defining extension of the prolongation-derivative operator:
    append the gamma nodes with planes (empty,empty) + lambda_i (1,empty)
    (left) or (empty,empty) + lambda_i (empty,1) (right)."""
    ring = v.values.ring
    deg = degree(1, None) if side == "left" else degree(None, 1)
    new_planes = []
    for li in lam:
        p = bare_plane(ring)
        if not li.is_zero():
            p = p + plane((deg, li))
        new_planes.append(p)
    return VectorVariety(v.values.concat(gamma), v.planes + tuple(new_planes))


def prolongation_derivative_check(v: VectorVariety, side: str, gamma: Vector,
                                  lam: Sequence, budget: int = DEFAULT_ESUM_BUDGET) -> dict:
    """Two-path evaluation of the operator's defining E-sum: the extended
    variety evaluated directly, against its multilinear expansion over the
    appended planes (each appended node either absent or carrying its bare
    derivative degree, weighted by lambda). Also reports the lambda = 0
    degeneration, which must equal the E-sum of the original variety."""
    ring = v.values.ring
    extended = prolongation_extend(v, side, gamma, lam)
    direct = esum_evaluate(extended, budget)

    deg = degree(1, None) if side == "left" else degree(None, 1)
    expanded = ring.zero
    idx = list(range(gamma.dim))
    for r in range(len(idx) + 1):
        for subset in itertools.combinations(idx, r):
            w = ring.one
            ok = True
            planes = list(v.planes)
            for i in idx:
                if i in subset:
                    if lam[i].is_zero():
                        ok = False
                        break
                    w = w * lam[i]
                    planes.append(plane((deg, ring.one)))
                else:
                    planes.append(bare_plane(ring))
            if not ok:
                continue
            expanded = expanded + w * esum_evaluate(
                VectorVariety(v.values.concat(gamma), tuple(planes)), budget)

    zero_lam = prolongation_extend(v, side, gamma, [ring.zero] * gamma.dim)
    base = esum_evaluate(v, budget)
    zero_val = esum_evaluate(zero_lam, budget)
    return {
        "extended": direct,
        "expanded": expanded,
        "match": direct == expanded,
        "lambda_zero_equals_base": zero_val == base,
    }
