"""Rectangular matrices and vectors over an exact kernel ring.

The ring may be a FieldSpec, a SeriesRing, or any object exposing
`zero`, `one`, `from_int`, whose elements support exact +, -, *, inv().
All structural operators (sub-matrices with multiset rows, Hadamard
products and powers, Cauchy/Vandermonde constructors) live here, together
with the exact reference algorithms: determinant, two independent
permanent oracles, and the perfect-matching Pfaffian.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    CoincidentNodes,
    DivisionByZero,
    IndexOutOfRange,
    NotSkew,
    PrecisionExhausted,
    ShapeMismatch,
    TooLarge,
)
from .field import cube_root
from .series import SeriesRing


@dataclass(frozen=True)
class Vector:
    ring: object
    entries: tuple

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def sub(self, indices: Sequence[int]) -> "Vector":
        """Sub-vector by a (multi)set of 0-based indices, in the given order."""
        for i in indices:
            if not 0 <= i < self.dim:
                raise IndexOutOfRange(f"index {i} out of range for dim {self.dim}")
        return Vector(self.ring, tuple(self.entries[i] for i in indices))

    def complement(self, indices: Sequence[int]) -> "Vector":
        drop = set(indices)
        return Vector(self.ring, tuple(e for i, e in enumerate(self.entries) if i not in drop))

    def concat(self, other: "Vector") -> "Vector":
        return Vector(self.ring, self.entries + other.entries)

    def scale(self, c) -> "Vector":
        return Vector(self.ring, tuple(c * e for e in self.entries))

    def __add__(self, other):
        if self.dim != other.dim:
            raise ShapeMismatch("vector dims differ")
        return Vector(self.ring, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        if self.dim != other.dim:
            raise ShapeMismatch("vector dims differ")
        return Vector(self.ring, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return Vector(self.ring, tuple(-a for a in self.entries))


def vector(ring, entries) -> Vector:
    return Vector(ring, tuple(entries))


def const_vector(ring, n: int, value=None) -> Vector:
    v = ring.one if value is None else value
    return Vector(ring, (v,) * n)


def zero_vector(ring, n: int) -> Vector:
    return Vector(ring, (ring.zero,) * n)


@dataclass(frozen=True)
class Matrix:
    ring: object
    rows: int
    cols: int
    entries: tuple  # row-major

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch("entry count does not match shape")

    def entry(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return Vector(self.ring, self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> Vector:
        return Vector(self.ring, tuple(self.entry(i, j) for i in range(self.rows)))

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.cols, self.rows,
                      tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows)))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        """A^(I,J) with 0-based (multi)set indices."""
        for i in row_idx:
            if not 0 <= i < self.rows:
                raise IndexOutOfRange(f"row {i}")
        for j in col_idx:
            if not 0 <= j < self.cols:
                raise IndexOutOfRange(f"col {j}")
        ent = tuple(self.entry(i, j) for i in row_idx for j in col_idx)
        return Matrix(self.ring, len(row_idx), len(col_idx), ent)

    def map(self, f) -> "Matrix":
        return Matrix(self.ring, self.rows, self.cols, tuple(f(e) for e in self.entries))

    def __add__(self, other):
        self._same_shape(other)
        return Matrix(self.ring, self.rows, self.cols,
                      tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        self._same_shape(other)
        return Matrix(self.ring, self.rows, self.cols,
                      tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return self.map(lambda e: -e)

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch(f"{self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            for j in range(other.cols):
                acc = self.ring.zero
                for k in range(self.cols):
                    acc = acc + self.entry(i, k) * other.entry(k, j)
                out.append(acc)
        return Matrix(self.ring, self.rows, other.cols, tuple(out))

    def matvec(self, v: Vector) -> Vector:
        if self.cols != v.dim:
            raise ShapeMismatch("matvec shape")
        return Vector(self.ring, tuple(
            _dot(self.row(i).entries, v.entries, self.ring) for i in range(self.rows)))

    def scale(self, c) -> "Matrix":
        return self.map(lambda e: c * e)


def _dot(a, b, ring):
    acc = ring.zero
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def lift_matrix(a: Matrix, ring) -> Matrix:
    """Re-coefficient a matrix into a ring with a `lift` embedding (series
    or dual ring over the same base)."""
    return Matrix(ring, a.rows, a.cols, tuple(ring.lift(e) for e in a.entries))


def lift_vector(v: Vector, ring) -> Vector:
    return Vector(ring, tuple(ring.lift(e) for e in v.entries))


def matrix_from_rows(ring, rows) -> Matrix:
    rows = [tuple(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise ShapeMismatch("ragged rows")
    return Matrix(ring, len(rows), ncols, tuple(e for r in rows for e in r))


def identity(ring, n: int) -> Matrix:
    return Matrix(ring, n, n,
                  tuple(ring.one if i == j else ring.zero for i in range(n) for j in range(n)))


def zeros(ring, n: int, m: int) -> Matrix:
    return Matrix(ring, n, m, (ring.zero,) * (n * m))


def const_matrix(ring, n: int, m: int, value) -> Matrix:
    return Matrix(ring, n, m, (value,) * (n * m))


def diag(v: Vector) -> Matrix:
    n = v.dim
    return Matrix(v.ring, n, n,
                  tuple(v[i] if i == j else v.ring.zero for i in range(n) for j in range(n)))


def hconcat(*mats: Matrix) -> Matrix:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ShapeMismatch("hconcat row mismatch")
    out = []
    for i in range(rows):
        for m in mats:
            out.extend(m.row(i).entries)
    return Matrix(mats[0].ring, rows, sum(m.cols for m in mats), tuple(out))


def vconcat(*mats: Matrix) -> Matrix:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ShapeMismatch("vconcat col mismatch")
    return Matrix(mats[0].ring, sum(m.rows for m in mats), cols,
                  tuple(e for m in mats for e in m.entries))


def sign_matrix(ring, n: int) -> Matrix:
    """{sign(i - j)}_{n x n} with sign values taken into the ring (-1 = 2)."""
    ent = []
    for i in range(n):
        for j in range(n):
            s = (i > j) - (i < j)
            ent.append(ring.from_int(s))
    return Matrix(ring, n, n, tuple(ent))


def delta(u: int) -> int:
    return 1 if u == 0 else 0


def hadamard(a: Matrix, b: Matrix) -> Matrix:
    a._same_shape(b)
    return Matrix(a.ring, a.rows, a.cols,
                  tuple(x * y for x, y in zip(a.entries, b.entries)))


CUBE_ROOT_POWER = "1/3"


def _entry_pow(e, h, ring):
    if h == CUBE_ROOT_POWER:
        if isinstance(ring, SeriesRing):
            raise ShapeMismatch("Hadamard power 1/3 is only defined over a field")
        return cube_root(e)
    if h < 0 and e.is_zero():
        raise DivisionByZero("negative Hadamard power of a zero entry")
    return e**h


def hadamard_pow(a: Matrix, h) -> Matrix:
    """A^{.h}: entrywise power. h may be an integer, the cube-root marker
    "1/3", or a sequence of such (the vector-degree: the powers stacked
    vertically)."""
    if isinstance(h, (list, tuple)):
        return vconcat(*[hadamard_pow(a, hk) for hk in h])
    return a.map(lambda e: _entry_pow(e, h, a.ring))


def scal(a: Matrix):
    """Sum over columns of the product of the column's entries."""
    acc = a.ring.zero
    for j in range(a.cols):
        p = a.ring.one
        for i in range(a.rows):
            p = p * a.entry(i, j)
        acc = acc + p
    return acc


# ---------------------------------------------------------------------------
# classical constructors


def cauchy_matrix(x: Vector, y: Vector) -> Matrix:
    ent = []
    for i, xi in enumerate(x):
        for j, yj in enumerate(y):
            d = xi - yj
            if d.is_zero():
                raise CoincidentNodes(f"x[{i}] == y[{j}]")
            ent.append(d.inv())
    return Matrix(x.ring, x.dim, y.dim, tuple(ent))


def vandermonde(t: Vector, h: int | None = None) -> Matrix:
    """Van^[h](t): h x dim(t), row k holds t^k for k = 0..h-1."""
    if h is None:
        h = t.dim
    ring = t.ring
    rows = []
    p = [ring.one] * t.dim
    for _ in range(h):
        rows.append(tuple(p))
        p = [pi * ti for pi, ti in zip(p, t)]
    return Matrix(ring, h, t.dim, tuple(e for r in rows for e in r))


def vandermonde_derivative(t: Vector, h: int) -> Matrix:
    """d/dt_j applied to column j of Van^[h](t): row k becomes k t^(k-1)."""
    ring = t.ring
    rows = []
    p = [ring.one] * t.dim
    for k in range(h):
        kf = ring.from_int(k)
        if k == 0:
            rows.append(tuple(ring.zero for _ in range(t.dim)))
        else:
            rows.append(tuple(kf * pi for pi in p))
            p = [pi * ti for pi, ti in zip(p, t)]
    return Matrix(ring, h, t.dim, tuple(e for r in rows for e in r))


def w_matrix(t: Vector) -> Matrix:
    d = t.dim
    if d % 2 == 0:
        half = vandermonde(t, d // 2)
        return vconcat(half, half)
    return vconcat(vandermonde(t, (d - 1) // 2), vandermonde(t, (d + 1) // 2))


def pol(u: Vector, v: Vector):
    acc = u.ring.one
    for ui in u:
        for vj in v:
            acc = acc * (ui - vj)
    return acc


def pol_d1(tau, v: Vector):
    """d/dtau of prod_j (tau - v_j), evaluated at tau."""
    acc = v.ring.zero
    for k in range(v.dim):
        p = v.ring.one
        for j in range(v.dim):
            if j != k:
                p = p * (tau - v[j])
        acc = acc + p
    return acc


def pol_d2(tau, v: Vector):
    """Second formal derivative of prod_j (tau - v_j) at tau."""
    acc = v.ring.zero
    for k in range(v.dim):
        for l in range(v.dim):
            if k == l:
                continue
            p = v.ring.one
            for j in range(v.dim):
                if j != k and j != l:
                    p = p * (tau - v[j])
            acc = acc + p
    return acc


# ---------------------------------------------------------------------------
# determinant / permanent / Pfaffian


def det(a: Matrix):
    if a.rows != a.cols:
        raise ShapeMismatch("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return a.ring.one
    if isinstance(a.ring, SeriesRing) and n <= 8:
        return _det_leibniz(a)
    return _det_eliminate(a)


def _det_leibniz(a: Matrix):
    n = a.rows
    acc = a.ring.zero
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        p = a.ring.one
        zero = False
        for i, j in enumerate(perm):
            e = a.entry(i, j)
            if e.is_zero():
                zero = True
                break
            p = p * e
        if zero:
            continue
        acc = acc + p if sign > 0 else acc - p
    return acc


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, clen = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def _certainly_zero(e) -> bool:
    if hasattr(e, "trunc"):
        return e.is_zero() and e.trunc == math.inf
    return e.is_zero()


def _det_eliminate(a: Matrix):
    n = a.rows
    ring = a.ring
    rows = [list(a.row(i).entries) for i in range(n)]
    sign = 1
    acc = ring.one
    for k in range(n):
        piv = None
        for i in range(k, n):
            e = rows[i][k]
            if not e.is_zero():
                piv = i
                break
            if not _certainly_zero(e):
                raise PrecisionExhausted("pivot of unknown order in series elimination")
        if piv is None:
            return ring.zero
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        pivot = rows[k][k]
        acc = acc * pivot
        inv_p = pivot.inv()
        for i in range(k + 1, n):
            f = rows[i][k] * inv_p
            if f.is_zero():
                continue
            for j in range(k, n):
                rows[i][j] = rows[i][j] - f * rows[k][j]
    return acc if sign > 0 else -acc


_NAIVE_PER_MAX = 9


def permanent_naive(a: Matrix):
    """Sum over injective row->column maps of the entry products (n <= m)."""
    n, m = a.rows, a.cols
    if n > m:
        raise ShapeMismatch("permanent_naive requires rows <= cols")
    if m > _NAIVE_PER_MAX:
        raise TooLarge(f"naive permanent guard: cols {m} > {_NAIVE_PER_MAX}")
    if n == 0:
        return a.ring.one
    ring = a.ring
    acc = [ring.zero]

    free = [True] * m

    def rec(i, prod):
        if i == n:
            acc[0] = acc[0] + prod
            return
        base = i * m
        for j in range(m):
            if free[j]:
                e = a.entries[base + j]
                if e.is_zero():
                    continue
                free[j] = False
                rec(i + 1, prod * e)
                free[j] = True

    rec(0, ring.one)
    return acc[0]


_RYSER_MAX = 20


def permanent_ryser(a: Matrix):
    """Ryser inclusion-exclusion permanent for a square matrix."""
    if a.rows != a.cols:
        raise ShapeMismatch("Ryser permanent needs a square matrix")
    n = a.rows
    if n > _RYSER_MAX:
        raise TooLarge(f"Ryser guard: n {n} > {_RYSER_MAX}")
    if n == 0:
        return a.ring.one
    ring = a.ring
    minus_one = ring.from_int(-1)
    rowsums = [ring.zero] * n
    total = ring.zero
    prev = 0
    # Gray-code walk over nonempty column subsets
    for g in range(1, 1 << n):
        gray = g ^ (g >> 1)
        diff = gray ^ prev
        j = diff.bit_length() - 1
        col = [a.entry(i, j) for i in range(n)]
        if gray & diff:
            rowsums = [r + c for r, c in zip(rowsums, col)]
        else:
            rowsums = [r - c for r, c in zip(rowsums, col)]
        prev = gray
        p = ring.one
        for r in rowsums:
            p = p * r
        k = gray.bit_count()
        if (n - k) % 2 == 1:
            p = minus_one * p
        total = total + p
    return total


_PFAFFIAN_MAX = 10


def pfaffian(a: Matrix):
    """Perfect-matching Pfaffian of a skew-symmetric matrix with zero
    diagonal (2k <= 10)."""
    if a.rows != a.cols:
        raise ShapeMismatch("Pfaffian needs a square matrix")
    n = a.rows
    if n % 2 == 1:
        raise NotSkew("Pfaffian needs even dimension")
    if n > _PFAFFIAN_MAX:
        raise TooLarge(f"Pfaffian guard: n {n} > {_PFAFFIAN_MAX}")
    for i in range(n):
        if not a.entry(i, i).is_zero():
            raise NotSkew("nonzero diagonal")
        for j in range(i + 1, n):
            if a.entry(i, j) != -a.entry(j, i):
                raise NotSkew(f"A[{i}][{j}] != -A[{j}][{i}]")
    return _pf_rec(a, list(range(n)))


def _pf_rec(a: Matrix, idx):
    if not idx:
        return a.ring.one
    i = idx[0]
    rest = idx[1:]
    acc = a.ring.zero
    for pos, j in enumerate(rest):
        e = a.entry(i, j)
        if e.is_zero():
            continue
        term = e * _pf_rec(a, rest[:pos] + rest[pos + 1:])
        acc = acc + term if pos % 2 == 0 else acc - term
    return acc


_HATTED_MAX_SUBSETS = 10**6


def hatted_det(a: Matrix):
    """Sum of all maximal minors det(A^(N,J)), |J| = rows."""
    return _hatted(a, det)


def hatted_per(a: Matrix):
    return _hatted(a, permanent_naive)


def _hatted(a: Matrix, minor_fn):
    n, m = a.rows, a.cols
    if n > m:
        raise ShapeMismatch("hatted operator requires rows <= cols")
    if math.comb(m, n) > _HATTED_MAX_SUBSETS:
        raise TooLarge("hatted operator subset budget exceeded")
    acc = a.ring.zero
    rows_idx = list(range(n))
    for cols_idx in itertools.combinations(range(m), n):
        acc = acc + minor_fn(a.submatrix(rows_idx, list(cols_idx)))
    return acc


# ---------------------------------------------------------------------------
# exact linear solving over a field


def _eliminate_rows(a: Matrix, b: Vector | None):
    """Row-reduce [A | b] over a field; returns (rows, rhs, pivot cols)."""
    ring = a.ring
    rows = [list(a.row(i).entries) for i in range(a.rows)]
    rhs = list(b.entries) if b is not None else [ring.zero] * a.rows
    pivots = []
    r = 0
    for c in range(a.cols):
        piv = next((i for i in range(r, a.rows) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rhs[r], rhs[piv] = rhs[piv], rhs[r]
        inv_p = rows[r][c].inv()
        rows[r] = [e * inv_p for e in rows[r]]
        rhs[r] = rhs[r] * inv_p
        for i in range(a.rows):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [e - f * p for e, p in zip(rows[i], rows[r])]
                rhs[i] = rhs[i] - f * rhs[r]
        pivots.append(c)
        r += 1
        if r == a.rows:
            break
    return rows, rhs, pivots


def rank(a: Matrix) -> int:
    return len(_eliminate_rows(a, None)[2])


def linear_solve_affine(a: Matrix, b: Vector):
    """All solutions of A x = b over a field: returns (particular solution,
    nullspace basis). Raises SingularSystem when inconsistent."""
    from .errors import SingularSystem

    ring = a.ring
    rows, rhs, pivots = _eliminate_rows(a, b)
    r = len(pivots)
    for i in range(r, a.rows):
        if not rhs[i].is_zero():
            raise SingularSystem("inconsistent linear system")
    x = [ring.zero] * a.cols
    for i, c in enumerate(pivots):
        x[c] = rhs[i]
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ring.zero] * a.cols
        v[fc] = ring.one
        for i, c in enumerate(pivots):
            v[c] = -rows[i][fc]
        basis.append(Vector(ring, tuple(v)))
    return Vector(ring, tuple(x)), basis


def solve_linear(a: Matrix, b: Vector) -> Vector:
    """Unique solution of a square nonsingular system."""
    from .errors import SingularSystem

    if a.rows != a.cols:
        raise ShapeMismatch("solve_linear needs a square matrix")
    part, basis = linear_solve_affine(a, b)
    if basis:
        raise SingularSystem("singular square system")
    return part


# ---------------------------------------------------------------------------
# matrix file format (exact text entries, used by the CLI)


def matrix_to_record(a: Matrix) -> dict:
    from .field import FieldSpec

    if not isinstance(a.ring, FieldSpec):
        raise ShapeMismatch("only field matrices serialize to records")
    return {
        "field": a.ring.text(),
        "rows": a.rows,
        "cols": a.cols,
        "entries": [e.text() for e in a.entries],
    }


def matrix_from_record(rec: dict) -> Matrix:
    from .field import FieldSpec, parse_element

    spec = FieldSpec.parse(rec["field"])
    entries = tuple(parse_element(spec, s) for s in rec["entries"])
    return Matrix(spec, rec["rows"], rec["cols"], entries)
