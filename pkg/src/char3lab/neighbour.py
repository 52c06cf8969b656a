"""Neighbouring computation: exact forward-mode derivatives over a
nilpotent extension, polynomial extrapolation through a formal
infinitesimal, the bearing-point region search, and the engine that
evaluates a polynomial off-region by solving the order-by-order linear
systems from a certified bearing point.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

from .errors import (
    DivisionByZero,
    NotFound,
    PoleAtPoint,
    PrecisionExhausted,
    RegionViolation,
    SingularJacobian,
)
from .field import FieldSpec, parse_element
from .linalg import (
    Matrix,
    Vector,
    cauchy_matrix,
    det,
    linear_solve_affine,
    matrix_from_rows,
    rank,
    solve_linear,
    vector,
)
from .series import SeriesRing


def search_budget(default: int = 200_000) -> int:
    raw = os.environ.get("CHAR3_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return default


# ---------------------------------------------------------------------------
# first-order nilpotent (dual) arithmetic for exact Jacobians


@dataclass(frozen=True)
class DualRing:
    base: object
    ndirs: int

    @property
    def zero(self):
        return DualElement(self, self.base.zero, (self.base.zero,) * self.ndirs)

    @property
    def one(self):
        return self.lift(self.base.one)

    def from_int(self, n: int):
        return self.lift(self.base.from_int(n))

    def lift(self, c):
        return DualElement(self, c, (self.base.zero,) * self.ndirs)

    def seed(self, c, direction: int):
        parts = [self.base.zero] * self.ndirs
        parts[direction] = self.base.one
        return DualElement(self, c, tuple(parts))


@dataclass(frozen=True)
class DualElement:
    ring: DualRing
    const: object
    partials: tuple

    def is_zero(self) -> bool:
        return self.const.is_zero() and all(p.is_zero() for p in self.partials)

    def __add__(self, other):
        return DualElement(self.ring, self.const + other.const,
                           tuple(a + b for a, b in zip(self.partials, other.partials)))

    def __neg__(self):
        return DualElement(self.ring, -self.const, tuple(-p for p in self.partials))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return DualElement(
            self.ring, self.const * other.const,
            tuple(self.const * q + p * other.const
                  for p, q in zip(self.partials, other.partials)))

    def inv(self):
        if self.const.is_zero():
            raise DivisionByZero("dual inverse with zero constant part")
        c_inv = self.const.inv()
        c_inv2 = c_inv * c_inv
        return DualElement(self.ring, c_inv, tuple(-(c_inv2 * p) for p in self.partials))

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def jacobian(f_eval: Callable[[Vector], Vector], x0: Vector) -> Matrix:
    """Exact Jacobian of f at x0 by one multi-direction dual evaluation."""
    n = x0.dim
    ring = DualRing(x0.ring, n)
    seeded = Vector(ring, tuple(ring.seed(x0[i], i) for i in range(n)))
    try:
        out = f_eval(seeded)
    except DivisionByZero as exc:
        raise PoleAtPoint(str(exc)) from exc
    return matrix_from_rows(x0.ring, [list(o.partials) for o in out])


# ---------------------------------------------------------------------------
# Lemma-style polynomial extrapolation


def poly_extrapolate(f, d: int, x: Vector, chi: Vector, budget: int | None = None):
    """sum_{i=0}^{d} coef_{eps^i} f(x + eps (chi - x)); equals f(chi) when
    deg f <= d."""
    base = x.ring
    ring = SeriesRing(base, budget if budget is not None else max(2 * d + 4, 24))
    args = []
    for xi, ci in zip(x, chi):
        s = ring.lift(xi) + ring.eps(1, ci - xi)
        args.append(s)
    val = f(Vector(ring, tuple(args)))
    total = base.zero
    for i in range(d + 1):
        total = total + val.coef(i)
    return total


# ---------------------------------------------------------------------------
# the engine


@dataclass(frozen=True)
class ParameterizedSystem:
    u_eval: Callable[[Vector], Vector]
    v_eval: Callable[[Vector], Vector]
    dim_u: int
    dim_v: int

    @property
    def dim_h(self) -> int:
        return self.dim_u + self.dim_v

    def joint(self, h: Vector) -> Vector:
        u = self.u_eval(h)
        v = self.v_eval(h)
        return u.concat(v)


@dataclass(frozen=True)
class BearingPoint:
    h0: Vector
    v_residual: tuple  # v(h0), must be all-zero
    jacobian_rank: int
    extras: dict = dc_field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return all(e.is_zero() for e in self.v_residual)

    def to_record(self) -> dict:
        spec = self.h0.ring
        rec = {
            "field": spec.text(),
            "h0": [e.text() for e in self.h0],
            "v_residual": [e.text() for e in self.v_residual],
            "jacobian_rank": self.jacobian_rank,
            "extras": {k: ([e.text() for e in v] if isinstance(v, (list, tuple))
                           else v.text() if hasattr(v, "text") else v)
                       for k, v in self.extras.items()},
        }
        return rec


def neighbouring_compute(sys: ParameterizedSystem, f, d: int,
                         bearing: BearingPoint, target: Vector,
                         budget: int | None = None):
    """Evaluate the degree-<= d polynomial f at the target u-vector by the
    order-by-order expansion from the bearing point. Returns (value, trace)."""
    base = target.ring
    h0 = bearing.h0
    v0 = sys.v_eval(h0)
    if not all(e.is_zero() for e in v0):
        raise RegionViolation("bearing point violates region constraints")
    jac = jacobian(sys.joint, h0)
    if jac.rows != jac.cols:
        raise SingularJacobian(f"joint Jacobian is {jac.rows}x{jac.cols}, not square")
    if det(jac).is_zero():
        raise SingularJacobian("joint Jacobian singular at bearing point")

    u0 = sys.u_eval(h0)
    # desired u-series: u0 + eps (target - u0), zero in the v block
    h_coeffs = [list(h0.entries)]  # h^{[k]} vectors, k = 0..d
    trace_steps = []
    series_budget = budget if budget is not None else max(2 * d + 4, 24)
    for k in range(1, d + 1):
        ring = SeriesRing(base, series_budget)
        partial = []
        for j in range(sys.dim_h):
            coeffs = {i: h_coeffs[i][j] for i in range(k) if not h_coeffs[i][j].is_zero()}
            partial.append(ring.series(coeffs, float("inf")))
        gh = sys.joint(Vector(ring, tuple(partial)))
        rhs_entries = []
        for j in range(sys.dim_h):
            want = base.zero
            if j < sys.dim_u:
                if k == 1:
                    want = target[j] - u0[j]
            rhs_entries.append(want - gh[j].coef(k))
        hk = solve_linear(jac, Vector(base, tuple(rhs_entries)))
        h_coeffs.append(list(hk.entries))
        trace_steps.append([e.text() for e in hk])

    ring = SeriesRing(base, series_budget)
    h_series = []
    for j in range(sys.dim_h):
        coeffs = {i: h_coeffs[i][j] for i in range(d + 1) if not h_coeffs[i][j].is_zero()}
        h_series.append(ring.series(coeffs, float("inf")))
    u_series = sys.u_eval(Vector(ring, tuple(h_series)))
    val = f(u_series)
    total = base.zero
    for i in range(d + 1):
        total = total + val.coef(i)
    trace = {
        "degree": d,
        "series_budget": series_budget,
        "h_steps": trace_steps,
        "u_at_bearing": [e.text() for e in u0],
    }
    return total, trace


# ---------------------------------------------------------------------------
# the bearing region: wave constraint plus lambda moment constraints


def wave_residual(x: Vector, y: Vector) -> Vector:
    """C~(x) 1_n + C(x, y) 1_2n (row sums of the zero-diagonal Cauchy matrix
    of x plus row sums of C(x, y))."""
    ring = x.ring
    out = []
    for i in range(x.dim):
        acc = ring.zero
        for j in range(x.dim):
            if j != i:
                acc = acc + (x[i] - x[j]).inv()
        for k in range(y.dim):
            acc = acc + (x[i] - y[k]).inv()
        out.append(acc)
    return Vector(ring, tuple(out))


def moment_residual(x: Vector, y: Vector, lam: Vector, mu: object, s: int) -> Vector:
    """C(x, y) lambda^{.s} - mu 1_n."""
    c = cauchy_matrix(x, y)
    powered = Vector(lam.ring, tuple(e**s for e in lam))
    mv = c.matvec(powered)
    return Vector(x.ring, tuple(e - mu for e in mv))


def region_residual(x: Vector, y: Vector, lam: Vector, mu2, mu3) -> Vector:
    return (wave_residual(x, y)
            .concat(moment_residual(x, y, lam, mu2, 2))
            .concat(moment_residual(x, y, lam, mu3, 3)))


def _distinct_sample(spec: FieldSpec, k: int, rng, avoid=()):
    seen = {a.coeffs for a in avoid}
    out = []
    tries = 0
    while len(out) < k:
        tries += 1
        if tries > 50 * (k + 1) * spec.order:
            raise NotFound("could not sample distinct nodes")
        v = spec.random(rng)
        if v.coeffs not in seen:
            seen.add(v.coeffs)
            out.append(v)
    return out


def _monic_roots(spec: FieldSpec, coeffs: Sequence) -> list | None:
    """All roots (with multiplicity check) of the monic polynomial with the
    given low-to-high coefficients, by exhaustive scan; None unless it
    splits into distinct roots."""
    deg = len(coeffs) - 1
    roots = []
    for cand in spec.elements():
        acc = spec.zero
        p = spec.one
        for c in coeffs:
            acc = acc + c * p
            p = p * cand
        if acc.is_zero():
            roots.append(cand)
    if len(roots) != deg:
        return None
    return roots


def _gf3_nullspace(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Nullspace basis of an integer-mod-3 matrix."""
    mat = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] % 3), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 if mat[r][c] % 3 == 1 else 2
        mat[r] = [(e * inv) % 3 for e in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] % 3:
                f = mat[i][c] % 3
                mat[i] = [(e - f * p) % 3 for e, p in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, c in enumerate(pivots):
            v[c] = (-mat[i][fc]) % 3
        basis.append(v)
    return basis


def bearing_search(n: int, m: int, spec: FieldSpec, strategy: str = "random",
                   seed: int = 0, budget: int | None = None) -> BearingPoint:
    """Search for a region point (x, y, lambda, mu2, mu3):
    wave constraint solved linearly for the monic polynomial with root
    multiset y, cube-moment constraint solved as a GF(3)-linear subspace in
    lambda (cubing is Frobenius-linear), square-moment constraint satisfied
    by rejection sampling inside that subspace."""
    import random as _random

    if spec.order <= 3 * n + m:
        raise NotFound(f"field of order {spec.order} too small for n={n}, m={m}")
    budget = budget if budget is not None else search_budget()
    rng = _random.Random(seed)
    q = spec.q
    attempts = 0
    x_attempts = 0
    while attempts < budget:
        x_attempts += 1
        if x_attempts > 1000:
            break
        if strategy == "structured":
            # deterministic scan: consecutive powers of the generator offset by attempt
            gen = spec.generator_poly()
            base = gen ** x_attempts
            xs = []
            cur = base
            while len(xs) < n:
                cur = cur * gen + spec.one
                if all(cur != e for e in xs):
                    xs.append(cur)
        else:
            xs = _distinct_sample(spec, n, rng)
        x = vector(spec, xs)
        # wave constraint: a_i q(x_i) + q'(x_i) = 0 with q monic of degree 2n
        a = []
        for i in range(n):
            acc = spec.zero
            for j in range(n):
                if j != i:
                    acc = acc + (xs[i] - xs[j]).inv()
            a.append(acc)
        rows = []
        rhs = []
        for i in range(n):
            # unknown c_0..c_{2n-1}; q = sum c_k tau^k + tau^{2n}
            powers = [spec.one]
            for _ in range(2 * n):
                powers.append(powers[-1] * xs[i])
            row = [a[i] * powers[k] + spec.from_int(k) * powers[k - 1] if k >= 1
                   else a[i] * powers[0]
                   for k in range(2 * n)]
            rows.append(row)
            top = a[i] * powers[2 * n] + spec.from_int(2 * n) * powers[2 * n - 1]
            rhs.append(-top)
        try:
            part, basis = linear_solve_affine(
                matrix_from_rows(spec, rows), Vector(spec, tuple(rhs)))
        except Exception:
            continue
        found_y = None
        for _ in range(40):
            attempts += 1
            coeffs = list(part.entries)
            for bvec in basis:
                c = spec.random(rng)
                coeffs = [ci + c * bi for ci, bi in zip(coeffs, bvec.entries)]
            roots = _monic_roots(spec, coeffs + [spec.one])
            if roots is None:
                continue
            if any(r == xi for r in roots for xi in xs):
                continue
            found_y = roots
            break
        if found_y is None:
            continue
        y = vector(spec, found_y)
        c = cauchy_matrix(x, y)
        # cube-moment subspace over GF(3): C Frob(lambda) - mu 1 = 0
        ncols = (2 * n + 1) * q
        gf3_rows: list[list[int]] = [[0] * ncols for _ in range(n * q)]
        basis_elems = []
        for j in range(2 * n):
            for b in range(q):
                lam_j = spec.element([0] * b + [1])
                img = [c.entry(i, j) * lam_j**3 for i in range(n)]
                basis_elems.append((j, b, img))
        for col, (j, b, img) in enumerate(basis_elems):
            for i in range(n):
                for bb in range(q):
                    gf3_rows[i * q + bb][col] = img[i].coeffs[bb]
        for b in range(q):
            mu_e = spec.element([0] * b + [1])
            col = 2 * n * q + b
            for i in range(n):
                for bb in range(q):
                    gf3_rows[i * q + bb][col] = (-mu_e.coeffs[bb]) % 3
        null_basis = _gf3_nullspace(gf3_rows, ncols)
        if not null_basis:
            continue
        while attempts < budget:
            attempts += 1
            combo = [0] * ncols
            for v in null_basis:
                f = rng.randrange(3)
                if f:
                    combo = [(ci + f * vi) % 3 for ci, vi in zip(combo, v)]
            lam_entries = [spec.element(combo[j * q:(j + 1) * q]) for j in range(2 * n)]
            if any(e.is_zero() for e in lam_entries):
                continue
            lam = vector(spec, lam_entries)
            clam = c.matvec(lam)
            if any(e.is_zero() for e in clam):
                continue
            sq = c.matvec(vector(spec, [e * e for e in lam_entries]))
            if any(e != sq[0] for e in sq.entries[1:]):
                continue
            cb = c.matvec(vector(spec, [e**3 for e in lam_entries]))
            mu2, mu3 = sq[0], cb[0]
            h0 = x.concat(y).concat(lam)

            def v_eval(h, _n=n):
                xx = Vector(h.ring, h.entries[:_n])
                yy = Vector(h.ring, h.entries[_n:3 * _n])
                ll = Vector(h.ring, h.entries[3 * _n:])
                m2 = h.ring.lift(mu2) if hasattr(h.ring, "lift") else mu2
                m3 = h.ring.lift(mu3) if hasattr(h.ring, "lift") else mu3
                return region_residual(xx, yy, ll, m2, m3)

            jac = jacobian(v_eval, h0)
            return BearingPoint(
                h0=h0,
                v_residual=tuple(region_residual(x, y, lam, mu2, mu3)),
                jacobian_rank=rank(jac),
                extras={"x": list(x), "y": list(y), "lambda": list(lam),
                        "mu2": mu2, "mu3": mu3, "attempts": attempts,
                        "n": n, "m": m, "strategy": strategy, "seed": seed},
            )
    raise NotFound(f"no bearing point within budget ({attempts} attempts)")


def bearing_from_record(rec: dict) -> BearingPoint:
    spec = FieldSpec.parse(rec["field"])
    h0 = Vector(spec, tuple(parse_element(spec, s) for s in rec["h0"]))
    res = tuple(parse_element(spec, s) for s in rec["v_residual"])
    return BearingPoint(h0=h0, v_residual=res,
                        jacobian_rank=rec["jacobian_rank"], extras={})
