"""Neighbouring-computation engine: exact Jacobians, polynomial
extrapolation, bearing-region search."""

import random

from char3lab.field import make_field
from char3lab.linalg import Vector, cauchy_matrix, vector
from char3lab.neighbour import (
    ParameterizedSystem,
    bearing_from_record,
    bearing_search,
    jacobian,
    neighbouring_compute,
    poly_extrapolate,
    region_residual,
)


def _rvec(spec, k, rng):
    return vector(spec, [spec.random(rng) for _ in range(k)])


def _lift(ring, c):
    return ring.lift(c) if hasattr(ring, "lift") else c


def test_jacobian_exact():
    spec = make_field(4)
    rng = random.Random(50)
    a, b = spec.random(rng), spec.random(rng)

    # f(x, y) = (a x + b y, x * y)
    def g(v):
        return Vector(v.ring, (v[0] * _lift(v.ring, a) + v[1] * _lift(v.ring, b),
                               v[0] * v[1]))

    x0 = _rvec(spec, 2, rng)
    jac = jacobian(g, x0)
    assert jac.entry(0, 0) == a
    assert jac.entry(0, 1) == b
    assert jac.entry(1, 0) == x0[1]
    assert jac.entry(1, 1) == x0[0]


def test_poly_extrapolate_exact_for_low_degree():
    spec = make_field(4)
    rng = random.Random(51)
    for _ in range(50):
        d = rng.randrange(1, 5)
        coeffs = [[spec.random(rng) for _ in range(d + 1)] for _ in range(2)]

        def f(v):
            ring = v.ring
            total = ring.zero
            for j in range(2):
                power = ring.one
                for k in range(d + 1):
                    total = total + power * _lift(ring, coeffs[j][k])
                    power = power * v[j]
            return total

        x = _rvec(spec, 2, rng)
        chi = _rvec(spec, 2, rng)
        direct = f(chi)
        assert poly_extrapolate(f, 2 * d, x, chi) == direct


def test_neighbouring_compute_unconstrained():
    spec = make_field(4)
    rng = random.Random(52)
    for _ in range(50):
        n = rng.randrange(1, 4)
        d = rng.randrange(1, 5)

        sys = ParameterizedSystem(
            u_eval=lambda h: h,
            v_eval=lambda h: Vector(h.ring, ()),
            dim_u=n, dim_v=0)
        coeffs = [[spec.random(rng) for _ in range(d + 1)] for _ in range(n)]

        def f(v):
            ring = v.ring
            total = ring.zero
            for j in range(n):
                power = ring.one
                for k in range(d + 1):
                    total = total + power * _lift(ring, coeffs[j][k])
                    power = power * v[j]
            return total

        def f_plain(v):
            total = spec.zero
            for j in range(n):
                power = spec.one
                for k in range(d + 1):
                    total = total + power * coeffs[j][k]
                    power = power * v[j]
            return total

        h0 = _rvec(spec, n, rng)
        target = _rvec(spec, n, rng)
        from char3lab.neighbour import BearingPoint

        bearing = BearingPoint(h0=h0, v_residual=(), jacobian_rank=n)
        value, trace = neighbouring_compute(sys, f, d, bearing, target)
        assert value == f_plain(target)
        assert trace["degree"] == d


def test_bearing_search_small_and_roundtrip():
    spec = make_field(3)
    point = bearing_search(1, 2, spec, strategy="random", seed=3,
                           budget=20000)
    assert point.certified
    ex = point.extras
    x = vector(spec, ex["x"])
    y = vector(spec, ex["y"])
    lam = vector(spec, ex["lambda"])
    res = region_residual(x, y, lam, ex["mu2"], ex["mu3"])
    assert all(e.is_zero() for e in res)
    back = bearing_from_record(point.to_record())
    assert back.h0.entries == point.h0.entries
    assert back.certified


def test_region_residual_detects_violation():
    spec = make_field(3)
    rng = random.Random(53)
    # a random point almost surely violates the region constraints
    seen = set()
    nodes = []
    while len(nodes) < 3:
        a = spec.random(rng)
        if a.coeffs not in seen:
            seen.add(a.coeffs)
            nodes.append(a)
    x = vector(spec, nodes[:1])
    y = vector(spec, nodes[1:])
    lam = vector(spec, [spec.one, spec.one])
    res = region_residual(x, y, lam, spec.zero, spec.zero)
    assert any(not e.is_zero() for e in res)
