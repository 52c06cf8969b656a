"""Truncated Laurent-series ring: laws, order arithmetic, limits."""

import random

import pytest

from char3lab.errors import LimitDoesNotExist, PrecisionExhausted
from char3lab.field import make_field
from char3lab.series import SeriesRing, coef_eps, limit_eps, order_eps


def _random_series(ring, rng, spec, lo=-3, hi=4):
    coeffs = {}
    for k in range(lo, hi):
        if rng.random() < 0.6:
            coeffs[k] = spec.random(rng)
    return ring.series(coeffs, ring.budget if hasattr(ring, "budget") else 24)


def test_ring_laws_randomized():
    spec = make_field(3)
    ring = SeriesRing(spec, 24)
    rng = random.Random(100)
    for _ in range(40):
        a = _random_series(ring, rng, spec)
        b = _random_series(ring, rng, spec)
        c = _random_series(ring, rng, spec)
        assert ((a + b) + c).text() == (a + (b + c)).text()
        assert (a * b).text() == (b * a).text()
        assert (a * (b + c)).text() == (a * b + a * c).text()
        assert (a - a).is_zero()


def test_order_arithmetic():
    spec = make_field(2)
    ring = SeriesRing(spec, 24)
    eps = ring.eps()
    a = eps ** 2 + eps ** 5
    b = eps.inv()  # order -1
    assert order_eps(a) == 2
    assert order_eps(b) == -1
    assert order_eps(a * b) == 1
    assert order_eps(a.inv()) == -2
    assert (a * a.inv()).limit() == spec.one


def test_exact_lift_is_infinitely_precise():
    spec = make_field(2)
    ring = SeriesRing(spec, 8)
    one = ring.one
    assert (one - one).is_zero()
    # a truncated tail is not certainly zero, but an exact lift difference is
    assert (ring.lift(spec.from_int(2)) + ring.lift(spec.one)).is_zero()


def test_limit_of_positive_order_is_zero():
    spec = make_field(2)
    ring = SeriesRing(spec, 16)
    eps = ring.eps()
    assert limit_eps(eps * eps).is_zero()
    assert limit_eps(ring.lift(spec.one) + eps) == spec.one


def test_limit_pole_raises():
    spec = make_field(2)
    ring = SeriesRing(spec, 16)
    with pytest.raises(LimitDoesNotExist):
        ring.eps().inv().limit()


def test_precision_exhausted():
    spec = make_field(2)
    ring = SeriesRing(spec, 4)
    eps = ring.eps()
    tail = (ring.one + eps).inv()  # truncated at the budget
    with pytest.raises(PrecisionExhausted):
        coef_eps(tail, 10)


def test_coef_extraction():
    spec = make_field(2)
    ring = SeriesRing(spec, 24)
    eps = ring.eps()
    geo = (ring.one - eps).inv()  # 1 + eps + eps^2 + ...
    for k in range(5):
        assert coef_eps(geo, k) == spec.one


def test_nested_series_rings():
    spec = make_field(2)
    inner = SeriesRing(spec, 12)
    outer = SeriesRing(inner, 12)
    xi = outer.eps()
    eps_lift = outer.lift(inner.eps())
    prod = xi * eps_lift
    assert prod.coef(1).coef(1) == spec.one
    # the two formal variables are independent
    assert prod.coef(0).is_zero()


def test_pow_and_division():
    spec = make_field(3)
    ring = SeriesRing(spec, 24)
    rng = random.Random(5)
    for _ in range(20):
        a = ring.lift(spec.random_nonzero(rng)) + ring.eps()
        b = (a ** 3) / a / a
        # division truncates at the budget; compare coefficients, not tails
        assert all(b.coef(k) == a.coef(k) for k in range(0, 3))
        assert (a ** -2 * a ** 2).limit() == spec.one
