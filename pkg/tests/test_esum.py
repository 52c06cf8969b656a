"""E-sum machinery: extension matrices, multilinearity, Cauchy reductions."""

import math
import random

import pytest

from char3lab.errors import CoincidentValues
from char3lab.esum import (
    VectorVariety,
    bare_plane,
    binom_mod3,
    c_tilde,
    c_tilde_diag,
    degree,
    esum_evaluate,
    extension_matrix,
    plane,
    wave_plane,
)
from char3lab.field import make_field
from char3lab.linalg import cauchy_matrix, permanent_naive, vector
from char3lab.series import SeriesRing


def _distinct(spec, k, rng):
    out, seen = [], set()
    while len(out) < k:
        a = spec.random(rng)
        if a.coeffs not in seen:
            seen.add(a.coeffs)
            out.append(a)
    return out


def test_binom_mod3_vs_direct():
    for n in range(30):
        for k in range(n + 1):
            assert binom_mod3(n, k) == math.comb(n, k) % 3


def test_extension_matrix_vs_series_differentiation():
    # the (f, s) entry against a_i - a_j must equal the eps^f xi^s
    # coefficient of 1/((a_i + eps) - (a_j + xi)); Lucas reduction makes the
    # binomial exact in characteristic 3
    rng = random.Random(30)
    spec = make_field(4)
    cases = 0
    while cases < 100:
        a_i, a_j = _distinct(spec, 2, rng)
        f = rng.randrange(0, 4)
        s = rng.randrange(0, 4)
        phi = (degree(f, None), degree(None, s))
        mat = extension_matrix(vector(spec, [a_i, a_j]), phi)
        assert mat.rows == 1 and mat.cols == 1
        entry = mat.entry(0, 0)
        inner = SeriesRing(spec, 12)
        outer = SeriesRing(inner, 12)
        eps = outer.lift(inner.eps())
        xi = outer.eps()
        denom = (outer.lift(inner.lift(a_i - a_j)) + eps - xi).inv()
        assert denom.coef(s).coef(f) == entry
        cases += 1


def test_extension_matrix_coincident_values():
    spec = make_field(2)
    phi = (degree(1, None), degree(None, 1))
    with pytest.raises(CoincidentValues):
        extension_matrix(vector(spec, [spec.one, spec.one]), phi)


def test_c_tilde_reduces_to_cauchy():
    # with an empty wave block, C~(x, y, []) is the doubled-column Cauchy
    # block structure; each plain column equals the Cauchy column
    rng = random.Random(31)
    spec = make_field(4)
    nodes = _distinct(spec, 4, rng)
    x = vector(spec, nodes[:2])
    y = vector(spec, nodes[2:])
    ct = c_tilde(x, y, vector(spec, []))
    c = cauchy_matrix(x, y)
    assert ct.rows == c.rows
    assert ct.cols >= c.cols


def test_c_tilde_diag_square():
    rng = random.Random(32)
    spec = make_field(4)
    z = vector(spec, _distinct(spec, 3, rng))
    m = c_tilde_diag(z)
    assert m.rows == m.cols


def test_esum_multilinear_in_plane_weights():
    rng = random.Random(33)
    spec = make_field(4)
    for _ in range(10):
        nodes = _distinct(spec, 3, rng)
        a = vector(spec, nodes)
        c1, c2 = spec.random(rng), spec.random(rng)
        base_planes = (wave_plane(spec), bare_plane(spec))

        def val(w):
            planes = base_planes + (plane((degree(0, None), w)),)
            return esum_evaluate(VectorVariety(a, planes))

        # linear in the weight of the last plane
        assert val(c1 + c2) == val(c1) + val(c2)
        assert val(c1 * c2) == c1 * val(c2)


def test_esum_scaling_in_plane_weights():
    rng = random.Random(34)
    spec = make_field(4)
    for _ in range(10):
        nodes = _distinct(spec, 3, rng)
        a = vector(spec, nodes)
        c = spec.random(rng)
        base_planes = (wave_plane(spec), bare_plane(spec))

        def val(w):
            planes = base_planes + (plane((degree(0, None), w)),)
            return esum_evaluate(VectorVariety(a, planes))

        assert val(c) == c * val(spec.one)
