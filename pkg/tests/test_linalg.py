"""Exact linear algebra: determinants, permanents, structured matrices."""

import random

import pytest

from char3lab.errors import CoincidentNodes, NotSkew
from char3lab.field import make_field
from char3lab.linalg import (
    Matrix,
    cauchy_matrix,
    det,
    diag,
    hadamard,
    hadamard_pow,
    identity,
    matrix_from_record,
    matrix_to_record,
    permanent_naive,
    permanent_ryser,
    pfaffian,
    vandermonde,
    vector,
    w_matrix,
)


def _rand_matrix(spec, n, m, rng):
    return Matrix(spec, n, m, tuple(spec.random(rng) for _ in range(n * m)))


def _distinct(spec, k, rng):
    out, seen = [], set()
    while len(out) < k:
        a = spec.random(rng)
        if a.coeffs not in seen:
            seen.add(a.coeffs)
            out.append(a)
    return out


def test_ryser_equals_naive():
    rng = random.Random(0)
    for q in (1, 2, 4):
        spec = make_field(q)
        for _ in range(25):
            n = rng.randrange(1, 6)
            m = _rand_matrix(spec, n, n, rng)
            assert permanent_ryser(m) == permanent_naive(m)


def test_det_multiplicative():
    rng = random.Random(1)
    spec = make_field(3)
    for _ in range(20):
        n = rng.randrange(1, 5)
        a = _rand_matrix(spec, n, n, rng)
        b = _rand_matrix(spec, n, n, rng)
        assert det(a @ b) == det(a) * det(b)


def test_cauchy_determinant_closed_form():
    rng = random.Random(2)
    spec = make_field(4)
    for _ in range(15):
        n = rng.randrange(1, 5)
        nodes = _distinct(spec, 2 * n, rng)
        x = vector(spec, nodes[:n])
        y = vector(spec, nodes[n:])
        c = cauchy_matrix(x, y)
        num = spec.one
        den = spec.one
        for i in range(n):
            for j in range(n):
                den = den * (x[i] - y[j])
                if i < j:
                    num = num * (x[j] - x[i]) * (y[i] - y[j])
        assert det(c) == num / den


def test_cauchy_rejects_coincident_nodes():
    spec = make_field(2)
    x = vector(spec, [spec.one])
    with pytest.raises(CoincidentNodes):
        cauchy_matrix(x, x)


def test_vandermonde_determinant():
    rng = random.Random(3)
    spec = make_field(4)
    for _ in range(15):
        n = rng.randrange(1, 5)
        t = vector(spec, _distinct(spec, n, rng))
        v = vandermonde(t)
        prod = spec.one
        for i in range(n):
            for j in range(i + 1, n):
                prod = prod * (t[j] - t[i])
        assert det(v) == prod


def test_w_matrix_shape():
    spec = make_field(4)
    rng = random.Random(4)
    for d in (2, 3, 4, 5):
        t = vector(spec, _distinct(spec, d, rng))
        w = w_matrix(t)
        assert w.rows == d and w.cols == d


def test_pfaffian_squared_is_det():
    rng = random.Random(5)
    spec = make_field(4)
    for _ in range(15):
        k = rng.randrange(1, 4)
        n = 2 * k
        a = Matrix(spec, n, n, tuple(spec.zero for _ in range(n * n)))
        ent = list(a.entries)
        for i in range(n):
            for j in range(i + 1, n):
                v = spec.random(rng)
                ent[i * n + j] = v
                ent[j * n + i] = -v
        a = Matrix(spec, n, n, tuple(ent))
        assert pfaffian(a) ** 2 == det(a)


def test_pfaffian_rejects_non_skew():
    spec = make_field(2)
    with pytest.raises(NotSkew):
        pfaffian(identity(spec, 2))


def test_hadamard_operations():
    rng = random.Random(6)
    spec = make_field(3)
    a = _rand_matrix(spec, 3, 3, rng)
    b = _rand_matrix(spec, 3, 3, rng)
    h = hadamard(a, b)
    for i in range(3):
        for j in range(3):
            assert h.entry(i, j) == a.entry(i, j) * b.entry(i, j)
    p = hadamard_pow(a, 3)
    for i in range(3):
        for j in range(3):
            assert p.entry(i, j) == a.entry(i, j) ** 3


def test_permanent_of_diagonal():
    rng = random.Random(7)
    spec = make_field(4)
    entries = [spec.random_nonzero(rng) for _ in range(4)]
    d = diag(vector(spec, entries))
    prod = spec.one
    for e in entries:
        prod = prod * e
    assert permanent_ryser(d) == prod
    assert det(d) == prod


def test_matrix_record_roundtrip():
    rng = random.Random(8)
    spec = make_field(4)
    m = _rand_matrix(spec, 3, 2, rng)
    rec = matrix_to_record(m)
    back = matrix_from_record(rec)
    assert back.ring == spec
    assert back.entries == m.entries
