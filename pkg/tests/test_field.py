"""Field-tower arithmetic: axioms, Frobenius, roots, serialization."""

import random

import pytest

from char3lab.errors import DivisionByZero, NotASquare, ReducibleModulus
from char3lab.field import (
    FieldSpec,
    cube_root,
    make_field,
    parse_element,
    sqrt,
    sqrt_minus_one,
)


def test_axioms_exhaustive_small_fields():
    for q in (1, 2):
        spec = make_field(q)
        elems = list(spec.elements())
        assert len(elems) == 3 ** q
        for a in elems:
            assert a + spec.zero == a
            assert a * spec.one == a
            assert a + (-a) == spec.zero
            if not a.is_zero():
                assert a * a.inv() == spec.one
            for b in elems:
                assert a + b == b + a
                assert a * b == b * a
                for c in elems:
                    assert (a + b) * c == a * c + b * c


def test_axioms_randomized_larger_fields():
    rng = random.Random(2026)
    for q in (3, 4, 5, 6):
        spec = make_field(q)
        for _ in range(50):
            a, b, c = (spec.random(rng) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            if not a.is_zero():
                assert (a * b) / a == b


def test_characteristic_three():
    spec = make_field(4)
    rng = random.Random(7)
    for _ in range(20):
        a = spec.random(rng)
        assert a + a + a == spec.zero
        b = spec.random(rng)
        # Frobenius is additive in characteristic 3
        assert (a + b) ** 3 == a ** 3 + b ** 3


def test_frobenius_cube_root_inverse():
    rng = random.Random(11)
    for q in (1, 2, 3, 4):
        spec = make_field(q)
        for _ in range(30):
            a = spec.random(rng)
            assert cube_root(a ** 3) == a
            assert cube_root(a) ** 3 == a


def test_sqrt_canonical():
    rng = random.Random(13)
    spec = make_field(4)
    for _ in range(30):
        a = spec.random(rng)
        s = sqrt(a * a)
        assert s * s == a * a
        # canonical: sqrt of the same square is stable
        assert sqrt(a * a) == s


def test_sqrt_rejects_non_residue():
    spec = make_field(1)
    with pytest.raises(NotASquare):
        sqrt(spec.from_int(2))  # 2 = -1 is not a square in GF(3)


def test_sqrt_minus_one_even_degree():
    for q in (2, 4):
        spec = make_field(q)
        i_root = sqrt_minus_one(spec)
        assert i_root * i_root == -spec.one


def test_division_by_zero():
    spec = make_field(2)
    with pytest.raises(DivisionByZero):
        spec.zero.inv()


def test_reducible_modulus_rejected():
    with pytest.raises(ReducibleModulus):
        FieldSpec(2, (1, 2, 1))  # (x+1)^2 over GF(3)


def test_text_roundtrip():
    rng = random.Random(17)
    for q in (1, 3, 4):
        spec = make_field(q)
        assert FieldSpec.parse(spec.text()) == spec
        for _ in range(10):
            a = spec.random(rng)
            assert parse_element(spec, a.text()) == a


def test_deterministic_modulus():
    # the default modulus is deterministic: lex-smallest monic irreducible
    assert make_field(1).text() == "3^1/[0,1]"
    assert make_field(2).text() == "3^2/[1,0,1]"
    assert make_field(4).text() == "3^4/[1,0,1,1,1]"
