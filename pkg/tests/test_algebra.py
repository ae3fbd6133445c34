"""Tests for finite-field towers and closure root finding."""

from __future__ import annotations

import random

import pytest

from polyres.algebra import (
    AlgebraError,
    FieldTower,
    parse_element,
    univ_roots,
)


def test_prime_field_basics():
    tw = FieldTower(5)
    a, b = tw.from_int(3), tw.from_int(4)
    assert (a + b) == tw.from_int(2)
    assert (a * b) == tw.from_int(2)
    assert (a - b) == tw.from_int(4)
    assert (a / b) == a * b.inverse()
    assert (b ** 4) == tw.one()
    assert tw.order() == 5


def test_non_prime_characteristic_rejected():
    with pytest.raises(AlgebraError):
        FieldTower(6)


def test_division_by_zero():
    tw = FieldTower(3)
    with pytest.raises(ZeroDivisionError):
        tw.one() / tw.zero()
    with pytest.raises(ZeroDivisionError):
        tw.zero().inverse()


def test_roots_of_split_polynomial_stay_in_base():
    # t^2 + t over F_2 factors as t(t+1): roots 0 and 1, no extension needed
    tw = FieldTower(2)
    f = [tw.zero(), tw.one(), tw.one()]
    rs = univ_roots(tw, f)
    assert tw.generation == 0
    assert [(str(r), m) for r, m in rs] == [("0", 1), ("1", 1)]


def test_roots_force_quadratic_extension():
    # t^2 + t + 1 is irreducible over F_2; both roots live in F_4
    tw = FieldTower(2)
    f = [tw.one(), tw.one(), tw.one()]
    rs = univ_roots(tw, f)
    assert tw.order() == 4
    assert len(rs) == 2
    assert all(m == 1 for _, m in rs)
    for r, _ in rs:
        assert (r * r + r + 1).is_zero()


def test_repeated_root_multiplicity():
    # t^3 - 1 = (t - 1)^3 in characteristic 3
    tw = FieldTower(3)
    f = [tw.from_int(-1), tw.zero(), tw.zero(), tw.one()]
    rs = univ_roots(tw, f)
    assert len(rs) == 1
    r, m = rs[0]
    assert r == tw.one() and m == 3


def test_roots_remultiply_to_the_polynomial():
    rng = random.Random(7)
    for p in (2, 3, 5):
        for _ in range(12):
            tw = FieldTower(p)
            deg = rng.randint(1, 5)
            cs = [tw.from_int(rng.randrange(p)) for _ in range(deg)] + [tw.one()]
            rs = univ_roots(tw, cs)
            assert sum(m for _, m in rs) == deg
            cur = tw.generation
            prod = [tw.one(cur)]
            for r, m in rs:
                for _ in range(m):
                    prod = _mul(prod, [-r, tw.one(cur)], tw.zero(cur))
            lifted = [tw.embed(c, cur) for c in cs]
            assert len(prod) == len(lifted)
            assert all((a - b).is_zero() for a, b in zip(prod, lifted))


def _mul(a, b, zero):
    out = [zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] = out[i + j] + ca * cb
    return out


def test_field_axioms_on_small_extensions():
    for p, deg in ((2, 2), (3, 2), (2, 3)):
        tw = FieldTower(p)
        tw.extend_to_absolute(deg)
        xs = list(tw.elements())
        assert len(xs) == p ** deg
        for a in xs:
            for b in xs:
                assert a + b == b + a
                assert a * b == b * a
                if not b.is_zero():
                    assert (a / b) * b == a
                for c in xs[:3]:
                    assert (a + b) * c == a * c + b * c
                    assert (a * b) * c == a * (b * c)


def test_pth_root_inverts_frobenius():
    for p, deg in ((2, 2), (2, 3), (3, 2), (5, 2)):
        tw = FieldTower(p)
        tw.extend_to_absolute(deg)
        for a in tw.elements():
            assert a.pth_root() ** p == a


def test_embedding_is_a_ring_map():
    tw = FieldTower(2)
    tw.extend_to_absolute(2)
    xs = list(tw.elements())
    tw.extend_to_absolute(4)
    top = tw.generation
    for a in xs:
        for b in xs:
            assert tw.embed(a + b, top) == tw.embed(a, top) + tw.embed(b, top)
            assert tw.embed(a * b, top) == tw.embed(a, top) * tw.embed(b, top)


def test_mixed_generation_arithmetic_rejected():
    tw = FieldTower(2)
    tw.extend_to_absolute(2)
    a = tw.gen_element()
    tw.extend_to_absolute(4)
    b = tw.gen_element()
    with pytest.raises(AlgebraError):
        _ = a + b
    assert tw.embed(a) + b == b + tw.embed(a)


def test_element_text_round_trip():
    tw = FieldTower(3)
    tw.extend_to_absolute(3)
    for a in tw.elements():
        assert parse_element(tw, str(a)) == a


def test_tower_construction_is_deterministic():
    t1, t2 = FieldTower(2), FieldTower(2)
    t1.extend_to_absolute(2)
    t1.extend_to_absolute(4)
    t2.extend_to_absolute(4)
    assert t1.modulus_text() == t2.modulus_text()
    assert t1.degree() == t2.degree() == 4


def test_roots_in_larger_field_than_brute_limit():
    # force the non-brute path: roots in F_(2^10) = 1024 elements
    tw = FieldTower(2)
    tw.extend_to_absolute(10)
    g = tw.gen_element()
    r1, r2 = g, g * g + tw.one()
    f = _mul([-r1, tw.one()], [-r2, tw.one()], tw.zero())
    rs = univ_roots(tw, f)
    assert [r for r, _ in rs] == sorted([r1, r2], key=lambda e: e.sort_key())
    assert all(m == 1 for _, m in rs)


def test_gen_element_requires_extension():
    tw = FieldTower(7)
    with pytest.raises(AlgebraError):
        tw.gen_element()
