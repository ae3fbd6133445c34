"""Tests for blowup moves: exact transforms, status handling, polygon laws."""

from __future__ import annotations

import random

import pytest

from polyres.algebra import FieldTower
from polyres.blowup import (
    BlowupError,
    apply_move,
    enumerate_children,
    restriction_poly,
    series_ord,
    surface_reduce,
)
from polyres.invariants import measures
from polyres.prepare import maximize_ord_y
from polyres.series import (
    from_terms,
    newton_polygon,
    parse_series,
    reduce_mod_p,
    series_text,
)


def S(p, text, trunc=None):
    tw = FieldTower(p)
    return tw, reduce_mod_p(parse_series(tw, text, trunc))


def _random(rng, tw, n=5, span=6, trunc=80):
    terms = [(rng.randrange(span), rng.randrange(span), rng.randrange(tw.p))
             for _ in range(n)]
    return reduce_mod_p(from_terms(tw, terms, trunc=trunc))


def _edges(F):
    v = newton_polygon(F).vertices
    return list(zip(v, v[1:]))


def test_translational_move_exact():
    tw, F = S(2, "y^5*z + y^3*z^3 + y^3*z^8")
    res = apply_move(F, "T", tw.one())
    assert series_text(res.total) == ("y^5*z^6 + y^3*z^6 + y^3*z^11 + "
                                      "y^2*z^11 + y*z^11 + z^11")
    assert series_text(res.child) == ("y^5*z^4 + y^3*z^4 + y^3*z^9 + "
                                      "y^2*z^9 + y*z^9 + z^9")
    assert newton_polygon(res.total).vertices == ((3, 6), (0, 11))
    assert res.exceptional == ("z", 2)
    assert not res.order_dropped
    assert res.tag() == "T(1)"


def test_horizontal_move_exact():
    tw, F = S(2, "y^5*z + y^3*z^3 + y^3*z^8")
    res = apply_move(F, "H")
    assert series_text(res.total) == "y^5*z^6 + y^3*z^6 + y^3*z^11"
    assert series_text(res.child) == "y^5*z^4 + y^3*z^4 + y^3*z^9"
    assert newton_polygon(res.child).vertices == ((3, 4),)
    assert newton_polygon(res.child).is_quadrant


def test_vertical_move_exact():
    tw, F = S(2, "y^5*z + y^3*z^3 + y^3*z^8")
    res = apply_move(F, "V")
    assert series_text(res.child) == "y^9*z^8 + y^4*z + y^4*z^3"
    assert newton_polygon(res.child).vertices == ((4, 1),)
    assert res.exceptional == ("y", 2)


def test_translation_requires_nonzero_t():
    tw, F = S(2, "y^5*z + y^3*z^3")
    with pytest.raises(BlowupError):
        apply_move(F, "T", tw.zero())
    with pytest.raises(BlowupError):
        apply_move(F, "T")


def test_move_requires_order_at_least_p():
    tw, F = S(5, "y^2*z + z^3")
    with pytest.raises(BlowupError):
        apply_move(F, "H")


def test_surface_reduce_statuses():
    tw, F = S(2, "y^4 + y^3*z")
    status, G = surface_reduce(F)
    assert status == "open" and series_text(G) == "y^3*z"

    tw2 = FieldTower(2)
    H = parse_series(tw2, "y^2*z^2")
    status, G = surface_reduce(H)
    assert status == "not-reduced" and G.is_zero()

    tw3 = FieldTower(3)
    P = parse_series(tw3, "y^3 + z^4")
    status, G = surface_reduce(P)
    assert status == "open" and series_text(G) == "z^4"

    tw4 = FieldTower(3)
    Q = parse_series(tw4, "y^3 + z^2")
    status, G = surface_reduce(Q)
    assert status == "order-dropped" and series_text(G) == "z^2"


def test_restriction_poly_and_children_ordering():
    tw, F = S(2, "y^5*z + y^3*z^3 + y^3*z^8")
    phi = restriction_poly(F)
    assert [str(c) for c in phi] == ["0", "0", "0", "1", "0", "1"]
    kids = enumerate_children(F)
    assert [k.tag() for k in kids] == ["H", "T(1)", "V"]
    assert all(not k.order_dropped for k in kids)


def test_children_on_constant_restriction():
    # initial form z^4 only: no translation candidates besides the chart moves
    tw, F = S(3, "z^4 + y^4*z^3")
    kids = enumerate_children(F)
    assert [k.tag() for k in kids] == ["H", "V"]


def test_children_roots_may_need_extension():
    # restriction polynomial y^2 + y + 1 has its roots in the degree-2 extension
    tw, F = S(2, "y^2*z + y*z^2 + z^3")
    kids = enumerate_children(F)
    tags = [k.tag() for k in kids]
    assert tags[0] == "H" and tags[-1] == "V"
    assert tags[1:-1] == ["T(g)", "T(g+1)"]
    for k in kids[1:-1]:
        assert series_ord(k.child) >= 1


def test_total_and_strict_polygons_differ_by_p_shift():
    rng = random.Random(41)
    for p in (2, 3, 5):
        tw = FieldTower(p)
        for _ in range(12):
            F = _random(rng, tw)
            if F.is_zero() or series_ord(F) < p:
                continue
            for res in enumerate_children(F):
                dy, dz = (p, 0) if res.exceptional[0] == "y" else (0, p)
                shifted = tuple((a + dy, b + dz)
                                for a, b in newton_polygon(res.child).vertices)
                assert newton_polygon(res.total).vertices == shifted


def test_horizontal_height_law():
    rng = random.Random(43)
    for p in (2, 3, 5):
        tw = FieldTower(p)
        for _ in range(20):
            F = _random(rng, tw)
            if F.is_zero() or series_ord(F) < p:
                continue
            child = apply_move(F, "H").child
            mf, mc = measures(F), measures(child)
            assert mc.height <= mf.height
            assert mc.adjacency == mf.adjacency
            steep = any(a1 - a2 >= b2 - b1
                        for (a1, b1), (a2, b2) in _edges(F))
            if steep:
                assert mc.height < mf.height
            else:
                assert mc.height == mf.height


def test_horizontal_slope_law():
    # with every edge flatter than 45 degrees the slope drops by deg_y
    rng = random.Random(47)
    seen = 0
    for p in (2, 3, 5):
        tw = FieldTower(p)
        for _ in range(40):
            F = _random(rng, tw)
            if F.is_zero() or series_ord(F) < p:
                continue
            mf = measures(F)
            if mf.quadrant:
                continue
            if any(a1 - a2 >= b2 - b1 for (a1, b1), (a2, b2) in _edges(F)):
                continue
            child = apply_move(F, "H").child
            assert measures(child).slope == mf.slope - mf.deg_y
            seen += 1
    assert seen >= 10


def test_vertical_height_drop():
    rng = random.Random(53)
    for p in (2, 3, 5):
        tw = FieldTower(p)
        for _ in range(20):
            F = _random(rng, tw)
            if F.is_zero() or series_ord(F) < p:
                continue
            if newton_polygon(F).is_quadrant:
                continue
            child = apply_move(F, "V").child
            assert measures(child).height <= measures(F).height - 1


def test_translation_degree_bound():
    # deg_y of any translated child stays within the initial-form height
    # plus one extra unit when the order is divisible by p
    rng = random.Random(59)
    for p in (2, 3):
        tw = FieldTower(p)
        for _ in range(15):
            F = _random(rng, tw)
            if F.is_zero() or series_ord(F) < p:
                continue
            d = series_ord(F)
            rows = [a for a, b in F.coeffs if a + b == d]
            hd = max(rows) - min(rows)
            par = 1 if d % p == 0 else 0
            for res in enumerate_children(F):
                if res.move != "T":
                    continue
                assert measures(res.child).deg_y <= hd + par


def test_translation_never_raises_ord_y_after_preparation():
    rng = random.Random(61)
    for p in (2, 3):
        for _ in range(12):
            tw = FieldTower(p)
            F = _random(rng, tw, n=4, span=5)
            if F.is_zero() or series_ord(F) < p:
                continue
            G = maximize_ord_y(F, K=4).prepared
            base = measures(G).ord_y
            for res in enumerate_children(G):
                if res.move == "V" or res.order_dropped:
                    continue
                assert measures(res.child).ord_y <= base


def test_result_json_round():
    tw, F = S(2, "y^5*z + y^3*z^3 + y^3*z^8")
    res = apply_move(F, "T", tw.one())
    out = res.to_json()
    assert out["move"] == "T(1)" and out["t"] == "1"
    assert out["order_dropped"] is False
    assert out["child"] == str(res.child)
