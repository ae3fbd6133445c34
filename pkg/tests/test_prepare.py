"""Tests for ord_y/slope/dent realization and the monomial test."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from polyres.algebra import FieldTower
from polyres.invariants import measures
from polyres.prepare import (
    PrepareError,
    apply_shift,
    brute_force_ord_y,
    is_monomial,
    maximize_ord_y,
    maximize_slope,
    realize_second_invariant,
    shift_text,
)
from polyres.series import (
    from_terms,
    newton_polygon,
    parse_series,
    reduce_mod_p,
    shift_y,
    transpose,
)


def S(p, text, trunc=None):
    tw = FieldTower(p)
    return tw, reduce_mod_p(parse_series(tw, text, trunc))


def test_single_step_dissolution():
    tw, F = S(2, "y^3*z + y*z^3")
    prep = maximize_ord_y(F)
    assert str(prep.prepared) == "y^3*z"
    m = measures(prep.prepared)
    assert m.ord_y == 3 and m.height == 0
    assert shift_text(prep.shift) == "z"


def test_monomial_needs_no_preparation():
    tw, F = S(2, "y^2*z^3")
    prep = maximize_ord_y(F)
    assert prep.shift == {} and prep.prepared == F


def test_reference_example_is_already_prepared():
    tw, F = S(2, "y^5*z + y^3*z^3 + y^3*z^8")
    prep = maximize_ord_y(F)
    assert measures(prep.prepared).ord_y == 3
    assert measures(prep.prepared).height == 2
    assert prep.shift == {}


def test_brute_force_oracle_values():
    tw, F = S(2, "y^3*z + y*z^3")
    best, shift = brute_force_ord_y(F, 1, 1)
    assert best == 3 and sorted(shift) == [1]
    tw, G = S(2, "y^5*z + y^3*z^3 + y^3*z^8")
    best, shift = brute_force_ord_y(G, 2, 2)
    assert best == 3 and shift == {}
    tw, M = S(3, "y^2*z^3")
    best, shift = brute_force_ord_y(M, 2, 1)
    assert best == 2 and shift == {}


def test_brute_force_cap():
    tw, F = S(2, "y^3*z + y*z^3")
    with pytest.raises(PrepareError):
        brute_force_ord_y(F, 30, 2, cap=1000)


def test_multi_monomial_shift_is_found():
    # needs a = z + z^2; no single step kills the whole bottom layer
    tw, F = S(2, "y^3 + y*z^2 + y*z^4")
    prep = maximize_ord_y(F)
    assert measures(prep.prepared).ord_y == 2
    assert str(prep.prepared) == "y^3 + y^2*z"


def test_slide_then_jump_is_found():
    # a = 2z moves the bottom row out, then a = 2z^2 removes it entirely
    tw, F = S(3, "y^3*z + z^4 + z^7")
    prep = maximize_ord_y(F)
    assert measures(prep.prepared).ord_y == 3
    assert str(prep.prepared) == "y^3*z"


def test_replay_reproduces_prepared_series():
    rng = random.Random(23)
    for p in (2, 3):
        tw = FieldTower(p)
        for _ in range(10):
            terms = [(rng.randrange(5), rng.randrange(5), rng.randrange(p))
                     for _ in range(5)]
            F = reduce_mod_p(from_terms(tw, terms, trunc=60))
            if F.is_zero():
                continue
            prep = maximize_ord_y(F, K=4)
            assert apply_shift(prep.original, prep.shift) == prep.prepared


def test_preparation_never_drops_ord_y():
    rng = random.Random(29)
    for p in (2, 3, 5):
        tw = FieldTower(p)
        for _ in range(10):
            terms = [(rng.randrange(5), rng.randrange(5), rng.randrange(p))
                     for _ in range(5)]
            F = reduce_mod_p(from_terms(tw, terms, trunc=60))
            if F.is_zero():
                continue
            prep = maximize_ord_y(F, K=4)
            mf, mp = measures(F), measures(prep.prepared)
            assert mp.ord_y >= mf.ord_y
            assert (mp.ord, mp.deg_y, mp.ord_z) == (mf.ord, mf.deg_y, mf.ord_z)
            assert (newton_polygon(prep.prepared).vertices[0]
                    == newton_polygon(F).vertices[0])


def test_search_matches_oracle_on_random_instances():
    rng = random.Random(31)
    for p in (2, 3):
        for _ in range(15):
            tw = FieldTower(p)
            terms = [(rng.randrange(5), rng.randrange(5), rng.randrange(p))
                     for _ in range(4)]
            F = reduce_mod_p(from_terms(tw, terms, trunc=60))
            if F.is_zero():
                continue
            want, _ = brute_force_ord_y(F, 2, 2)
            prep = maximize_ord_y(F, K=2, restrict=2)
            assert prep.complete
            assert measures(prep.prepared).ord_y == want


def test_closure_roots_can_beat_small_subfields():
    # the only dissolving coefficients satisfy c^3 = c + 1 (they live in F_8)
    tw, F = S(2, "y^3 + y*z^2 + z^3")
    best, _ = brute_force_ord_y(F, 2, 2)
    prep = maximize_ord_y(F)
    assert measures(prep.prepared).ord_y > best
    assert prep.prepared.gen > 0


def test_slope_stays_when_second_vertex_is_rigid():
    tw, F = S(2, "y^5*z + y^3*z^3")
    prep = maximize_slope(F)
    assert measures(prep.prepared).slope == Fraction(5)
    assert prep.shift == {}


def test_slope_of_quadrant_is_infinite():
    tw, F = S(2, "y^2*z^3")
    prep = maximize_slope(F)
    assert prep.shift == {} and measures(prep.prepared).slope == float("inf")


def _brute_slope(tw, F, K, r):
    from polyres.prepare import _subfield_pool

    pool = _subfield_pool(tw, r)
    from polyres.series import embed_series

    F = embed_series(F, tw.generation)
    m0 = measures(F)
    best = m0.slope
    for combo in itertools.product(pool, repeat=K):
        shift = {k + 1: c for k, c in enumerate(combo) if not c.is_zero()}
        if not shift:
            continue
        G = reduce_mod_p(shift_y(F, shift))
        if G.is_zero():
            continue
        m = measures(G)
        if m.ord_y == m0.ord_y and m.slope > best:
            best = m.slope
    return best


def test_slope_matches_oracle():
    tw, F = S(3, "y^4*z + y^3*z^2 + y^3*z^5")
    want = _brute_slope(tw, F, 2, 2)
    prep = maximize_slope(F)
    assert measures(prep.prepared).slope == want == Fraction(4)
    rng = random.Random(37)
    for p in (2, 3):
        for _ in range(10):
            tw = FieldTower(p)
            terms = [(rng.randrange(5), rng.randrange(5), rng.randrange(p))
                     for _ in range(4)]
            F = reduce_mod_p(from_terms(tw, terms, trunc=60))
            if F.is_zero():
                continue
            F = maximize_ord_y(F, K=2, restrict=2).prepared
            want = _brute_slope(tw, F, 2, 2)
            got = measures(maximize_slope(F, K=2, restrict=2).prepared).slope
            assert got == want


def test_second_invariant_realization():
    tw, F = S(2, "y^3*z + y*z^3")
    prep = realize_second_invariant(F)
    m = measures(prep.prepared)
    assert m.dorder == 0 and m.dent is None
    tw, G = S(2, "y^5*z + y^3*z^3 + y^3*z^8")
    prep = realize_second_invariant(G)
    m = measures(prep.prepared)
    assert m.dorder == 2 and m.dent == (2, 2)


def _brute_dent(tw, F, K, r):
    from polyres.prepare import _subfield_pool
    from polyres.series import embed_series

    pool = _subfield_pool(tw, r)
    F = embed_series(F, tw.generation)
    best_d = None
    best_dent = None
    for combo in itertools.product(pool, repeat=K):
        shift = {k + 1: c for k, c in enumerate(combo) if not c.is_zero()}
        G = reduce_mod_p(shift_y(F, shift)) if shift else F
        if G.is_zero():
            continue
        m = measures(G)
        if best_d is None or m.dorder < best_d:
            best_d, best_dent = m.dorder, m.dent
        elif m.dorder == best_d and m.dent is not None and best_dent is not None:
            if (m.dent[0], -m.dent[1]) < (best_dent[0], -best_dent[1]):
                best_dent = m.dent
    return best_d, best_dent


def test_dent_matches_oracle():
    rng = random.Random(41)
    for p in (2, 3):
        for _ in range(10):
            tw = FieldTower(p)
            terms = [(rng.randrange(5), rng.randrange(5), rng.randrange(p))
                     for _ in range(4)]
            F = reduce_mod_p(from_terms(tw, terms, trunc=60))
            if F.is_zero():
                continue
            want_d, want_dent = _brute_dent(tw, F, 2, 2)
            prep = realize_second_invariant(F, K=2, restrict=2)
            m = measures(prep.prepared)
            assert m.dorder == want_d
            assert m.dent == want_dent


def test_monomial_detection():
    tw, F = S(2, "y^5*z^6 + y^3*z^6 + y^3*z^11", trunc=60)
    chk = is_monomial(F)
    assert chk.is_monomial and chk.witness == [] and chk.state == (3, 6)
    tw, G = S(2, "y^3*z + y*z^3")
    chk = is_monomial(G)
    assert chk.is_monomial and chk.state == (3, 1)
    assert chk.witness and chk.witness[0][0] == "y"
    tw, H = S(2, "y^5*z + y^3*z^3 + y^3*z^8")
    assert not is_monomial(H).is_monomial


def test_monomial_via_z_shift():
    # y-shifts stall at y^5 + y^3*z^2, but z ↦ z + y reaches a quadrant
    tw, F = S(2, "y^5 + y^4*z + y^3*z^2 + y^2*z^3")
    prep = maximize_ord_y(F)
    assert not newton_polygon(prep.prepared).is_quadrant
    chk = is_monomial(F)
    assert chk.is_monomial and chk.state == (2, 3)
    assert chk.witness[0][0] == "z"
