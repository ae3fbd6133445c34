"""Tests for polygon measures, adjusted values, and invariant vectors."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from polyres.algebra import FieldTower
from polyres.invariants import (
    ADJACENT,
    CLOSE,
    DISTANT,
    AdjustedValue,
    InvariantVector,
    adjusted_height,
    bonus,
    compare,
    defect,
    dorder_vector,
    height_vector,
    is_quasi_monomial,
    measures,
)
from polyres.series import from_terms, newton_polygon, parse_series, reduce_mod_p, scale_z, shift_y


def M(p, text):
    tw = FieldTower(p)
    return measures(reduce_mod_p(parse_series(tw, text)))


def test_reference_example_measures():
    m = M(2, "y^5*z + y^3*z^3 + y^3*z^8")
    assert (m.ord, m.ord_y, m.deg_y, m.height) == (6, 3, 5, 2)
    assert (m.ord_z, m.deg_z, m.width) == (1, 3, 2)
    assert m.slope == Fraction(5)
    assert m.adjacency == DISTANT
    assert m.parity == 1
    assert m.dorder == 2
    assert m.dent == (2, 2)
    assert not m.quadrant


def test_quadrant_measures():
    m = M(5, "y^2*z^3")
    assert m.quadrant and m.height == 0 and m.dorder == 0
    assert m.slope == math.inf and m.dent is None


def test_quasi_monomial_detection():
    assert is_quasi_monomial(M(5, "y^2*z^3 + z^4"))
    assert not is_quasi_monomial(M(2, "y^5*z + y^3*z^3"))
    assert not is_quasi_monomial(M(5, "z^3"))


def test_adjacency_classes():
    assert M(5, "y^2*z^3 + z^4").adjacency == ADJACENT
    assert M(5, "y^2*z + y*z^2").adjacency == CLOSE
    assert M(2, "y^5*z + y^3*z^3").adjacency == DISTANT


def test_bonus_table():
    assert bonus(ADJACENT) == "1+delta"
    assert bonus(CLOSE) == "eps"
    assert bonus(DISTANT) == "0"


def test_defect_cases():
    # adjacent with dorder = height - 1
    m = M(2, "y^5*z + y^2*z^3 + z^7")
    assert (m.height, m.dorder, m.adjacency) == (5, 4, ADJACENT)
    assert defect(m) == "delta"
    # adjacent but dorder <= height - 2
    m = M(5, "y^5*z + y^2*z^2 + z^6")
    assert (m.height, m.dorder, m.adjacency) == (5, 3, ADJACENT)
    assert defect(m) == "0"
    # close with dorder = height
    m = M(5, "y^4 + y^2*z^2 + y*z^6")
    assert (m.height, m.dorder, m.adjacency) == (3, 3, CLOSE)
    assert defect(m) == "eps"


def test_adjusted_value_total_order():
    two_minus_delta = AdjustedValue.from_base_minus(3, "1+delta")
    assert two_minus_delta == AdjustedValue(2, "delta")
    chain = [AdjustedValue(2, "delta"), AdjustedValue(2, "eps"),
             AdjustedValue(2, "0"), AdjustedValue(3, "delta"),
             AdjustedValue(3, "0")]
    for a, b in zip(chain, chain[1:]):
        assert a < b


def test_adjusted_value_matches_numeric_evaluation():
    vals = [AdjustedValue(m, t) for m in range(-1, 5)
            for t in ("delta", "eps", "0")]
    for a in vals:
        for b in vals:
            assert (a < b) == (a.numeric() < b.numeric())
            assert (a == b) == (a.numeric() == b.numeric())


def test_adjusted_value_floor():
    with pytest.raises(ValueError):
        AdjustedValue(-2, "0")
    assert AdjustedValue.from_base_minus(0, "1+delta") == AdjustedValue(-1, "delta")


def test_vector_comparison_examples():
    a = InvariantVector("height", AdjustedValue(2, "0"), Fraction(5))
    b = InvariantVector("height", AdjustedValue(2, "delta"), Fraction(1))
    assert b < a and compare(a, b) == 1
    c = InvariantVector("height", AdjustedValue(2, "0"), Fraction(0))
    assert c < a
    with pytest.raises(ValueError):
        compare(a, InvariantVector("dorder", AdjustedValue(2, "0"), (1, 1)))


def test_dent_comparison_is_ascending_in_both_parts():
    lo = InvariantVector("dorder", AdjustedValue(1, "0"), (1, 1))
    hi = InvariantVector("dorder", AdjustedValue(1, "0"), (1, 2))
    assert lo < hi
    wide = InvariantVector("dorder", AdjustedValue(1, "0"), (2, 0))
    assert hi < wide
    inf_dent = InvariantVector("dorder", AdjustedValue(1, "0"), None)
    assert wide < inf_dent


def test_reference_example_vectors():
    m = M(2, "y^5*z + y^3*z^3 + y^3*z^8")
    i = height_vector(m)
    assert i.first == AdjustedValue(2, "0") and i.second == Fraction(5)
    j = dorder_vector(m)
    assert j.first == AdjustedValue(2, "0") and j.second == (2, 2)
    assert i.to_json() == {"int": 2, "tag": "0", "second": "5"}
    assert j.to_json() == {"int": 2, "tag": "0", "second": [2, 2]}


def test_adjusted_height_of_adjacent_monomial():
    m = M(5, "z^3")
    assert adjusted_height(m) == AdjustedValue(-1, "delta")
    assert height_vector(m).to_json()["second"] == "inf"


def test_stable_measures_under_subordinate_changes():
    rng = random.Random(17)
    for p in (2, 3, 5):
        tw = FieldTower(p)
        for _ in range(20):
            terms = [(rng.randrange(6), rng.randrange(6), rng.randrange(p))
                     for _ in range(5)]
            F = reduce_mod_p(from_terms(tw, terms, trunc=120))
            if F.is_zero():
                continue
            m = measures(F)
            top = newton_polygon(F).vertices[0]
            for _ in range(4):
                a = {1: tw.from_int(rng.randrange(p)),
                     2: tw.from_int(rng.randrange(p))}
                G = scale_z(shift_y(F, a), tw.from_int(1 + rng.randrange(p - 1)))
                if G.is_zero():
                    continue
                mg = measures(G)
                assert (mg.ord, mg.deg_y, mg.ord_z) == (m.ord, m.deg_y, m.ord_z)
                assert newton_polygon(G).vertices[0] == top


def test_height_bounded_by_degree_and_adjacency():
    rng = random.Random(19)
    adj_rank = {ADJACENT: 2, CLOSE: 1, DISTANT: 0}
    for p in (2, 3, 5):
        tw = FieldTower(p)
        for _ in range(40):
            terms = [(rng.randrange(7), rng.randrange(7), rng.randrange(p))
                     for _ in range(5)]
            F = reduce_mod_p(from_terms(tw, terms))
            if F.is_zero():
                continue
            m = measures(F)
            assert m.height <= m.deg_y - 2 + adj_rank[m.adjacency]
