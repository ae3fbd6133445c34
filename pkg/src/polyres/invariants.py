"""Coordinate-wise measures of a Newton polygon and the adjusted values they
combine into.

The two invariant vectors are built from a measure minus a symbolic
correction (bonus or defect) taken from {0, ε, δ, 1+δ} with 0 < ε < δ < 1
arbitrary.  Corrections stay symbolic tags, so every comparison is provably
independent of any numeric choice of ε and δ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .series import ResidueSeries, newton_polygon

INF = math.inf

ADJACENT = "adjacent"
CLOSE = "close"
DISTANT = "distant"


@dataclass(frozen=True)
class Measures:
    """All polygon measures of a nonzero series, from the vertex set only."""

    ord: int
    ord_y: int
    deg_y: int
    ord_z: int
    deg_z: int
    height: int
    width: int
    slope: Fraction | float
    adjacency: str
    parity: int
    dorder: int
    dent: tuple[int, int] | None  # None on quadrants (infinite dent)
    quadrant: bool


def measures(F: ResidueSeries) -> Measures:
    """Compute all measures of F from its Newton polygon vertices."""
    poly = newton_polygon(F)
    v = poly.vertices
    deg_y, ord_z = v[0]
    ord_y, deg_z = v[-1]
    d = min(a + b for a, b in v)
    if poly.is_quadrant:
        slope: Fraction | float = INF
        dent = None
    else:
        a1, b1 = v[0]
        a2, b2 = v[1]
        slope = Fraction(a1 * (b2 - b1), a1 - a2)
        dent = (a1 - a2, b2 - b1)
    adjacency = ADJACENT if ord_y == 0 else (CLOSE if ord_y == 1 else DISTANT)
    dorder = d - ord_y - ord_z
    height = deg_y - ord_y
    assert 0 <= dorder <= height
    assert (dorder == 0) == poly.is_quadrant
    return Measures(
        ord=d, ord_y=ord_y, deg_y=deg_y, ord_z=ord_z, deg_z=deg_z,
        height=height, width=deg_z - ord_z, slope=slope, adjacency=adjacency,
        parity=1 if d % F.tower.p == 0 else 0, dorder=dorder, dent=dent,
        quadrant=poly.is_quadrant)


def bonus(adjacency: str) -> str:
    """Correction subtracted from the height: 1+δ / ε / 0 by adjacency."""
    if adjacency == ADJACENT:
        return "1+delta"
    if adjacency == CLOSE:
        return "eps"
    if adjacency == DISTANT:
        return "0"
    raise ValueError(f"unknown adjacency {adjacency!r}")


def defect(m: Measures) -> str:
    """Correction subtracted from the dorder, by adjacency and steep edges."""
    if m.dorder == m.height:
        return bonus(m.adjacency)
    if m.dorder == m.height - 1:
        return "delta" if m.adjacency == ADJACENT else "0"
    return "0"


def is_quasi_monomial(m: Measures) -> bool:
    """True iff the polygon has width 1 and touches the z-axis."""
    return m.width == 1 and m.ord_y == 0


_TAG_RANK = {"delta": 0, "eps": 1, "0": 2}


class AdjustedValue:
    """An element m − {0, ε, δ} of the well-ordered value set."""

    __slots__ = ("int_part", "tag")

    def __init__(self, int_part: int, tag: str = "0"):
        if tag not in _TAG_RANK:
            raise ValueError(f"unknown tag {tag!r}")
        if int_part < -1:
            raise ValueError(f"adjusted value below -1: {int_part}")
        self.int_part = int_part
        self.tag = tag

    @classmethod
    def from_base_minus(cls, base: int, correction: str) -> "AdjustedValue":
        if correction == "1+delta":
            return cls(base - 1, "delta")
        if correction in ("eps", "delta"):
            return cls(base, correction)
        if correction == "0":
            return cls(base, "0")
        raise ValueError(f"unknown correction {correction!r}")

    def order_key(self) -> tuple[int, int]:
        return (self.int_part, _TAG_RANK[self.tag])

    def numeric(self, eps: float = 0.25, delta: float = 0.5) -> float:
        return self.int_part - {"0": 0.0, "eps": eps, "delta": delta}[self.tag]

    def __eq__(self, other):
        if not isinstance(other, AdjustedValue):
            return NotImplemented
        return self.order_key() == other.order_key()

    def __lt__(self, other):
        return self.order_key() < other.order_key()

    def __le__(self, other):
        return self.order_key() <= other.order_key()

    def __hash__(self):
        return hash(self.order_key())

    def __str__(self):
        return str(self.int_part) if self.tag == "0" else f"{self.int_part}-{self.tag}"

    def __repr__(self):
        return f"<adjusted {self}>"


VARIANT_HEIGHT = "height"
VARIANT_DORDER = "dorder"


def _second_key(variant: str, second):
    if variant == VARIANT_HEIGHT:
        return (second,)  # rational slope; INF compares greatest
    return (INF, INF) if second is None else second  # dent pair, ascending


class InvariantVector:
    """(adjusted value, secondary measure), compared lexicographically."""

    __slots__ = ("variant", "first", "second")

    def __init__(self, variant: str, first: AdjustedValue, second):
        if variant not in (VARIANT_HEIGHT, VARIANT_DORDER):
            raise ValueError(f"unknown variant {variant!r}")
        self.variant = variant
        self.first = first
        self.second = second

    def key(self):
        return (self.first.order_key(), _second_key(self.variant, self.second))

    def _check(self, other) -> "InvariantVector":
        if not isinstance(other, InvariantVector):
            raise ValueError("cannot compare with a non-invariant value")
        if other.variant != self.variant:
            raise ValueError(
                f"cannot compare {self.variant} and {other.variant} variants")
        return other

    def __eq__(self, other):
        if not isinstance(other, InvariantVector):
            return NotImplemented
        return self.variant == other.variant and self.key() == other.key()

    def __lt__(self, other):
        return self.key() < self._check(other).key()

    def __le__(self, other):
        return self.key() <= self._check(other).key()

    def __hash__(self):
        return hash((self.variant, self.key()))

    def to_json(self) -> dict:
        if self.variant == VARIANT_HEIGHT:
            second = "inf" if self.second == INF else str(self.second)
        else:
            second = "inf" if self.second is None else list(self.second)
        return {"int": self.first.int_part, "tag": self.first.tag,
                "second": second}

    def __str__(self):
        if self.variant == VARIANT_HEIGHT:
            second = "inf" if self.second == INF else str(self.second)
        else:
            second = "inf" if self.second is None else f"({self.second[0]},{self.second[1]})"
        return f"({self.first}, {second})"

    def __repr__(self):
        return f"<{self.variant} vector {self}>"


def compare(a: InvariantVector, b: InvariantVector) -> int:
    """Lexicographic comparison: -1, 0, or 1."""
    a._check(b)
    ka, kb = a.key(), b.key()
    return -1 if ka < kb else (0 if ka == kb else 1)


def adjusted_height(m: Measures) -> AdjustedValue:
    """height − bonus: the first component of the height-based vector."""
    return AdjustedValue.from_base_minus(m.height, bonus(m.adjacency))


def adjusted_dorder(m: Measures) -> AdjustedValue:
    """dorder − defect: the first component of the dorder-based vector."""
    return AdjustedValue.from_base_minus(m.dorder, defect(m))


def height_vector(m: Measures) -> InvariantVector:
    return InvariantVector(VARIANT_HEIGHT, adjusted_height(m), m.slope)


def dorder_vector(m: Measures) -> InvariantVector:
    return InvariantVector(VARIANT_DORDER, adjusted_dorder(m), m.dent)
