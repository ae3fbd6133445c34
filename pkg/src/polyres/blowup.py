"""Point blowups as substitution moves with strict-transform bookkeeping.

In the chart where the exceptional divisor is z = 0, moving to the point
t of the exceptional line transforms F(y,z) into F(yz + tz, z) (a
translational move; t = 0 is the horizontal move), and the origin of the
other chart gives F(y, yz) (the vertical move).  The strict transform
divides the total transform by the p-th power of the exceptional variable;
both are kept, since their polygons differ by a displacement of exactly p
units in one axis.

The points of the exceptional line where the surface order can stay p are
t = 0 and the roots of the dehomogenized initial form; all other points see
a monomial times a unit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import FieldElement, univ_roots
from .series import (
    ResidueSeries,
    embed_series,
    monomial_divide,
    move_H,
    move_T,
    move_V,
    reduce_mod_p,
)


class BlowupError(Exception):
    """Raised for invalid blowup requests."""


def series_ord(F: ResidueSeries) -> int:
    """Minimal total degree of the support (the order at the origin)."""
    if F.is_zero():
        raise BlowupError("order of the zero series")
    return min(a + b for a, b in F.coeffs)


@dataclass
class BlowupResult:
    """One move applied to a series: total and strict transforms."""

    move: str                       # "H", "V", or "T"
    t: FieldElement | None          # the translation, for T-moves
    total: ResidueSeries            # reduced total transform
    child: ResidueSeries            # strict transform (total / exceptional^p)
    exceptional: tuple[str, int]    # divided monomial (axis, power)
    order_dropped: bool             # ord(child) < p

    def tag(self) -> str:
        return f"T({self.t})" if self.move == "T" else self.move

    def to_json(self) -> dict:
        out = {"move": self.tag(), "child": str(self.child),
               "order_dropped": self.order_dropped}
        if self.move == "T":
            out["t"] = str(self.t)
        return out


def apply_move(F: ResidueSeries, move: str,
               t: FieldElement | None = None) -> BlowupResult:
    """Apply one of the moves T(t), H, V and divide out the exceptional part."""
    p = F.tower.p
    if series_ord(F) < p:
        raise BlowupError("move applied to a series of order below p")
    if move == "T":
        if t is None or t.is_zero():
            raise BlowupError("translational moves need a nonzero t")
        total = move_T(F, t)
        axis = "z"
    elif move == "H":
        total = move_H(F)
        axis = "z"
    elif move == "V":
        total = move_V(F)
        axis = "y"
    else:
        raise BlowupError(f"unknown move {move!r}")
    rs = (0, p) if axis == "z" else (p, 0)
    child = reduce_mod_p(monomial_divide(total, rs))
    if child.is_zero():
        raise BlowupError("strict transform reduced to zero (input not reduced)")
    dropped = series_ord(child) < p
    return BlowupResult(move=move, t=t if move == "T" else None, total=total,
                        child=child, exceptional=(axis, p), order_dropped=dropped)


def restriction_poly(F: ResidueSeries) -> list[FieldElement]:
    """Dehomogenized initial form Σ_{α+β=d} c_{αβ} y^α, low power first."""
    d = series_ord(F)
    tower = F.tower
    out: list[FieldElement] = []
    for (a, b), c in F.coeffs.items():
        if a + b != d:
            continue
        while len(out) <= a:
            out.append(tower.zero(F.gen))
        out[a] = out[a] + c
    while out and out[-1].is_zero():
        out.pop()
    return out


def enumerate_children(F: ResidueSeries) -> list[BlowupResult]:
    """All moves that can keep the surface order at p: H, T(t) for each root
    t of the restriction polynomial, and V.  At every other point of the
    exceptional line the transform is a monomial times a unit."""
    tower = F.tower
    phi = restriction_poly(F)
    ts: list[FieldElement] = []
    if len(phi) > 1:
        ts = [r for r, _ in univ_roots(tower, phi) if not r.is_zero()]
        ts.sort(key=lambda e: e.sort_key())
    G = embed_series(F, tower.generation)
    out = [apply_move(G, "H")]
    for t in ts:
        out.append(apply_move(G, "T", tower.embed(t, G.gen)))
    out.append(apply_move(G, "V"))
    return out


def surface_reduce(F: ResidueSeries) -> tuple[str, ResidueSeries]:
    """Eliminate p-th powers from a raw surface coefficient F.

    Status: "not-reduced" when F is itself a p-th power (the surface was
    non-reduced), "order-dropped" when the canonical representative has
    order below p, else "open"."""
    G = reduce_mod_p(F)
    if G.is_zero():
        return ("not-reduced", G)
    if series_ord(G) < F.tower.p:
        return ("order-dropped", G)
    return ("open", G)
