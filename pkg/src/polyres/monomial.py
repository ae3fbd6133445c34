"""Endgame for monomial surfaces x^p = y^m z^n and quasi-monomial series.

Once the coefficient series is a monomial (times a unit absorbed into the
coordinates), resolution is pure integer bookkeeping on the exponent pair
(m, n): blowing up the curve y = x = 0 subtracts p from m, the curve
z = x = 0 subtracts p from n, and when both exponents are below p the point
blowup splits into the two chart states (m + n - p, n) and (m, m + n - p).
Every step lowers m + n, so the tree has depth at most m + n and every leaf
has m + n < p, where the surface order has dropped below p.

Quasi-monomial series (polygon of width one touching the z-axis) are handled
by blowing up the line z = x = 0, which subtracts p from every z-exponent.
"""

from __future__ import annotations

from .invariants import is_quasi_monomial, measures
from .series import ResidueSeries, monomial_divide, reduce_mod_p


class MonomialError(Exception):
    """Raised for exponent pairs outside the monomial endgame."""


def _validate(p: int, m: int, n: int) -> None:
    if m < 0 or n < 0:
        raise MonomialError(f"negative exponent in ({m}, {n})")
    if m % p == 0 and n % p == 0:
        raise MonomialError(f"({m}, {n}) is a p-th power monomial")


def monomial_step(p: int, m: int, n: int) -> list[tuple[str, tuple[int, int]]]:
    """One blowup step on the exponent pair; curve moves take priority."""
    _validate(p, m, n)
    if m + n < p:
        raise MonomialError(f"({m}, {n}) is terminal: order {m + n} < {p}")
    if m >= p:
        return [("curve-z", (m - p, n))]
    if n >= p:
        return [("curve-y", (m, n - p))]
    return [("point", (m + n - p, n)), ("point", (m, m + n - p))]


def resolve_monomial(p: int, m: int, n: int) -> dict:
    """Full reduction tree from (m, n) down to states of order below p."""
    _validate(p, m, n)
    if m + n < p:
        raise MonomialError(f"({m}, {n}) already has order below {p}")

    def build(state: tuple[int, int]) -> dict:
        a, b = state
        if a + b < p:
            return {"state": [a, b], "terminal": True}
        kids = monomial_step(p, a, b)
        return {"state": [a, b],
                "children": [{"tag": tag, **build(nxt)} for tag, nxt in kids]}

    return build((m, n))


def tree_depth(tree: dict) -> int:
    """Number of steps on the longest root-to-leaf path."""
    if tree.get("terminal"):
        return 0
    return 1 + max(tree_depth(c) for c in tree["children"])


def tree_leaves(tree: dict) -> list[tuple[int, int]]:
    """All terminal exponent pairs of the reduction tree."""
    if tree.get("terminal"):
        return [tuple(tree["state"])]
    out: list[tuple[int, int]] = []
    for c in tree["children"]:
        out.extend(tree_leaves(c))
    return out


def resolve_quasi_monomial(F: ResidueSeries) -> dict:
    """Blow up the line z = x = 0 until the order drops below p.

    Each line blowup divides by z^p.  The low polygon vertex (0, q) keeps
    q not divisible by p, so once ord_z < p the vertex has q < p and the
    order is below p; the certificate records the final series."""
    if not is_quasi_monomial(measures(F)):
        raise MonomialError("series is not quasi-monomial")
    p = F.tower.p
    G = F
    steps = 0
    while min(b for _, b in G.coeffs) >= p:
        G = reduce_mod_p(monomial_divide(G, (0, p)))
        steps += 1
    final_ord = min(a + b for a, b in G.coeffs)
    return {"line_blowups": steps, "final": str(G),
            "final_ord": final_ord, "order_dropped": final_ord < p}
