"""Sparse bivariate polynomials modulo p-th powers, Newton polygons, and the
substitution maps used by coordinate changes and blowup moves.

A residue class mod p-th powers has a unique expansion whose support avoids
p·N² (every monomial with both exponents divisible by p is itself a p-th
power, since Frobenius is surjective on a finite field).  ``reduce_mod_p``
produces that canonical representative; the substitution maps re-reduce
their exact result and honor a truncation order, setting a sticky
``truncated`` flag when terms beyond it are dropped.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraError, FieldElement, FieldTower


class SeriesError(Exception):
    """Raised for invalid series operations."""


@lru_cache(maxsize=None)
def _binom_pairs(a: int, p: int) -> tuple[tuple[int, int], ...]:
    """(i, C(a, i) mod p) for exactly the i with nonzero binomial, by Lucas'
    theorem: C(a, i) ≠ 0 mod p iff every base-p digit of i is at most the
    matching digit of a, and then it is the product of the digit binomials."""
    pairs = [(0, 1)]
    scale, n = 1, a
    while n:
        d, n = n % p, n // p
        pairs = [(i + e * scale, m * math.comb(d, e) % p)
                 for i, m in pairs for e in range(d + 1)]
        scale *= p
    return tuple(sorted(pairs))


class ResidueSeries:
    """Immutable sparse polynomial in y, z over one tower generation."""

    __slots__ = ("tower", "gen", "coeffs", "trunc", "truncated")

    def __init__(self, tower: FieldTower, gen: int,
                 coeffs: Mapping[tuple[int, int], FieldElement],
                 trunc: int, truncated: bool = False):
        clean: dict[tuple[int, int], FieldElement] = {}
        for (a, b), c in coeffs.items():
            if c.gen != gen:
                raise SeriesError("coefficient from a different field generation")
            if not c.is_zero():
                clean[(a, b)] = c
        self.tower = tower
        self.gen = gen
        self.coeffs = clean
        self.trunc = trunc
        self.truncated = truncated

    def support(self) -> list[tuple[int, int]]:
        return sorted(self.coeffs, key=lambda ab: (-ab[0], ab[1]))

    def coeff(self, a: int, b: int) -> FieldElement:
        return self.coeffs.get((a, b), self.tower.zero(self.gen))

    def is_zero(self) -> bool:
        return not self.coeffs

    def total_degree(self) -> int:
        return max((a + b for a, b in self.coeffs), default=0)

    def key(self):
        """Hashable canonical encoding (used for deduplication)."""
        items = tuple(sorted((a, b, c.sort_key()) for (a, b), c in self.coeffs.items()))
        return (self.gen, items, self.truncated)

    def __eq__(self, other):
        if not isinstance(other, ResidueSeries):
            return NotImplemented
        return (self.tower is other.tower and self.gen == other.gen
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.key())

    def __str__(self) -> str:
        return series_text(self)

    def __repr__(self) -> str:
        return f"<series {self} (p={self.tower.p})>"


def default_trunc(degree: int) -> int:
    """Default truncation order for an input of the given total degree."""
    return max(4 * degree, 4)


def from_terms(tower: FieldTower,
               terms: Iterable[tuple[int, int, FieldElement | int]],
               trunc: int | None = None,
               gen: int | None = None) -> ResidueSeries:
    """Build a raw series from (α, β, coefficient) triples (summing repeats)."""
    g = tower.generation if gen is None else gen
    acc: dict[tuple[int, int], FieldElement] = {}
    for a, b, c in terms:
        if a < 0 or b < 0:
            raise SeriesError(f"negative exponent in term y^{a}*z^{b}")
        fe = tower.from_int(c, g) if isinstance(c, int) else c
        if fe.gen != g:
            raise SeriesError("coefficient from a different field generation")
        key = (a, b)
        acc[key] = acc[key] + fe if key in acc else fe
    acc = {k: v for k, v in acc.items() if not v.is_zero()}
    if trunc is None:
        trunc = default_trunc(max((a + b for a, b in acc), default=0))
    return ResidueSeries(tower, g, acc, trunc)


def reduce_mod_p(F: ResidueSeries) -> ResidueSeries:
    """Canonical representative: drop monomials with both exponents in p·N."""
    p = F.tower.p
    kept = {(a, b): c for (a, b), c in F.coeffs.items()
            if a % p != 0 or b % p != 0}
    return ResidueSeries(F.tower, F.gen, kept, F.trunc, F.truncated)


def embed_series(F: ResidueSeries, gen: int | None = None) -> ResidueSeries:
    """Lift all coefficients to a later tower generation."""
    tower = F.tower
    g = tower.generation if gen is None else gen
    if g == F.gen:
        return F
    lifted = {ab: tower.embed(c, g) for ab, c in F.coeffs.items()}
    return ResidueSeries(tower, g, lifted, F.trunc, F.truncated)


def _finish(F: ResidueSeries, acc: dict[tuple[int, int], FieldElement]) -> ResidueSeries:
    """Apply truncation and canonical reduction to an exact substitution result."""
    p = F.tower.p
    dropped = False
    out: dict[tuple[int, int], FieldElement] = {}
    for (a, b), c in acc.items():
        if c.is_zero():
            continue
        if a + b > F.trunc:
            dropped = True
            continue
        if a % p != 0 or b % p != 0:
            out[(a, b)] = c
    return ResidueSeries(F.tower, F.gen, out, F.trunc, F.truncated or dropped)


def _add_term(acc: dict[tuple[int, int], FieldElement],
              key: tuple[int, int], c: FieldElement) -> None:
    acc[key] = acc[key] + c if key in acc else c


def shift_y(F: ResidueSeries, a: Mapping[int, FieldElement]) -> ResidueSeries:
    """Substitute y ↦ y + a(z) for a polynomial a(z) = Σ a_k z^k with a(0) = 0."""
    shift = {k: c for k, c in a.items() if not c.is_zero()}
    for k in shift:
        if k <= 0:
            raise SeriesError("shift polynomial must vanish at the origin")
    if not shift:
        return reduce_mod_p(F)
    p = F.tower.p
    one = F.tower.one(F.gen)
    powers: list[dict[int, FieldElement]] = [{0: one}]  # a(z)^j as z-polynomials
    max_alpha = max((alpha for alpha, _ in F.coeffs), default=0)
    for _ in range(max_alpha):
        prev = powers[-1]
        nxt: dict[int, FieldElement] = {}
        for k1, c1 in prev.items():
            for k2, c2 in shift.items():
                if k1 + k2 <= F.trunc:
                    prod = c1 * c2
                    nxt[k1 + k2] = nxt.get(k1 + k2, F.tower.zero(F.gen)) + prod
        powers.append({k: c for k, c in nxt.items() if not c.is_zero()})
    acc: dict[tuple[int, int], FieldElement] = {}
    for (alpha, beta), c in F.coeffs.items():
        for i, m in _binom_pairs(alpha, p):
            base = c if m == 1 else c * m
            for k, ck in powers[alpha - i].items():
                _add_term(acc, (i, beta + k), base * ck)
    return _finish(F, acc)


def move_H(F: ResidueSeries) -> ResidueSeries:
    """Substitute (y, z) ↦ (yz, z)."""
    acc: dict[tuple[int, int], FieldElement] = {}
    for (a, b), c in F.coeffs.items():
        _add_term(acc, (a, a + b), c)
    return _finish(F, acc)


def move_V(F: ResidueSeries) -> ResidueSeries:
    """Substitute (y, z) ↦ (y, yz)."""
    acc: dict[tuple[int, int], FieldElement] = {}
    for (a, b), c in F.coeffs.items():
        _add_term(acc, (a + b, b), c)
    return _finish(F, acc)


def move_T(F: ResidueSeries, t: FieldElement) -> ResidueSeries:
    """Substitute (y, z) ↦ (yz + tz, z)."""
    p = F.tower.p
    acc: dict[tuple[int, int], FieldElement] = {}
    for (a, b), c in F.coeffs.items():
        for i, m in _binom_pairs(a, p):
            scaled = c * m * t ** (a - i)
            _add_term(acc, (i, a + b), scaled)
    return _finish(F, acc)


def scale_z(F: ResidueSeries, u: FieldElement) -> ResidueSeries:
    """Substitute z ↦ u·z for a unit u."""
    if u.is_zero():
        raise SeriesError("scaling by the non-unit 0")
    acc = {(a, b): c * u ** b for (a, b), c in F.coeffs.items()}
    return _finish(F, acc)


def transpose(F: ResidueSeries) -> ResidueSeries:
    """Swap the roles of y and z."""
    flipped = {(b, a): c for (a, b), c in F.coeffs.items()}
    return ResidueSeries(F.tower, F.gen, flipped, F.trunc, F.truncated)


def monomial_divide(F: ResidueSeries, rs: tuple[int, int]) -> ResidueSeries:
    """Divide exactly by y^r z^s; the result is raw (caller re-reduces)."""
    r, s = rs
    out: dict[tuple[int, int], FieldElement] = {}
    for (a, b), c in F.coeffs.items():
        if a < r or b < s:
            raise SeriesError(
                f"monomial y^{a}*z^{b} is not divisible by y^{r}*z^{s}")
        out[(a - r, b - s)] = c
    return ResidueSeries(F.tower, F.gen, out, max(F.trunc - r - s, 0), F.truncated)


def monomial_multiply(F: ResidueSeries, rs: tuple[int, int]) -> ResidueSeries:
    """Multiply by y^r z^s; the result is raw (caller re-reduces)."""
    r, s = rs
    out = {(a + r, b + s): c for (a, b), c in F.coeffs.items()}
    return ResidueSeries(F.tower, F.gen, out, F.trunc + r + s, F.truncated)


def initial_form(F: ResidueSeries) -> ResidueSeries:
    """Terms of minimal total degree."""
    if F.is_zero():
        raise SeriesError("initial form of the zero series")
    d = min(a + b for a, b in F.coeffs)
    kept = {(a, b): c for (a, b), c in F.coeffs.items() if a + b == d}
    return ResidueSeries(F.tower, F.gen, kept, F.trunc, F.truncated)


# ---------------------------------------------------------------------------
# Newton polygon
# ---------------------------------------------------------------------------

class NewtonPolygon:
    """Vertex chain of conv(supp + R_+²), α decreasing and β increasing."""

    __slots__ = ("vertices", "is_quadrant")

    def __init__(self, vertices: tuple[tuple[int, int], ...]):
        self.vertices = vertices
        self.is_quadrant = len(vertices) == 1

    def __eq__(self, other):
        if not isinstance(other, NewtonPolygon):
            return NotImplemented
        return self.vertices == other.vertices

    def __repr__(self):
        return f"<polygon {list(self.vertices)}>"


def newton_polygon(F: ResidueSeries) -> NewtonPolygon:
    """Vertices of the positive convex hull of the support."""
    if F.is_zero():
        raise SeriesError("Newton polygon of the zero series")
    rows: dict[int, int] = {}
    for a, b in F.coeffs:
        if a not in rows or b < rows[a]:
            rows[a] = b
    pareto: list[tuple[int, int]] = []
    best: int | None = None
    for a in sorted(rows):
        b = rows[a]
        if best is None or b < best:
            pareto.append((a, b))
            best = b
    pareto.reverse()  # α decreasing, β increasing
    chain: list[tuple[int, int]] = []
    for pt in pareto:
        while len(chain) >= 2:
            (a1, b1), (a2, b2) = chain[-2], chain[-1]
            a3, b3 = pt
            # keep the middle point only if the edge slopes strictly increase
            if (a2 - a1) * (b3 - b2) >= (a3 - a2) * (b2 - b1):
                chain.pop()
            else:
                break
        chain.append(pt)
    return NewtonPolygon(tuple(chain))


def clip_to_polygon(F: ResidueSeries) -> ResidueSeries:
    """Representative cut to a margin above the Newton polygon.

    Substitutions and blowup moves never pull a term below the polygon data
    it started above, so content far beyond the vertices stays irrelevant to
    every measure; working at the reduced truncation order keeps debris from
    piling up there in the first place.  The truncated flag records the cut,
    and the margin leaves all decisions on vertex data exact."""
    dv = max(a + b for a, b in newton_polygon(F).vertices)
    cut = max(96, 6 * (dv + F.tower.p))
    if cut >= F.trunc:
        return F
    kept = {ab: c for ab, c in F.coeffs.items() if ab[0] + ab[1] <= cut}
    return ResidueSeries(F.tower, F.gen, kept, cut, True)


# ---------------------------------------------------------------------------
# text form: terms c*y^a*z^b joined by " + ", sorted by (α desc, β asc)
# ---------------------------------------------------------------------------

def series_text(F: ResidueSeries) -> str:
    if F.is_zero():
        return "0"
    parts = []
    for a, b in F.support():
        c = F.coeffs[(a, b)]
        factors = []
        cs = str(c)
        if cs != "1" or (a == 0 and b == 0):
            factors.append(f"({cs})" if "+" in cs else cs)
        if a:
            factors.append("y" if a == 1 else f"y^{a}")
        if b:
            factors.append("z" if b == 1 else f"z^{b}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def _split_top_level(s: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SeriesError(f"unbalanced parentheses in {s!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise SeriesError(f"unbalanced parentheses in {s!r}")
    parts.append("".join(cur))
    return parts


def parse_series(tower: FieldTower, text: str,
                 trunc: int | None = None, gen: int | None = None) -> ResidueSeries:
    """Parse polynomial text like 'y^5*z + y^3*z^3 + (g+1)*z^2'."""
    from .algebra import parse_element

    g = tower.generation if gen is None else gen
    s = text.replace(" ", "")
    if not s:
        raise SeriesError("empty series text")
    if s == "0":
        return from_terms(tower, [], trunc, g)
    terms = []
    for pos, term in enumerate(_split_top_level(s, "+")):
        if not term:
            raise SeriesError(f"empty term at position {pos} in {text!r}")
        a = b = 0
        coeff_factors: list[str] = []
        for factor in _split_top_level(term, "*"):
            if not factor:
                raise SeriesError(f"empty factor in term {term!r}")
            if factor == "y":
                a += 1
            elif factor == "z":
                b += 1
            elif factor.startswith("y^"):
                if not factor[2:].isdigit():
                    raise SeriesError(f"bad exponent in factor {factor!r}")
                a += int(factor[2:])
            elif factor.startswith("z^"):
                if not factor[2:].isdigit():
                    raise SeriesError(f"bad exponent in factor {factor!r}")
                b += int(factor[2:])
            else:
                coeff_factors.append(factor)
        c = tower.one(g)
        for cf in coeff_factors:
            try:
                c = c * parse_element(tower, cf, g)
            except AlgebraError as e:
                raise SeriesError(f"bad coefficient {cf!r} in term {term!r}: {e}")
        terms.append((a, b, c))
    return from_terms(tower, terms, trunc, g)
