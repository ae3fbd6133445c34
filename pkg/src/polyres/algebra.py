"""Exact arithmetic in finite-field towers F_p <= F_{p^k}, with root finding.

The tower keeps one *current* field at a time.  Extending the tower replaces
F_{p^k} by F_{p^(k*m)}; elements of older generations stay valid and are moved
up explicitly with ``embed``.  Moduli and embeddings are found by
deterministic search, so identical runs build identical towers.

Elements are immutable; printing/parsing uses polynomials in the generator
symbol ``g`` (e.g. ``g^2+g+1``).
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Sequence


class AlgebraError(Exception):
    """Raised for invalid field operations (mixed generations, bad input)."""


# ---------------------------------------------------------------------------
# polynomial helpers over F_p; coefficient tuples, low degree first, trimmed
# ---------------------------------------------------------------------------

def _trim(cs: Sequence[int]) -> tuple[int, ...]:
    n = len(cs)
    while n and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


def _padd(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def _pneg(a: Sequence[int], p: int) -> tuple[int, ...]:
    return tuple((-c) % p for c in a)


def _psub(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    return _padd(a, _pneg(b, p), p)


def _pscale(a: Sequence[int], s: int, p: int) -> tuple[int, ...]:
    s %= p
    if s == 0:
        return ()
    return _trim(tuple((c * s) % p for c in a))


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] = (out[i + j] + ca * cb) % p
    return _trim(out)


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int):
    """Quotient and remainder of a by b (b nonzero)."""
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return (), _trim(rem)
    quo = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i] % p
        if c:
            q = (c * inv_lead) % p
            quo[i - db] = q
            for j, cb in enumerate(b):
                rem[i - db + j] = (rem[i - db + j] - q * cb) % p
    return _trim(quo), _trim(rem)


def _pmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    return _pdivmod(a, b, p)[1]


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        a = _pscale(a, pow(a[-1], p - 2, p), p)  # monic
    return a


def _ppowmod(a: Sequence[int], e: int, mod: Sequence[int], p: int) -> tuple[int, ...]:
    result: tuple[int, ...] = (1,)
    base = _pmod(a, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    """Monic f over F_p is irreducible iff x^(p^d) = x mod f and
    gcd(x^(p^(d/q)) - x, f) = 1 for every prime q dividing d."""
    d = len(f) - 1
    x = (0, 1)
    if _ppowmod(x, p ** d, f, p) != _pmod(x, f, p):
        return False
    for q in _prime_factors(d):
        t = _psub(_ppowmod(x, p ** (d // q), f, p), _pmod(x, f, p), p)
        if len(_pgcd(t, f, p)) - 1 > 0:
            return False
    return True


def _find_irreducible(p: int, d: int) -> tuple[int, ...]:
    """First monic irreducible of degree d over F_p in counter order."""
    if d == 1:
        return (0, 1)
    for code in range(p ** d):
        cs = []
        c = code
        for _ in range(d):
            cs.append(c % p)
            c //= p
        f = tuple(cs) + (1,)
        if _is_irreducible(f, p):
            return f
    raise AlgebraError(f"no irreducible of degree {d} over F_{p}")  # unreachable


def _digits(code: int, p: int, d: int) -> tuple[int, ...]:
    cs = []
    for _ in range(d):
        cs.append(code % p)
        code //= p
    return _trim(tuple(cs))


def _poly_text(cs: Sequence[int], var: str = "x") -> str:
    if not cs:
        return "0"
    parts = []
    for k in range(len(cs) - 1, -1, -1):
        c = cs[k]
        if not c:
            continue
        if k == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            parts.append(head + (var if k == 1 else f"{var}^{k}"))
    return "+".join(parts)


# ---------------------------------------------------------------------------
# field tower
# ---------------------------------------------------------------------------

class _Level:
    __slots__ = ("degree", "modulus", "lift_prev")

    def __init__(self, degree: int, modulus: tuple[int, ...],
                 lift_prev: tuple[int, ...] | None):
        self.degree = degree        # absolute degree over F_p
        self.modulus = modulus      # monic, coefficients over F_p
        self.lift_prev = lift_prev  # image of previous generator, as coeffs here


class FieldElement:
    """Immutable element of one generation of a FieldTower."""

    __slots__ = ("tower", "gen", "coeffs", "_hash")

    def __init__(self, tower: "FieldTower", gen: int, coeffs: tuple[int, ...]):
        self.tower = tower
        self.gen = gen
        self.coeffs = coeffs
        self._hash = hash((id(tower), gen, coeffs))

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.tower is not self.tower:
                raise AlgebraError("elements belong to different towers")
            if other.gen != self.gen:
                raise AlgebraError(
                    "embedding required: operands live in different field "
                    f"generations ({self.gen} vs {other.gen})")
            return other
        if isinstance(other, int):
            return self.tower.from_int(other, self.gen)
        return NotImplemented  # type: ignore[return-value]

    def _scalar(self) -> int:
        return self.coeffs[0] if self.coeffs else 0

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.gen == 0:
            return self.tower._scalars[(self._scalar() + o._scalar())
                                       % self.tower.p]
        return FieldElement(self.tower, self.gen,
                            _padd(self.coeffs, o.coeffs, self.tower.p))

    __radd__ = __add__

    def __neg__(self):
        if self.gen == 0:
            return self.tower._scalars[-self._scalar() % self.tower.p]
        return FieldElement(self.tower, self.gen, _pneg(self.coeffs, self.tower.p))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.gen == 0:
            return self.tower._scalars[(self._scalar() - o._scalar())
                                       % self.tower.p]
        return FieldElement(self.tower, self.gen,
                            _psub(self.coeffs, o.coeffs, self.tower.p))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = self.tower.p
        if self.gen == 0:
            return self.tower._scalars[(self._scalar() * o._scalar()) % p]
        prod = _pmul(self.coeffs, o.coeffs, p)
        mod = self.tower._levels[self.gen].modulus
        return FieldElement(self.tower, self.gen, _pmod(prod, mod, p))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self.coeffs:
            raise ZeroDivisionError("division by zero in the field")
        p = self.tower.p
        if self.gen == 0:
            return self.tower._scalars[pow(self.coeffs[0], p - 2, p)]
        mod = self.tower._levels[self.gen].modulus
        r0, r1 = _trim(self.coeffs), mod
        s0, s1 = (1,), ()
        while r1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        inv_c = pow(r0[0], p - 2, p)
        return FieldElement(self.tower, self.gen,
                            _pmod(_pscale(s0, inv_c, p), mod, p))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one(self.gen)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def pth_root(self) -> "FieldElement":
        """The unique p-th root (Frobenius is bijective on a finite field)."""
        d = self.tower._levels[self.gen].degree
        return self ** (self.tower.p ** (d - 1))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.tower.from_int(other, self.gen)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return (self.tower is other.tower and self.gen == other.gen
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return self._hash

    def sort_key(self):
        """Canonical encoding used for deterministic orderings."""
        return (len(self.coeffs), self.coeffs)

    def __str__(self) -> str:
        return _poly_text(self.coeffs, "g") if self.coeffs else "0"

    def __repr__(self) -> str:
        return f"<{self} in F_{self.tower.p}^{self.tower._levels[self.gen].degree}>"


class FieldTower:
    """F_p and its extensions, one current field at a time."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise AlgebraError(f"characteristic must be prime, got {p}")
        self.p = p
        self._levels: list[_Level] = [_Level(1, (0, 1), None)]
        # Prime-field elements are immutable, so one shared instance per value.
        self._scalars = tuple(FieldElement(self, 0, (v,) if v else ())
                              for v in range(p))

    @property
    def generation(self) -> int:
        return len(self._levels) - 1

    def degree(self, gen: int | None = None) -> int:
        return self._levels[self.generation if gen is None else gen].degree

    def order(self, gen: int | None = None) -> int:
        return self.p ** self.degree(gen)

    def modulus_text(self, gen: int | None = None) -> str:
        g = self.generation if gen is None else gen
        return _poly_text(self._levels[g].modulus, "g")

    def element(self, coeffs: Iterable[int], gen: int | None = None) -> FieldElement:
        g = self.generation if gen is None else gen
        cs = _trim(tuple(c % self.p for c in coeffs))
        if len(cs) > self._levels[g].degree:
            cs = _pmod(cs, self._levels[g].modulus, self.p)
        if g == 0:
            return self._scalars[cs[0] if cs else 0]
        return FieldElement(self, g, cs)

    def from_int(self, c: int, gen: int | None = None) -> FieldElement:
        return self.element((c,), gen)

    def zero(self, gen: int | None = None) -> FieldElement:
        return self.element((), gen)

    def one(self, gen: int | None = None) -> FieldElement:
        return self.element((1,), gen)

    def gen_element(self, gen: int | None = None) -> FieldElement:
        g = self.generation if gen is None else gen
        if self._levels[g].degree == 1:
            raise AlgebraError("the prime field has no extension generator")
        return self.element((0, 1), g)

    def elements(self, gen: int | None = None) -> Iterator[FieldElement]:
        """All elements of a (small) field, in deterministic counter order."""
        g = self.generation if gen is None else gen
        d = self._levels[g].degree
        for code in range(self.p ** d):
            yield FieldElement(self, g, _digits(code, self.p, d))

    def embed(self, x: FieldElement, gen: int | None = None) -> FieldElement:
        """Move x up to a later generation (default: the current one)."""
        if x.tower is not self:
            raise AlgebraError("element belongs to a different tower")
        target = self.generation if gen is None else gen
        if target < x.gen:
            raise AlgebraError("cannot embed downward in the tower")
        cur, cs = x.gen, x.coeffs
        while cur < target:
            nxt = cur + 1
            image = self._levels[nxt].lift_prev or ()
            p, mod = self.p, self._levels[nxt].modulus
            acc: tuple[int, ...] = ()
            for c in reversed(cs):            # Horner at the generator image
                acc = _pmod(_padd(_pmul(acc, image, p), (c,), p), mod, p)
            cs, cur = acc, nxt
        return FieldElement(self, target, cs)

    def extend_to_absolute(self, degree: int) -> int:
        """Ensure the current field contains F_{p^degree}; return current gen."""
        cur = self.degree()
        target = cur * degree // math.gcd(cur, degree)
        if target == cur:
            return self.generation
        modulus = _find_irreducible(self.p, target)
        prev_mod = self._levels[-1].modulus
        level = _Level(target, modulus, None)
        self._levels.append(level)
        if cur == 1:
            level.lift_prev = ()  # previous generator is 0 (prime field)
        else:
            roots = _fp_roots_in_level(prev_mod, modulus, self.p, target)
            if not roots:
                raise AlgebraError("embedding root not found")  # unreachable
            level.lift_prev = min(roots, key=lambda t: (len(t), t))
        return self.generation


def parse_element(tower: FieldTower, text: str, gen: int | None = None) -> FieldElement:
    """Parse 'g^2+2*g+1' style field-element text."""
    g = tower.generation if gen is None else gen
    s = text.strip().replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise AlgebraError("empty field-element text")
    acc: dict[int, int] = {}
    for term in s.split("+"):
        if not term:
            raise AlgebraError(f"bad field-element text: {text!r}")
        c, e = 1, 0
        for part in term.split("*"):
            if part.isdigit():
                c *= int(part)
            elif part == "g":
                e += 1
            elif part.startswith("g^") and part[2:].isdigit():
                e += int(part[2:])
            else:
                raise AlgebraError(f"bad field-element term: {term!r}")
        acc[e] = acc.get(e, 0) + c
    cs = [0] * (max(acc) + 1)
    for e, c in acc.items():
        cs[e] = c % tower.p
    return tower.element(cs, g)


# ---------------------------------------------------------------------------
# polynomials with FieldElement coefficients (for root finding)
# ---------------------------------------------------------------------------

def _fe_trim(cs: list[FieldElement]) -> list[FieldElement]:
    n = len(cs)
    while n and cs[n - 1].is_zero():
        n -= 1
    return cs[:n]


def _fe_add(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> list[FieldElement]:
    big, small = (list(a), b) if len(a) >= len(b) else (list(b), a)
    for i, c in enumerate(small):
        big[i] = big[i] + c
    return _fe_trim(big)


def _fe_sub(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> list[FieldElement]:
    return _fe_add(a, [-c for c in b])


def _fe_mul(a: Sequence[FieldElement], b: Sequence[FieldElement],
            zero: FieldElement) -> list[FieldElement]:
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca.is_zero():
            for j, cb in enumerate(b):
                if not cb.is_zero():
                    out[i + j] = out[i + j] + ca * cb
    return _fe_trim(out)


def _fe_divmod(a: Sequence[FieldElement], b: Sequence[FieldElement],
               zero: FieldElement):
    b = _fe_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = b[-1].inverse()
    rem = list(a)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], _fe_trim(rem)
    quo = [zero] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if not c.is_zero():
            q = c * inv
            quo[i - db] = q
            for j, cb in enumerate(b):
                rem[i - db + j] = rem[i - db + j] - q * cb
    return _fe_trim(quo), _fe_trim(rem)


def _fe_mod(a, b, zero):
    return _fe_divmod(a, b, zero)[1]


def _fe_gcd(a: Sequence[FieldElement], b: Sequence[FieldElement],
            zero: FieldElement) -> list[FieldElement]:
    a, b = _fe_trim(list(a)), _fe_trim(list(b))
    while b:
        a, b = b, _fe_mod(a, b, zero)
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _fe_powmod(a: Sequence[FieldElement], e: int, mod: Sequence[FieldElement],
               one: FieldElement, zero: FieldElement) -> list[FieldElement]:
    result = [one]
    base = _fe_mod(list(a), mod, zero)
    while e:
        if e & 1:
            result = _fe_mod(_fe_mul(result, base, zero), mod, zero)
        base = _fe_mod(_fe_mul(base, base, zero), mod, zero)
        e >>= 1
    return result


def _fe_eval(cs: Sequence[FieldElement], x: FieldElement,
             zero: FieldElement) -> FieldElement:
    acc = zero
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _fe_deriv(cs: Sequence[FieldElement]) -> list[FieldElement]:
    return _fe_trim([cs[i] * i for i in range(1, len(cs))])


def _fe_monic(cs: list[FieldElement]) -> list[FieldElement]:
    cs = _fe_trim(cs)
    if cs:
        inv = cs[-1].inverse()
        cs = [c * inv for c in cs]
    return cs


# ---------------------------------------------------------------------------
# root finding over the closure
# ---------------------------------------------------------------------------

def _radical(f: list[FieldElement], tower: FieldTower, gen: int) -> list[FieldElement]:
    """Monic product of the distinct irreducible factors of f."""
    p = tower.p
    zero = tower.zero(gen)
    f = _fe_monic(list(f))
    if len(f) <= 1:
        return [tower.one(gen)]
    d = _fe_deriv(f)
    if not d:
        # f is a p-th power: f = h(x)^p with p-th-rooted coefficients
        h = [f[i].pth_root() for i in range(0, len(f), p)]
        return _radical(h, tower, gen)
    g = _fe_gcd(f, d, zero)
    w, _ = _fe_divmod(f, g, zero)     # distinct factors with mult not divisible by p
    while True:
        c = _fe_gcd(g, w, zero)
        if len(c) <= 1:
            break
        g, _ = _fe_divmod(g, c, zero)
    if len(g) <= 1:
        return _fe_monic(w)
    return _fe_monic(_fe_mul(w, _radical(g, tower, gen), zero))


def _splitting_lcm(sf: list[FieldElement], tower: FieldTower, gen: int) -> int:
    """lcm of the irreducible factor degrees of a squarefree polynomial,
    relative to the coefficient field."""
    zero, one = tower.zero(gen), tower.one(gen)
    q = tower.order(gen)
    rem = _fe_monic(list(sf))
    out = 1
    i = 0
    xq: list[FieldElement] = [zero, one]
    while len(rem) - 1 > 0:
        i += 1
        if 2 * i > len(rem) - 1:
            d = len(rem) - 1      # remaining part is irreducible
            out = out * d // math.gcd(out, d)
            break
        xq = _fe_powmod(xq, q, rem, one, zero)
        gi = _fe_gcd(_fe_sub(xq, [zero, one]), rem, zero)
        if len(gi) - 1 > 0:
            out = out * i // math.gcd(out, i)
            rem, _ = _fe_divmod(rem, gi, zero)
            if len(rem) - 1 > 0:
                xq = _fe_mod(xq, rem, zero)
    return out


_BRUTE_FIELD_LIMIT = 512


def _roots_in_current(cs: list[FieldElement], tower: FieldTower) -> list[FieldElement]:
    """Distinct roots of cs lying in the current field."""
    gen = tower.generation
    zero, one = tower.zero(gen), tower.one(gen)
    f = _fe_trim(list(cs))
    if len(f) <= 1:
        return []
    Q = tower.order(gen)
    if Q <= _BRUTE_FIELD_LIMIT:
        return [x for x in tower.elements(gen) if _fe_eval(f, x, zero).is_zero()]
    xq = _fe_powmod([zero, one], Q, f, one, zero)
    s = _fe_gcd(_fe_sub(xq, [zero, one]), f, zero)
    roots: list[FieldElement] = []
    d = tower.degree(gen)

    def split(poly: list[FieldElement]) -> None:
        poly = _fe_monic(list(poly))
        if len(poly) <= 1:
            return
        if len(poly) == 2:
            roots.append(-poly[0])
            return
        if tower.p == 2:
            # The trace form is nondegenerate, so for any two distinct roots
            # some F_2-basis multiplier a has Tr(a(r+s)) = 1 and the trace
            # polynomial of a*x separates them: scanning the basis suffices.
            a = one
            g_gen = FieldElement(tower, gen, (0, 1))
            for _ in range(d):
                t: list[FieldElement] = []
                term: list[FieldElement] = [zero, a]
                for _ in range(d):
                    t = _fe_add(t, term)
                    term = _fe_mod(_fe_mul(term, term, zero), poly, zero)
                g = _fe_gcd(t, poly, zero)
                if 0 < len(g) - 1 < len(poly) - 1:
                    split(g)
                    q, _ = _fe_divmod(poly, g, zero)
                    split(q)
                    return
                a = a * g_gen
        else:
            for a in tower.elements(gen):
                h = _fe_powmod([a, one], (Q - 1) // 2, poly, one, zero)
                g = _fe_gcd(_fe_sub(h, [one]), poly, zero)
                if 0 < len(g) - 1 < len(poly) - 1:
                    split(g)
                    q, _ = _fe_divmod(poly, g, zero)
                    split(q)
                    return
        raise AlgebraError("equal-degree splitting failed")  # unreachable

    split(s)
    return roots


def univ_roots(tower: FieldTower, coeffs: Sequence[FieldElement]
               ) -> list[tuple[FieldElement, int]]:
    """All closure roots of a univariate polynomial, with multiplicities.

    Extends the tower so every root lies in the current field.  Roots come
    back in the current generation, sorted by canonical encoding, and their
    multiplicities sum to the degree of the polynomial.
    """
    cs = _fe_trim(list(coeffs))
    if not cs:
        raise AlgebraError("univ_roots of the zero polynomial")
    if len(cs) == 1:
        return []
    gens = {c.gen for c in coeffs}
    if len(gens) > 1:
        raise AlgebraError("embedding required: coefficients from mixed generations")
    gen = cs[0].gen
    base_degree = tower.degree(gen)
    sf = _radical(cs, tower, gen)
    lcm = _splitting_lcm(sf, tower, gen)
    tower.extend_to_absolute(base_degree * lcm)
    cur = tower.generation
    f = [tower.embed(c, cur) for c in cs]
    zero = tower.zero(cur)
    found = _roots_in_current(f, tower)
    out: list[tuple[FieldElement, int]] = []
    for r in sorted(found, key=lambda e: e.sort_key()):
        mult = 0
        work = list(f)
        while True:
            quo, rem = _fe_divmod(work, [-r, tower.one(cur)], zero)
            if rem:
                break
            mult += 1
            work = quo
        out.append((r, mult))
    if sum(m for _, m in out) != len(cs) - 1:
        raise AlgebraError("root multiplicities do not sum to the degree")
    return out


def univ_roots_minimal(tower: FieldTower, coeffs: Sequence[FieldElement]
                       ) -> list[FieldElement]:
    """Distinct roots of the minimal-degree irreducible factors only.

    The shift searches need deterministic root representatives, not the full
    splitting field, and iterated full splits compound the tower degree
    multiplicatively; extending just far enough for the least factor degree
    keeps coefficient arithmetic small.  In particular no extension happens
    at all when a root already lies in the coefficient field.
    """
    cs = _fe_trim(list(coeffs))
    if not cs:
        raise AlgebraError("roots of the zero polynomial")
    if len(cs) == 1:
        return []
    gens = {c.gen for c in coeffs}
    if len(gens) > 1:
        raise AlgebraError("embedding required: coefficients from mixed generations")
    gen = cs[0].gen
    base_degree = tower.degree(gen)
    sf = _radical(cs, tower, gen)
    if len(sf) <= 1:
        return []
    zero, one = tower.zero(gen), tower.one(gen)
    q = tower.order(gen)
    rem = _fe_monic(list(sf))
    xq: list[FieldElement] = [zero, one]
    g: list[FieldElement] = rem
    d = len(rem) - 1
    i = 0
    while len(rem) - 1 > 0:
        i += 1
        if 2 * i > len(rem) - 1:
            g, d = rem, len(rem) - 1      # remaining part is irreducible
            break
        xq = _fe_powmod(xq, q, rem, one, zero)
        gi = _fe_gcd(_fe_sub(xq, [zero, one]), rem, zero)
        if len(gi) - 1 > 0:
            g, d = gi, i                  # all factors of the least degree
            break
    tower.extend_to_absolute(base_degree * d)
    cur = tower.generation
    f = [tower.embed(c, cur) for c in _fe_monic(g)]
    found = _roots_in_current(f, tower)
    return sorted(found, key=lambda e: e.sort_key())


# ---------------------------------------------------------------------------
# deterministic root finding of F_p-polynomials inside a fresh level
# (used only while wiring a new tower level, before embeddings exist)
# ---------------------------------------------------------------------------

def _fp_roots_in_level(f_fp: Sequence[int], modulus: tuple[int, ...],
                       p: int, degree: int) -> list[tuple[int, ...]]:
    """Roots, as coefficient tuples mod ``modulus``, of a polynomial with
    F_p coefficients inside the field F_p[g]/(modulus)."""
    zero: tuple[int, ...] = ()
    one: tuple[int, ...] = (1,)

    def cmul(a, b):
        return _pmod(_pmul(a, b, p), modulus, p)

    def cinv(a):
        r0, r1 = _trim(a), modulus
        s0, s1 = (1,), ()
        while r1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        ic = pow(r0[0], p - 2, p)
        return _pmod(_pscale(s0, ic, p), modulus, p)

    def ptrim(cs):
        n = len(cs)
        while n and not cs[n - 1]:
            n -= 1
        return list(cs[:n])

    def paddT(a, b):
        big, small = (list(a), b) if len(a) >= len(b) else (list(b), a)
        for i, c in enumerate(small):
            big[i] = _padd(big[i], c, p)
        return ptrim(big)

    def psubT(a, b):
        return paddT(a, [_pneg(c, p) for c in b])

    def pmulT(a, b):
        if not a or not b:
            return []
        out = [zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    if cb:
                        out[i + j] = _padd(out[i + j], cmul(ca, cb), p)
        return ptrim(out)

    def pdivmodT(a, b):
        b = ptrim(b)
        inv = cinv(b[-1])
        rem = list(a)
        db = len(b) - 1
        if len(rem) - 1 < db:
            return [], ptrim(rem)
        quo = [zero] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c:
                q = cmul(c, inv)
                quo[i - db] = q
                for j, cb in enumerate(b):
                    rem[i - db + j] = _psub(rem[i - db + j], cmul(q, cb), p)
        return ptrim(quo), ptrim(rem)

    def pgcdT(a, b):
        a, b = ptrim(a), ptrim(b)
        while b:
            a, b = b, pdivmodT(a, b)[1]
        if a:
            inv = cinv(a[-1])
            a = [cmul(c, inv) for c in a]
        return a

    def ppowmodT(a, e, mod):
        result = [one]
        base = pdivmodT(list(a), mod)[1]
        while e:
            if e & 1:
                result = pdivmodT(pmulT(result, base), mod)[1]
            base = pdivmodT(pmulT(base, base), mod)[1]
            e >>= 1
        return result

    f = ptrim([_trim((c % p,)) for c in f_fp])
    if len(f) <= 1:
        return []
    Q = p ** degree
    if Q <= _BRUTE_FIELD_LIMIT:
        out = []
        for code in range(Q):
            x = _digits(code, p, degree)
            acc = zero
            for c in reversed(f):
                acc = _padd(cmul(acc, x), c, p)
            if not acc:
                out.append(x)
        return out
    xq = ppowmodT([zero, one], Q, f)
    lin = pgcdT(psubT(xq, [zero, one]), f)
    roots: list[tuple[int, ...]] = []

    def split(s):
        s = ptrim(s)
        if len(s) <= 1:
            return
        inv = cinv(s[-1])
        s = [cmul(c, inv) for c in s]
        if len(s) == 2:
            roots.append(_pneg(s[0], p))
            return
        if p == 2:
            # basis multipliers g^i suffice: the trace form is nondegenerate
            for i in range(degree):
                a = (0,) * i + (1,)
                t: list[tuple[int, ...]] = []
                term = [zero, a]
                for _ in range(degree):
                    t = paddT(t, term)
                    term = pdivmodT(pmulT(term, term), s)[1]
                g = pgcdT(t, s)
                if 0 < len(g) - 1 < len(s) - 1:
                    split(g)
                    split(pdivmodT(s, g)[0])
                    return
        else:
            for code in range(Q):
                a = _digits(code, p, degree)
                h = ppowmodT([a, one], (Q - 1) // 2, s)
                g = pgcdT(psubT(h, [one]), s)
                if 0 < len(g) - 1 < len(s) - 1:
                    split(g)
                    split(pdivmodT(s, g)[0])
                    return
        raise AlgebraError("splitting failed")  # unreachable

    split(lin)
    return roots
