"""Exact multivariate polynomial arithmetic over Q.

Polynomials are sparse: a dict mapping exponent tuples to Fraction
coefficients, zero coefficients never stored.  The ambient ring is
Q[t1..tn] where every variable sits in cohomological degree 2, so the
cohomological degree of a monomial is twice its polynomial degree.

The fixed monomial order is graded lexicographic with t1 > ... > tn.

Rational numbers are fractions.Fraction throughout: it already keeps
gcd-reduced numerator/positive denominator, which is exactly the
normalization the engine needs.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .errors import NotDivisible, NotSplit

Exponent = tuple

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _grlex_key(e: Exponent):
    return (sum(e), e)


class Poly:
    """Sparse polynomial in Q[t1..tn]."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        if terms:
            self.terms = {e: c for e, c in terms.items() if c}
        else:
            self.terms = {}

    # ---------- constructors ----------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return cls(nvars)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): _ONE})

    @classmethod
    def linear_form(cls, coeffs: Sequence) -> "Poly":
        """Sum of coeffs[i] * t_{i+1}."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = Fraction(c)
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return cls(n, terms)

    @classmethod
    def monomial(cls, nvars: int, exponent: Sequence[int], c=1) -> "Poly":
        c = Fraction(c)
        if not c:
            return cls(nvars)
        return cls(nvars, {tuple(exponent): c})

    # ---------- queries ----------

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, _ZERO)

    def total_degree(self) -> int:
        """Polynomial degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def cohom_degree(self) -> int:
        """Cohomological degree (variables sit in degree 2)."""
        return 2 * self.total_degree()

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, d: int) -> "Poly":
        """Part of polynomial degree d."""
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def leading(self):
        """(exponent, coefficient) of the grlex-largest term."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda ec: _grlex_key(ec[0]), reverse=True)

    # ---------- arithmetic ----------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        p = Poly(self.nvars)
        p.terms = out
        return p

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, _ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        p = Poly(self.nvars)
        p.terms = out
        return p

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly(self.nvars)
        return Poly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # ---------- evaluation / substitution ----------

    def evaluate(self, point: Sequence) -> Fraction:
        vals = [Fraction(v) for v in point]
        total = _ZERO
        for e, c in self.terms.items():
            term = c
            for v, p in zip(vals, e):
                if p:
                    term *= v ** p
            total += term
        return total

    def subst(self, images: Sequence["Poly"], target_nvars: Optional[int] = None) -> "Poly":
        """Ring map t_i -> images[i]; images live in a common target ring."""
        if self.nvars == 0:
            if target_nvars is None:
                target_nvars = images[0].nvars if images else 0
            return Poly.const(target_nvars, self.constant_value())
        target = images[0].nvars
        cache = [{0: Poly.const(target, 1)} for _ in range(self.nvars)]

        def power(i: int, p: int) -> Poly:
            memo = cache[i]
            if p not in memo:
                memo[p] = power(i, p - 1) * images[i]
            return memo[p]

        out = Poly.zero(target)
        for e, c in self.terms.items():
            term = Poly.const(target, c)
            for i, p in enumerate(e):
                if p:
                    term = term * power(i, p)
            out = out + term
        return out

    def truncate(self, max_degree: int) -> "Poly":
        """Drop terms of polynomial degree above max_degree."""
        return Poly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= max_degree})

    def derivative(self, i: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return Poly(self.nvars, out)

    # ---------- normal forms ----------

    def content(self) -> Fraction:
        """Positive rational c with self/c integer and coprime; 0 for 0."""
        if not self.terms:
            return _ZERO
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, abs(c.numerator))
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        """Integer-coprime scalar multiple with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        _, lead = self.leading()
        if lead < 0:
            c = -c
        return self.scale(1 / c)

    # ---------- display ----------

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self.format()!r})"

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        if names is None:
            names = [f"t{i+1}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            factors = [f"{names[i]}^{p}" if p > 1 else names[i] for i, p in enumerate(e) if p]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(str(c) + "*" + "*".join(factors))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def monomials_of_degree(nvars: int, d: int) -> Iterator[Exponent]:
    """All exponent tuples of polynomial degree d, grlex-descending."""
    if nvars == 0:
        if d == 0:
            yield ()
        return

    def gen(rest: int, remaining: int):
        if rest == 1:
            yield (remaining,)
            return
        for first in range(remaining, -1, -1):
            for tail in gen(rest - 1, remaining - first):
                yield (first,) + tail

    yield from gen(nvars, d)


# ---------- exact division ----------


def divide_exact(f: Poly, g: Poly) -> Poly:
    """Exact quotient f/g in Q[t1..tn]; raises NotDivisible or ZeroDivisionError."""
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    if not f:
        return Poly.zero(f.nvars)
    ge, gc = g.leading()
    q = Poly.zero(f.nvars)
    r = f
    while r:
        re, rc = r.leading()
        diff = tuple(a - b for a, b in zip(re, ge))
        if any(d < 0 for d in diff):
            raise NotDivisible(f"{f} is not divisible by {g}")
        t = Poly.monomial(f.nvars, diff, rc / gc)
        q = q + t
        r = r - t * g
    return q


def _try_divide(f: Poly, g: Poly) -> Optional[Poly]:
    try:
        return divide_exact(f, g)
    except NotDivisible:
        return None


# ---------- gcd (primitive pseudo-remainder sequences) ----------


def _present_vars(f: Poly) -> list:
    present = set()
    for e in f.terms:
        for i, p in enumerate(e):
            if p:
                present.add(i)
    return sorted(present)


def _as_univar(f: Poly, v: int) -> dict:
    """View f as univariate in t_v: degree -> coefficient Poly (var v cleared)."""
    out: dict = {}
    for e, c in f.terms.items():
        d = e[v]
        e2 = list(e)
        e2[v] = 0
        coeff = out.setdefault(d, Poly.zero(f.nvars))
        out[d] = coeff + Poly.monomial(f.nvars, e2, c)
    return {d: p for d, p in out.items() if p}


def _from_univar(coeffs: dict, v: int, nvars: int) -> Poly:
    out = Poly.zero(nvars)
    for d, p in coeffs.items():
        shifted = {}
        for e, c in p.terms.items():
            e2 = list(e)
            e2[v] += d
            shifted[tuple(e2)] = c
        out = out + Poly(nvars, shifted)
    return out


def gcd_poly(f: Poly, g: Poly) -> Poly:
    """Gcd in Q[t1..tn], normalized integer-primitive with positive leading coeff.

    Strips the monomial gcd first, dehomogenizes homogeneous inputs one
    variable at a time, and runs a subresultant pseudo-remainder sequence
    with a fast integer path for univariate polynomials.
    """
    if not f and not g:
        return Poly.zero(f.nvars)
    if not f:
        return g.primitive()
    if not g:
        return f.primitive()
    n = f.nvars
    mf, f1 = _strip_monomial(f)
    mg, g1 = _strip_monomial(g)
    common = tuple(min(a, b) for a, b in zip(mf, mg))
    core = _gcd_core(f1, g1)
    return (Poly.monomial(n, common) * core).primitive()


def _strip_monomial(f: Poly):
    """Factor out the largest monomial dividing every term."""
    mins = None
    for e in f.terms:
        if mins is None:
            mins = list(e)
        else:
            mins = [min(a, b) for a, b in zip(mins, e)]
    if mins is None or not any(mins):
        return (0,) * f.nvars, f
    stripped = {tuple(a - b for a, b in zip(e, mins)): c for e, c in f.terms.items()}
    return tuple(mins), Poly(f.nvars, stripped)


def _gcd_core(f: Poly, g: Poly) -> Poly:
    n = f.nvars
    if f.is_constant() or g.is_constant():
        return Poly.const(n, 1)
    fv, gv = _present_vars(f), _present_vars(g)
    common = [v for v in fv if v in gv]
    if not common:
        return Poly.const(n, 1)
    if f.is_homogeneous() and g.is_homogeneous() and (len(fv) > 1 or len(gv) > 1):
        v = common[-1]
        h = _gcd_core(_dehomogenize(f, v), _dehomogenize(g, v))
        return _rehomogenize(h, v)
    only = [v for v in set(fv) | set(gv)]
    if len(only) == 1:
        return _gcd_univar(f, g, only[0])
    return _gcd_prs(f, g, common)


def _dehomogenize(f: Poly, v: int) -> Poly:
    """Set t_v = 1 in a homogeneous polynomial (no monomial collisions)."""
    out = {}
    for e, c in f.terms.items():
        e2 = list(e)
        e2[v] = 0
        out[tuple(e2)] = c
    return Poly(f.nvars, out)


def _rehomogenize(h: Poly, v: int) -> Poly:
    d = h.total_degree()
    out = {}
    for e, c in h.terms.items():
        e2 = list(e)
        e2[v] = d - sum(e)
        out[tuple(e2)] = c
    return Poly(h.nvars, out)


def _gcd_univar(f: Poly, g: Poly, v: int) -> Poly:
    """Primitive integer Euclid for polynomials in the single variable t_v."""

    def to_ints(p: Poly):
        deg = max(e[v] for e in p.terms)
        den = 1
        for c in p.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        coeffs = [0] * (deg + 1)
        for e, c in p.terms.items():
            coeffs[e[v]] = int(c * den)
        g0 = 0
        for c in coeffs:
            g0 = math.gcd(g0, abs(c))
        return [c // g0 for c in coeffs] if g0 else coeffs

    a, b = to_ints(f), to_ints(g)
    if len(a) < len(b):
        a, b = b, a
    while True:
        # integer pseudo-remainder, content-stripped
        db = len(b) - 1
        lb = b[-1]
        r = list(a)
        while len(r) - 1 >= db:
            dr = len(r) - 1
            lr = r[-1]
            # r <- lb*r - lr*x^(dr-db)*b cancels the leading term
            r = [lb * c for c in r]
            for i, bc in enumerate(b):
                r[dr - db + i] -= lr * bc
            while r and not r[-1]:
                r.pop()
            if not r:
                break
        if not r:
            break
        g0 = 0
        for c in r:
            g0 = math.gcd(g0, abs(c))
        r = [c // g0 for c in r]
        a, b = b, r
        if len(b) == 1:
            return Poly.const(f.nvars, 1)
    terms = {}
    for i, c in enumerate(b):
        if c:
            e = [0] * f.nvars
            e[v] = i
            terms[tuple(e)] = Fraction(c)
    return Poly(f.nvars, terms).primitive()


def _gcd_prs(f: Poly, g: Poly, common: list) -> Poly:
    """Subresultant pseudo-remainder sequence in the main variable."""
    n = f.nvars
    v = min(common, key=lambda i: max(e[i] for e in f.terms) + max(e[i] for e in g.terms))
    fu, gu = _as_univar(f, v), _as_univar(g, v)

    def content_of(u: dict) -> Poly:
        c = Poly.zero(n)
        for p in u.values():
            c = gcd_poly(c, p)
            if c.is_constant():
                break
        return c

    def divided(u: dict, cont: Poly) -> dict:
        if cont.is_constant():
            cv = cont.constant_value()
            if cv == 1:
                return u
            return {d: p.scale(1 / cv) for d, p in u.items()}
        return {d: divide_exact(p, cont) for d, p in u.items()}

    fc, gc = content_of(fu), content_of(gu)
    a, b = divided(fu, fc), divided(gu, gc)
    cont_gcd = gcd_poly(fc, gc)
    if max(a) < max(b):
        a, b = b, a
    gg = Poly.const(n, 1)
    hh = Poly.const(n, 1)
    while True:
        delta = max(a) - max(b)
        r = _pseudo_rem(a, b, n)
        if not r:
            result = _from_univar(divided(b, content_of(b)), v, n)
            return (cont_gcd * result).primitive()
        if max(r) == 0:
            return cont_gcd
        divisor = gg * (hh ** delta)
        try:
            r = divided(r, divisor) if not divisor.is_constant() or \
                divisor.constant_value() != 1 else r
        except NotDivisible:
            r = divided(r, content_of(r))
        a, b = b, r
        gg = a[max(a)]
        if delta >= 1:
            hh = divide_exact(gg ** delta, hh ** (delta - 1)) if delta > 1 else gg
        # delta == 0 keeps hh unchanged


def _pseudo_rem(a: dict, b: dict, nvars: int) -> dict:
    """Pseudo-remainder of univariate-with-Poly-coefficient representations."""
    da, db = max(a), max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r[dr]
        # r <- lb*r - lr * X^(dr-db) * b
        new = {}
        for d, p in r.items():
            new[d] = p * lb
        for d, p in b.items():
            shift = d + dr - db
            new[shift] = new.get(shift, Poly.zero(nvars)) - lr * p
        r = {d: p for d, p in new.items() if p}
    return r


def lcm_poly(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return Poly.zero(f.nvars)
    return divide_exact(f * g, gcd_poly(f, g)).primitive()


# ---------- rational functions ----------


class RatFun:
    """Normalized quotient of two polynomials.

    Invariants: denominator nonzero, gcd(num, den) = 1, denominator
    integer-primitive with positive leading coefficient under grlex.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None, _normalized: bool = False):
        if den is None:
            den = Poly.const(num.nvars, 1)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            num, den = _normalize_pair(num, den)
        self.num = num
        self.den = den

    @classmethod
    def from_const(cls, nvars: int, c) -> "RatFun":
        return cls(Poly.const(nvars, c))

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num.scale(1 / self.den.constant_value())

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den, _normalized=True)

    def __add__(self, other: "RatFun") -> "RatFun":
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RatFun") -> "RatFun":
        return RatFun(self.num * other.den - other.num * self.den, self.den * other.den)

    def __mul__(self, other) -> "RatFun":
        if isinstance(other, (int, Fraction)):
            return RatFun(self.num.scale(other), self.den, _normalized=not other == 0)
        return RatFun(self.num * other.num, self.den * other.den)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other: "RatFun") -> "RatFun":
        if not other.num:
            raise ZeroDivisionError("division by zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.as_poly())
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFun({self})"


def _normalize_pair(p: Poly, q: Poly):
    if not p:
        return Poly.zero(p.nvars), Poly.const(p.nvars, 1)
    g = gcd_poly(p, q)
    if not g.is_constant() or g.constant_value() != 1:
        p = divide_exact(p, g)
        q = divide_exact(q, g)
    c = q.content()
    _, lead = q.leading()
    if lead < 0:
        c = -c
    return p.scale(1 / c), q.scale(1 / c)


def normalize_ratfun(p: Poly, q: Poly) -> RatFun:
    """The normalized rational function p/q."""
    return RatFun(p, q)


# ---------- factorization into linear forms ----------


def _content_free_linear(coeffs: Sequence[Fraction]):
    """Primitive integer vector proportional to coeffs, sign-normalized."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    if g == 0:
        return None
    ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-w for w in ints]
            break
    return tuple(ints)


def rational_roots(coeffs: Sequence[Fraction]) -> list:
    """All rational roots (without multiplicity) of sum(coeffs[i] x^i)."""
    # strip trailing zeros (leading coefficient side)
    cs = list(coeffs)
    while cs and not cs[-1]:
        cs.pop()
    if not cs:
        raise ZeroDivisionError("root search on the zero polynomial")
    roots = []
    low = 0
    while not cs[low]:
        low += 1
    if low > 0:
        roots.append(Fraction(0))
        cs = cs[low:]
    if len(cs) == 1:
        return roots
    den = 1
    for c in cs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    ints = [v // g for v in ints]

    def divisors(n: int) -> list:
        n = abs(n)
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return out

    a0, ad = ints[0], ints[-1]
    seen = set()
    for p in divisors(a0):
        for q in divisors(ad):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand in seen:
                    continue
                seen.add(cand)
                val = Fraction(0)
                for c in reversed(ints):
                    val = val * cand + c
                if not val:
                    roots.append(cand)
    return roots


def factor_into_linear_forms(f: Poly, candidates: Optional[Iterable[Sequence[int]]] = None,
                             seed: int = 0, retries: int = 8):
    """Write homogeneous f as scalar * product of primitive integer linear forms.

    Returns (scalar, factors) where factors is a dict mapping coefficient
    tuples to multiplicities.  Trial division against `candidates` runs
    first; the general method evaluates on random rational lines, finds
    rational roots, lifts each root to a linear form by a truncated Newton
    step, and certifies every factor by exact division.  Raises NotSplit.
    """
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    if not f.is_homogeneous():
        raise ValueError("factor_into_linear_forms requires homogeneous input")
    n = f.nvars
    factors: dict = {}
    rest = f
    if candidates:
        for cand in candidates:
            form = _content_free_linear([Fraction(c) for c in cand])
            if form is None:
                continue
            lf = Poly.linear_form(form)
            while True:
                q = _try_divide(rest, lf)
                if q is None:
                    break
                factors[form] = factors.get(form, 0) + 1
                rest = q
    rng = random.Random(seed)
    rest, found = _factor_split(rest, rng, retries)
    for form, m in found.items():
        factors[form] = factors.get(form, 0) + m
    scalar = rest.constant_value()
    return scalar, factors


def _factor_split(f: Poly, rng: random.Random, retries: int):
    """Factor remaining homogeneous f completely; returns (constant, factors)."""
    factors: dict = {}
    rest = f
    n = f.nvars
    while rest.total_degree() > 0:
        vs = _present_vars(rest)
        v = vs[0]
        form = _find_linear_factor(rest, v, rng, retries)
        if form is None:
            raise NotSplit(f"{f} is not a product of linear forms over Q")
        lf = Poly.linear_form(form)
        q = _try_divide(rest, lf)
        if q is None:
            raise NotSplit(f"{f} is not a product of linear forms over Q")
        while q is not None:
            factors[form] = factors.get(form, 0) + 1
            rest = q
            q = _try_divide(rest, lf)
    return rest, factors


def _find_linear_factor(f: Poly, v: int, rng: random.Random, retries: int):
    """One linear factor of homogeneous f involving t_v; None if none certifies.

    Works on the squarefree part with respect to t_v so that sampled roots
    are simple and the gradient lift is well defined.
    """
    n = f.nvars
    red = divide_exact(f, gcd_poly(f, f.derivative(v)))
    fu = _as_univar(red, v)
    d = max(fu)
    if d == 0:
        return None
    others = [i for i in range(n) if i != v]
    for _ in range(max(1, retries)):
        point = [Fraction(rng.randint(-6, 6)) for _ in others]
        # univariate in t_v along the line t_other = point
        coeffs = [Fraction(0)] * (d + 1)
        vals = [Fraction(0)] * n
        for i, val in zip(others, point):
            vals[i] = val
        for deg, p in fu.items():
            coeffs[deg] = p.evaluate(vals)
        if not coeffs[d]:
            continue  # degenerate sample
        roots = rational_roots(coeffs)
        for rho in roots:
            form = _lift_root(red, f, v, others, point, rho)
            if form is not None:
                return form
    return None


def _lift_root(red: Poly, f: Poly, v: int, others: Sequence[int],
               point: Sequence[Fraction], rho: Fraction):
    """Lift a simple root t_v = rho at `point` to a certified linear factor.

    For a split polynomial a simple root lies on exactly one hyperplane
    factor, whose coefficient vector is the gradient direction there.
    """
    n = red.nvars
    vals = [Fraction(0)] * n
    for i, val in zip(others, point):
        vals[i] = val
    vals[v] = rho
    dfv = red.derivative(v).evaluate(vals)
    if not dfv:
        return None  # sample hit an intersection of factor hyperplanes
    coeffs = [Fraction(0)] * n
    coeffs[v] = Fraction(1)
    for i in others:
        coeffs[i] = red.derivative(i).evaluate(vals) / dfv
    form = _content_free_linear(coeffs)
    if form is None:
        return None
    if _try_divide(f, Poly.linear_form(form)) is None:
        return None
    return form


# ---------- JSON encoding ----------


def poly_to_json(f: Poly) -> dict:
    return {"terms": [{"c": str(c), "e": list(e)} for e, c in f.sorted_terms()]}


def poly_from_json(data: dict, nvars: int) -> Poly:
    terms = {}
    for item in data.get("terms", []):
        e = tuple(int(x) for x in item["e"])
        if len(e) != nvars:
            raise ValueError(f"exponent {e} has wrong length, expected {nvars}")
        c = Fraction(item["c"])
        if c:
            terms[e] = terms.get(e, _ZERO) + c
    return Poly(nvars, terms)


def ratfun_to_json(r: RatFun) -> dict:
    return {"num": poly_to_json(r.num), "den": poly_to_json(r.den)}


def ratfun_from_json(data: dict, nvars: int) -> RatFun:
    return RatFun(poly_from_json(data["num"], nvars), poly_from_json(data["den"], nvars))
