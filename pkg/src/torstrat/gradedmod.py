"""Degreewise linear algebra for graded submodules of R^l.

Elements are tuples of polynomials, homogeneous of one cohomological
degree across all components.  A degree slice is vectorized over Q by
listing, per component, the coefficients on all monomials of the
matching polynomial degree; module spans, graded Nakayama generator
extraction, and coefficient solves all reduce to exact Gaussian
elimination on those vectors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .exact import Poly, monomials_of_degree
from .linalg import rref, solve

_ONE = Fraction(1)
_ZERO = Fraction(0)


class TupleSpace:
    """Vectorization of degree slices of R^l, R = Q[t1..tn]."""

    def __init__(self, nvars: int, ncopies: int):
        self.nvars = nvars
        self.ncopies = ncopies
        self._mons: dict = {}

    def monomials(self, pdeg: int) -> List[tuple]:
        if pdeg < 0:
            return []
        if pdeg not in self._mons:
            self._mons[pdeg] = list(monomials_of_degree(self.nvars, pdeg))
        return self._mons[pdeg]

    def dim(self, d: int) -> int:
        """Q-dimension of the degree-d slice (d cohomological, must be even)."""
        if d % 2:
            return 0
        return self.ncopies * len(self.monomials(d // 2))

    def vectorize(self, tup: Sequence[Poly], d: int) -> List[Fraction]:
        pdeg = d // 2
        mons = self.monomials(pdeg)
        index = {e: i for i, e in enumerate(mons)}
        vec = [_ZERO] * (self.ncopies * len(mons))
        for c, f in enumerate(tup):
            base = c * len(mons)
            for e, coeff in f.terms.items():
                if sum(e) != pdeg:
                    raise ValueError(f"component not homogeneous of degree {d}")
                vec[base + index[e]] = coeff
        return vec

    def unvectorize(self, vec: Sequence[Fraction], d: int) -> List[Poly]:
        pdeg = d // 2
        mons = self.monomials(pdeg)
        out = []
        for c in range(self.ncopies):
            terms = {}
            for i, e in enumerate(mons):
                coeff = vec[c * len(mons) + i]
                if coeff:
                    terms[e] = Fraction(coeff)
            out.append(Poly(self.nvars, terms))
        return out


def tuple_mul_poly(tup: Sequence[Poly], f: Poly) -> List[Poly]:
    return [f * g for g in tup]


def tuple_mul_pointwise(a: Sequence[Poly], b: Sequence[Poly]) -> List[Poly]:
    return [x * y for x, y in zip(a, b)]


def span_slice(space: TupleSpace, generators: Sequence[Tuple[Sequence[Poly], int]],
               d: int) -> List[List[Fraction]]:
    """Row-reduced basis of the degree-d slice of the R-span of the generators.

    `generators` is a list of (tuple, cohomological degree).
    """
    rows = []
    for tup, gd in generators:
        rem = d - gd
        if rem < 0 or rem % 2:
            continue
        for m in space.monomials(rem // 2):
            mono = Poly.monomial(space.nvars, m)
            rows.append(space.vectorize(tuple_mul_poly(tup, mono), d))
    if not rows:
        return []
    red, pivots = rref(rows, _ONE)
    return red[: len(pivots)]


def extend_basis(basis_rows: List[List[Fraction]], candidates: List[List[Fraction]]):
    """Grow an rref basis by the candidate vectors not already in its span.

    Returns (new_basis_rows, added_indices).
    """
    rows = [list(r) for r in basis_rows]
    added = []
    for idx, cand in enumerate(candidates):
        test = rows + [list(cand)]
        red, pivots = rref(test, _ONE)
        if len(pivots) > len(rows):
            rows = red[: len(pivots)]
            added.append(idx)
    return rows, added


def express_in_generators(space: TupleSpace,
                          generators: Sequence[Tuple[Sequence[Poly], int]],
                          target: Sequence[Poly], d: int) -> Optional[List[Poly]]:
    """Polynomial coefficients c_k with sum c_k * gen_k = target (degree d).

    Returns one solution (list aligned with generators) or None.
    """
    columns = []
    labels = []
    for k, (tup, gd) in enumerate(generators):
        rem = d - gd
        if rem < 0 or rem % 2:
            continue
        for m in space.monomials(rem // 2):
            mono = Poly.monomial(space.nvars, m)
            columns.append(space.vectorize(tuple_mul_poly(tup, mono), d))
            labels.append((k, m))
    rhs = space.vectorize(target, d)
    if not columns:
        return None if any(rhs) else [Poly.zero(space.nvars) for _ in generators]
    nrows = len(rhs)
    mat = [[columns[c][r] for c in range(len(columns))] for r in range(nrows)]
    sol = solve(mat, list(rhs), _ZERO, _ONE)
    if sol is None:
        return None
    out = [Poly.zero(space.nvars) for _ in generators]
    for (k, m), coeff in zip(labels, sol):
        if coeff:
            out[k] = out[k] + Poly.monomial(space.nvars, m, coeff)
    return out
