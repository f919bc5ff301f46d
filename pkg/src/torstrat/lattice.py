"""Torus, subtorus, and weight arithmetic.

A subtorus of T = (S^1)^n is stored through its cocharacter lattice: a
saturated rank-k sublattice of Z^n, canonicalized to row Hermite normal
form so that equality of subtori is structural equality.  Weights are
integer characters, i.e. degree-2 linear forms on the Lie algebra.
"""

from __future__ import annotations

import math
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import InputError
from .exact import Poly


# ---------- integer matrix normal forms ----------


def row_hnf(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Row Hermite normal form: pivots positive, entries above reduced into
    [0, pivot); zero rows dropped.  Canonical for the row lattice."""
    m = [list(map(int, r)) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        # find a row with nonzero entry in column c at or below r
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        # clear below with gcd steps
        for i in range(r + 1, len(m)):
            while m[i][c]:
                q = m[r][c] // m[i][c]
                m[r] = [a - q * b for a, b in zip(m[r], m[i])]
                m[r], m[i] = m[i], m[r]
        if m[r][c] < 0:
            m[r] = [-a for a in m[r]]
        # reduce above
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [a - q * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return [row for row in m[:r] if any(row)]


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Basis (rows, HNF) of {x in Z^ncols : M x = 0}.

    Computed by row-reducing [M^T | I] and reading off the identity part of
    rows whose M^T part vanished; such a kernel basis is automatically
    saturated.
    """
    mt = [[rows[j][i] for j in range(len(rows))] for i in range(ncols)]
    aug = [mt[i] + [1 if j == i else 0 for j in range(ncols)] for i in range(ncols)]
    k = len(rows)
    r = 0
    for c in range(k):
        piv = None
        for i in range(r, ncols):
            if aug[i][c]:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(r + 1, ncols):
            while aug[i][c]:
                q = aug[r][c] // aug[i][c]
                aug[r] = [a - q * b for a, b in zip(aug[r], aug[i])]
                aug[r], aug[i] = aug[i], aug[r]
        r += 1
        if r == ncols:
            break
    kernel = [row[k:] for row in aug[r:]]
    return row_hnf(kernel)


def smith_normal_form(mat: Sequence[Sequence[int]]):
    """Smith normal form with transforms: returns (P, D, Q) with P·mat·Q = D,
    P and Q unimodular, D diagonal with divisibility d1 | d2 | ..."""
    a = [list(map(int, row)) for row in mat]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    p = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    q = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        p[i], p[j] = p[j], p[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in q:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        p[dst] = [x + c * y for x, y in zip(p[dst], p[src])]

    def add_col(src, dst, c):
        for row in a:
            row[dst] += c * row[src]
        for row in q:
            row[dst] += c * row[src]

    t = 0
    while t < min(nrows, ncols):
        # find a nonzero pivot in the remaining block
        piv = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            again = False
            for i in range(t + 1, nrows):
                while a[i][t]:
                    qq = a[i][t] // a[t][t]
                    add_row(t, i, -qq)
                    if a[i][t]:
                        swap_rows(t, i)
                        again = True
            for j in range(t + 1, ncols):
                while a[t][j]:
                    qq = a[t][j] // a[t][t]
                    add_col(t, j, -qq)
                    if a[t][j]:
                        swap_cols(t, j)
                        again = True
            if again:
                continue
            # pivot must divide the remaining block for the divisor chain
            offender = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % a[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            p[t] = [-x for x in p[t]]
        t += 1
    return p, a, q


def left_inverse(columns: Sequence[Sequence[int]], n: int) -> List[List[int]]:
    """Integer L (k x n) with L B = I for the n x k matrix B with the given
    columns, which must span a saturated rank-k sublattice."""
    k = len(columns)
    if k == 0:
        return []
    b = [[columns[j][i] for j in range(k)] for i in range(n)]  # n x k
    p, d, q = smith_normal_form(b)
    for i in range(k):
        if d[i][i] != 1:
            raise InputError("lattice is not saturated; cannot invert over Z")
    # L = Q [I_k 0] P
    l = []
    for i in range(k):
        row = [0] * n
        for j in range(k):
            if q[i][j]:
                for c in range(n):
                    row[c] += q[i][j] * p[j][c]
        l.append(row)
    return l


# ---------- weights ----------


def primitive_weight(coords: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
    """(primitive vector, content); raises on the zero vector."""
    g = 0
    for c in coords:
        g = math.gcd(g, abs(int(c)))
    if g == 0:
        raise InputError("zero weight is not allowed")
    return tuple(int(c) // g for c in coords), g


def sign_normalized(coords: Sequence[int]) -> Tuple[int, ...]:
    """Primitive representative with positive first nonzero coordinate."""
    prim, _ = primitive_weight(coords)
    for c in prim:
        if c:
            if c < 0:
                prim = tuple(-x for x in prim)
            break
    return prim


def weight_poly(coords: Sequence[int], nvars: Optional[int] = None) -> Poly:
    if nvars is None:
        nvars = len(coords)
    return Poly.linear_form(list(coords))


# ---------- subtori ----------


class Subtorus:
    """A connected closed subgroup of T, by its saturated cocharacter lattice.

    `basis` is a tuple of generator rows (each of length n) in Hermite
    normal form; equality and hashing are structural.
    """

    __slots__ = ("n", "basis")

    def __init__(self, n: int, generators: Sequence[Sequence[int]], saturate: bool = True):
        self.n = n
        gens = [list(map(int, g)) for g in generators]
        for g in gens:
            if len(g) != n:
                raise InputError(f"cocharacter of length {len(g)}, ambient rank {n}")
        if saturate and gens:
            # saturation = double integer orthogonal complement
            orth = integer_kernel(gens, n)
            gens = integer_kernel(orth, n) if orth else [
                [1 if i == j else 0 for j in range(n)] for i in range(n)]
        self.basis = tuple(tuple(r) for r in row_hnf(gens))

    @classmethod
    def full(cls, n: int) -> "Subtorus":
        return cls(n, [[1 if i == j else 0 for j in range(n)] for i in range(n)], saturate=False)

    @classmethod
    def trivial(cls, n: int) -> "Subtorus":
        return cls(n, [], saturate=False)

    @classmethod
    def weight_kernel(cls, n: int, weight: Sequence[int]) -> "Subtorus":
        prim, _ = primitive_weight(weight)
        return cls(n, integer_kernel([list(prim)], n), saturate=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def corank(self) -> int:
        return self.n - self.rank

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subtorus):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def __lt__(self, other: "Subtorus") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        """Rank descending, then lexicographic HNF basis."""
        return (-self.rank, self.basis)

    def __repr__(self):
        return f"Subtorus(n={self.n}, basis={[list(b) for b in self.basis]})"

    def to_json(self) -> dict:
        return {"basis": [list(b) for b in self.basis]}

    @classmethod
    def from_json(cls, data: dict, n: int) -> "Subtorus":
        return cls(n, data.get("basis", []))

    # ---- the prime ideal p_U and the multiplicative set S_U ----

    def ideal_forms(self) -> List[Tuple[int, ...]]:
        """Integer basis of the linear forms vanishing on span(U): generates p_U."""
        if self.rank == 0:
            return [tuple(1 if j == i else 0 for j in range(self.n)) for i in range(self.n)]
        return [tuple(r) for r in integer_kernel([list(b) for b in self.basis], self.n)]

    def restrict_poly(self, f: Poly) -> Poly:
        """Image of f under Q[t1..tn] -> Q[u1..uk], t = B u (B columns = basis)."""
        images = [Poly.linear_form([b[i] for b in self.basis]) for i in range(self.n)]
        if self.rank == 0:
            images = [Poly.zero(0) for _ in range(self.n)]
        return f.subst(images, target_nvars=self.rank)

    def contains_form_in_ideal(self, f: Poly) -> bool:
        """Is f in p_U (vanishes on span U)?"""
        return not self.restrict_poly(f)

    def section_matrix(self) -> List[List[int]]:
        """Integer L with L B = I_k; lifts Q[u1..uk] back into Q[t1..tn]."""
        cols = [[b[i] for b in self.basis] for i in range(self.n)]
        # columns of B are the basis vectors: build column list properly
        columns = [list(b) for b in self.basis]
        return left_inverse(columns, self.n)

    def lift_poly(self, g: Poly) -> Poly:
        """Section of restrict_poly: homogeneous right inverse on polynomials."""
        l = self.section_matrix()
        images = [Poly.linear_form(l[j]) for j in range(self.rank)]
        return g.subst(images, target_nvars=self.n)

    def coordinates_in(self, bigger: "Subtorus") -> List[List[int]]:
        """Integer matrix C with basis(self)^T = basis(bigger)^T C, i.e. the
        coordinates of this subtorus inside `bigger` (requires containment)."""
        l = bigger.section_matrix()
        c = []
        for g in self.basis:
            c.append([sum(l[j][i] * g[i] for i in range(self.n)) for j in range(bigger.rank)])
        # columns index self's basis vectors
        return [[c[a][b] for a in range(len(self.basis))] for b in range(bigger.rank)]


def in_SU(f: Poly, u: Subtorus) -> bool:
    """Membership of f in S_U = R minus p_U."""
    return bool(u.restrict_poly(f))


def subtorus_intersection(u: Subtorus, v: Subtorus) -> Subtorus:
    """Saturation of span(U) intersect span(V) intersect Z^n."""
    if u.n != v.n:
        raise InputError("subtori live in different ambient tori")
    forms = [list(f) for f in u.ideal_forms()] + [list(f) for f in v.ideal_forms()]
    if not forms:
        return Subtorus.full(u.n)
    return Subtorus(u.n, integer_kernel(forms, u.n), saturate=False)


def subtorus_contains(u: Subtorus, v: Subtorus) -> bool:
    """span(V) contained in span(U)?"""
    if u.n != v.n:
        raise InputError("subtori live in different ambient tori")
    for f in u.ideal_forms():
        for b in v.basis:
            if sum(x * y for x, y in zip(f, b)) != 0:
                return False
    return True


def enumerate_candidate_subtori(n: int, weights: Iterable[Sequence[int]]) -> List[Subtorus]:
    """Closure under pairwise intersection of {T, trivial} and weight kernels,
    deduplicated and canonically sorted (rank descending, HNF lexicographic)."""
    found = {Subtorus.full(n), Subtorus.trivial(n)}
    for w in weights:
        found.add(Subtorus.weight_kernel(n, w))
    while True:
        new = set()
        items = sorted(found, key=Subtorus.sort_key)
        for i, a in enumerate(items):
            for b in items[i + 1:]:
                c = subtorus_intersection(a, b)
                if c not in found:
                    new.add(c)
        if not new:
            break
        found |= new
    return sorted(found, key=Subtorus.sort_key)
