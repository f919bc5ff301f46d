"""Algebra presentations, GKM graph cohomology, and localization.

The central object is AlgebraPresentation: a finitely generated free
graded module over R = Q[t1..tn] with structure constants, optionally
carrying an embedding into a direct sum of R-copies (restriction to the
fixed points) and a list of candidate weights.

build_from_gkm computes the congruence subalgebra of a weighted graph
degree by degree and extracts a module basis by graded Nakayama;
localize specializes a presentation at a subtorus U, producing a finite
dimensional algebra over the fraction field of Q[u1..uk].
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import Disconnected, InputError, NotFree
from .exact import (Poly, RatFun, divide_exact, monomials_of_degree, poly_from_json,
                    poly_to_json)
from .gradedmod import (TupleSpace, extend_basis, span_slice, tuple_mul_pointwise)
from .lattice import Subtorus, integer_kernel, primitive_weight, sign_normalized
from .linalg import det_bareiss, nullspace, poly_adjugate, rref

_ONE = Fraction(1)
_ZERO = Fraction(0)


class GKMGraph:
    """A connected graph with nonzero integer weight labels on edges."""

    def __init__(self, torus_rank: int, vertices: Sequence[str],
                 edges: Sequence[Tuple[int, int, Sequence[int]]], name: str = ""):
        self.n = torus_rank
        self.vertices = list(vertices)
        self.edges = []
        for a, b, w in edges:
            if a == b:
                raise InputError("self-loops are not allowed")
            if not (0 <= a < len(vertices) and 0 <= b < len(vertices)):
                raise InputError("edge endpoint out of range")
            prim, _ = primitive_weight(w)
            self.edges.append((min(a, b), max(a, b), prim))
        self.name = name

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        seen = {0}
        stack = [0]
        adj: Dict[int, list] = {}
        for a, b, _ in self.edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        while stack:
            v = stack.pop()
            for w in adj.get(v, []):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def gkm_valid(self) -> bool:
        """Weights at each vertex pairwise linearly independent."""
        at: Dict[int, list] = {}
        for a, b, w in self.edges:
            at.setdefault(a, []).append(w)
            at.setdefault(b, []).append(w)
        for ws in at.values():
            for i in range(len(ws)):
                for j in range(i + 1, len(ws)):
                    if sign_normalized(ws[i]) == sign_normalized(ws[j]):
                        return False
        return True

    def weight_list(self) -> List[tuple]:
        out = []
        seen = set()
        for _, _, w in self.edges:
            s = sign_normalized(w)
            if s not in seen:
                seen.add(s)
                out.append(s)
        return out

    def to_json(self) -> dict:
        data = {
            "kind": "gkm",
            "rank": self.n,
            "vertices": list(self.vertices),
            "edges": [{"ends": [a, b], "weight": list(w)} for a, b, w in self.edges],
        }
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_json(cls, data: dict) -> "GKMGraph":
        if data.get("kind") != "gkm":
            raise InputError("expected kind 'gkm'")
        edges = [(e["ends"][0], e["ends"][1], e["weight"]) for e in data.get("edges", [])]
        return cls(int(data["rank"]), data.get("vertices", []), edges,
                   name=data.get("name", ""))


class AlgebraPresentation:
    """Free graded R-algebra with basis, structure constants, and options.

    mul maps (i, j) with i <= j to {k: Poly}; missing pairs multiply to 0.
    embedding, when present, lists for each basis element its tuple of
    restrictions to the fixed-point components.
    """

    def __init__(self, torus_rank: int, basis: Sequence[Tuple[str, int]],
                 mul: Dict[Tuple[int, int], Dict[int, Poly]],
                 embedding: Optional[Sequence[Sequence[Poly]]] = None,
                 weights: Optional[Sequence[Sequence[int]]] = None,
                 name: str = ""):
        self.n = torus_rank
        self.basis = [(str(nm), int(d)) for nm, d in basis]
        self.mul = {}
        for (i, j), terms in mul.items():
            key = (min(i, j), max(i, j))
            clean = {k: c for k, c in terms.items() if c}
            if clean:
                self.mul[key] = clean
        self.embedding = None
        if embedding is not None:
            self.embedding = [tuple(tup) for tup in embedding]
        self.weights = None
        if weights is not None:
            seen = set()
            self.weights = []
            for w in weights:
                s = sign_normalized(w)
                if s not in seen:
                    seen.add(s)
                    self.weights.append(s)
        self.name = name

    @property
    def dim(self) -> int:
        return len(self.basis)

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def top_degree(self) -> int:
        return max(d for _, d in self.basis)

    def unit_vector(self) -> List[Poly]:
        vec = [Poly.zero(self.n) for _ in self.basis]
        vec[0] = Poly.const(self.n, 1)
        return vec

    def basis_vector(self, i: int) -> List[Poly]:
        vec = [Poly.zero(self.n) for _ in self.basis]
        vec[i] = Poly.const(self.n, 1)
        return vec

    def pair_products(self, i: int, j: int) -> Dict[int, Poly]:
        return self.mul.get((min(i, j), max(i, j)), {})

    def mul_elements(self, x: Sequence[Poly], y: Sequence[Poly]) -> List[Poly]:
        """Product of two elements given as R-coefficient vectors."""
        out = [Poly.zero(self.n) for _ in self.basis]
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, c in self.pair_products(i, j).items():
                    out[k] = out[k] + xi * yj * c
        return out

    def element_is_homogeneous(self, x: Sequence[Poly]) -> Optional[int]:
        """Common cohomological degree of a coefficient vector, or None."""
        deg = None
        for i, xi in enumerate(x):
            if not xi:
                continue
            if not xi.is_homogeneous():
                return None
            d = xi.cohom_degree() + self.degree(i)
            if deg is None:
                deg = d
            elif deg != d:
                return None
        return deg

    def to_json(self) -> dict:
        mul = []
        for (i, j) in sorted(self.mul):
            terms = [{"k": k, "poly": poly_to_json(c)}
                     for k, c in sorted(self.mul[(i, j)].items())]
            mul.append({"i": i, "j": j, "terms": terms})
        data = {
            "kind": "presentation",
            "rank": self.n,
            "basis": [{"name": nm, "degree": d} for nm, d in self.basis],
            "mul": mul,
        }
        if self.embedding is not None:
            data["embedding"] = [[poly_to_json(c) for c in tup] for tup in self.embedding]
        if self.weights is not None:
            data["weights"] = [list(w) for w in self.weights]
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraPresentation":
        if data.get("kind") != "presentation":
            raise InputError("expected kind 'presentation'")
        n = int(data["rank"])
        basis = [(b.get("name", f"b{i}"), int(b["degree"]))
                 for i, b in enumerate(data["basis"])]
        mul: Dict[Tuple[int, int], Dict[int, Poly]] = {}
        for entry in data.get("mul", []):
            i, j = int(entry["i"]), int(entry["j"])
            terms = {int(t["k"]): poly_from_json(t["poly"], n) for t in entry["terms"]}
            key = (min(i, j), max(i, j))
            if key in mul and mul[key] != {k: c for k, c in terms.items() if c}:
                raise InputError(f"asymmetric mul entries for pair {key}")
            mul[key] = terms
        embedding = None
        if "embedding" in data and data["embedding"] is not None:
            embedding = [[poly_from_json(c, n) for c in tup] for tup in data["embedding"]]
        weights = data.get("weights")
        return cls(n, basis, mul, embedding=embedding, weights=weights,
                   name=data.get("name", ""))


def forget_embedding(p: AlgebraPresentation) -> AlgebraPresentation:
    """Copy of the presentation with the fixed-point embedding removed."""
    return AlgebraPresentation(p.n, p.basis, p.mul, embedding=None,
                               weights=p.weights, name=p.name)


# ---------- validation ----------


def validate(p: AlgebraPresentation, degree_bound: Optional[int] = None) -> List[str]:
    """All invariant checks; returns a list of violations (empty = valid)."""
    problems = []
    if not p.basis:
        return ["empty basis"]
    if p.degree(0) != 0:
        problems.append("basis[0] must have degree 0")
    for nm, d in p.basis:
        if d < 0 or d % 2:
            problems.append(f"basis element {nm} has odd or negative degree {d}")
    # unit row
    for j in range(p.dim):
        prods = p.pair_products(0, j)
        expected = {j: Poly.const(p.n, 1)}
        if {k: c for k, c in prods.items() if c} != expected:
            problems.append(f"b0 does not act as unit on b{j}")
    # degree homogeneity
    for (i, j), terms in p.mul.items():
        for k, c in terms.items():
            want = p.degree(i) + p.degree(j) - p.degree(k)
            if want < 0 or not c.is_homogeneous() or c.cohom_degree() != want:
                problems.append(
                    f"structure constant c[{i},{j}]^{k} is not homogeneous of degree {want}")
    if problems:
        return problems
    # associativity on all basis triples
    for i in range(p.dim):
        bi = p.basis_vector(i)
        for j in range(i, p.dim):
            bj = p.basis_vector(j)
            ij = p.mul_elements(bi, bj)
            for k in range(j, p.dim):
                bk = p.basis_vector(k)
                left = p.mul_elements(ij, bk)
                right = p.mul_elements(bi, p.mul_elements(bj, bk))
                if left != right:
                    problems.append(f"associativity fails on (b{i}, b{j}, b{k})")
    # embedding checks
    if p.embedding is not None:
        l = len(p.embedding[0])
        if any(len(t) != l for t in p.embedding):
            problems.append("embedding tuples have inconsistent lengths")
        else:
            ones = tuple(Poly.const(p.n, 1) for _ in range(l))
            if tuple(p.embedding[0]) != ones:
                problems.append("embedding of the unit is not (1,...,1)")
            for i in range(p.dim):
                for j in range(i, p.dim):
                    lhs = tuple_mul_pointwise(p.embedding[i], p.embedding[j])
                    rhs = [Poly.zero(p.n) for _ in range(l)]
                    for k, c in p.pair_products(i, j).items():
                        for a in range(l):
                            rhs[a] = rhs[a] + c * p.embedding[k][a]
                    if list(lhs) != rhs:
                        problems.append(f"embedding not multiplicative on (b{i}, b{j})")
            for i, tup in enumerate(p.embedding):
                d = p.degree(i)
                for f in tup:
                    if f and (not f.is_homogeneous() or f.cohom_degree() != d):
                        problems.append(f"embedding of b{i} not homogeneous of degree {d}")
            if degree_bound is None:
                degree_bound = p.top_degree() + 2 * p.n
            problems.extend(_embedding_injectivity(p, degree_bound))
    return problems


def _embedding_injectivity(p: AlgebraPresentation, bound: int) -> List[str]:
    space = TupleSpace(p.n, len(p.embedding[0]))
    gens = [(tuple(p.embedding[i]), p.degree(i)) for i in range(p.dim)]
    for d in range(0, bound + 1, 2):
        expected = 0
        rows = []
        for tup, gd in gens:
            rem = d - gd
            if rem < 0 or rem % 2:
                continue
            for m in space.monomials(rem // 2):
                expected += 1
                rows.append(space.vectorize([Poly.monomial(p.n, m) * f for f in tup], d))
        if rows:
            _, pivots = rref(rows, _ONE)
            if len(pivots) != expected:
                return [f"embedding fails to be injective in degree {d}"]
    return []


# ---------- GKM graph cohomology ----------


def _edge_restrictions(n: int, weight: Sequence[int]):
    """Substitution images parametrizing the kernel hyperplane of a weight."""
    kernel = integer_kernel([list(weight)], n)
    return [Poly.linear_form([row[a] for row in kernel]) for a in range(n)], len(kernel)


def congruence_solution_slice(g: GKMGraph, d: int) -> List[List[Fraction]]:
    """Q-basis of degree-d tuples satisfying all edge congruences."""
    n, nv = g.n, len(g.vertices)
    space = TupleSpace(n, nv)
    pdeg = d // 2
    mons = space.monomials(pdeg)
    ncols = nv * len(mons)
    rows = []
    for a, b, w in g.edges:
        images, kvars = _edge_restrictions(n, w)
        # constraint: restriction of f_a - f_b to the kernel hyperplane is 0
        target_mons = list(monomials_of_degree(kvars, pdeg))
        index = {e: i for i, e in enumerate(target_mons)}
        block = [[_ZERO] * ncols for _ in target_mons]
        for mi, m in enumerate(mons):
            restricted = Poly.monomial(n, m).subst(images, target_nvars=kvars)
            for e, c in restricted.terms.items():
                r = index[e]
                block[r][a * len(mons) + mi] = block[r][a * len(mons) + mi] + c
                block[r][b * len(mons) + mi] = block[r][b * len(mons) + mi] - c
        rows.extend(block)
    if not rows:
        return [[_ONE if i == j else _ZERO for j in range(ncols)] for i in range(ncols)]
    return nullspace(rows, _ZERO, _ONE)


def build_from_gkm(g: GKMGraph) -> AlgebraPresentation:
    """Module basis and structure constants of the graph's congruence algebra.

    Raises Disconnected for disconnected graphs and NotFree when the
    congruence module is not free of rank |vertices|.

    Once the candidate generators have a nonsingular restriction matrix they
    are R-independent, so the span dimension in each degree is determined by
    the generator degrees alone and the degreewise verification up to the
    determinant degree reduces to a dimension count.
    """
    if not g.is_connected():
        raise Disconnected("GKM graph must be connected")
    n, nv = g.n, len(g.vertices)
    space = TupleSpace(n, nv)
    unit = [Poly.const(n, 1) for _ in range(nv)]
    gens: List[Tuple[tuple, int]] = [(tuple(unit), 0)]
    search_cap = 2 * len(g.edges) if g.edges else 0
    verify_cap: Optional[int] = None

    def expected_dim(d: int) -> int:
        total = 0
        for _, gd in gens:
            rem = d - gd
            if rem >= 0 and rem % 2 == 0:
                total += len(space.monomials(rem // 2))
        return total

    d = 0
    while True:
        d += 2
        if len(gens) < nv and d > search_cap:
            raise NotFree(
                f"no generator system of rank {nv} found up to degree {search_cap}")
        if len(gens) == nv:
            if verify_cap is None:
                matrix = [list(tup) for tup, _ in gens]
                det = det_bareiss(matrix)
                if not det:
                    raise NotFree("restriction matrix of candidate basis is singular")
                verify_cap = det.cohom_degree()
            if d > verify_cap:
                break
        sol = congruence_solution_slice(g, d)
        want = expected_dim(d)
        if len(sol) == want:
            continue
        if len(sol) < want:
            raise NotFree("solution space is smaller than the generated span")
        if len(gens) == nv:
            raise NotFree(
                f"congruence module needs more than {nv} generators (degree {d})")
        span = span_slice(space, gens, d)
        _, added = extend_basis(span, sol)
        for idx in added:
            gens.append((tuple(space.unvectorize(sol[idx], d)), d))
        if len(gens) > nv:
            raise NotFree(
                f"congruence module needs more than {nv} generators (degree {d})")
    # structure constants by Cramer: coefficients of a module element x are
    # adj(G^T) x / det for the (nonsingular) restriction matrix G
    matrix = [[gens[i][0][v] for i in range(nv)] for v in range(nv)]  # G^T
    det = det_bareiss(matrix)
    adj = poly_adjugate(matrix)
    mul: Dict[Tuple[int, int], Dict[int, Poly]] = {}
    for i in range(nv):
        for j in range(i, nv):
            prod = tuple_mul_pointwise(gens[i][0], gens[j][0])
            terms: Dict[int, Poly] = {}
            for k in range(nv):
                num = Poly.zero(n)
                for v in range(nv):
                    if prod[v]:
                        num = num + adj[k][v] * prod[v]
                if num:
                    terms[k] = divide_exact(num, det)
            mul[(i, j)] = terms
    basis = [(f"b{i}", gd) for i, (_, gd) in enumerate(gens)]
    return AlgebraPresentation(n, basis, mul,
                               embedding=[list(tup) for tup, _ in gens],
                               weights=g.weight_list(),
                               name=g.name)


# ---------- localization ----------


class LocalizedAlgebra:
    """Finite-dimensional algebra over F = Frac(Q[u1..uk]) obtained from a
    presentation by the coefficientwise substitution killing p_U."""

    def __init__(self, pres: AlgebraPresentation, subtorus: Subtorus):
        self.pres = pres
        self.subtorus = subtorus
        self.k = subtorus.rank
        self.dim = pres.dim
        self.mult: Dict[Tuple[int, int], Dict[int, Poly]] = {}
        for (i, j), terms in pres.mul.items():
            local = {k: subtorus.restrict_poly(c) for k, c in terms.items()}
            local = {k: c for k, c in local.items() if c}
            if local:
                self.mult[(i, j)] = local
        self.embedding_local = None
        if pres.embedding is not None:
            self.embedding_local = [
                [subtorus.restrict_poly(c) for c in tup] for tup in pres.embedding]
        # trace vector: trace(M_{b_j}) = sum_k c_{jk}^k
        self.theta: List[Poly] = []
        for j in range(self.dim):
            tr = Poly.zero(self.k)
            for k in range(self.dim):
                c = self.pair_products(j, k).get(k)
                if c:
                    tr = tr + c
            self.theta.append(tr)
        self._cache: dict = {}

    # ---- field/vector helpers ----

    def zero_f(self) -> RatFun:
        return RatFun(Poly.zero(self.k))

    def one_f(self) -> RatFun:
        return RatFun(Poly.const(self.k, 1))

    def zero_vec(self) -> List[RatFun]:
        return [self.zero_f() for _ in range(self.dim)]

    def unit(self) -> List[RatFun]:
        vec = self.zero_vec()
        vec[0] = self.one_f()
        return vec

    def basis_elem(self, i: int) -> List[RatFun]:
        vec = self.zero_vec()
        vec[i] = self.one_f()
        return vec

    def pair_products(self, i: int, j: int) -> Dict[int, Poly]:
        return self.mult.get((min(i, j), max(i, j)), {})

    def mul_vec(self, x: Sequence[RatFun], y: Sequence[RatFun]) -> List[RatFun]:
        out = self.zero_vec()
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                xy = xi * yj
                for k, c in self.pair_products(i, j).items():
                    out[k] = out[k] + xy * RatFun(c)
        return out

    def scale_vec(self, x: Sequence[RatFun], c: RatFun) -> List[RatFun]:
        return [c * xi for xi in x]

    def add_vec(self, x: Sequence[RatFun], y: Sequence[RatFun]) -> List[RatFun]:
        return [a + b for a, b in zip(x, y)]

    def sub_vec(self, x: Sequence[RatFun], y: Sequence[RatFun]) -> List[RatFun]:
        return [a - b for a, b in zip(x, y)]

    def power_vec(self, x: Sequence[RatFun], m: int) -> List[RatFun]:
        result = self.unit()
        base = list(x)
        while m:
            if m & 1:
                result = self.mul_vec(result, base)
            base = self.mul_vec(base, base)
            m >>= 1
        return result

    def is_zero_vec(self, x: Sequence[RatFun]) -> bool:
        return all(not xi for xi in x)

    def mult_matrix(self, x: Sequence[RatFun]) -> List[List[RatFun]]:
        """Matrix of multiplication by x on the basis (rows = output index)."""
        mat = [[self.zero_f() for _ in range(self.dim)] for _ in range(self.dim)]
        for j in range(self.dim):
            for i, xi in enumerate(x):
                if not xi:
                    continue
                for k, c in self.pair_products(i, j).items():
                    mat[k][j] = mat[k][j] + xi * RatFun(c)
        return mat

    def trace_of_mult(self, x: Sequence[RatFun]) -> RatFun:
        tr = self.zero_f()
        for xi, th in zip(x, self.theta):
            if xi and th:
                tr = tr + xi * RatFun(th)
        return tr


def localize(pres: AlgebraPresentation, subtorus: Subtorus) -> LocalizedAlgebra:
    return LocalizedAlgebra(pres, subtorus)


def to_localized_coords(pres: AlgebraPresentation, subtorus: Subtorus,
                        x: Sequence[Poly]) -> List[RatFun]:
    """Coefficientwise substitution of an element into the localization."""
    return [RatFun(subtorus.restrict_poly(c)) for c in x]
