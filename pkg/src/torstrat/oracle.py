"""Brute-force combinatorial oracle for GKM graphs.

Computes the connected orbit-type stratification of a weighted graph
directly: for each candidate subtorus, the fixed subgraph consists of the
edges whose weight vanishes on it, components are deduplicated as
(vertex set, edge set) pairs, stabilizers are saturated weight kernels,
and ramified flags follow the same recursion as the engine.  This is the
reference the algebraic reconstruction is tested against.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .algebra import GKMGraph, congruence_solution_slice
from .exact import Poly
from .gradedmod import TupleSpace, extend_basis, span_slice
from .lattice import Subtorus, enumerate_candidate_subtori, integer_kernel
from .linalg import rref
from .strat import StratNode, StratPoset, compute_ramified_flags

_ONE = Fraction(1)

EdgeKey = Tuple[int, int, tuple]


class OracleComponent:
    """A stratum of the graph: vertex set, edge set, and stabilizer."""

    def __init__(self, vertices: FrozenSet[int], edges: FrozenSet[EdgeKey], n: int):
        self.vertices = vertices
        self.edges = edges
        if edges:
            rows = [list(w) for _, _, w in sorted(edges)]
            self.lam = Subtorus(n, integer_kernel(rows, n), saturate=False)
        else:
            self.lam = Subtorus.full(n)

    def key(self):
        return (tuple(sorted(self.vertices)), tuple(sorted(self.edges)))

    def contains(self, other: "OracleComponent") -> bool:
        return other.vertices <= self.vertices and other.edges <= self.edges


def _fixed_subgraph_components(g: GKMGraph, u: Subtorus) -> List[OracleComponent]:
    live_edges = []
    for a, b, w in g.edges:
        if not u.restrict_poly(Poly.linear_form(w)):
            live_edges.append((a, b, tuple(w)))
    parent = list(range(len(g.vertices)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in live_edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: Dict[int, List[int]] = {}
    for v in range(len(g.vertices)):
        groups.setdefault(find(v), []).append(v)
    out = []
    for members in groups.values():
        vs = frozenset(members)
        es = frozenset(e for e in live_edges if e[0] in vs)
        out.append(OracleComponent(vs, es, g.n))
    return out


def oracle_components(g: GKMGraph) -> List[OracleComponent]:
    """All distinct strata over the candidate subtori, deduplicated."""
    seen: Dict[tuple, OracleComponent] = {}
    for u in enumerate_candidate_subtori(g.n, g.weight_list()):
        for comp in _fixed_subgraph_components(g, u):
            seen.setdefault(comp.key(), comp)
    return [seen[k] for k in sorted(seen)]


def oracle_poset(g: GKMGraph) -> Tuple[StratPoset, List[OracleComponent]]:
    """The labelled stratification poset with ramified flags, plus the
    underlying components aligned with the poset nodes."""
    comps = oracle_components(g)
    order = sorted(range(len(comps)),
                   key=lambda i: (comps[i].lam.sort_key(), comps[i].key()))
    comps = [comps[i] for i in order]
    n = len(comps)
    leq = [[comps[j].contains(comps[i]) for j in range(n)] for i in range(n)]
    flags = compute_ramified_flags(leq)
    nodes = []
    for i, comp in enumerate(comps):
        node = StratNode(comp.lam, i, [])
        node.ramified = flags[i]
        nodes.append(node)
    return StratPoset(nodes, leq), comps


def oracle_ramified(g: GKMGraph) -> Tuple[StratPoset, List[OracleComponent]]:
    poset, comps = oracle_poset(g)
    keep = [i for i, nd in enumerate(poset.nodes) if nd.ramified]
    return poset.restricted_to(keep), [comps[i] for i in keep]


class OracleModule:
    """Congruence module of a subgraph in fixed-point coordinates."""

    def __init__(self, vertices: List[int], generators: List[List[Poly]],
                 degrees: List[int], degree_bound: int):
        self.vertices = vertices
        self.generators = generators
        self.degrees = degrees
        self.degree_bound = degree_bound


def oracle_subgraph_module(g: GKMGraph, comp: OracleComponent,
                           degree_bound: int) -> OracleModule:
    """Degreewise congruence solutions of the component's subgraph with
    graded Nakayama generators, up to the degree bound."""
    verts = sorted(comp.vertices)
    reindex = {v: i for i, v in enumerate(verts)}
    sub = GKMGraph(g.n, [g.vertices[v] for v in verts],
                   [(reindex[a], reindex[b], w) for a, b, w in sorted(comp.edges)])
    space = TupleSpace(g.n, len(verts))
    gens: List[Tuple[tuple, int]] = []
    for d in range(0, degree_bound + 1, 2):
        sol = congruence_solution_slice(sub, d)
        red, pivots = rref(sol, _ONE) if sol else ([], [])
        sol_basis = red[: len(pivots)]
        old = span_slice(space, gens, d)
        if len(sol_basis) == len(old):
            continue
        _, added = extend_basis(old, sol_basis)
        for idx in added:
            gens.append((tuple(space.unvectorize(sol_basis[idx], d)), d))
    return OracleModule(verts, [list(t) for t, _ in gens],
                        [d for _, d in gens], degree_bound)


def embedded_block_vertices(alg, blocks) -> List[int]:
    """Map each block idempotent of an embedded localization at the full
    torus to the fixed-point index supporting it."""
    from .exact import RatFun
    l = len(alg.embedding_local[0])
    out = []
    for e in blocks:
        img = [RatFun(Poly.zero(alg.k)) for _ in range(l)]
        for i, c in enumerate(e):
            if c:
                for v in range(l):
                    img[v] = img[v] + c * RatFun(alg.embedding_local[i][v])
        hits = [v for v in range(l) if img[v]]
        if len(hits) != 1:
            raise ValueError("block idempotent is not supported on one vertex")
        out.append(hits[0])
    return out


def module_slices_equal(space: TupleSpace,
                        gens_a: Sequence[Tuple[Sequence[Poly], int]],
                        gens_b: Sequence[Tuple[Sequence[Poly], int]],
                        degree_bound: int) -> bool:
    """Degreewise equality of the two generated submodules up to the bound."""
    for d in range(0, degree_bound + 1, 2):
        sa = span_slice(space, gens_a, d)
        sb = span_slice(space, gens_b, d)
        if len(sa) != len(sb):
            return False
        merged, added = extend_basis(sa, sb)
        if added:
            return False
    return True
