"""Reconstruction of the ramified orbit-type poset from an algebra.

Nodes of the raw poset are pairs (subtorus U, block of the localization);
the order comes from scalar-part inclusion tests between comparable
subtori.  Ramified flags follow the recursive definition: minimal nodes
are ramified, and a node becomes ramified when two distinct ramified
nodes below it admit no intermediate node dominating both.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraPresentation, LocalizedAlgebra, localize, to_localized_coords
from .errors import NotUnique, SubtorusNotContained, TorstratError
from .exact import Poly, RatFun
from .lattice import Subtorus, enumerate_candidate_subtori, subtorus_contains
from .thom import ThomSystem, block_scalar, construct_thom_system, is_nilpotent, split_components


class StratNode:
    """One stratum candidate: a block of a localized algebra with witness."""

    def __init__(self, subtorus: Subtorus, block: int, witness: List[Poly]):
        self.subtorus = subtorus
        self.block = block
        self.witness = witness
        self.ramified = False

    @property
    def witness_degree(self) -> int:
        degs = {c.cohom_degree() for c in self.witness if c}
        return max(degs) if degs else 0

    def key(self):
        return (self.subtorus.sort_key(), self.block)

    def __repr__(self):
        return f"StratNode(rank={self.subtorus.rank}, block={self.block})"


class StratPoset:
    """Node list with a reflexive-transitive order matrix and labels."""

    def __init__(self, nodes: List[StratNode], leq: List[List[bool]]):
        self.nodes = nodes
        self.leq = leq

    def __len__(self):
        return len(self.nodes)

    def lam(self, i: int) -> Subtorus:
        return self.nodes[i].subtorus

    def below(self, i: int) -> List[int]:
        return [j for j in range(len(self.nodes)) if self.leq[j][i]]

    def covers(self) -> List[Tuple[int, int]]:
        """Hasse cover pairs (lower, upper)."""
        out = []
        n = len(self.nodes)
        for a in range(n):
            for b in range(n):
                if a == b or not self.leq[a][b]:
                    continue
                if any(self.leq[a][c] and self.leq[c][b] and c not in (a, b)
                       for c in range(n)):
                    continue
                out.append((a, b))
        return out

    def restricted_to(self, keep: List[int]) -> "StratPoset":
        nodes = [self.nodes[i] for i in keep]
        leq = [[self.leq[i][j] for j in keep] for i in keep]
        return StratPoset(nodes, leq)

    def to_json(self) -> dict:
        nodes = []
        for i, node in enumerate(self.nodes):
            nodes.append({
                "id": f"n{i}",
                "subtorus": node.subtorus.to_json(),
                "block": node.block,
                "ramified": node.ramified,
                "lambda": node.subtorus.to_json(),
                "witness_degree": node.witness_degree,
            })
        order = [[f"n{i}", f"n{j}"] for i in range(len(self.nodes))
                 for j in range(len(self.nodes)) if i != j and self.leq[i][j]]
        return {"nodes": nodes, "order": order}


def scalar_part(pres: AlgebraPresentation, subtorus: Subtorus, block: Sequence[RatFun],
                x: Sequence[Poly], alg: Optional[LocalizedAlgebra] = None) -> RatFun:
    """Block residue of x: the unique s with (x - s)*e nilpotent, certified."""
    if alg is None:
        alg = localize(pres, subtorus)
    coords = to_localized_coords(pres, subtorus, x)
    s = block_scalar(alg, block, coords)
    shifted = alg.sub_vec(coords, alg.scale_vec(alg.unit(), s))
    if not is_nilpotent(alg, alg.mul_vec(shifted, block)):
        raise TorstratError("scalar part failed its nilpotence certificate")
    return s


def inclusion(pres: AlgebraPresentation,
              tau_u: Tuple[Sequence[Poly], Subtorus, int],
              eta_h: Tuple[Sequence[Poly], Subtorus, int],
              alg_u: Optional[LocalizedAlgebra] = None,
              blocks_u=None) -> bool:
    """Does the stratum of (tau, U) lie inside the stratum of (eta, H)?

    Requires H contained in U; decided by whether the block residue of eta
    on tau's block survives restriction to H.
    """
    tau, u_tor, u_block = tau_u
    eta, h_tor, _ = eta_h
    if not subtorus_contains(u_tor, h_tor):
        raise SubtorusNotContained("inclusion test requires H contained in U")
    if alg_u is None:
        alg_u = localize(pres, u_tor)
    if blocks_u is None:
        blocks_u = split_components(alg_u)
    e = blocks_u[u_block]
    s = block_scalar(alg_u, e, to_localized_coords(pres, u_tor, eta))
    if not s:
        return False
    if not s.is_polynomial():
        raise TorstratError(f"block residue {s} is not polynomial")
    poly = s.as_poly()
    # restrict from U-coordinates to H-coordinates: u = C w, where column a of
    # C holds the U-coordinates of H's a-th basis cocharacter
    cmat = h_tor.coordinates_in(u_tor)
    images = [Poly.linear_form(cmat[b]) for b in range(u_tor.rank)]
    restricted = poly.subst(images, target_nvars=h_tor.rank)
    return bool(restricted)


class Reconstruction:
    """Cached pipeline state for one presentation: localizations, block
    decompositions, Thom systems, and the stratification poset."""

    def __init__(self, pres: AlgebraPresentation, subtori: Optional[List[Subtorus]] = None,
                 seed: int = 0):
        self.pres = pres
        self.seed = seed
        if subtori is None:
            weights = pres.weights or []
            subtori = enumerate_candidate_subtori(pres.n, weights)
        else:
            # user-supplied lists are completed to meet the poset preconditions
            from .lattice import subtorus_intersection
            closed = set(subtori) | {Subtorus.full(pres.n)}
            while True:
                new = {subtorus_intersection(a, b)
                       for a in closed for b in closed} - closed
                if not new:
                    break
                closed |= new
            subtori = list(closed)
        self.subtori = sorted(set(subtori), key=Subtorus.sort_key)
        self._algs: Dict[Subtorus, LocalizedAlgebra] = {}
        self._systems: Dict[Subtorus, ThomSystem] = {}

    def algebra_at(self, u: Subtorus) -> LocalizedAlgebra:
        if u not in self._algs:
            self._algs[u] = localize(self.pres, u)
        return self._algs[u]

    def blocks_at(self, u: Subtorus):
        return split_components(self.algebra_at(u), seed=self.seed)

    def system_at(self, u: Subtorus) -> ThomSystem:
        if u not in self._systems:
            self._systems[u] = construct_thom_system(
                self.pres, u, seed=self.seed, alg=self.algebra_at(u))
        return self._systems[u]


def build_chi_prime(pres: AlgebraPresentation, subtori: Optional[List[Subtorus]] = None,
                    seed: int = 0, recon: Optional[Reconstruction] = None,
                    systems: Optional[Dict[Subtorus, ThomSystem]] = None) -> StratPoset:
    """The raw poset of (block, subtorus) pairs with the inclusion order.

    A Thom system per subtorus may be supplied through `systems`; otherwise
    constructed systems are used.  The order is closed transitively and
    checked antisymmetric.
    """
    if recon is None:
        recon = Reconstruction(pres, subtori, seed=seed)
    nodes: List[StratNode] = []
    node_of: Dict[Tuple[Subtorus, int], int] = {}
    for u in recon.subtori:
        system = systems[u] if systems is not None else recon.system_at(u)
        ok_needed = systems is not None
        if ok_needed:
            from .thom import verify_thom_system
            ok, assignment, diag = verify_thom_system(
                pres, u, system.elements, seed=seed, alg=recon.algebra_at(u))
            if not ok:
                raise TorstratError(f"supplied system at {u} invalid: {diag}")
        else:
            assignment = system.block_assignment
        for idx, tau in enumerate(system.elements):
            node = StratNode(u, assignment[idx], tau)
            node_of[(u, assignment[idx])] = len(nodes)
            nodes.append(node)
    order = sorted(range(len(nodes)), key=lambda i: nodes[i].key())
    nodes = [nodes[i] for i in order]
    n = len(nodes)
    leq = [[i == j for j in range(n)] for i in range(n)]
    for i, a in enumerate(nodes):
        alg_u = recon.algebra_at(a.subtorus)
        blocks_u = recon.blocks_at(a.subtorus)
        for j, b in enumerate(nodes):
            if i == j:
                continue
            if not subtorus_contains(a.subtorus, b.subtorus):
                continue
            leq[i][j] = inclusion(pres, (a.witness, a.subtorus, a.block),
                                  (b.witness, b.subtorus, b.block),
                                  alg_u=alg_u, blocks_u=blocks_u)
    # transitive closure (Warshall)
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                row_k = leq[k]
                row_i = leq[i]
                for j in range(n):
                    if row_k[j] and not row_i[j]:
                        row_i[j] = True
    for i in range(n):
        for j in range(i + 1, n):
            if leq[i][j] and leq[j][i]:
                raise TorstratError(f"order not antisymmetric between {i} and {j}")
    return StratPoset(nodes, leq)


def ramified_subposet(poset: StratPoset) -> StratPoset:
    """Flag ramified nodes by the minimality recursion and restrict to them."""
    flag = compute_ramified_flags(poset.leq)
    for node, f in zip(poset.nodes, flag):
        node.ramified = f
    keep = [i for i, f in enumerate(flag) if f]
    return poset.restricted_to(keep)


def compute_ramified_flags(leq: List[List[bool]]) -> List[bool]:
    n = len(leq)
    flag = [False] * n
    for i in range(n):
        if not any(leq[j][i] for j in range(n) if j != i):
            flag[i] = True  # minimal node
    changed = True
    while changed:
        changed = False
        for c in range(n):
            if flag[c]:
                continue
            down = [d for d in range(n) if d != c and leq[d][c] and flag[d]]
            hit = False
            for x in range(len(down)):
                for y in range(x + 1, len(down)):
                    d1, d2 = down[x], down[y]
                    blocked = any(
                        b != c and leq[d1][b] and leq[d2][b] and leq[b][c]
                        for b in range(n))
                    if not blocked:
                        hit = True
                        break
                if hit:
                    break
            if hit:
                flag[c] = True
                changed = True
    return flag


def resolve_stratum(poset: StratPoset, index: int) -> int:
    """Index of the unique maximal ramified node below the query node."""
    if poset.nodes[index].ramified:
        return index
    below = [j for j in poset.below(index) if poset.nodes[j].ramified]
    maximal = [j for j in below
               if not any(k != j and poset.leq[j][k] for k in below)]
    if len(maximal) != 1:
        raise NotUnique(
            f"node {index} has {len(maximal)} maximal ramified elements below it")
    return maximal[0]


# ---------- labelled poset isomorphism ----------


def poset_isomorphic(p: StratPoset, q: StratPoset,
                     p_labels: Optional[List[Subtorus]] = None,
                     q_labels: Optional[List[Subtorus]] = None) -> bool:
    """Exact isomorphism of labelled posets (labels default to lambda)."""
    if len(p) != len(q):
        return False
    n = len(p)
    if p_labels is None:
        p_labels = [node.subtorus for node in p.nodes]
    if q_labels is None:
        q_labels = [node.subtorus for node in q.nodes]

    def signature(poset, labels, i):
        down = tuple(sorted(labels[j].sort_key() for j in range(n) if poset.leq[j][i]))
        up = tuple(sorted(labels[j].sort_key() for j in range(n) if poset.leq[i][j]))
        return (labels[i].sort_key(), down, up)

    sig_p = [signature(p, p_labels, i) for i in range(n)]
    sig_q = [signature(q, q_labels, i) for i in range(n)]
    if sorted(sig_p) != sorted(sig_q):
        return False
    candidates = [[j for j in range(n) if sig_q[j] == sig_p[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    match: List[Optional[int]] = [None] * n
    used = [False] * n

    def backtrack(pos: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for pos2 in range(pos):
                i2 = order[pos2]
                j2 = match[i2]
                if p.leq[i][i2] != q.leq[j][j2] or p.leq[i2][i] != q.leq[j2][j]:
                    ok = False
                    break
            if ok:
                match[i] = j
                used[j] = True
                if backtrack(pos + 1):
                    return True
                match[i] = None
                used[j] = False
        return False

    return backtrack(0)


def poset_to_dot(poset: StratPoset, title: str = "ramified strata") -> str:
    """Hasse diagram in DOT, node labels 'U-rank/block/lambda'."""
    lines = ["digraph strata {", '  rankdir="BT";',
             f'  label="{title}";', '  node [shape=box, fontsize=10];']
    for i, node in enumerate(poset.nodes):
        lam = ";".join(",".join(str(x) for x in row) for row in node.subtorus.basis)
        label = f"r{node.subtorus.rank}/b{node.block}/[{lam}]"
        shape = ' style="bold"' if node.ramified else ""
        lines.append(f'  n{i} [label="{label}"{shape}];')
    for a, b in poset.covers():
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines)
