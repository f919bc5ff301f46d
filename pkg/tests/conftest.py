import random

import pytest

from torstrat.algebra import GKMGraph, build_from_gkm, forget_embedding
from torstrat.corpus import (cp1xcp1_graph, cp2_graph, cp3_graph, e1_presentation,
                             s2_graph, s4xs2_diagonal_presentation,
                             sphere_trivial_presentation, su3_flag_graph)
from torstrat.lattice import sign_normalized


@pytest.fixture(scope="session")
def e1():
    return e1_presentation()


@pytest.fixture(scope="session")
def e1_embedded():
    return build_from_gkm(s2_graph())


@pytest.fixture(scope="session")
def sphere_s2():
    return sphere_trivial_presentation(2)


@pytest.fixture(scope="session")
def sphere_s4():
    return sphere_trivial_presentation(4)


@pytest.fixture(scope="session")
def s4xs2():
    return s4xs2_diagonal_presentation()


@pytest.fixture(scope="session")
def cp2_algebra():
    return build_from_gkm(cp2_graph())


@pytest.fixture(scope="session")
def cp2_blind(cp2_algebra):
    return forget_embedding(cp2_algebra)


def random_gkm_tree(rng: random.Random, rank: int, nv: int) -> GKMGraph:
    """A random weighted tree with GKM-independent weights at each vertex.

    Kernel directions are deliberately reused across edges so that fixed
    subgraphs merge into larger components.
    """
    if rank == 1:
        nv = 2
    edges = []
    weights_at = {i: [] for i in range(nv)}
    pool = []
    for v in range(1, nv):
        placed = False
        for _ in range(500):
            u = rng.randrange(v)
            if pool and rng.random() < 0.4:
                w = rng.choice(pool)
            else:
                w = tuple(rng.randint(-2, 2) for _ in range(rank))
                if not any(w):
                    continue
            wn = sign_normalized(w)
            if all(wn != x for x in weights_at[u]) and all(wn != x for x in weights_at[v]):
                placed = True
                break
        if not placed:
            raise RuntimeError("random tree generation stalled")
        weights_at[u].append(wn)
        weights_at[v].append(wn)
        pool.append(wn)
        edges.append((u, v, wn))
    return GKMGraph(rank, [f"v{i}" for i in range(nv)], edges,
                    name=f"tree{rank}_{nv}")


def unimodular_reweighting(rng: random.Random, g: GKMGraph) -> GKMGraph:
    """Apply a random small unimodular change of the character lattice."""
    n = g.n
    mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(4):
        a = rng.randrange(n)
        b = rng.randrange(n)
        if a != b:
            c = rng.choice([-1, 1])
            for j in range(n):
                mat[a][j] += c * mat[b][j]
    edges = [(i, j, tuple(sum(mat[r][s] * w[s] for s in range(n)) for r in range(n)))
             for i, j, w in g.edges]
    return GKMGraph(n, list(g.vertices), edges, name=g.name + "_rw")


CORPUS_GRAPHS = {
    "s2": s2_graph,
    "cp1xcp1": cp1xcp1_graph,
    "cp2": cp2_graph,
    "cp3": cp3_graph,
    "su3_flag": su3_flag_graph,
}


def random_conjugated_algebra(rng: random.Random, dim: int):
    """Commutative algebra over Q(t): a product of truncated polynomial
    blocks in a random rational basis.

    Returns (presentation, nilpotent coordinate vectors, block count).
    """
    from fractions import Fraction

    from torstrat.algebra import AlgebraPresentation
    from torstrat.exact import Poly

    blocks = []
    left = dim
    while left:
        k = rng.randint(1, left)
        blocks.append(k)
        left -= k
    labels = [(b, i) for b, k in enumerate(blocks) for i in range(k)]
    idx = {lab: i for i, lab in enumerate(labels)}
    dim = len(labels)
    mult = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for (b1, i1) in labels:
        for (b2, i2) in labels:
            if b1 == b2 and i1 + i2 < blocks[b1]:
                mult[idx[(b1, i1)]][idx[(b2, i2)]][idx[(b1, i1 + i2)]] = Fraction(1)
    unit_old = [Fraction(1) if i1 == 0 else Fraction(0) for (b1, i1) in labels]
    while True:
        p = [[Fraction(rng.randint(-2, 2)) for _ in range(dim)] for _ in range(dim)]
        p[0] = unit_old
        try:
            pinv = _invert_rational(p)
            break
        except ZeroDivisionError:
            continue
    mul = {}
    for a in range(dim):
        for b in range(a, dim):
            old = [Fraction(0)] * dim
            for i in range(dim):
                if not p[a][i]:
                    continue
                for j in range(dim):
                    if not p[b][j]:
                        continue
                    for k in range(dim):
                        if mult[i][j][k]:
                            old[k] += p[a][i] * p[b][j] * mult[i][j][k]
            new = [sum(old[k] * pinv[k][c] for k in range(dim)) for c in range(dim)]
            mul[(a, b)] = {c: Poly.const(1, v) for c, v in enumerate(new) if v}
    pres = AlgebraPresentation(1, [(f"f{a}", 0) for a in range(dim)], mul)
    nilp = []
    for (b1, i1) in labels:
        if i1 >= 1:
            old = [Fraction(1) if lab == (b1, i1) else Fraction(0) for lab in labels]
            nilp.append([sum(old[k] * pinv[k][c] for k in range(dim))
                         for c in range(dim)])
    return pres, nilp, len(blocks)


def _invert_rational(mat):
    from fractions import Fraction

    n = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(1) if i == j else Fraction(0)
                                       for j in range(n)] for i, row in enumerate(mat)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c]), None)
        if piv is None:
            raise ZeroDivisionError
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def graphs_isomorphic(g1, g2) -> bool:
    """Isomorphism of weighted graphs up to weight sign (backtracking)."""
    if g1.n != g2.n or len(g1.vertices) != len(g2.vertices) or \
            len(g1.edges) != len(g2.edges):
        return False

    def adj(g):
        table = {}
        for a, b, w in g.edges:
            wn = sign_normalized(w)
            table.setdefault(a, []).append((b, wn))
            table.setdefault(b, []).append((a, wn))
        return table

    a1, a2 = adj(g1), adj(g2)
    nv = len(g1.vertices)

    def signature(table, v):
        return tuple(sorted(w for _, w in table.get(v, [])))

    sig1 = [signature(a1, v) for v in range(nv)]
    sig2 = [signature(a2, v) for v in range(nv)]
    if sorted(sig1) != sorted(sig2):
        return False
    match = [None] * nv
    used = [False] * nv

    def edges_between(table, u, v):
        return sorted(w for x, w in table.get(u, []) if x == v)

    def backtrack(v):
        if v == nv:
            return True
        for cand in range(nv):
            if used[cand] or sig2[cand] != sig1[v]:
                continue
            ok = True
            for prev in range(v):
                if edges_between(a1, v, prev) != edges_between(a2, cand, match[prev]):
                    ok = False
                    break
            if ok:
                match[v] = cand
                used[cand] = True
                if backtrack(v + 1):
                    return True
                match[v] = None
                used[cand] = False
        return False

    return backtrack(0)
