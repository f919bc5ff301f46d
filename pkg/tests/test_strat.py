import random
from collections import Counter

import pytest

from torstrat.algebra import AlgebraPresentation, localize
from torstrat.errors import NotUnique, SubtorusNotContained
from torstrat.exact import Poly
from torstrat.lattice import Subtorus
from torstrat.oracle import oracle_ramified
from torstrat.strat import (Reconstruction, StratNode, StratPoset, build_chi_prime,
                            inclusion, poset_isomorphic, poset_to_dot,
                            ramified_subposet, resolve_stratum, scalar_part)
from torstrat.thom import ThomSystem, split_components
from torstrat.corpus import cp2_graph

T = Poly.variable(1, 0)
FULL = Subtorus.full(1)
TRIV = Subtorus.trivial(1)


def point_presentation(n=1):
    one = Poly.const(n, 1)
    return AlgebraPresentation(n, [("one", 0)], {(0, 0): {0: one}})


def blocks_with_scalar_of_x(e1):
    alg = localize(e1, FULL)
    blocks = split_components(alg)
    x = [Poly.zero(1), Poly.const(1, 1)]
    for e in blocks:
        if scalar_part(e1, FULL, e, x, alg=alg):
            return alg, blocks, e
    raise AssertionError("no block carries x")


class TestScalarPart:
    def test_x_on_own_block(self, e1):
        alg, blocks, e = blocks_with_scalar_of_x(e1)
        x = [Poly.zero(1), Poly.const(1, 1)]
        assert scalar_part(e1, FULL, e, x, alg=alg).as_poly() == T

    def test_orthogonal_element(self, e1):
        alg, blocks, e = blocks_with_scalar_of_x(e1)
        t_minus_x = [T, Poly.const(1, -1)]
        assert not scalar_part(e1, FULL, e, t_minus_x, alg=alg)

    def test_constant(self, e1):
        alg, blocks, e = blocks_with_scalar_of_x(e1)
        c = [Poly.const(1, 5), Poly.zero(1)]
        assert scalar_part(e1, FULL, e, c, alg=alg).as_poly() == Poly.const(1, 5)


class TestInclusion:
    def test_point_in_total(self, e1):
        alg, blocks, e = blocks_with_scalar_of_x(e1)
        x = [Poly.zero(1), Poly.const(1, 1)]
        one = [Poly.const(1, 1), Poly.zero(1)]
        block_idx = next(i for i, b in enumerate(blocks) if b == e)
        assert inclusion(e1, (x, FULL, block_idx), (one, TRIV, 0))

    def test_distinct_fixed_points(self, e1):
        alg, blocks, e = blocks_with_scalar_of_x(e1)
        x = [Poly.zero(1), Poly.const(1, 1)]
        t_minus_x = [T, Poly.const(1, -1)]
        bx = next(i for i, b in enumerate(blocks) if b == e)
        assert not inclusion(e1, (x, FULL, bx), (t_minus_x, FULL, 1 - bx))

    def test_reflexive(self, e1):
        alg, blocks, e = blocks_with_scalar_of_x(e1)
        x = [Poly.zero(1), Poly.const(1, 1)]
        bx = next(i for i, b in enumerate(blocks) if b == e)
        assert inclusion(e1, (x, FULL, bx), (x, FULL, bx))

    def test_requires_containment(self, e1):
        x = [Poly.zero(1), Poly.const(1, 1)]
        one = [Poly.const(1, 1), Poly.zero(1)]
        with pytest.raises(SubtorusNotContained):
            inclusion(e1, (one, TRIV, 0), (x, FULL, 0))


class TestChiPrime:
    def test_e1(self, e1):
        chi = build_chi_prime(e1)
        kinds = Counter(nd.subtorus.rank for nd in chi.nodes)
        assert kinds == {1: 2, 0: 1}
        top = next(i for i, nd in enumerate(chi.nodes) if nd.subtorus.rank == 0)
        for i, nd in enumerate(chi.nodes):
            if i != top:
                assert chi.leq[i][top] and not chi.leq[top][i]

    def test_sphere_chain(self, sphere_s2):
        chi = build_chi_prime(sphere_s2)
        assert len(chi) == 2
        lower = next(i for i, nd in enumerate(chi.nodes) if nd.subtorus.rank == 1)
        upper = 1 - lower
        assert chi.leq[lower][upper]

    def test_point_chain(self):
        chi = build_chi_prime(point_presentation())
        assert len(chi) == 2  # one node per subtorus in {T, trivial}
        assert all(len(chi.below(i)) >= 1 for i in range(len(chi)))

    def test_same_subtorus_same_block_only(self, cp2_blind):
        chi = build_chi_prime(cp2_blind)
        for i, a in enumerate(chi.nodes):
            for j, b in enumerate(chi.nodes):
                if i != j and a.subtorus == b.subtorus:
                    assert not chi.leq[i][j]


class TestRamified:
    def test_e1_all_ramified(self, e1):
        chi = build_chi_prime(e1)
        ram = ramified_subposet(chi)
        assert len(ram) == 3
        assert Counter(nd.subtorus.rank for nd in ram.nodes) == {1: 2, 0: 1}

    def test_sphere_single(self, sphere_s2):
        ram = ramified_subposet(build_chi_prime(sphere_s2))
        assert len(ram) == 1
        assert ram.nodes[0].subtorus == FULL

    def test_cp2_matches_graph_oracle(self, cp2_blind):
        ram = ramified_subposet(build_chi_prime(cp2_blind))
        oracle, _ = oracle_ramified(cp2_graph())
        assert len(ram) == 7
        assert poset_isomorphic(ram, oracle)


class TestResolve:
    def test_sphere_resolves_to_fixed_set(self, sphere_s2):
        chi = build_chi_prime(sphere_s2)
        ramified_subposet(chi)
        top = next(i for i, nd in enumerate(chi.nodes) if nd.subtorus.rank == 0)
        res = resolve_stratum(chi, top)
        assert chi.nodes[res].subtorus == FULL

    def test_ramified_resolves_to_itself(self, e1):
        chi = build_chi_prime(e1)
        ramified_subposet(chi)
        top = next(i for i, nd in enumerate(chi.nodes) if nd.subtorus.rank == 0)
        assert resolve_stratum(chi, top) == top

    def test_not_unique(self):
        # synthetic: two incomparable ramified nodes under one unramified top
        nodes = [StratNode(FULL, 0, []), StratNode(FULL, 1, []),
                 StratNode(TRIV, 0, [])]
        leq = [[True, False, True], [False, True, True], [False, False, True]]
        poset = StratPoset(nodes, leq)
        nodes[0].ramified = True
        nodes[1].ramified = True
        with pytest.raises(NotUnique):
            resolve_stratum(poset, 2)


class TestWitnessInvariance:
    def test_perturbed_witnesses_same_poset(self, e1):
        rng = random.Random(77)
        recon = Reconstruction(e1)
        base = build_chi_prime(e1, recon=recon)
        base_keys = [nd.key() for nd in base.nodes]
        for _ in range(10):
            systems = {}
            for u in recon.subtori:
                sys_u = recon.system_at(u)
                forms = [Poly.linear_form(f) for f in u.ideal_forms()]
                perturbed = []
                for tau in sys_u.elements:
                    scale = Poly.const(1, rng.choice([1, 2, 3]))
                    if u.rank:
                        scale = scale + Poly.variable(1, 0) ** 2  # still in S_U
                    new = [scale * c for c in tau]
                    for p in forms:
                        idx = rng.randrange(len(new))
                        new[idx] = new[idx] + p * Poly.const(1, rng.randint(-2, 2))
                    perturbed.append(new)
                systems[u] = ThomSystem(u, perturbed, list(sys_u.block_assignment),
                                        strict=False)
            trial = build_chi_prime(e1, recon=recon, systems=systems)
            assert [nd.key() for nd in trial.nodes] == base_keys
            assert trial.leq == base.leq


class TestMultiEdge:
    def test_quadric_two_spheres_same_endpoints(self):
        # two invariant spheres joining the same fixed points: distinct
        # codimension-1 strata over distinct stabilizers, and a degree-4
        # class whose blind eigen-splitting lifts a quadratic eigenvalue
        from torstrat.algebra import GKMGraph, build_from_gkm, forget_embedding
        from torstrat.cohom import gkm_detect, gkm_graph

        g = GKMGraph(2, ["n", "s"], [(0, 1, (1, 0)), (0, 1, (0, 1))])
        built = build_from_gkm(g)
        assert [d for _, d in built.basis] == [0, 4]
        blind = forget_embedding(built)
        ram = ramified_subposet(build_chi_prime(blind))
        oracle, _ = oracle_ramified(g)
        assert len(ram) == 5
        assert poset_isomorphic(ram, oracle)
        assert gkm_detect(blind)
        rebuilt = gkm_graph(blind)
        assert sorted(w for _, _, w in rebuilt.edges) == [(0, 1), (1, 0)]
        assert all((a, b) == (0, 1) for a, b, _ in rebuilt.edges)

    def test_triple_edge_cubic_eigenvalue(self):
        # three parallel spheres in rank 3: the only separating class sits
        # in degree 6, so the blind split lifts a cubic eigenvalue
        from torstrat.algebra import GKMGraph, build_from_gkm, forget_embedding, localize
        from torstrat.thom import split_components

        g = GKMGraph(3, ["n", "s"],
                     [(0, 1, (1, 0, 0)), (0, 1, (0, 1, 0)), (0, 1, (0, 0, 1))])
        built = build_from_gkm(g)
        assert [d for _, d in built.basis] == [0, 6]
        blind = forget_embedding(built)
        blocks = split_components(localize(blind, Subtorus.full(3)))
        assert len(blocks) == 2
        ram = ramified_subposet(build_chi_prime(blind))
        oracle, _ = oracle_ramified(g)
        assert len(ram) == 9
        assert poset_isomorphic(ram, oracle)


class TestDot:
    def test_hasse_output(self, e1):
        ram = ramified_subposet(build_chi_prime(e1))
        dot = poset_to_dot(ram)
        assert dot.startswith("digraph")
        assert dot.count("->") == 2  # two covers up to the top stratum
