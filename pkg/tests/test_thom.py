import random

import pytest

from torstrat.algebra import AlgebraPresentation, localize
from torstrat.errors import NotFound
from torstrat.exact import Poly, RatFun
from torstrat.lattice import Subtorus
from torstrat.thom import (construct_thom_system, is_nilpotent,
                           minimal_strict_thom_system, nilradical, split_components,
                           verify_strict, verify_thom_system)

T = Poly.variable(1, 0)
FULL = Subtorus.full(1)
TRIV = Subtorus.trivial(1)


def product_of_lines_presentation():
    """Q(t) x Q(t) given diagonally: basis (1,0),(0,1) summed to the unit."""
    one = Poly.const(1, 1)
    # basis: u = (1,1) unit, e = (1,0); e*e = e, u*e = e
    mul = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 1): {1: one}}
    return AlgebraPresentation(1, [("one", 0), ("e", 0)], mul)


def strict_failure_presentation():
    """Rank-3 algebra with a nilpotent rider: x^2 = t x, v^2 = 0, x v = 0."""
    one = Poly.const(1, 1)
    mul = {(0, 0): {0: one}, (0, 1): {1: one}, (0, 2): {2: one},
           (1, 1): {1: T}, (1, 2): {}, (2, 2): {}}
    return AlgebraPresentation(1, [("one", 0), ("x", 2), ("v", 2)], mul)


from conftest import random_conjugated_algebra


class TestIsNilpotent:
    def test_sphere_generator(self, sphere_s2):
        alg = localize(sphere_s2, FULL)
        assert is_nilpotent(alg, alg.basis_elem(1))

    def test_e1_x_not_nilpotent(self, e1):
        alg = localize(e1, FULL)
        assert not is_nilpotent(alg, alg.basis_elem(1))

    def test_zero(self, e1):
        alg = localize(e1, FULL)
        assert is_nilpotent(alg, alg.zero_vec())

    def test_oracle_powers(self):
        # against brute-force power computation on random small algebras
        rng = random.Random(21)
        for _ in range(15):
            pres, _, _ = random_conjugated_algebra(rng, rng.randint(1, 5))
            alg = localize(pres, FULL)
            for _ in range(6):
                x = [RatFun.from_const(1, rng.randint(-2, 2)) for _ in range(alg.dim)]
                power = list(x)
                for _ in range(alg.dim - 1):
                    power = alg.mul_vec(power, x)
                assert is_nilpotent(alg, x) == alg.is_zero_vec(power)


class TestNilradical:
    def test_sphere(self, sphere_s2):
        alg = localize(sphere_s2, FULL)
        basis = nilradical(alg)
        assert len(basis) == 1
        assert not basis[0][0] and basis[0][1]

    def test_e1_semisimple(self, e1):
        alg = localize(e1, FULL)
        assert nilradical(alg) == []

    def test_one_dimensional(self):
        one = Poly.const(1, 1)
        pres = AlgebraPresentation(1, [("one", 0)], {(0, 0): {0: one}})
        assert nilradical(localize(pres, FULL)) == []

    def test_is_ideal_of_nilpotents(self, s4xs2):
        alg = localize(s4xs2, FULL)
        basis = nilradical(alg)
        for v in basis:
            assert is_nilpotent(alg, v)
            for i in range(alg.dim):
                assert is_nilpotent(alg, alg.mul_vec(v, alg.basis_elem(i)))


class TestSplitComponents:
    def test_e1_two_blocks(self, e1):
        alg = localize(e1, FULL)
        blocks = split_components(alg)
        assert len(blocks) == 2
        strs = sorted(tuple(str(c) for c in e) for e in blocks)
        assert strs == [("0", "(1)/(t1)"), ("1", "(-1)/(t1)")]

    def test_sphere_single_block(self, sphere_s2):
        alg = localize(sphere_s2, FULL)
        blocks = split_components(alg)
        assert len(blocks) == 1
        assert blocks[0] == alg.unit()

    def test_diagonal_product(self):
        pres = product_of_lines_presentation()
        alg = localize(pres, FULL)
        blocks = split_components(alg)
        assert len(blocks) == 2
        for e in blocks:
            assert alg.mul_vec(e, e) == e

    def test_embedded_matches_blind(self, cp2_algebra, cp2_blind):
        for u in (Subtorus.full(2), Subtorus.weight_kernel(2, (1, 0)), Subtorus.trivial(2)):
            blind = split_components(localize(cp2_blind, u))
            embedded = split_components(localize(cp2_algebra, u))
            assert [[str(c) for c in e] for e in blind] == \
                   [[str(c) for c in e] for e in embedded]

    def test_semisimple_count_for_embedded(self, cp2_algebra):
        alg = localize(cp2_algebra, Subtorus.full(2))
        blocks = split_components(alg)
        assert len(blocks) == alg.dim - len(nilradical(alg))


class TestConstructVerify:
    def test_e1_system(self, e1):
        ts = construct_thom_system(e1, FULL)
        strs = sorted(tuple(str(c) for c in tau) for tau in ts.elements)
        assert strs == [("0", "1"), ("t1", "-1")]
        ok, assignment, diag = verify_thom_system(e1, FULL, ts.elements)
        assert ok and sorted(assignment) == [0, 1] and not diag

    def test_point_algebra(self):
        one = Poly.const(1, 1)
        pres = AlgebraPresentation(1, [("one", 0)], {(0, 0): {0: one}})
        ts = construct_thom_system(pres, TRIV)
        assert len(ts) == 1 and ts.elements[0] == [one]

    def test_sphere_single(self, sphere_s2):
        ts = construct_thom_system(sphere_s2, FULL)
        assert len(ts) == 1 and ts.elements[0] == [Poly.const(1, 1), Poly.zero(1)]

    def test_verify_failures(self, e1):
        x = [Poly.zero(1), Poly.const(1, 1)]
        t_minus_x = [T, Poly.const(1, -1)]
        ok, _, diag = verify_thom_system(e1, FULL, [x, x])
        assert not ok and any("not nilpotent" in d for d in diag)
        ok, _, diag = verify_thom_system(e1, FULL, [x])
        assert not ok and any("blocks" in d for d in diag)
        ok, assignment, _ = verify_thom_system(e1, FULL, [x, t_minus_x])
        assert ok and sorted(assignment) == [0, 1]

    def test_strict_true(self, e1):
        x = [Poly.zero(1), Poly.const(1, 1)]
        t_minus_x = [T, Poly.const(1, -1)]
        assert verify_strict(e1, FULL, [x, t_minus_x])

    def test_strict_false_with_nilpotent_rider(self):
        pres = strict_failure_presentation()
        x_plus_v = [Poly.zero(1), Poly.const(1, 1), Poly.const(1, 1)]
        t_minus_x = [T, Poly.const(1, -1), Poly.zero(1)]
        ok, _, _ = verify_thom_system(pres, FULL, [x_plus_v, t_minus_x])
        assert ok  # products are nilpotent
        assert not verify_strict(pres, FULL, [x_plus_v, t_minus_x])

    def test_point_strict(self):
        one = Poly.const(1, 1)
        pres = AlgebraPresentation(1, [("one", 0)], {(0, 0): {0: one}})
        assert verify_strict(pres, TRIV, [[one]])

    def test_perturbation_stability(self, e1):
        rng = random.Random(31)
        base = construct_thom_system(e1, TRIV)
        forms = [Poly.linear_form(f) for f in TRIV.ideal_forms()]
        for _ in range(25):
            perturbed = []
            for tau in base.elements:
                f = Poly.const(1, rng.choice([1, 2, 3]))  # elements of S_triv: constants
                new = [f * c for c in tau]
                for p in forms:
                    rider = [p * Poly.const(1, rng.randint(-2, 2)) for _ in tau]
                    idx = rng.randrange(len(tau))
                    new[idx] = new[idx] + rider[idx]
                perturbed.append(new)
            ok, _, diag = verify_thom_system(e1, TRIV, perturbed)
            assert ok, diag


class TestMinimalStrict:
    def test_e1_degrees_and_elements(self, e1):
        ms = minimal_strict_thom_system(e1)
        degs = sorted(max(c.cohom_degree() + e1.degree(i) for i, c in enumerate(el) if c)
                      for el in ms.elements)
        assert degs == [2, 2]
        strs = sorted(tuple(str(c) for c in el) for el in ms.elements)
        assert strs == [("0", "1"), ("t1", "-1")]

    def test_point(self):
        one = Poly.const(1, 1)
        pres = AlgebraPresentation(1, [("one", 0)], {(0, 0): {0: one}})
        ms = minimal_strict_thom_system(pres)
        assert ms.elements == [[one]]

    def test_cp2_vertex_thom_classes(self, cp2_algebra):
        # the minimal elements restrict to the product of the two incident
        # edge weights on their own vertex and to zero elsewhere
        ms = minimal_strict_thom_system(cp2_algebra)
        degs = [max(c.cohom_degree() + cp2_algebra.degree(i)
                    for i, c in enumerate(el) if c) for el in ms.elements]
        assert degs == [4, 4, 4]
        emb = cp2_algebra.embedding
        for el in ms.elements:
            restrictions = []
            for v in range(3):
                r = Poly.zero(2)
                for i, c in enumerate(el):
                    if c:
                        r = r + c * emb[i][v]
                restrictions.append(r)
            nonzero = [v for v, r in enumerate(restrictions) if r]
            assert len(nonzero) == 1
            from torstrat.exact import factor_into_linear_forms
            _, factors = factor_into_linear_forms(restrictions[nonzero[0]])
            assert sum(factors.values()) == 2  # two normal directions

    def test_budget_exhausted(self, e1):
        with pytest.raises(NotFound):
            minimal_strict_thom_system(e1, degree_budget=0)
