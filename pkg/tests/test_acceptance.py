"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.  All comparisons are exact; no tolerances.
"""

import json
import random
import time
from fractions import Fraction

import pytest

from conftest import (CORPUS_GRAPHS, graphs_isomorphic, random_conjugated_algebra,
                      random_gkm_tree, unimodular_reweighting)
from torstrat.algebra import AlgebraPresentation, build_from_gkm, forget_embedding, \
    localize
from torstrat.cli import RunConfig, run
from torstrat.cohom import (BlockAlgebra, StratumPipeline, betti_sum, euler_factorize,
                            gkm_detect, gkm_graph, restriction_map, stratum_cohomology)
from torstrat.corpus import (corpus_presentations, sphere_trivial_presentation,
                             write_corpus)
from torstrat.exact import Poly, RatFun, monomials_of_degree
from torstrat.gradedmod import TupleSpace
from torstrat.lattice import Subtorus, in_SU, sign_normalized
from torstrat.linalg import rref
from torstrat.oracle import (embedded_block_vertices, module_slices_equal,
                             oracle_poset, oracle_ramified, oracle_subgraph_module)
from torstrat.strat import Reconstruction, build_chi_prime, poset_isomorphic, \
    ramified_subposet
from torstrat.thom import ThomSystem, construct_thom_system, is_nilpotent, nilradical, \
    verify_thom_system


def _random_case_graphs(count=20):
    rng = random.Random(2024)
    graphs = []
    while len(graphs) < count:
        kind = rng.random()
        if kind < 0.55:
            rank = rng.choice([1, 2, 2, 3])
            nv = rng.randint(2, 8 if rank < 3 else 6)
            graphs.append(random_gkm_tree(rng, rank, nv))
        else:
            base = CORPUS_GRAPHS[rng.choice(list(CORPUS_GRAPHS))]()
            graphs.append(unimodular_reweighting(rng, base))
    return graphs


def test_criterion_1_oracle_roundtrip():
    cases = [build() for build in CORPUS_GRAPHS.values()] + _random_case_graphs(20)
    worst = 0.0
    for g in cases:
        t0 = time.time()
        pres = forget_embedding(build_from_gkm(g))
        reconstructed = ramified_subposet(build_chi_prime(pres))
        oracle, _ = oracle_ramified(g)
        elapsed = time.time() - t0
        worst = max(worst, elapsed)
        assert poset_isomorphic(reconstructed, oracle), \
            f"{g.name}: reconstructed poset differs from the oracle"
        assert elapsed < 60, f"{g.name}: took {elapsed:.1f}s"
    print(f"\nACCEPTANCE 1 PASS: oracle round-trip on {len(cases)} graphs "
          f"(5 corpus + 20 randomized), worst case {worst:.1f}s < 60s")


def test_criterion_2_indistinguishability(tmp_path):
    variant_a = sphere_trivial_presentation(2, name="metadata-variant-A")
    variant_b = AlgebraPresentation(
        1, [("unit", 0), ("alpha", 2)], variant_a.mul, name="metadata-variant-B")
    outputs = []
    for tag, pres in (("a", variant_a), ("b", variant_b)):
        path = tmp_path / f"sphere_{tag}.json"
        path.write_text(json.dumps(pres.to_json(), indent=1, sort_keys=True))
        out = tmp_path / f"poset_{tag}.json"
        code = run(RunConfig(command="poset", input_path=str(path), out=str(out)))
        assert code == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1], "ramified output depends on metadata"
    data = json.loads(outputs[0])
    ram = data["ramified"]["nodes"]
    assert len(ram) == 1
    assert ram[0]["lambda"] == {"basis": [[1]]}
    print("\nACCEPTANCE 2 PASS: trivial-type sphere algebra under two metadata "
          "variants gives byte-identical ramified output (one node, lambda = T)")


def _perturb_system(rng, pres, u, system):
    forms = [Poly.linear_form(f) for f in u.ideal_forms()]
    n = pres.n
    perturbed = []
    for tau in system.elements:
        while True:
            scale = Poly.const(n, rng.choice([1, 2, 3, -1]))
            if u.rank and rng.random() < 0.7:
                extra = Poly.zero(n)
                for _ in range(2):
                    mons = list(monomials_of_degree(n, rng.randint(1, 2)))
                    extra = extra + Poly.monomial(n, rng.choice(mons),
                                                  rng.randint(-2, 2))
                scale = scale + extra
            if in_SU(scale, u):
                break
        new = [scale * c for c in tau]
        for p in forms:
            if rng.random() < 0.8:
                idx = rng.randrange(len(new))
                mons = list(monomials_of_degree(n, rng.randint(0, 1)))
                new[idx] = new[idx] + p * Poly.monomial(n, rng.choice(mons),
                                                        rng.randint(-2, 2))
        perturbed.append(new)
    return ThomSystem(u, perturbed, list(system.block_assignment), strict=False)


@pytest.mark.parametrize("case", ["e1", "cp2"])
def test_criterion_3_thom_invariance(case):
    if case == "e1":
        pres = corpus_presentations()["e1"]
    else:
        pres = forget_embedding(build_from_gkm(CORPUS_GRAPHS["cp2"]()))
    rng = random.Random(99 if case == "e1" else 100)
    recon = Reconstruction(pres)
    base = build_chi_prime(pres, recon=recon)
    base_keys = [nd.key() for nd in base.nodes]
    trials = 100
    for trial in range(trials):
        systems = {}
        for u in recon.subtori:
            sys_u = recon.system_at(u)
            systems[u] = _perturb_system(rng, pres, u, sys_u)
            ok, _, diag = verify_thom_system(pres, u, systems[u].elements,
                                             alg=recon.algebra_at(u))
            assert ok, f"trial {trial}: {diag}"
        poset = build_chi_prime(pres, recon=recon, systems=systems)
        assert [nd.key() for nd in poset.nodes] == base_keys
        assert poset.leq == base.leq
    print(f"\nACCEPTANCE 3 PASS ({case}): {trials} randomized perturbations keep "
          "verify_thom_system true and the poset identical")


def test_criterion_4_betti_oracle():
    for name, build in CORPUS_GRAPHS.items():
        g = build()
        pres = forget_embedding(build_from_gkm(g))
        recon = Reconstruction(pres)
        chi = build_chi_prime(pres, recon=recon)
        ramified_subposet(chi)
        engine = []
        for i, node in enumerate(chi.nodes):
            if not node.ramified:
                continue
            system = recon.system_at(node.subtorus)
            pos = system.block_assignment.index(node.block)
            b = betti_sum(pres, node.subtorus, system, pos,
                          alg=recon.algebra_at(node.subtorus), checked=True)
            engine.append((node.subtorus.sort_key(), b))
        oracle, comps = oracle_ramified(g)
        expected = [(nd.subtorus.sort_key(), len(comp.vertices))
                    for nd, comp in zip(oracle.nodes, comps)]
        assert sorted(engine) == sorted(expected), name
        # sum over fixed blocks equals the module rank
        full = Subtorus.full(pres.n)
        system = recon.system_at(full)
        total = sum(betti_sum(pres, full, system, i,
                              alg=recon.algebra_at(full), checked=True)
                    for i in range(len(system)))
        assert total == pres.dim, name
    for name, pres in corpus_presentations().items():
        full = Subtorus.full(pres.n)
        system = construct_thom_system(pres, full)
        total = sum(betti_sum(pres, full, system, i, checked=True)
                    for i in range(len(system)))
        assert total == pres.dim, name
    print("\nACCEPTANCE 4 PASS: betti sums match oracle component totals on the "
          "corpus and sum to the module rank in every case (exact)")


def test_criterion_5_gkm():
    for name, build in CORPUS_GRAPHS.items():
        g = build()
        pres = forget_embedding(build_from_gkm(g))
        assert gkm_detect(pres), name
        reconstructed = gkm_graph(pres)
        assert graphs_isomorphic(reconstructed, g), name
    presentations = corpus_presentations()
    assert not gkm_detect(presentations["sphere_trivial_s2"])
    assert not gkm_detect(presentations["sphere_trivial_s4"])
    assert not gkm_detect(presentations["s4xs2_diagonal"])
    print("\nACCEPTANCE 5 PASS: gkm_detect true on all corpus graphs with the "
          "graph recovered up to iso and sign; false on the trivial-type "
          "sphere algebras")


def test_criterion_6_stratum_cohomology():
    for name in ("cp2", "cp1xcp1"):
        g = CORPUS_GRAPHS[name]()
        pres = build_from_gkm(g)
        pipe = StratumPipeline(pres)
        chi = pipe.analysis.chi
        b2v = embedded_block_vertices(pipe.alg_t, pipe.blocks_t)
        _, ocomps = oracle_poset(g)
        ram = [i for i, nd in enumerate(chi.nodes) if nd.ramified]
        mods = {}
        for idx in ram:
            mod = stratum_cohomology(pipe, chi, idx, degree_bound=14)
            mods[idx] = mod
            verts = sorted(b2v[b] for b in mod.fixed_blocks)
            comp = next(c for c in ocomps if sorted(c.vertices) == verts
                        and c.lam == chi.nodes[idx].subtorus)
            omod = oracle_subgraph_module(g, comp, 10)
            perm = sorted(range(len(mod.fixed_blocks)),
                          key=lambda p: b2v[mod.fixed_blocks[p]])
            eng = [([tup[p] for p in perm], d)
                   for tup, d in zip(mod.generators, mod.degrees)]
            ora = [(tuple(t), d) for t, d in zip(omod.generators, omod.degrees)]
            space = TupleSpace(pres.n, len(comp.vertices))
            assert module_slices_equal(space, eng, ora, 10), (name, idx)
        chains = 0
        for big in ram:
            for mid in ram:
                if big == mid or not chi.leq[mid][big]:
                    continue
                for small in ram:
                    if small in (big, mid) or not chi.leq[small][mid]:
                        continue
                    m1 = restriction_map(pipe, mods[big], mods[mid])
                    m2 = restriction_map(pipe, mods[mid], mods[small])
                    direct = restriction_map(pipe, mods[big], mods[small])
                    composed = [[sum((a * m2[k][j] for k, a in enumerate(row) if a),
                                     Poly.zero(pres.n))
                                 for j in range(len(m2[0]))] for row in m1]
                    assert composed == direct, (name, big, mid, small)
                    chains += 1
        assert chains > 0
    print("\nACCEPTANCE 6 PASS: stratum cohomology of every ramified node matches "
          "the oracle congruence module degreewise to degree 10, and restriction "
          "maps compose functorially along all chains (exact)")


def test_criterion_7_euler_factorization():
    rng = random.Random(555)
    families = [
        ([("one", 0)], {}),
        ([("one", 0), ("y", 2)], {(1, 1): {}}),
        ([("one", 0), ("y", 2), ("y2", 4)], {(1, 1): {2: Fraction(1)}, (1, 2): {}, (2, 2): {}}),
        ([("one", 0), ("y", 2), ("z", 2), ("yz", 4)],
         {(1, 1): {}, (2, 2): {}, (1, 2): {3: Fraction(1)}, (1, 3): {}, (2, 3): {}, (3, 3): {}}),
    ]
    done = 0
    while done < 50:
        n = rng.choice([1, 2, 3])
        basis, h_mul = rng.choice(families)
        block = BlockAlgebra(n, basis, h_mul)
        nfac = rng.randint(1, 3) if n >= 2 else 1
        weights = []
        while len(weights) < nfac:
            w = tuple(rng.randint(-2, 2) for _ in range(n))
            if any(w):
                wn = sign_normalized(w)
                if all(wn != x for x in weights):
                    weights.append(wn)
        originals = []
        for w in weights:
            k = rng.randint(1, 2)
            a = Fraction(rng.choice([1, 2, -1, 3]), rng.choice([1, 2]))
            x = block.zero_vec()
            x[0] = (Poly.linear_form(w) ** k).scale(a)
            for h in range(1, block.dim):
                rem = 2 * k - block.degree(h)
                if rem >= 0 and rem % 2 == 0 and rng.random() < 0.6:
                    mons = list(monomials_of_degree(n, rem // 2))
                    x[h] = Poly.monomial(n, rng.choice(mons), rng.randint(-2, 2))
            originals.append((x, w, k, a))
        e = block.unit()
        for x, _, _, _ in originals:
            e = block.mul(e, x)
        factorization = euler_factorize(block, e, candidates=weights, seed=done)
        assert len(factorization.factors) == len(originals)
        for x2, w2, k2, a2 in factorization.factors:
            x1, w1, k1, a1 = next(f for f in originals
                                  if f[1] == sign_normalized(w2))
            assert k1 == k2
            assert [c.scale(a1) for c in x2] == [c.scale(a2) for c in x1]
        done += 1
    print("\nACCEPTANCE 7 PASS: 50 random coprime weight-power products in block "
          "algebras (dim <= 4, rank <= 3) recovered up to scalar and order (exact)")


def test_criterion_8_nilradical_oracle():
    rng = random.Random(777)
    full = Subtorus.full(1)
    one_f = RatFun.from_const(1, 1)
    for trial in range(100):
        dim = rng.randint(1, 5)
        pres, known_nilpotents, _ = random_conjugated_algebra(rng, dim)
        alg = localize(pres, full)
        radical = nilradical(alg)
        assert len(radical) == len(known_nilpotents), trial
        rows = [[c for c in vec] for vec in radical]

        def in_radical(coords):
            if all(not c for c in coords):
                return True
            if not rows:
                return False
            base = len(rref(rows, one_f)[1])
            return len(rref(rows + [list(coords)], one_f)[1]) == base

        # brute-force grid over basis combinations
        probes = []
        if dim <= 3:
            grid = [-1, 0, 1]
            stack = [[]]
            for _ in range(dim):
                stack = [s + [g] for s in stack for g in grid]
            probes.extend(stack)
        else:
            for _ in range(30):
                probes.append([rng.randint(-1, 1) for _ in range(dim)])
        for _ in range(20):
            probes.append([rng.randint(-3, 3) for _ in range(dim)])
        for probe in probes:
            coords = [RatFun.from_const(1, c) for c in probe]
            assert is_nilpotent(alg, coords) == in_radical(coords), (trial, probe)
    print("\nACCEPTANCE 8 PASS: trace-form nilradical agrees with brute-force "
          "nilpotence on 100 random algebras over Q(t) of dimension <= 5 (exact)")


def test_criterion_9_determinism(tmp_path):
    corpus_dir = tmp_path / "corpus"
    write_corpus(str(corpus_dir))
    inputs = sorted(corpus_dir.glob("*.json"))
    assert len(inputs) == 9
    compared = 0
    for path in inputs:
        is_graph = json.loads(path.read_text()).get("kind") == "gkm"
        commands = [("poset", {"forget": is_graph}), ("betti", {}), ("gkm-detect", {})]
        if is_graph:
            commands.append(("gkm-graph", {"forget": True}))
        for command, extra in commands:
            payloads = []
            for seed in (0, 1):
                out = tmp_path / f"{path.stem}_{command}_{seed}.json"
                cfg = RunConfig(command=command, input_path=str(path),
                                seed=seed, out=str(out), **extra)
                assert run(cfg) == 0
                payloads.append(out.read_bytes())
            assert payloads[0] == payloads[1], (path.name, command)
            compared += 1
    print(f"\nACCEPTANCE 9 PASS: {compared} pipeline outputs byte-identical for "
          "seeds 0 and 1 over the entire corpus")
