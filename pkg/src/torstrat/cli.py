"""Command line interface: parsing, dispatch, and artifact emission.

Commands: validate | thom | poset | betti | gkm-detect | gkm-graph |
strata | restrict | oracle | report.  Inputs are UTF-8 JSON files, either
a weighted graph ({"kind": "gkm", ...}) or an algebra presentation
({"kind": "presentation", ...}).  Exit codes: 0 success, 2 input or
validation failure, 3 certified-computation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import List, Optional

from . import oracle as oracle_mod
from .algebra import AlgebraPresentation, GKMGraph, build_from_gkm, forget_embedding, validate
from .cohom import (GKMAnalysis, StratumPipeline, gkm_graph, gkm_detect,
                    restriction_map, stratum_cohomology)
from .errors import InputError, TorstratError
from .exact import poly_to_json
from .lattice import Subtorus
from .strat import Reconstruction, StratPoset, build_chi_prime, poset_to_dot, \
    ramified_subposet
from .thom import construct_thom_system, minimal_strict_thom_system, verify_strict

INPUT_ERRORS = (InputError, json.JSONDecodeError, OSError, KeyError, ValueError)


@dataclass
class RunConfig:
    """Validated invocation parameters; unknown flags are rejected by argparse."""

    command: str
    input_path: Optional[str] = None
    weights: Optional[List[List[int]]] = None
    subtori: Optional[List[List[List[int]]]] = None
    degree_bound: Optional[int] = None
    seed: int = 0
    out: Optional[str] = None
    dot: Optional[str] = None
    subtorus: Optional[List[List[int]]] = None
    strict: bool = False
    minimal: bool = False
    node: Optional[str] = None
    node_from: Optional[str] = None
    node_to: Optional[str] = None
    out_dir: str = "report"
    forget: bool = False


def _parse_args(argv: Optional[List[str]]) -> RunConfig:
    parser = argparse.ArgumentParser(
        prog="torstrat",
        description="Reconstruct orbit-type stratification data from a "
                    "torus-equivariant cohomology algebra.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="input JSON file")
        p.add_argument("--weights", help="JSON list of candidate weights")
        p.add_argument("--subtori", help="JSON list of subtorus bases")
        p.add_argument("--degree-bound", type=int, dest="degree_bound")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output JSON path (default: stdout)")
        p.add_argument("--forget-embedding", action="store_true", dest="forget",
                       help="drop the fixed-point embedding before computing")

    p = sub.add_parser("validate", help="check presentation invariants")
    common(p)
    p = sub.add_parser("thom", help="construct or verify a U-local Thom system")
    common(p)
    p.add_argument("--subtorus", help="JSON basis of U (default: full torus)")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--minimal", action="store_true")
    p = sub.add_parser("poset", help="reconstruct the stratification poset")
    common(p)
    p.add_argument("--dot", help="write the ramified Hasse diagram in DOT")
    p = sub.add_parser("betti", help="total Betti numbers of all strata")
    common(p)
    p = sub.add_parser("gkm-detect", help="decide whether the input is GKM")
    common(p)
    p = sub.add_parser("gkm-graph", help="reconstruct the GKM graph")
    common(p)
    p.add_argument("--dot", help="write the graph in DOT")
    p = sub.add_parser("strata", help="equivariant cohomology of one stratum")
    common(p)
    p.add_argument("--node", required=True, help="ramified node id, e.g. n3")
    p = sub.add_parser("restrict", help="restriction map between two strata")
    common(p)
    p.add_argument("--from", required=True, dest="node_from", help="bigger node id")
    p.add_argument("--to", required=True, dest="node_to", help="smaller node id")
    p = sub.add_parser("oracle", help="graph-theoretic oracle stratification")
    common(p)
    p.add_argument("--dot", help="write the oracle Hasse diagram in DOT")
    p.add_argument("--node", help="also emit this oracle component's module")
    p = sub.add_parser("report", help="CSV summary plus rendered figures")
    common(p)
    p.add_argument("--out-dir", default="report", dest="out_dir")

    ns = parser.parse_args(argv)
    cfg = RunConfig(command=ns.command)
    cfg.input_path = getattr(ns, "input", None)
    cfg.seed = getattr(ns, "seed", 0)
    cfg.degree_bound = getattr(ns, "degree_bound", None)
    cfg.out = getattr(ns, "out", None)
    cfg.dot = getattr(ns, "dot", None)
    cfg.strict = getattr(ns, "strict", False)
    cfg.minimal = getattr(ns, "minimal", False)
    cfg.node = getattr(ns, "node", None)
    cfg.node_from = getattr(ns, "node_from", None)
    cfg.node_to = getattr(ns, "node_to", None)
    cfg.out_dir = getattr(ns, "out_dir", "report")
    cfg.forget = getattr(ns, "forget", False)
    if getattr(ns, "weights", None):
        cfg.weights = json.loads(ns.weights)
    if getattr(ns, "subtori", None):
        cfg.subtori = json.loads(ns.subtori)
    if getattr(ns, "subtorus", None):
        cfg.subtorus = json.loads(ns.subtorus)
    return cfg


def load_input(path: str, forget: bool = False,
               weights: Optional[List[List[int]]] = None):
    """Read a JSON input; graphs are built into presentations.

    Returns (presentation, graph-or-None)."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    kind = data.get("kind")
    if kind == "gkm":
        graph = GKMGraph.from_json(data)
        pres = build_from_gkm(graph)
    elif kind == "presentation":
        graph = None
        pres = AlgebraPresentation.from_json(data)
    else:
        raise InputError(f"unknown input kind {kind!r}")
    if forget:
        pres = forget_embedding(pres)
    if weights is not None:
        pres = AlgebraPresentation(pres.n, pres.basis, pres.mul,
                                   embedding=pres.embedding, weights=weights,
                                   name=pres.name)
    return pres, graph


def _emit(cfg: RunConfig, payload: dict) -> None:
    text = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _subtori_override(cfg: RunConfig, n: int):
    if cfg.subtori is None:
        return None
    return [Subtorus(n, basis) for basis in cfg.subtori]


def _poset_payload(pres: AlgebraPresentation, chi: StratPoset, ram: StratPoset) -> dict:
    return {
        "rank": pres.n,
        "chi_prime": chi.to_json(),
        "ramified": ram.to_json(),
    }


def run(cfg: RunConfig) -> int:
    """Dispatch a parsed configuration; returns the exit status."""
    pres, graph = (None, None)
    if cfg.input_path:
        pres, graph = load_input(cfg.input_path, forget=cfg.forget, weights=cfg.weights)

    if cfg.command == "validate":
        problems = validate(pres)
        _emit(cfg, {"valid": not problems, "violations": problems})
        return 0 if not problems else 2

    if cfg.command == "thom":
        if cfg.minimal:
            system = minimal_strict_thom_system(pres, seed=cfg.seed,
                                                degree_budget=cfg.degree_bound)
        else:
            u = Subtorus(pres.n, cfg.subtorus) if cfg.subtorus else Subtorus.full(pres.n)
            system = construct_thom_system(pres, u, seed=cfg.seed)
            if cfg.strict and not verify_strict(pres, u, system.elements, seed=cfg.seed):
                raise TorstratError("constructed system failed strict verification")
        _emit(cfg, {
            "subtorus": system.subtorus.to_json(),
            "strict": system.strict,
            "elements": [[poly_to_json(c) for c in tau] for tau in system.elements],
            "block_assignment": system.block_assignment,
        })
        return 0

    if cfg.command == "poset":
        recon = Reconstruction(pres, _subtori_override(cfg, pres.n), seed=cfg.seed)
        chi = build_chi_prime(pres, recon=recon, seed=cfg.seed)
        ram = ramified_subposet(chi)
        _emit(cfg, _poset_payload(pres, chi, ram))
        if cfg.dot:
            with open(cfg.dot, "w", encoding="utf-8") as fh:
                fh.write(poset_to_dot(ram, title=pres.name or "ramified strata"))
                fh.write("\n")
        return 0

    if cfg.command == "betti":
        analysis = GKMAnalysis(pres, seed=cfg.seed)
        nodes = []
        for i, node in enumerate(analysis.chi.nodes):
            nodes.append({"id": f"n{i}", "ramified": node.ramified,
                          "betti_sum": analysis.node_betti(i)})
        _emit(cfg, {"nodes": nodes})
        return 0

    if cfg.command == "gkm-detect":
        _emit(cfg, {"gkm": gkm_detect(pres, seed=cfg.seed)})
        return 0

    if cfg.command == "gkm-graph":
        g = gkm_graph(pres, seed=cfg.seed)
        _emit(cfg, g.to_json())
        if cfg.dot:
            with open(cfg.dot, "w", encoding="utf-8") as fh:
                fh.write(graph_to_dot(g))
                fh.write("\n")
        return 0

    if cfg.command == "strata":
        pipeline = StratumPipeline(pres, seed=cfg.seed)
        chi = pipeline.analysis.chi
        idx = _node_index(chi, cfg.node)
        if not chi.nodes[idx].ramified:
            raise InputError(f"node {cfg.node} is not ramified")
        module = stratum_cohomology(pipeline, chi, idx, degree_bound=cfg.degree_bound)
        _emit(cfg, module.to_json())
        return 0

    if cfg.command == "restrict":
        pipeline = StratumPipeline(pres, seed=cfg.seed)
        chi = pipeline.analysis.chi
        i_from = _node_index(chi, cfg.node_from)
        i_to = _node_index(chi, cfg.node_to)
        big = stratum_cohomology(pipeline, chi, i_from, degree_bound=cfg.degree_bound)
        small = stratum_cohomology(pipeline, chi, i_to, degree_bound=cfg.degree_bound)
        matrix = restriction_map(pipeline, big, small)
        _emit(cfg, {
            "from": cfg.node_from,
            "to": cfg.node_to,
            "matrix": [[poly_to_json(c) for c in row] for row in matrix],
        })
        return 0

    if cfg.command == "oracle":
        if graph is None:
            raise InputError("oracle requires a 'gkm' input")
        poset, comps = oracle_mod.oracle_poset(graph)
        payload = {
            "nodes": poset.to_json()["nodes"],
            "order": poset.to_json()["order"],
            "components": [{"vertices": sorted(c.vertices),
                            "edges": [[a, b, list(w)] for a, b, w in sorted(c.edges)]}
                           for c in comps],
        }
        if cfg.node:
            idx = _node_index(poset, cfg.node)
            bound = cfg.degree_bound if cfg.degree_bound is not None else 10
            module = oracle_mod.oracle_subgraph_module(graph, comps[idx], bound)
            payload["module"] = {
                "vertices": module.vertices,
                "generator_degrees": module.degrees,
                "generators": [[poly_to_json(c) for c in tup]
                               for tup in module.generators],
                "degree_bound": module.degree_bound,
            }
        _emit(cfg, payload)
        if cfg.dot:
            keep = [i for i, nd in enumerate(poset.nodes) if nd.ramified]
            with open(cfg.dot, "w", encoding="utf-8") as fh:
                fh.write(poset_to_dot(poset.restricted_to(keep), title="oracle strata"))
                fh.write("\n")
        return 0

    if cfg.command == "report":
        from .report import write_report
        paths = write_report(pres, cfg.out_dir, seed=cfg.seed)
        _emit(cfg, {"written": paths})
        return 0

    raise InputError(f"unknown command {cfg.command}")


def _node_index(poset: StratPoset, node_id: str) -> int:
    if not node_id or not node_id.startswith("n"):
        raise InputError(f"bad node id {node_id!r}")
    try:
        idx = int(node_id[1:])
    except ValueError as exc:
        raise InputError(f"bad node id {node_id!r}") from exc
    if not 0 <= idx < len(poset.nodes):
        raise InputError(f"node id {node_id!r} out of range")
    return idx


def graph_to_dot(g: GKMGraph) -> str:
    lines = ["graph gkm {", '  layout="circo";']
    for i, name in enumerate(g.vertices):
        lines.append(f'  v{i} [label="{name}"];')
    for a, b, w in g.edges:
        label = ",".join(str(x) for x in w)
        lines.append(f'  v{a} -- v{b} [label="({label})"];')
    lines.append("}")
    return "\n".join(lines)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cfg = _parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return run(cfg)
    except INPUT_ERRORS as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    except TorstratError as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
