"""Report rendering: CSV tables and matplotlib figures.

The report path summarizes a reconstruction run in delimited form
(nodes.csv, betti.csv) and renders the ramified Hasse diagram, plus the
reconstructed GKM graph when the input is of GKM type, to PNG files.
"""

from __future__ import annotations

import csv
import math
import os
from typing import List

from .algebra import AlgebraPresentation, GKMGraph
from .cohom import GKMAnalysis, gkm_detect, gkm_graph
from .errors import NoWeights, TorstratError
from .strat import StratPoset


def _hasse_layout(poset: StratPoset):
    """Layered positions: y = corank of the stabilizer, x spread per layer."""
    layers = {}
    for i, node in enumerate(poset.nodes):
        layers.setdefault(node.subtorus.corank, []).append(i)
    pos = {}
    for corank, members in sorted(layers.items()):
        width = len(members)
        for k, i in enumerate(sorted(members, key=lambda j: poset.nodes[j].block)):
            pos[i] = (k - (width - 1) / 2.0, corank)
    return pos


def render_hasse(poset: StratPoset, path: str, title: str = "ramified strata") -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    pos = _hasse_layout(poset)
    fig, ax = plt.subplots(figsize=(7, 5))
    for a, b in poset.covers():
        xa, ya = pos[a]
        xb, yb = pos[b]
        ax.plot([xa, xb], [ya, yb], color="0.6", lw=1, zorder=1)
    for i, node in enumerate(poset.nodes):
        x, y = pos[i]
        color = "tab:blue" if node.ramified else "0.8"
        ax.scatter([x], [y], s=320, color=color, zorder=2)
        lam = "T" if node.subtorus.corank == 0 else (
            "1" if node.subtorus.rank == 0 else f"rk{node.subtorus.rank}")
        ax.annotate(f"b{node.block}\n{lam}", (x, y), ha="center", va="center",
                    fontsize=7, color="white" if node.ramified else "black", zorder=3)
    ax.set_title(title)
    ax.set_ylabel("isotropy corank")
    ax.set_xticks([])
    ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_gkm_graph(g: GKMGraph, path: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    nv = len(g.vertices)
    angles = [2 * math.pi * i / nv for i in range(nv)]
    xs = [math.cos(a) for a in angles]
    ys = [math.sin(a) for a in angles]
    fig, ax = plt.subplots(figsize=(6, 6))
    for a, b, w in g.edges:
        ax.plot([xs[a], xs[b]], [ys[a], ys[b]], color="0.5", lw=1.2, zorder=1)
        mx, my = (xs[a] + xs[b]) / 2, (ys[a] + ys[b]) / 2
        ax.annotate("(" + ",".join(map(str, w)) + ")", (mx, my), fontsize=7,
                    color="tab:red", ha="center", zorder=3)
    ax.scatter(xs, ys, s=340, color="tab:blue", zorder=2)
    for i, name in enumerate(g.vertices):
        ax.annotate(name, (xs[i], ys[i]), ha="center", va="center", fontsize=7,
                    color="white", zorder=4)
    ax.set_title(g.name or "reconstructed GKM graph")
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(pres: AlgebraPresentation, out_dir: str, seed: int = 0) -> List[str]:
    """Write nodes.csv, betti.csv, hasse.png and, when applicable, gkm.png."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    analysis = GKMAnalysis(pres, seed=seed)
    chi = analysis.chi

    nodes_path = os.path.join(out_dir, "nodes.csv")
    with open(nodes_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "stabilizer_rank", "block", "ramified",
                         "lambda_basis", "witness_degree", "betti_sum"])
        for i, node in enumerate(chi.nodes):
            writer.writerow([
                f"n{i}", node.subtorus.rank, node.block, node.ramified,
                ";".join(",".join(map(str, row)) for row in node.subtorus.basis),
                node.witness_degree, analysis.node_betti(i),
            ])
    written.append(nodes_path)

    betti_path = os.path.join(out_dir, "betti.csv")
    with open(betti_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fixed_block", "betti_sum"])
        for t in analysis.t_nodes:
            writer.writerow([chi.nodes[t].block, analysis.node_betti(t)])
    written.append(betti_path)

    keep = [i for i, nd in enumerate(chi.nodes) if nd.ramified]
    hasse_path = os.path.join(out_dir, "hasse.png")
    render_hasse(chi.restricted_to(keep), hasse_path,
                 title=pres.name or "ramified strata")
    written.append(hasse_path)

    try:
        if gkm_detect(pres, seed=seed, analysis=analysis):
            g = gkm_graph(pres, seed=seed, analysis=analysis)
            gkm_path = os.path.join(out_dir, "gkm.png")
            render_gkm_graph(g, gkm_path)
            written.append(gkm_path)
    except (NoWeights, TorstratError):
        pass
    return written
