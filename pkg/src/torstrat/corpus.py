"""Built-in example inputs: GKM graphs and algebra presentations.

The same objects are shipped as JSON files in the repository's corpus/
directory; `python -m torstrat.corpus OUTDIR` regenerates them.
"""

from __future__ import annotations

import itertools
import json
import os
import sys
from typing import Dict

from .algebra import AlgebraPresentation, GKMGraph
from .exact import Poly


def s2_graph() -> GKMGraph:
    """Rotation action on the two-sphere: one edge with weight t."""
    return GKMGraph(1, ["p", "q"], [(0, 1, (1,))], name="s2")


def cp1xcp1_graph() -> GKMGraph:
    """Product of two rotation spheres: a 4-cycle, opposite edges equal."""
    return GKMGraph(2, ["00", "10", "01", "11"],
                    [(0, 1, (1, 0)), (2, 3, (1, 0)), (0, 2, (0, 1)), (1, 3, (0, 1))],
                    name="cp1xcp1")


def cp2_graph() -> GKMGraph:
    """Projective plane: a triangle with weights t1, t2, t2 - t1."""
    return GKMGraph(2, ["p1", "p2", "p3"],
                    [(0, 1, (1, 0)), (0, 2, (0, 1)), (1, 2, (-1, 1))], name="cp2")


def cp3_graph() -> GKMGraph:
    """Projective 3-space: complete graph on the coordinate fixed points."""
    mu = {0: (0, 0, 0), 1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}
    edges = []
    for i in range(4):
        for j in range(i + 1, 4):
            edges.append((i, j, tuple(b - a for a, b in zip(mu[i], mu[j]))))
    return GKMGraph(3, [f"p{i}" for i in range(4)], edges, name="cp3")


def su3_flag_graph() -> GKMGraph:
    """Full flag manifold of SU(3): hexagon on the Weyl orbit.

    Vertices are permutations of (1,2,3); swapping two entries gives an
    edge whose weight is the corresponding root, written in the rank-2
    basis with t3 = -t1 - t2.
    """
    verts = sorted(itertools.permutations((1, 2, 3)))
    idx = {v: i for i, v in enumerate(verts)}
    coords = {1: (1, 0), 2: (0, 1), 3: (-1, -1)}
    edges = []
    for v in verts:
        for i in range(3):
            for j in range(i + 1, 3):
                w = list(v)
                w[i], w[j] = w[j], w[i]
                w = tuple(w)
                if idx[v] < idx[w]:
                    weight = tuple(a - b for a, b in zip(coords[v[i]], coords[v[j]]))
                    edges.append((idx[v], idx[w], weight))
    return GKMGraph(2, ["".join(map(str, v)) for v in verts], edges, name="su3_flag")


def sphere_trivial_presentation(sphere_dim: int = 2, name: str = "") -> AlgebraPresentation:
    """The algebra R[a]/(a^2) of a circle action on a sphere with connected
    fixed set; `sphere_dim` is the degree of the generator a."""
    one = Poly.const(1, 1)
    mul = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 1): {}}
    return AlgebraPresentation(
        1, [("one", 0), ("a", sphere_dim)], mul,
        name=name or f"sphere_trivial_s{sphere_dim}")


def s4xs2_diagonal_presentation() -> AlgebraPresentation:
    """Circle action on the product of a 4-sphere (semifree-type factor,
    a^2 = 0) and a rotation 2-sphere (x^2 = t x)."""
    one = Poly.const(1, 1)
    t = Poly.variable(1, 0)
    basis = [("one", 0), ("x", 2), ("a", 4), ("ax", 6)]
    mul = {
        (0, 0): {0: one}, (0, 1): {1: one}, (0, 2): {2: one}, (0, 3): {3: one},
        (1, 1): {1: t},          # x*x = t*x
        (1, 2): {3: one},        # x*a = ax
        (1, 3): {3: t},          # x*ax = t*ax
        (2, 2): {},              # a*a = 0
        (2, 3): {},              # a*ax = 0
        (3, 3): {},              # ax*ax = 0
    }
    return AlgebraPresentation(1, basis, mul, weights=[(1,)], name="s4xs2_diagonal")


def e1_presentation() -> AlgebraPresentation:
    """The rotation-sphere algebra R[x]/(x^2 - t x) with candidate weight t
    and the fixed-point embedding forgotten."""
    one = Poly.const(1, 1)
    t = Poly.variable(1, 0)
    mul = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 1): {1: t}}
    return AlgebraPresentation(1, [("one", 0), ("x", 2)], mul,
                               weights=[(1,)], name="e1")


def corpus_graphs() -> Dict[str, GKMGraph]:
    return {
        "s2": s2_graph(),
        "cp1xcp1": cp1xcp1_graph(),
        "cp2": cp2_graph(),
        "cp3": cp3_graph(),
        "su3_flag": su3_flag_graph(),
    }


def corpus_presentations() -> Dict[str, AlgebraPresentation]:
    return {
        "sphere_trivial_s2": sphere_trivial_presentation(2),
        "sphere_trivial_s4": sphere_trivial_presentation(4),
        "s4xs2_diagonal": s4xs2_diagonal_presentation(),
        "e1": e1_presentation(),
    }


def write_corpus(outdir: str) -> None:
    os.makedirs(outdir, exist_ok=True)
    for name, g in corpus_graphs().items():
        path = os.path.join(outdir, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(g.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")
    for name, p in corpus_presentations().items():
        path = os.path.join(outdir, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(p.to_json(), fh, indent=1, sort_keys=True)
            fh.write("\n")


if __name__ == "__main__":
    write_corpus(sys.argv[1] if len(sys.argv) > 1 else "corpus")
