"""Cohomological information of strata: Betti sums, GKM structure, Euler
class factorization, and stratum equivariant cohomology modules.

The stratum pipeline assumes isolated fixed points (every localization
block at the full torus is one-dimensional over its residue data), where
restriction to a fixed point lands in the plain polynomial ring and
divisibility tests are exact division.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraPresentation, GKMGraph, LocalizedAlgebra, localize, \
    to_localized_coords
from .errors import (InputError, NoWeights, NotContained, NotCoprime, NotIsolated,
                     NotSplit, NotStrict, TorstratError)
from .exact import (Poly, divide_exact, factor_into_linear_forms,
                    monomials_of_degree)
from .gradedmod import TupleSpace, express_in_generators, extend_basis, span_slice
from .lattice import Subtorus, sign_normalized
from .linalg import nullspace, rref
from .strat import (Reconstruction, StratPoset, build_chi_prime, ramified_subposet,
                    scalar_part)
from .thom import ThomSystem, minimal_strict_thom_system, verify_strict

_ONE = Fraction(1)
_ZERO = Fraction(0)


# ---------- Betti numbers ----------


def betti_sum(pres: AlgebraPresentation, subtorus: Subtorus, system: ThomSystem,
              i: int, alg: Optional[LocalizedAlgebra] = None, seed: int = 0,
              checked: bool = False) -> int:
    """Total Betti number of the i-th stratum component at U: the dimension
    over F of the joint annihilator of the other system elements."""
    if alg is None:
        alg = localize(pres, subtorus)
    if not checked and not verify_strict(pres, subtorus, system.elements, seed=seed, alg=alg):
        raise NotStrict("betti_sum requires a strict U-local Thom system")
    rows = []
    for j, tau in enumerate(system.elements):
        if system.block_assignment[j] == system.block_assignment[i]:
            continue
        coords = to_localized_coords(pres, subtorus, tau)
        mat = alg.mult_matrix(coords)
        rows.extend(mat)
    if not rows:
        return alg.dim
    return len(nullspace(rows, alg.zero_f(), alg.one_f()))


# ---------- GKM detection and graph reconstruction ----------


class GKMAnalysis:
    """Shared intermediate data for the GKM operations."""

    def __init__(self, pres: AlgebraPresentation, seed: int = 0,
                 recon: Optional[Reconstruction] = None):
        self.pres = pres
        self.seed = seed
        self.recon = recon or Reconstruction(pres, seed=seed)
        self.chi = build_chi_prime(pres, recon=self.recon, seed=seed)
        ramified_subposet(self.chi)  # sets the ramified flags on chi's nodes
        self.ramified_indices = [i for i, nd in enumerate(self.chi.nodes) if nd.ramified]
        self.torus = Subtorus.full(pres.n)
        self.t_nodes = [i for i, nd in enumerate(self.chi.nodes)
                        if nd.subtorus == self.torus]

    def node_betti(self, index: int) -> int:
        node = self.chi.nodes[index]
        system = self.recon.system_at(node.subtorus)
        alg = self.recon.algebra_at(node.subtorus)
        pos = system.block_assignment.index(node.block)
        return betti_sum(self.pres, node.subtorus, system, pos, alg=alg,
                         seed=self.seed, checked=True)

    def t_blocks_below(self, index: int) -> List[int]:
        return [t for t in self.t_nodes if self.chi.leq[t][index]]


def gkm_detect(pres: AlgebraPresentation, seed: int = 0,
               analysis: Optional[GKMAnalysis] = None) -> bool:
    """Are all fixed components points and all codimension-1 strata spheres?"""
    if analysis is None:
        analysis = GKMAnalysis(pres, seed=seed)
    for t in analysis.t_nodes:
        if analysis.node_betti(t) != 1:
            return False
    for i in analysis.ramified_indices:
        node = analysis.chi.nodes[i]
        if node.subtorus.corank != 1:
            continue
        below = analysis.t_blocks_below(i)
        if len(below) != 2 or analysis.node_betti(i) != 2:
            return False
    return True


def gkm_graph(pres: AlgebraPresentation, seed: int = 0,
              analysis: Optional[GKMAnalysis] = None) -> GKMGraph:
    """Reconstruct the GKM graph: vertices are fixed blocks, edges the
    corank-1 ramified strata, labelled by the primitive form vanishing on
    their stabilizer (sign-normalized)."""
    if pres.weights is None and pres.n >= 2:
        raise NoWeights("gkm_graph needs candidate weights for rank >= 2")
    if analysis is None:
        analysis = GKMAnalysis(pres, seed=seed)
    if not gkm_detect(pres, seed=seed, analysis=analysis):
        raise InputError("presentation is not of GKM type")
    vertex_of_tnode = {t: k for k, t in enumerate(analysis.t_nodes)}
    names = [f"v{k}" for k in range(len(analysis.t_nodes))]
    edges = []
    for i in analysis.ramified_indices:
        node = analysis.chi.nodes[i]
        if node.subtorus.corank != 1:
            continue
        below = analysis.t_blocks_below(i)
        forms = node.subtorus.ideal_forms()
        if len(forms) != 1:
            raise TorstratError("corank-1 stabilizer with more than one form")
        weight = sign_normalized(forms[0])
        a, b = sorted(vertex_of_tnode[t] for t in below)
        edges.append((a, b, weight))
    edges.sort()
    return GKMGraph(pres.n, names, edges, name=pres.name)


# ---------- block algebras and Euler factorization ----------


class BlockAlgebra:
    """R tensor H for a finite-dimensional graded unital Q-algebra H.

    `h_basis` lists (name, degree) with h_basis[0] the unit in degree 0;
    `h_mul` maps (i, j), i <= j, to {k: Fraction}.  Elements are vectors of
    polynomials in R = Q[t1..tn].
    """

    def __init__(self, nvars: int, h_basis: Sequence[Tuple[str, int]],
                 h_mul: Dict[Tuple[int, int], Dict[int, Fraction]]):
        self.n = nvars
        self.h_basis = [(str(nm), int(d)) for nm, d in h_basis]
        if self.h_basis[0][1] != 0:
            raise InputError("h_basis[0] must be the degree-0 unit")
        self.h_mul = {}
        for (i, j), terms in h_mul.items():
            key = (min(i, j), max(i, j))
            self.h_mul[key] = {k: Fraction(c) for k, c in terms.items() if c}

    @property
    def dim(self) -> int:
        return len(self.h_basis)

    def degree(self, i: int) -> int:
        return self.h_basis[i][1]

    def pair(self, i: int, j: int) -> Dict[int, Fraction]:
        if i == 0:
            return {j: _ONE}
        if j == 0:
            return {i: _ONE}
        return self.h_mul.get((min(i, j), max(i, j)), {})

    def zero_vec(self) -> List[Poly]:
        return [Poly.zero(self.n) for _ in range(self.dim)]

    def unit(self, c=1) -> List[Poly]:
        vec = self.zero_vec()
        vec[0] = Poly.const(self.n, c)
        return vec

    def mul(self, x: Sequence[Poly], y: Sequence[Poly]) -> List[Poly]:
        out = self.zero_vec()
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                for k, c in self.pair(i, j).items():
                    out[k] = out[k] + (xi * yj).scale(c)
        return out

    def element_degree(self, x: Sequence[Poly]) -> Optional[int]:
        deg = None
        for i, xi in enumerate(x):
            if not xi:
                continue
            if not xi.is_homogeneous():
                return None
            d = xi.cohom_degree() + self.degree(i)
            if deg is None:
                deg = d
            elif d != deg:
                return None
        return deg


class EulerFactorization:
    """Factors (x_j, alpha_j, k_j, a_j): x_j - a_j alpha_j^{k_j} nilpotent."""

    def __init__(self, factors: List[Tuple[List[Poly], Tuple[int, ...], int, Fraction]]):
        self.factors = factors


def euler_factorize(block: BlockAlgebra, e: Sequence[Poly],
                    candidates: Optional[Sequence[Sequence[int]]] = None,
                    seed: int = 0) -> EulerFactorization:
    """Factor e into weight-power factors with nilpotent corrections.

    The scalar part (H-degree-0 component) is factored into linear forms;
    each coprime weight-power then grows its nilpotent correction degree by
    degree through exact coefficient solves, and the product is verified.
    """
    scalar_poly = e[0]
    if not scalar_poly:
        raise NotSplit("scalar part of the element vanishes")
    if scalar_poly.is_constant():
        if all(not c for c in e[1:]):
            return EulerFactorization([])
        raise NotSplit("constant scalar part with nilpotent remainder")
    const, factor_map = factor_into_linear_forms(scalar_poly, candidates, seed=seed)
    groups = sorted(factor_map.items())  # (alpha, multiplicity), coprime since distinct
    seen = set()
    for alpha, _ in groups:
        norm = sign_normalized(alpha)
        if norm in seen:
            raise NotCoprime(f"repeated weight direction {norm}")
        seen.add(norm)
    scalars: List[Tuple[Tuple[int, ...], int, Fraction]] = []
    for idx, (alpha, mult) in enumerate(groups):
        a = const if idx == 0 else _ONE
        scalars.append((alpha, mult, a))
    factors: List[Tuple[List[Poly], Tuple[int, ...], int, Fraction]] = []
    rest = [Poly(block.n, dict(c.terms)) for c in e]
    for idx, (alpha, mult, a) in enumerate(scalars):
        if idx == len(scalars) - 1:
            factors.append((rest, alpha, mult, a))
            break
        f = Poly.linear_form(alpha) ** mult
        f = f.scale(a)
        g = Poly.const(block.n, 1)
        for alpha2, mult2, a2 in scalars[idx + 1:]:
            g = g * (Poly.linear_form(alpha2) ** mult2).scale(a2)
        x, rest = _two_factor_split(block, rest, f, g)
        factors.append((x, alpha, mult, a))
    # verification
    prod = block.unit()
    for x, alpha, mult, a in factors:
        prod = block.mul(prod, x)
        correction = list(x)
        correction[0] = correction[0] - (Poly.linear_form(alpha) ** mult).scale(a)
        if correction[0]:
            raise TorstratError("factor scalar part mismatch")
    if prod != list(e) and factors:
        raise TorstratError("euler factorization failed verification")
    return EulerFactorization(factors)


def _two_factor_split(block: BlockAlgebra, x: List[Poly], f: Poly, g: Poly):
    """Solve x = a*b with scalar parts f and g (coprime), degree by degree."""
    n = block.n
    dx = block.element_degree(x)
    if dx is None or dx != f.cohom_degree() + g.cohom_degree():
        raise NotSplit("element degree does not match scalar factorization")
    a = block.zero_vec()
    b = block.zero_vec()
    a[0] = f
    b[0] = g
    hdegs = sorted({block.degree(i) for i in range(block.dim) if block.degree(i) > 0})
    for k in hdegs:
        prod = block.mul(a, b)
        # residual at H-degree k
        for i in range(block.dim):
            if block.degree(i) != k:
                continue
            w = x[i] - prod[i]
            du = f.cohom_degree() - k
            dv = g.cohom_degree() - k
            u, v = _solve_scaled_bezout(n, f, g, w, du, dv)
            a[i] = a[i] + u
            b[i] = b[i] + v
    return a, b


def _solve_scaled_bezout(n: int, f: Poly, g: Poly, w: Poly, du: int, dv: int):
    """Homogeneous u, v of cohomological degrees du, dv with u*g + v*f = w."""
    zero = Poly.zero(n)
    if not w:
        return zero, zero
    cols = []
    labels = []
    if du >= 0 and du % 2 == 0:
        for m in monomials_of_degree(n, du // 2):
            cols.append(Poly.monomial(n, m) * g)
            labels.append(("u", m))
    if dv >= 0 and dv % 2 == 0:
        for m in monomials_of_degree(n, dv // 2):
            cols.append(Poly.monomial(n, m) * f)
            labels.append(("v", m))
    target_mons = list(monomials_of_degree(n, w.total_degree()))
    index = {e: i for i, e in enumerate(target_mons)}
    mat = [[_ZERO] * len(cols) for _ in target_mons]
    for c, p in enumerate(cols):
        for e, coeff in p.terms.items():
            mat[index[e]][c] = coeff
    rhs = [_ZERO] * len(target_mons)
    for e, coeff in w.terms.items():
        rhs[index[e]] = coeff
    from .linalg import solve
    sol = solve(mat, rhs, _ZERO, _ONE)
    if sol is None:
        raise NotSplit("no factor correction exists at this degree")
    u, v = zero, zero
    for (which, m), c in zip(labels, sol):
        if not c:
            continue
        if which == "u":
            u = u + Poly.monomial(n, m, c)
        else:
            v = v + Poly.monomial(n, m, c)
    return u, v


# ---------- stratum cohomology ----------


class StratumModule:
    """Image of the equivariant cohomology of one stratum in the fixed-point
    restriction; generators are tuples over one R-copy per fixed block."""

    def __init__(self, node_index: int, subtorus: Subtorus, fixed_blocks: List[int],
                 generators: List[List[Poly]], degrees: List[int],
                 euler_restrictions: List[Poly], degree_bound: int):
        self.node_index = node_index
        self.subtorus = subtorus
        self.fixed_blocks = fixed_blocks
        self.generators = generators
        self.degrees = degrees
        self.euler_restrictions = euler_restrictions
        self.degree_bound = degree_bound

    def to_json(self) -> dict:
        from .exact import poly_to_json
        return {
            "node": f"n{self.node_index}",
            "lambda": self.subtorus.to_json(),
            "fixed_blocks": list(self.fixed_blocks),
            "generator_degrees": list(self.degrees),
            "generators": [[poly_to_json(c) for c in tup] for tup in self.generators],
            "degree_bound": self.degree_bound,
        }


class StratumPipeline:
    """Cache for per-presentation stratum computations: the poset, the
    minimal Thom system, and fixed-block scalar-part functionals."""

    def __init__(self, pres: AlgebraPresentation, seed: int = 0,
                 recon: Optional[Reconstruction] = None,
                 analysis: Optional[GKMAnalysis] = None):
        self.pres = pres
        self.seed = seed
        self.analysis = analysis or GKMAnalysis(pres, seed=seed, recon=recon)
        self.recon = self.analysis.recon
        if not gkm_detect(pres, seed=seed, analysis=self.analysis):
            raise NotIsolated("stratum cohomology requires isolated fixed points")
        self.torus = Subtorus.full(pres.n)
        self.alg_t = self.recon.algebra_at(self.torus)
        self.blocks_t = self.recon.blocks_at(self.torus)
        self.minimal = minimal_strict_thom_system(pres, seed=seed, alg=self.alg_t)
        # scalar parts of every basis element on every fixed block
        self.restrictions: List[List[Poly]] = []
        for e in self.blocks_t:
            row = []
            for b in range(pres.dim):
                s = scalar_part(pres, self.torus, e, pres.basis_vector(b), alg=self.alg_t)
                if not s.is_polynomial():
                    raise NotIsolated("fixed-block residue is not polynomial")
                row.append(s.as_poly())
            self.restrictions.append(row)

    def restrict_element(self, block: int, x: Sequence[Poly]) -> Poly:
        out = Poly.zero(self.pres.n)
        for b, coeff in enumerate(x):
            if coeff:
                out = out + coeff * self.restrictions[block][b]
        return out


def stratum_cohomology(pipeline: StratumPipeline, poset: StratPoset, node_index: int,
                       degree_bound: Optional[int] = None) -> StratumModule:
    """Module generators of the stratum's equivariant cohomology image.

    Divides fixed-point restrictions by the normal-direction weight product
    of the stratum and extracts graded Nakayama generators up to the
    (reported) degree bound.
    """
    pres = pipeline.pres
    node = poset.nodes[node_index]
    t_indices = [i for i, nd in enumerate(poset.nodes) if nd.subtorus == pipeline.torus]
    fixed_nodes = [i for i in t_indices if poset.leq[i][node_index]]
    if not fixed_nodes:
        raise NotIsolated("stratum contains no fixed blocks")
    fixed_blocks = [poset.nodes[i].block for i in fixed_nodes]
    lam = node.subtorus
    kept_parts = []
    for blk in fixed_blocks:
        pos = pipeline.minimal.block_assignment.index(blk)
        tau_res = pipeline.restrict_element(blk, pipeline.minimal.elements[pos])
        if not tau_res:
            raise TorstratError("minimal Thom element restricts to zero on its block")
        _, factors = factor_into_linear_forms(tau_res, pres.weights, seed=pipeline.seed)
        kept = Poly.const(pres.n, 1)
        for alpha, mult in sorted(factors.items()):
            if lam.restrict_poly(Poly.linear_form(alpha)):
                kept = kept * Poly.linear_form(alpha) ** mult
        kept_parts.append(kept)
    codims = {p.cohom_degree() for p in kept_parts}
    if len(codims) != 1:
        raise TorstratError(f"inconsistent normal degrees {sorted(codims)} on stratum")
    codim = codims.pop()
    # renormalize the per-block factors so they are the residues of one
    # global element (the normal-bundle class of the stratum)
    eulers = _compatible_eulers(pipeline, fixed_blocks, kept_parts, codim)
    if degree_bound is None:
        degree_bound = 2 * pres.top_degree() + max(
            (max(c.cohom_degree() + pres.degree(i) for i, c in enumerate(el) if c)
             for el in pipeline.minimal.elements), default=0)
    space = TupleSpace(pres.n, len(fixed_blocks))
    gens: List[Tuple[tuple, int]] = []
    for d in range(codim, degree_bound + 1, 2):
        images = _divisible_images(pipeline, fixed_blocks, eulers, d)
        if not images:
            continue
        d_im = d - codim
        rows = [space.vectorize(tup, d_im) for tup in images]
        red, pivots = rref(rows, _ONE)
        sol_basis = red[: len(pivots)]
        old = span_slice(space, gens, d_im)
        if len(sol_basis) == len(old):
            continue
        _, added = extend_basis(old, sol_basis)
        for idx in added:
            gens.append((tuple(space.unvectorize(sol_basis[idx], d_im)), d_im))
    return StratumModule(node_index, lam, fixed_blocks,
                         [list(t) for t, _ in gens], [g for _, g in gens],
                         eulers, degree_bound)


def _compatible_eulers(pipeline: StratumPipeline, fixed_blocks: List[int],
                       kept: List[Poly], codim: int) -> List[Poly]:
    """Scale the per-block weight products to the residues of one global
    element: solve for x of degree `codim` with r_i(x) = a_i * kept_i and
    all a_i nonzero."""
    pres = pipeline.pres
    n = pres.n
    if codim == 0:
        return [Poly.const(n, 1) for _ in fixed_blocks]
    unknowns = []
    for b in range(pres.dim):
        rem = codim - pres.degree(b)
        if rem < 0 or rem % 2:
            continue
        for m in monomials_of_degree(n, rem // 2):
            unknowns.append((b, m))
    mons = list(monomials_of_degree(n, codim // 2))
    index = {e: i for i, e in enumerate(mons)}
    nrows = len(fixed_blocks) * len(mons)
    ncols = len(unknowns) + len(fixed_blocks)
    mat = [[_ZERO] * ncols for _ in range(nrows)]
    for c, (b, m) in enumerate(unknowns):
        mono = Poly.monomial(n, m)
        for pos, blk in enumerate(fixed_blocks):
            contrib = mono * pipeline.restrictions[blk][b]
            base = pos * len(mons)
            for e, coeff in contrib.terms.items():
                mat[base + index[e]][c] = coeff
    for pos in range(len(fixed_blocks)):
        base = pos * len(mons)
        col = len(unknowns) + pos
        for e, coeff in kept[pos].terms.items():
            mat[base + index[e]][col] = -coeff
    sols = nullspace(mat, _ZERO, _ONE)
    scale_rows = [svec[len(unknowns):] for svec in sols]
    chosen = None
    for row in scale_rows:
        if all(row):
            chosen = row
            break
    if chosen is None and scale_rows:
        for c in range(1, 40):
            combo = [sum((Fraction(c) ** j) * row[pos] for j, row in enumerate(scale_rows))
                     for pos in range(len(fixed_blocks))]
            if all(combo):
                chosen = combo
                break
    if chosen is None:
        raise TorstratError("no compatible normalization of the stratum factors")
    return [k.scale(a) for k, a in zip(kept, chosen)]


def _divisible_images(pipeline: StratumPipeline, fixed_blocks: List[int],
                      eulers: List[Poly], d: int) -> List[List[Poly]]:
    """Quotients r_i(x)/euler_i over a basis of the degree-d divisible ideal."""
    pres = pipeline.pres
    n = pres.n
    unknowns = []
    for b in range(pres.dim):
        rem = d - pres.degree(b)
        if rem < 0 or rem % 2:
            continue
        for m in monomials_of_degree(n, rem // 2):
            unknowns.append((b, m))
    if not unknowns:
        return []
    aux = []  # (block position, monomial) for the cofactor unknowns
    for pos, e in enumerate(eulers):
        rem = d - e.cohom_degree()
        if rem < 0 or rem % 2:
            continue
        for m in monomials_of_degree(n, rem // 2):
            aux.append((pos, m))
    mons_d = list(monomials_of_degree(n, d // 2))
    index = {e: i for i, e in enumerate(mons_d)}
    nrows = len(fixed_blocks) * len(mons_d)
    ncols = len(unknowns) + len(aux)
    mat = [[_ZERO] * ncols for _ in range(nrows)]
    for c, (b, m) in enumerate(unknowns):
        mono = Poly.monomial(n, m)
        for pos, blk in enumerate(fixed_blocks):
            contrib = mono * pipeline.restrictions[blk][b]
            base = pos * len(mons_d)
            for e, coeff in contrib.terms.items():
                mat[base + index[e]][c] = coeff
    for c, (pos, m) in enumerate(aux):
        contrib = Poly.monomial(n, m) * eulers[pos]
        base = pos * len(mons_d)
        for e, coeff in contrib.terms.items():
            mat[base + index[e]][len(unknowns) + c] = mat[base + index[e]][len(unknowns) + c] - coeff
    sols = nullspace(mat, _ZERO, _ONE)
    images = []
    for svec in sols:
        x = [Poly.zero(n) for _ in range(pres.dim)]
        for (b, m), cval in zip(unknowns, svec):
            if cval:
                x[b] = x[b] + Poly.monomial(n, m, cval)
        tup = []
        for pos, blk in enumerate(fixed_blocks):
            r = pipeline.restrict_element(blk, x)
            tup.append(divide_exact(r, eulers[pos]) if r else Poly.zero(n))
        images.append(tup)
    return images


def restriction_map(pipeline: StratumPipeline, big: StratumModule,
                    small: StratumModule) -> List[List[Poly]]:
    """Matrix over R of the restriction from the bigger stratum to the
    contained one: project generator tuples and re-express exactly."""
    positions = []
    for blk in small.fixed_blocks:
        if blk not in big.fixed_blocks:
            raise NotContained("target stratum is not contained in the source")
        positions.append(big.fixed_blocks.index(blk))
    n = pipeline.pres.n
    space = TupleSpace(n, len(small.fixed_blocks))
    small_gens = [(tuple(t), d) for t, d in zip(small.generators, small.degrees)]
    matrix = []
    for tup, d in zip(big.generators, big.degrees):
        projected = [tup[pos] for pos in positions]
        coeffs = express_in_generators(space, small_gens, projected, d)
        if coeffs is None:
            raise NotContained("projection does not lie in the target module")
        matrix.append(coeffs)
    return matrix
