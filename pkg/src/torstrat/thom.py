"""Nilpotence, block decomposition, and Thom systems of localized algebras.

The block decomposition (primitive idempotents) is the workhorse: with a
fixed-point embedding available, blocks are read off component supports;
without one they are found by eigen-splitting, i.e. splitting along the
certified polynomial eigenvalues of multiplication operators.  Every
randomized step only ever selects candidates that are then verified by
exact arithmetic, so results are seed-independent.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .algebra import AlgebraPresentation, LocalizedAlgebra, localize, to_localized_coords
from .errors import NonSplit, NotFound
from .exact import (Poly, RatFun, gcd_poly, lcm_poly, monomials_of_degree,
                    rational_roots)
from .gradedmod import TupleSpace
from .lattice import Subtorus
from .linalg import char_poly, fp_divmod, fp_trim, nullspace, rref, solve

_ONE = Fraction(1)
_ZERO = Fraction(0)


class ThomSystem:
    """A verified U-local Thom system of a presentation."""

    def __init__(self, subtorus: Subtorus, elements: List[List[Poly]],
                 block_assignment: List[int], strict: bool):
        self.subtorus = subtorus
        self.elements = elements
        self.block_assignment = block_assignment
        self.strict = strict

    def __len__(self) -> int:
        return len(self.elements)


# ---------- vector helpers over the localized algebra ----------


def clear_vec(alg: LocalizedAlgebra, x: Sequence[RatFun]) -> Tuple[List[Poly], Poly]:
    """Write x = (polys) / den with a single common denominator."""
    den = Poly.const(alg.k, 1)
    for c in x:
        if c:
            den = lcm_poly(den, c.den)
    polys = []
    for c in x:
        if c:
            scale = _exact_quotient(den, c.den)
            polys.append(c.num * scale)
        else:
            polys.append(Poly.zero(alg.k))
    return polys, den


def _exact_quotient(a: Poly, b: Poly) -> Poly:
    from .exact import divide_exact
    return divide_exact(a, b)


def mul_vec_poly(alg: LocalizedAlgebra, x: Sequence[Poly], y: Sequence[Poly]) -> List[Poly]:
    out = [Poly.zero(alg.k) for _ in range(alg.dim)]
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            xy = xi * yj
            for k, c in alg.pair_products(i, j).items():
                out[k] = out[k] + xy * c
    return out


def primitive_vec(x: Sequence[Poly]) -> List[Poly]:
    """Strip the common polynomial factor and rational content of a vector."""
    from .exact import divide_exact
    out = list(x)
    g = Poly.zero(out[0].nvars) if out else Poly.zero(0)
    for c in out:
        g = gcd_poly(g, c)
        if g.is_constant():
            break
    if g and not g.is_constant():
        out = [divide_exact(c, g) if c else c for c in out]
    content = _vector_content(out)
    if content and content != 1:
        out = [c.scale(1 / content) for c in out]
    return out


def _vector_content(x: Sequence[Poly]) -> Fraction:
    num = 0
    den = 1
    for c in x:
        if c:
            cc = c.content()
            num = math.gcd(num, cc.numerator)
            den = den * cc.denominator // math.gcd(den, cc.denominator)
    return Fraction(num, den) if num else Fraction(0)


def ratfun_vec(alg: LocalizedAlgebra, polys: Sequence[Poly],
               den: Optional[Poly] = None) -> List[RatFun]:
    if den is None:
        return [RatFun(p) for p in polys]
    return [RatFun(p, den) for p in polys]


def mult_matrix_poly(alg: LocalizedAlgebra, x: Sequence[Poly]) -> List[List[Poly]]:
    mat = [[Poly.zero(alg.k) for _ in range(alg.dim)] for _ in range(alg.dim)]
    for j in range(alg.dim):
        for i, xi in enumerate(x):
            if not xi:
                continue
            for k, c in alg.pair_products(i, j).items():
                mat[k][j] = mat[k][j] + xi * c
    return mat


def block_scalar(alg: LocalizedAlgebra, e: Sequence[RatFun], x: Sequence[RatFun]) -> RatFun:
    """The unique s with (x - s)*e nilpotent: trace of x*e over trace of e."""
    num = alg.trace_of_mult(alg.mul_vec(x, e))
    den = alg.trace_of_mult(e)
    return num / den


def block_dimension(alg: LocalizedAlgebra, e: Sequence[RatFun]) -> int:
    tr = alg.trace_of_mult(e)
    val = tr.as_poly().constant_value()
    if val.denominator != 1:
        raise NonSplit("idempotent trace is not an integer")
    return int(val)


# ---------- nilpotence and nilradical ----------


def is_nilpotent(alg: LocalizedAlgebra, x: Sequence[RatFun]) -> bool:
    """x^dim = 0 in the localized algebra."""
    px, _ = clear_vec(alg, x)
    if all(not c for c in px):
        return True
    m = 1
    while m < alg.dim:
        px = primitive_vec(mul_vec_poly(alg, px, px))
        m *= 2
        if all(not c for c in px):
            return True
    return all(not c for c in px)


def nilradical(alg: LocalizedAlgebra) -> List[List[RatFun]]:
    """Basis over F of the radical of the trace form (the set of nilpotents)."""
    if "nilradical" in alg._cache:
        return alg._cache["nilradical"]
    gram = []
    for i in range(alg.dim):
        row = []
        for j in range(alg.dim):
            tr = Poly.zero(alg.k)
            for k, c in alg.pair_products(i, j).items():
                if alg.theta[k]:
                    tr = tr + c * alg.theta[k]
            row.append(RatFun(tr))
        gram.append(row)
    basis = nullspace(gram, alg.zero_f(), alg.one_f())
    alg._cache["nilradical"] = basis
    return basis


def _block_members(alg: LocalizedAlgebra, e: Sequence[RatFun]) -> List[List[RatFun]]:
    """F-basis of the ideal e*A (image of multiplication by e)."""
    cols = [alg.mul_vec(e, alg.basis_elem(i)) for i in range(alg.dim)]
    red, pivots = rref([list(c) for c in cols], alg.one_f())
    return red[: len(pivots)]


def _block_semisimple_dim(alg: LocalizedAlgebra, e: Sequence[RatFun]) -> int:
    members = _block_members(alg, e)
    if not members:
        return 0
    gram = []
    for a in members:
        row = []
        for b in members:
            row.append(alg.trace_of_mult(alg.mul_vec(a, b)))
        gram.append(row)
    null = nullspace(gram, alg.zero_f(), alg.one_f())
    return len(members) - len(null)


# ---------- idempotent polishing ----------


def polish_idempotent(alg: LocalizedAlgebra, h: Sequence[RatFun]) -> Optional[List[RatFun]]:
    """Newton iteration e <- 3e^2 - 2e^3; converges when h is idempotent
    modulo nilpotents.  Returns the exact idempotent or None."""
    cap = math.ceil(math.log2(alg.dim)) + 2 if alg.dim > 1 else 1
    cur = list(h)
    for _ in range(cap + 1):
        sq = alg.mul_vec(cur, cur)
        if sq == cur:
            return cur
        three_minus = [RatFun.from_const(alg.k, 3) * a - RatFun.from_const(alg.k, 2) * b
                       for a, b in zip(alg.unit(), cur)]
        # 3e^2 - 2e^3 = e^2 * (3*1 - 2e)
        cur = alg.mul_vec(sq, three_minus)
    sq = alg.mul_vec(cur, cur)
    return cur if sq == cur else None


# ---------- polynomial eigenvalues via certified root lifting ----------


def _series_inverse(q: Poly, order: int) -> Poly:
    """Inverse of a unit power series in Q[v1..vk], truncated past `order`."""
    c0 = q.constant_value()
    if not c0:
        raise ZeroDivisionError("series has no constant term")
    inv = Poly.const(q.nvars, Fraction(1, 1) / c0)
    steps = max(1, math.ceil(math.log2(order + 1)) + 1)
    two = Poly.const(q.nvars, 2)
    for _ in range(steps):
        inv = (inv * (two - q * inv)).truncate(order)
    return inv


def _hensel_root(coeffs: Sequence[Poly], center: Sequence[int], rho: Fraction,
                 order: int) -> Optional[Poly]:
    """Lift a simple rational root at `center` to a polynomial root.

    coeffs are ascending X-coefficients in Q[u1..uk]; returns the root as a
    polynomial in u of total degree <= order, or None on breakdown.
    """
    k = coeffs[0].nvars
    shift = [Poly.const(k, c) + Poly.variable(k, i) for i, c in enumerate(center)]
    shifted = [c.subst(shift, target_nvars=k).truncate(order) for c in coeffs]
    deriv = [Poly.const(k, j) * shifted[j] for j in range(1, len(shifted))]
    x = Poly.const(k, rho)
    steps = max(1, math.ceil(math.log2(order + 1)) + 1)
    for _ in range(steps):
        sx = Poly.zero(k)
        for c in reversed(shifted):
            sx = (sx * x).truncate(order) + c
        dx = Poly.zero(k)
        for c in reversed(deriv):
            dx = (dx * x).truncate(order) + c
        if not dx.constant_value():
            return None
        x = (x - sx * _series_inverse(dx, order)).truncate(order)
    # move back: v = u - center
    unshift = [Poly.variable(k, i) - Poly.const(k, c) for i, c in enumerate(center)]
    return x.subst(unshift, target_nvars=k)


def _embed_main_var(coeffs: Sequence[Poly], k: int) -> Poly:
    """View sum coeffs[j] X^j as one polynomial in Q[u1..uk, X] (X last)."""
    out = {}
    for j, c in enumerate(coeffs):
        for e, v in c.terms.items():
            out[e + (j,)] = v
    return Poly(k + 1, out)


def _extract_main_var(p: Poly, k: int) -> List[Poly]:
    """Inverse of _embed_main_var, as an ascending coefficient list."""
    if not p:
        return []
    deg = max(e[k] for e in p.terms)
    out = [Poly.zero(k) for _ in range(deg + 1)]
    for e, v in p.terms.items():
        out[e[k]] = out[e[k]] + Poly.monomial(k, e[:k], v)
    return out


def distinct_poly_eigenvalues(alg: LocalizedAlgebra, cp: Sequence[Poly],
                              degree: int, rng: random.Random) -> Optional[List[Poly]]:
    """All distinct roots of a monic char poly over Q[u], certified exactly.

    `degree` is the common homogeneity degree the roots must have.  Returns
    None when the roots can not all be certified as polynomials.  The
    squarefree part is computed polynomially in Q[u, X] to avoid coefficient
    blowup over the fraction field.
    """
    k = alg.k
    embedded = _embed_main_var(list(cp), k)
    if not embedded:
        return None
    deriv = embedded.derivative(k)
    if deriv:
        g = gcd_poly(embedded, deriv)
        sf = _exact_quotient(embedded, g)
    else:
        sf = embedded
    cleared = _extract_main_var(sf, k)
    # normalize the main-variable content away
    strip = gcd_poly(cleared[0] if cleared else Poly.zero(k), Poly.zero(k))
    for c in cleared:
        strip = gcd_poly(strip, c)
        if strip.is_constant():
            break
    if strip and not strip.is_constant():
        cleared = [_exact_quotient(c, strip) if c else c for c in cleared]
    want = len(cleared) - 1
    if want == 0:
        return []
    if k == 0:
        vals = [c.constant_value() for c in cleared]
        roots = rational_roots(vals)
        if len(roots) < want:
            return None
        return [Poly.const(0, r) for r in roots]
    for _ in range(12):
        center = [rng.randint(-9, 9) for _ in range(k)]
        uni = [c.evaluate(center) for c in cleared]
        if not uni[-1]:
            continue
        duni = [Fraction(j) * uni[j] for j in range(1, len(uni))]
        if _uni_gcd_degree(uni, duni) > 0:
            continue  # specialization not squarefree
        roots = rational_roots(uni)
        if len(roots) < want:
            return None
        out = []
        ok = True
        for rho in roots:
            lam = _hensel_root(cleared, center, rho, degree)
            if lam is None or not _is_poly_root(cleared, lam):
                ok = False
                break
            out.append(lam)
        if ok:
            return out
        return None
    return None


def _uni_gcd_degree(p: List[Fraction], q: List[Fraction]) -> int:
    a = [Fraction(x) for x in p]
    b = [Fraction(x) for x in q]
    fp_trim(a)
    fp_trim(b)
    while b:
        _, r = fp_divmod(a, b, _ZERO)
        a, b = b, r
    return len(a) - 1 if a else -1


def _is_poly_root(coeffs: Sequence[Poly], lam: Poly) -> bool:
    k = lam.nvars
    acc = Poly.zero(k)
    for c in reversed(coeffs):
        acc = acc * lam + c
    return not acc


# ---------- block decomposition ----------


def split_components(alg: LocalizedAlgebra, seed: int = 0) -> List[List[RatFun]]:
    """Pairwise orthogonal primitive idempotents summing to 1.

    Reads blocks from fixed-point component supports when the source
    presentation carries an embedding; otherwise eigen-splits along basis
    elements.  Raises NonSplit when primitivity can not be certified.
    """
    if "blocks" in alg._cache:
        return alg._cache["blocks"]
    blocks = None
    if alg.embedding_local is not None:
        blocks = _split_via_embedding(alg)
    if blocks is None:
        blocks = _split_by_eigenvalues(alg, seed)
    _certify_blocks(alg, blocks)
    blocks.sort(key=lambda e: tuple(str(c) for c in e))
    alg._cache["blocks"] = blocks
    return blocks


def _certify_blocks(alg: LocalizedAlgebra, blocks: List[List[RatFun]]) -> None:
    total = alg.zero_vec()
    for e in blocks:
        if alg.is_zero_vec(e):
            raise NonSplit("zero idempotent in block decomposition")
        if alg.mul_vec(e, e) != e:
            raise NonSplit("block candidate is not idempotent")
        total = alg.add_vec(total, e)
    if total != alg.unit():
        raise NonSplit("block idempotents do not sum to 1")
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            if not alg.is_zero_vec(alg.mul_vec(blocks[i], blocks[j])):
                raise NonSplit("block idempotents are not orthogonal")
    for e in blocks:
        if _block_semisimple_dim(alg, e) != 1:
            raise NonSplit("a block could not be split to a primitive idempotent")


def _split_via_embedding(alg: LocalizedAlgebra) -> Optional[List[List[RatFun]]]:
    emb = [[RatFun(c) for c in tup] for tup in alg.embedding_local]
    l = len(emb[0])
    one = alg.one_f()
    # row span of the embedded algebra inside F^l
    rows = [[tup[a] for a in range(l)] for tup in emb]
    red, pivots = rref(rows, one)
    basis = red[: len(pivots)]

    def realizable(subset: frozenset) -> bool:
        indicator = [one if a in subset else alg.zero_f() for a in range(l)]
        return _in_rref_span(basis, pivots, indicator)

    parts = [frozenset(range(l))]
    for size in range(1, l):
        for subset in _subsets_of_size(l, size):
            if all(part <= subset or not (part & subset) for part in parts):
                continue  # cannot refine anything
            if realizable(subset):
                new_parts = []
                for part in parts:
                    inter = part & subset
                    diff = part - subset
                    if inter and diff:
                        new_parts.extend([inter, diff])
                    else:
                        new_parts.append(part)
                parts = new_parts
        if all(len(p) == 1 for p in parts):
            break
    # lift indicators of the atoms through the embedding and polish
    blocks = []
    emb_matrix = [[emb[i][a] for i in range(alg.dim)] for a in range(l)]
    for part in parts:
        indicator = [one if a in part else alg.zero_f() for a in range(l)]
        x = solve(emb_matrix, indicator, alg.zero_f(), one)
        if x is None:
            return None
        e = polish_idempotent(alg, x)
        if e is None:
            return None
        blocks.append(e)
    return blocks


def _subsets_of_size(l: int, size: int):
    import itertools
    for comb in itertools.combinations(range(l), size):
        yield frozenset(comb)


def _in_rref_span(basis: List[List[RatFun]], pivots: List[int], vec: List[RatFun]) -> bool:
    v = list(vec)
    for row, p in zip(basis, pivots):
        if v[p]:
            c = v[p]
            v = [a - c * b for a, b in zip(v, row)]
    return all(not a for a in v)


def _split_by_eigenvalues(alg: LocalizedAlgebra, seed: int) -> List[List[RatFun]]:
    rng = random.Random(seed)
    blocks = [alg.unit()]
    settled: List[List[RatFun]] = []
    while blocks:
        e = blocks.pop()
        dim_e = block_dimension(alg, e)
        if dim_e == 1 or _block_semisimple_dim(alg, e) == 1:
            settled.append(e)
            continue
        pieces = None
        order = sorted(range(1, alg.dim), key=alg.pres.degree)
        for b_idx in order:
            pieces = _try_split(alg, e, b_idx, rng)
            if pieces:
                break
        if not pieces:
            raise NonSplit("no basis element certifiably splits a block")
        blocks.extend(pieces)
    return settled


def _try_split(alg: LocalizedAlgebra, e: Sequence[RatFun], b_idx: int,
               rng: random.Random) -> Optional[List[List[RatFun]]]:
    y = alg.mul_vec(alg.basis_elem(b_idx), e)
    if alg.is_zero_vec(y):
        return None
    # quick rejection: if y is scalar on the block, no split from this element
    s = block_scalar(alg, e, alg.basis_elem(b_idx))
    shifted = alg.sub_vec(y, alg.scale_vec(e, s))
    if is_nilpotent(alg, shifted):
        return None
    py, fden = clear_vec(alg, y)
    cp = char_poly(mult_matrix_poly(alg, py))
    deg = (alg.pres.degree(b_idx) + fden.cohom_degree()) // 2
    lams = distinct_poly_eigenvalues(alg, cp, deg, rng)
    if lams is None:
        return None
    nonzero = [l for l in lams if l]
    if not nonzero or (len(lams) < 2):
        return None
    pieces = []
    for lam in nonzero:
        q = list(e)
        for other in lams:
            if other == lam:
                continue
            factor = alg.sub_vec(ratfun_vec(alg, py),
                                 alg.scale_vec(alg.unit(), RatFun(other)))
            denom = RatFun(lam - other)
            q = alg.mul_vec(q, alg.scale_vec(factor, alg.one_f() / denom))
        p = polish_idempotent(alg, q)
        if p is None:
            return None
        if not alg.is_zero_vec(p):
            pieces.append(p)
    rest = list(e)
    for p in pieces:
        rest = alg.sub_vec(rest, p)
    if not alg.is_zero_vec(rest):
        if alg.mul_vec(rest, rest) != rest:
            return None
        pieces.append(rest)
    if len(pieces) < 2:
        return None
    return pieces


# ---------- Thom systems ----------


def construct_thom_system(pres: AlgebraPresentation, subtorus: Subtorus,
                          seed: int = 0, alg: Optional[LocalizedAlgebra] = None) -> ThomSystem:
    """Lift denominator-cleared block idempotents to a strict U-local system."""
    if alg is None:
        alg = localize(pres, subtorus)
    blocks = split_components(alg, seed=seed)
    elements = []
    for e in blocks:
        polys, den = clear_vec(alg, e)
        lifted = [subtorus.lift_poly(p) for p in polys]
        elements.append(lifted)
    return ThomSystem(subtorus, elements, list(range(len(blocks))), strict=True)


def verify_thom_system(pres: AlgebraPresentation, subtorus: Subtorus,
                       taus: Sequence[Sequence[Poly]], seed: int = 0,
                       alg: Optional[LocalizedAlgebra] = None):
    """Check the Thom system conditions; returns (ok, assignment, diagnostics)."""
    if alg is None:
        alg = localize(pres, subtorus)
    blocks = split_components(alg, seed=seed)
    diagnostics: List[str] = []
    coords = [to_localized_coords(pres, subtorus, tau) for tau in taus]
    for idx, x in enumerate(coords):
        if is_nilpotent(alg, x):
            diagnostics.append(f"element {idx} is nilpotent")
    for i in range(len(coords)):
        for j in range(i + 1, len(coords)):
            if not is_nilpotent(alg, alg.mul_vec(coords[i], coords[j])):
                diagnostics.append(f"product of elements {i} and {j} is not nilpotent")
    if len(taus) != len(blocks):
        diagnostics.append(
            f"system has {len(taus)} elements but the algebra has {len(blocks)} blocks")
    if diagnostics:
        return False, None, diagnostics
    assignment = []
    for idx, x in enumerate(coords):
        hits = [b for b, e in enumerate(blocks) if block_scalar(alg, e, x)]
        if len(hits) != 1:
            diagnostics.append(f"element {idx} is supported on blocks {hits}")
            return False, None, diagnostics
        assignment.append(hits[0])
    if sorted(assignment) != list(range(len(blocks))):
        diagnostics.append(f"assignment {assignment} is not a bijection onto blocks")
        return False, None, diagnostics
    return True, assignment, []


def verify_strict(pres: AlgebraPresentation, subtorus: Subtorus,
                  taus: Sequence[Sequence[Poly]], seed: int = 0,
                  alg: Optional[LocalizedAlgebra] = None) -> bool:
    """A verified system is strict when pairwise products vanish exactly."""
    if alg is None:
        alg = localize(pres, subtorus)
    ok, _, _ = verify_thom_system(pres, subtorus, taus, seed=seed, alg=alg)
    if not ok:
        return False
    coords = [to_localized_coords(pres, subtorus, tau) for tau in taus]
    for i in range(len(coords)):
        for j in range(i + 1, len(coords)):
            if not alg.is_zero_vec(alg.mul_vec(coords[i], coords[j])):
                return False
    return True


def minimal_strict_thom_system(pres: AlgebraPresentation, seed: int = 0,
                               degree_budget: Optional[int] = None,
                               alg: Optional[LocalizedAlgebra] = None) -> ThomSystem:
    """Minimal-degree strict Thom system at U = T (equivariant Thom classes).

    For each block the search ascends through degrees, looking for elements
    that vanish on every other block and have nonzero scalar part on their
    own; uniqueness up to scalar modulo the lower-degree-forced kernel is
    verified.  Raises NotFound when the degree budget is exhausted.
    """
    torus = Subtorus.full(pres.n)
    if alg is None:
        alg = localize(pres, torus)
    blocks = split_components(alg, seed=seed)
    if degree_budget is None:
        degree_budget = 2 * (pres.n + pres.top_degree())
    cleared_blocks = [clear_vec(alg, e) for e in blocks]
    elements: List[List[Poly]] = []
    degrees: List[int] = []
    for i, e_i in enumerate(blocks):
        found = None
        lower: List[Tuple[List[List[Poly]], int]] = []  # (solution basis, degree)
        for d in range(0, degree_budget + 1, 2):
            sol = _annihilator_slice(pres, alg, cleared_blocks, i, d)
            if not sol:
                continue
            # scalar-part functional on the solution space
            scal = []
            for vec in sol:
                coords = to_localized_coords(pres, torus, vec)
                scal.append(block_scalar(alg, e_i, coords))
            if all(not s for s in scal):
                lower.append((sol, d))
                continue
            ldf_dim = _lower_forced_dim(pres, lower, d)
            if len(sol) != ldf_dim + 1:
                raise NotFound(
                    f"block {i}: solution space in degree {d} is not 1-dimensional "
                    f"modulo the lower-degree-forced kernel ({len(sol)} vs {ldf_dim}+1)")
            pick = next(vec for vec, s in zip(sol, scal) if s)
            found = (_primitive_element(pick), d)
            break
        if found is None:
            raise NotFound(f"no minimal Thom element for block {i} within degree "
                           f"{degree_budget}")
        elements.append(found[0])
        degrees.append(found[1])
    system = ThomSystem(torus, elements, list(range(len(blocks))), strict=True)
    if not verify_strict(pres, torus, elements, seed=seed, alg=alg):
        raise NotFound("minimal candidates failed strict verification")
    return system


def _annihilator_slice(pres: AlgebraPresentation, alg: LocalizedAlgebra,
                       cleared_blocks, block_index: int, d: int) -> List[List[Poly]]:
    """Basis of {x of degree d : x * e_j = 0 for all j != block_index},
    as coefficient vectors of polynomials over the presentation basis."""
    n = pres.n
    unknowns = []  # (basis index, monomial)
    for b in range(pres.dim):
        rem = d - pres.degree(b)
        if rem < 0 or rem % 2:
            continue
        for m in monomials_of_degree(n, rem // 2):
            unknowns.append((b, m))
    if not unknowns:
        return []
    space = TupleSpace(n, pres.dim)
    rows_by_block = []
    for j, (pe, _) in enumerate(cleared_blocks):
        if j == block_index:
            continue
        gdeg = max((p.cohom_degree() + pres.degree(idx)
                    for idx, p in enumerate(pe) if p), default=0)
        cols = []
        for b, m in unknowns:
            x = [Poly.zero(n) for _ in range(pres.dim)]
            x[b] = Poly.monomial(n, m)
            prod = mul_vec_poly(alg, x, pe)
            # coordinate k is homogeneous of degree d + gdeg - deg(b_k)
            vec = []
            for k, p in enumerate(prod):
                dd = d + gdeg - pres.degree(k)
                mons = space.monomials(dd // 2) if dd >= 0 and dd % 2 == 0 else []
                idx = {e: t for t, e in enumerate(mons)}
                row = [_ZERO] * len(mons)
                for e_, c in p.terms.items():
                    if e_ not in idx:
                        raise NonSplit("block idempotent coordinates are not homogeneous")
                    row[idx[e_]] = c
                vec.extend(row)
            cols.append(vec)
        nrows = len(cols[0])
        rows_by_block.extend([[cols[c][r] for c in range(len(cols))] for r in range(nrows)])
    if not rows_by_block:
        sols = [[_ONE if i == j else _ZERO for j in range(len(unknowns))]
                for i in range(len(unknowns))]
    else:
        sols = nullspace(rows_by_block, _ZERO, _ONE)
    out = []
    for svec in sols:
        x = [Poly.zero(n) for _ in range(pres.dim)]
        for (b, m), c in zip(unknowns, svec):
            if c:
                x[b] = x[b] + Poly.monomial(n, m, c)
        out.append(x)
    return out


def _lower_forced_dim(pres: AlgebraPresentation, lower, d: int) -> int:
    """Q-dimension of span{monomial * y : y a lower-degree solution} in degree d."""
    n = pres.n
    vectors = []
    for sol, d0 in lower:
        rem = d - d0
        if rem < 0 or rem % 2:
            continue
        for y in sol:
            for m in monomials_of_degree(n, rem // 2):
                mono = Poly.monomial(n, m)
                vectors.append([mono * c for c in y])
    if not vectors:
        return 0
    # vectorize coefficient vectors per (basis element, monomial)
    keys = []
    seen = set()
    for vec in vectors:
        for b, p in enumerate(vec):
            for e in p.terms:
                if (b, e) not in seen:
                    seen.add((b, e))
                    keys.append((b, e))
    index = {key: i for i, key in enumerate(keys)}
    rows = []
    for vec in vectors:
        row = [_ZERO] * len(keys)
        for b, p in enumerate(vec):
            for e, c in p.terms.items():
                row[index[(b, e)]] = c
        rows.append(row)
    _, pivots = rref(rows, _ONE)
    return len(pivots)


def _primitive_element(x: List[Poly]) -> List[Poly]:
    """Scale a coefficient vector to integer-primitive form, positive lead."""
    content = _vector_content(x)
    if not content:
        return x
    scaled = [c.scale(1 / content) for c in x]
    for c in scaled:
        if c:
            _, lead = c.leading()
            if lead < 0:
                scaled = [-p for p in scaled]
            break
    return scaled
