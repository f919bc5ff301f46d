"""Exact linear algebra over fields given by Python arithmetic protocols.

Matrices are lists of lists whose entries support +, -, *, /, unary -,
and truthiness as a zero test (fractions.Fraction and exact.RatFun both
qualify).  Everything is plain Gaussian elimination; sizes in this
engine are small, exactness is what matters.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Optional

from .exact import Poly, divide_exact


def rref(rows: List[List], one) -> tuple:
    """Reduced row echelon form (in place on a copy); returns (rows, pivots)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = one / m[r][c]
        m[r] = [inv * x for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: List[List], one) -> int:
    return len(rref(rows, one)[1])


def nullspace(rows: List[List], zero, one) -> List[List]:
    """Basis of the right kernel {x : M x = 0}."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows, one)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][fc]
        basis.append(vec)
    return basis


def solve(rows: List[List], rhs: List, zero, one) -> Optional[List]:
    """One solution of M x = rhs, or None if inconsistent."""
    if not rows:
        return None if any(rhs) else []
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, one)
    for r in range(len(red)):
        if all(not x for x in red[r][:ncols]) and red[r][ncols]:
            return None
    x = [zero] * ncols
    for r, pc in enumerate(pivots):
        if pc < ncols:
            x[pc] = red[r][ncols]
        elif red[r][ncols]:
            return None
    return x


def in_span(rows: List[List], vec: List, one) -> bool:
    """Is vec in the row span of rows?"""
    if all(not x for x in vec):
        return True
    if not rows:
        return False
    base = rank(rows, one)
    return rank(rows + [vec], one) == base


def mat_mul(a: List[List], b: List[List], zero) -> List[List]:
    out = []
    for row in a:
        new = []
        for j in range(len(b[0])):
            s = zero
            for k, x in enumerate(row):
                if x:
                    s = s + x * b[k][j]
            new.append(s)
        out.append(new)
    return out


def mat_vec(a: List[List], v: List, zero) -> List:
    out = []
    for row in a:
        s = zero
        for x, y in zip(row, v):
            if x and y:
                s = s + x * y
        out.append(s)
    return out


def det_bareiss(rows: List[List[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials, fraction-free."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    nv = rows[0][0].nvars
    m = [list(r) for r in rows]
    sign = 1
    prev = Poly.const(nv, 1)
    for k in range(n - 1):
        if not m[k][k]:
            swap = None
            for i in range(k + 1, n):
                if m[i][k]:
                    swap = i
                    break
            if swap is None:
                return Poly.zero(nv)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = divide_exact(num, prev)
            m[i][k] = Poly.zero(nv)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


def poly_adjugate(rows: List[List[Poly]]) -> List[List[Poly]]:
    """Adjugate of a square polynomial matrix via cofactor minors."""
    n = len(rows)
    nv = rows[0][0].nvars
    if n == 1:
        return [[Poly.const(nv, 1)]]
    adj = [[Poly.zero(nv) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[rows[r][c] for c in range(n) if c != j]
                     for r in range(n) if r != i]
            d = det_bareiss(minor)
            adj[j][i] = d if (i + j) % 2 == 0 else -d
    return adj


def char_poly(mat: List[List[Poly]]) -> List[Poly]:
    """Characteristic polynomial of a polynomial matrix via Faddeev-LeVerrier.

    Returns coefficients [c_n, ..., c_1, c_0] of X^n + c_{n-1}... in
    ascending X-power order: result[j] is the coefficient of X^j, with
    result[n] = 1.
    """
    n = len(mat)
    nv = mat[0][0].nvars
    one = Poly.const(nv, 1)
    zero = Poly.zero(nv)
    coeffs = [zero] * (n + 1)
    coeffs[n] = one
    m = [[mat[i][j] for j in range(n)] for i in range(n)]
    n_mat = [[one if i == j else zero for j in range(n)] for i in range(n)]
    mk = None
    for k in range(1, n + 1):
        if k == 1:
            mk = [row[:] for row in m]
        else:
            # M_k = M (M_{k-1} + c_{n-k+1} I)
            tmp = [row[:] for row in mk]
            for i in range(n):
                tmp[i][i] = tmp[i][i] + coeffs[n - k + 1]
            mk = mat_mul(m, tmp, zero)
        tr = zero
        for i in range(n):
            tr = tr + mk[i][i]
        coeffs[n - k] = tr.scale(Fraction(-1, k))
    return coeffs


# ---------- univariate polynomials over a field ----------
# Represented as coefficient lists in ascending power order, trimmed.


def fp_trim(p: List) -> List:
    while p and not p[-1]:
        p.pop()
    return p


def fp_deg(p: List) -> int:
    return len(p) - 1


def fp_add(p: List, q: List, zero) -> List:
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else zero
        b = q[i] if i < len(q) else zero
        out.append(a + b)
    return fp_trim(out)


def fp_neg(p: List) -> List:
    return [-a for a in p]


def fp_mul(p: List, q: List, zero) -> List:
    if not p or not q:
        return []
    out = [zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return fp_trim(out)


def fp_divmod(p: List, q: List, zero) -> tuple:
    if not q:
        raise ZeroDivisionError("univariate division by zero")
    r = list(p)
    quot = [zero] * max(0, len(p) - len(q) + 1)
    dq = len(q) - 1
    lead = q[-1]
    while len(r) - 1 >= dq and r:
        fp_trim(r)
        if not r or len(r) - 1 < dq:
            break
        c = r[-1] / lead
        k = len(r) - 1 - dq
        quot[k] = quot[k] + c
        for i, b in enumerate(q):
            r[k + i] = r[k + i] - c * b
        fp_trim(r)
    return fp_trim(quot), fp_trim(r)


def fp_gcd_monic(p: List, q: List, zero, one) -> List:
    a, b = fp_trim(list(p)), fp_trim(list(q))
    while b:
        _, r = fp_divmod(a, b, zero)
        a, b = b, r
    if not a:
        return []
    inv = one / a[-1]
    return [inv * c for c in a]


def fp_derivative(p: List, make_scalar: Callable[[int], object]) -> List:
    out = []
    for i in range(1, len(p)):
        out.append(make_scalar(i) * p[i])
    return fp_trim(out)


def fp_eval(p: List, x, zero):
    acc = zero
    for c in reversed(p):
        acc = acc * x + c
    return acc
