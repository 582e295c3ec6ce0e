"""Exact integer and rational matrix arithmetic.

Everything downstream (discriminant groups, gluing, enumeration) sits on the
routines here, so no floating point is allowed anywhere in this module.
Matrices are plain nested lists (or tuples) of Python ints; rationals are
``fractions.Fraction``.  Vectors are rows: a map acts as ``v @ Q``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def dims(a: Matrix) -> tuple[int, int]:
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise ValueError("ragged matrix")
    return m, n


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def copy_matrix(a: Matrix) -> list[list[int]]:
    return [list(row) for row in a]


def transpose(a: Matrix) -> list[list[int]]:
    m, n = dims(a)
    return [[a[i][j] for i in range(m)] for j in range(n)]


def mat_mul(a, b):
    """Matrix product; entries may be ints or Fractions."""
    m, k = dims(a)
    k2, n = dims(b)
    if k != k2:
        raise ValueError(f"shape mismatch {m}x{k} @ {k2}x{n}")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(v, a):
    """Row vector times matrix."""
    return [sum(x * y for x, y in zip(v, col)) for col in transpose(a)]


def conjugate_rows(rows, gram):
    """Gram matrix of the sublattice spanned by ``rows``: rows * gram * rowsᵀ."""
    return mat_mul(mat_mul(rows, gram), transpose(rows))


def is_symmetric(a: Matrix) -> bool:
    m, n = dims(a)
    return m == n and all(a[i][j] == a[j][i] for i in range(m) for j in range(i))


def _swap_rows(mats, i, j):
    for m in mats:
        m[i], m[j] = m[j], m[i]


def _swap_cols(mats, i, j):
    for m in mats:
        for row in m:
            row[i], row[j] = row[j], row[i]


def smith_normal_form(a: Matrix) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (S, U, V) with U*a*V = S diagonal, d_1 | d_2 | ..., U, V unimodular.

    Minimum-absolute-entry pivoting keeps intermediate growth tolerable on the
    rank-20 inputs this library feeds it.
    """
    m, n = dims(a)
    s = copy_matrix(a)
    u = identity(m)
    v = identity(n)
    t = 0
    while t < min(m, n):
        piv = None
        best = 0
        for i in range(t, m):
            for j in range(t, n):
                e = abs(s[i][j])
                if e and (piv is None or e < best):
                    piv, best = (i, j), e
        if piv is None:
            break
        _swap_rows([s, u], t, piv[0])
        _swap_cols([s, v], t, piv[1])
        dirty = False
        for i in range(t + 1, m):
            if s[i][t]:
                q = s[i][t] // s[t][t]
                if q:
                    s[i] = [x - q * y for x, y in zip(s[i], s[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if s[i][t]:
                    dirty = True  # remainder beats the pivot; re-pivot
        if dirty:
            continue
        for j in range(t + 1, n):
            if s[t][j]:
                q = s[t][j] // s[t][t]
                if q:
                    for row in s:
                        row[j] -= q * row[t]
                    for vrow in v:
                        vrow[j] -= q * vrow[t]
                if s[t][j]:
                    dirty = True
        if dirty:
            continue
        # pivot must divide every remaining entry before we advance
        stuck = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if s[i][j] % s[t][t]:
                    stuck = i
                    break
            if stuck is not None:
                break
        if stuck is not None:
            s[t] = [x + y for x, y in zip(s[t], s[stuck])]
            u[t] = [x + y for x, y in zip(u[t], u[stuck])]
            continue
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return s, u, v


def bareiss_det(a: Matrix) -> int:
    """Fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    if len(a[0]) != n:
        raise ValueError("determinant of a non-square matrix")
    m = copy_matrix(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def signature(g: Matrix) -> tuple[int, int]:
    """Sign counts (pos, neg) of a nondegenerate symmetric matrix.

    Exact rational congruence diagonalization; degenerate input is rejected.
    """
    if not is_symmetric(g):
        raise ValueError("signature of a non-symmetric matrix")
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    pos = neg = 0
    for k in range(n):
        if a[k][k] == 0:
            l = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if l is None:
                raise ValueError("degenerate form")
            c = 1 if a[l][l] + 2 * a[l][k] != 0 else 2
            for j in range(n):
                a[k][j] += c * a[l][j]
            for i in range(n):
                a[i][k] += c * a[i][l]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(n):
                    a[i][j] -= f * a[k][j]
                for j in range(n):
                    a[j][i] -= f * a[j][k]
        if a[k][k] > 0:
            pos += 1
        else:
            neg += 1
    return pos, neg


def integer_kernel(a: Matrix) -> list[list[int]]:
    """Basis rows of {v integral : v*a = 0}; saturated by construction."""
    m, n = dims(a)
    s, u, _ = smith_normal_form(a)
    out = []
    for i in range(m):
        if i >= min(m, n) or s[i][i] == 0:
            out.append(list(u[i]))
    return out


def hermite_row_basis(a: Matrix) -> list[list[int]]:
    """Row-style Hermite normal form basis of the row space (zero rows dropped)."""
    work = copy_matrix(a)
    m, n = dims(a)
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(r + 1, m):
            while work[i][col]:
                q = work[r][col] // work[i][col]
                work[r] = [x - q * y for x, y in zip(work[r], work[i])]
                work[r], work[i] = work[i], work[r]
        if work[r][col] < 0:
            work[r] = [-x for x in work[r]]
        for i in range(r):
            q = work[i][col] // work[r][col]
            if q:
                work[i] = [x - q * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == m:
            break
    return work[:r]


def rational_inverse(a) -> list[list[Fraction]]:
    n = len(a)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(a)]
    for col in range(n):
        piv = next((i for i in range(col, n) if work[i][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for i in range(n):
            if i != col and work[i][col]:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[col])]
    return [row[n:] for row in work]


def char_poly(a: Matrix) -> list[int]:
    """Coefficients [1, c1, ..., cn] of det(xI - a), by Faddeev-LeVerrier."""
    n = len(a)
    coeffs = [1]
    m = None
    for k in range(1, n + 1):
        if k == 1:
            m = copy_matrix(a)
        else:
            shifted = [[m[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)]
                       for i in range(n)]
            m = mat_mul(a, shifted)
        tr = sum(m[i][i] for i in range(n))
        c, rem = divmod(-tr, k)
        if rem:
            raise ArithmeticError("trace not divisible in Faddeev-LeVerrier step")
        coeffs.append(c)
    return coeffs


def multiplicative_order(q: Matrix, bound: int = 10_000) -> int:
    """Smallest k > 0 with q^k = identity."""
    n = len(q)
    ident = identity(n)
    p = copy_matrix(q)
    for k in range(1, bound + 1):
        if p == ident:
            return k
        p = mat_mul(p, q)
    raise ValueError(f"order exceeds {bound}")


def matrix_closure(gens, n: int, limit: int = 10 ** 6) -> set:
    """All products of the given integer matrices (as tuple-of-tuple rows).

    The generators must generate a finite group; raises once the element
    store exceeds the limit.
    """
    ident = tuple(tuple(row) for row in identity(n))
    seen = {ident}
    frontier = [ident]
    gl = [[list(row) for row in g] for g in gens]
    while frontier:
        nxt = []
        for f in frontier:
            fl = [list(row) for row in f]
            for g in gl:
                h = tuple(tuple(row) for row in mat_mul(fl, g))
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
        if len(seen) > limit:
            raise ValueError("group closure exceeds the element-store limit")
    return seen
