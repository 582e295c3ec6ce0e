"""Short-vector enumeration and isometry search for definite lattices.

Everything here is exact: bases are LLL-reduced over Fractions, vectors of a
given norm come from a Fincke-Pohst walk down an exact LDL decomposition, and
automorphism / isometry searches backtrack over images of basis vectors with
partial-Gram pruning.  Results are deterministic (lexicographic order) and
vector lists are closed under negation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import exact
from .glue import divisibility_in_glued
from .lattice import Lattice, divisibility

Vector = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]

_ELEMENT_STORE_LIMIT = 10 ** 6


@dataclass(frozen=True)
class Isometry:
    matrix: IntMatrix
    order: Optional[int]  # None when not meaningful (cross-lattice witness)


def _gram_schmidt(h):
    """Orthogonalization data (B, mu) of a positive definite Fraction gram."""
    n = len(h)
    b = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i):
            s = h[i][j]
            for k in range(j):
                s -= mu[i][k] * mu[j][k] * b[k]
            mu[i][j] = s / b[j]
        s = h[i][i]
        for k in range(i):
            s -= mu[i][k] * mu[i][k] * b[k]
        b[i] = s
    return b, mu


def _lll(gram):
    """LLL-reduce a positive definite integer gram; returns (gram', U).

    U is unimodular with gram' = U * gram * U^T, so the rows of U are the
    reduced basis written in the original coordinates.
    """
    n = len(gram)
    h = [[Fraction(x) for x in row] for row in gram]
    u = exact.identity(n)

    def reduce_row(k, l):
        mu_kl = mu[k][l]
        if 2 * abs(mu_kl) <= 1:
            return
        r = round(mu_kl)
        for j in range(n):
            h[k][j] -= r * h[l][j]
        for i in range(n):
            h[i][k] -= r * h[i][l]
        for j in range(n):
            u[k][j] -= r * u[l][j]
        for j in range(l):
            mu[k][j] -= r * mu[l][j]
        mu[k][l] -= r

    b, mu = _gram_schmidt(h)
    k = 1
    while k < n:
        for l in range(k - 1, -1, -1):
            reduce_row(k, l)
        if b[k] >= (Fraction(3, 4) - mu[k][k - 1] ** 2) * b[k - 1]:
            k += 1
        else:
            h[k - 1], h[k] = h[k], h[k - 1]
            for row in h:
                row[k - 1], row[k] = row[k], row[k - 1]
            u[k - 1], u[k] = u[k], u[k - 1]
            b, mu = _gram_schmidt(h)
            k = max(k - 1, 1)
    gram_red = tuple(tuple(int(x) for x in row) for row in h)
    return gram_red, tuple(tuple(row) for row in u)


def _reduced_basis(gram):
    """LLL plus a dual-side reduction pass, rows reversed.

    Plain LLL leaves the trailing Gram-Schmidt norms tiny on lattices like
    the Leech lattice, which blows up the enumeration tree; reducing the
    dual basis and reversing the row order keeps the outer enumeration
    levels tight.  Returns (gram', U) with gram' = U * gram * U^T.
    """
    g1, u1 = _lll(gram)
    n = len(gram)
    if n <= 1:
        return g1, u1
    inv = exact.rational_inverse([list(r) for r in g1])
    denom = math.lcm(*[x.denominator for row in inv for x in row])
    dual = [[int(x * denom) for x in row] for row in inv]
    _, u2 = _lll(dual)
    w = exact.transpose(exact.rational_inverse([list(r) for r in u2]))
    assert all(x.denominator == 1 for row in w for x in row)
    w = [[int(x) for x in row] for row in w]
    u3 = exact.mat_mul(w, [list(r) for r in u1])[::-1]
    g3 = exact.conjugate_rows(u3, [list(r) for r in gram])
    return (tuple(tuple(int(x) for x in row) for row in g3),
            tuple(tuple(row) for row in u3))


def _ldl(gram):
    """Diagonal weights d and unit-upper coefficients m with
    Q(x) = sum_i d_i (x_i + sum_{j>i} m_ij x_j)^2."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    d = []
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d.append(a[i][i])
        for j in range(i + 1, n):
            m[i][j] = a[i][j] / a[i][i]
        for k in range(i + 1, n):
            for l in range(i + 1, n):
                a[k][l] -= a[i][k] * a[i][l] / a[i][i]
    return d, m


def _sqrt_upper(x: Fraction) -> Fraction:
    """A rational upper bound for sqrt(x), x >= 0."""
    if x < 0:
        return Fraction(-1)
    return Fraction(math.isqrt(x.numerator * x.denominator) + 1, x.denominator)


def _fp_vectors(gram_red, target: int) -> list[Vector]:
    """All x (reduced coordinates, zero excluded) with x gram_red x^T = target."""
    n = len(gram_red)
    d, m = _ldl(gram_red)
    found: list[Vector] = []
    coords = [0] * n

    def walk(i: int, remaining: Fraction):
        if i < 0:
            if remaining == 0 and any(coords):
                found.append(tuple(coords))
            return
        center = sum(m[i][j] * coords[j] for j in range(i + 1, n))
        radius = _sqrt_upper(remaining / d[i])
        lo = math.ceil(-center - radius)
        hi = math.floor(-center + radius)
        for x in range(lo, hi + 1):
            c = d[i] * (x + center) ** 2
            if c > remaining:
                continue
            coords[i] = x
            walk(i - 1, remaining - c)
        coords[i] = 0

    walk(n - 1, Fraction(target))
    return found


def _definite_sign(lat: Lattice) -> int:
    if lat.is_positive_definite:
        return 1
    if lat.is_negative_definite:
        return -1
    raise ValueError("enumeration requires a definite lattice")


def vectors_of_norm(lat: Lattice, n: int) -> list[Vector]:
    """All nonzero v with v.G.v^T = n, sorted, closed under negation."""
    sign = _definite_sign(lat)
    if lat.rank == 0 or n == 0 or (n > 0) != (sign > 0):
        return []
    gram = lat.gram if sign > 0 else tuple(tuple(-x for x in row) for row in lat.gram)
    gram_red, u = _reduced_basis(gram)
    out = []
    for x in _fp_vectors(gram_red, abs(n)):
        out.append(tuple(sum(x[k] * u[k][j] for k in range(lat.rank))
                         for j in range(lat.rank)))
    return sorted(out)


def vectors_up_to_norm(lat: Lattice, n: int) -> list[Vector]:
    """All nonzero v with 0 < |v.G.v^T| <= |n|, sorted."""
    sign = _definite_sign(lat)
    out = []
    step = 2 if lat.is_even else 1
    for k in range(step, abs(n) + 1, step):
        out.extend(vectors_of_norm(lat, sign * k))
    return sorted(out)


def _image_backtrack(target_gram, source_gram, candidates, first_only):
    """Rows q with q * target_gram * q^T = source_gram, images drawn from
    candidates[i] (vectors with the right norm), partial-Gram pruned."""
    n = len(source_gram)
    gram_rows = [list(r) for r in target_gram]
    results = []
    rows: list[Vector] = []

    def walk(i):
        if i == n:
            results.append(tuple(rows))
            return first_only
        for cand in candidates[i]:
            cand_g = exact.mat_vec(list(cand), gram_rows)
            ok = True
            for j in range(i):
                if sum(a * b for a, b in zip(rows[j], cand_g)) != source_gram[i][j]:
                    ok = False
                    break
            if not ok:
                continue
            rows.append(cand)
            if walk(i + 1):
                return True
            rows.pop()
        return False

    walk(0)
    return results


def _int_matrix(rows) -> IntMatrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def _conjugate_back(q_red, u):
    """Map an isometry in reduced coordinates back to the original basis."""
    u_rows = [list(r) for r in u]
    inv = exact.rational_inverse(u_rows)
    prod = exact.mat_mul(exact.mat_mul(inv, [list(r) for r in q_red]), u_rows)
    out = []
    for row in prod:
        assert all(x.denominator == 1 for x in row)
        out.append(tuple(int(x) for x in row))
    return tuple(out)


def all_automorphisms(lat: Lattice) -> list[IntMatrix]:
    """Every isometry of a definite lattice, sorted (element store)."""
    if lat.rank == 0:
        return [()]
    sign = _definite_sign(lat)
    gram = lat.gram if sign > 0 else tuple(tuple(-x for x in row) for row in lat.gram)
    gram_red, u = _reduced_basis(gram)
    by_norm: dict[int, list[Vector]] = {}
    for i in range(lat.rank):
        norm = gram_red[i][i]
        if norm not in by_norm:
            by_norm[norm] = _fp_vectors(gram_red, norm)
    candidates = [by_norm[gram_red[i][i]] for i in range(lat.rank)]
    autos = _image_backtrack(gram_red, gram_red, candidates, first_only=False)
    if len(autos) > _ELEMENT_STORE_LIMIT:
        raise ValueError("automorphism group exceeds the element-store limit")
    return sorted(_conjugate_back(q, u) for q in autos)


def automorphism_group(lat: Lattice) -> tuple[list[Isometry], int]:
    """Generators of O(L) and its order, for definite L.

    The search enumerates every automorphism (complete backtracking over
    images of the reduced basis), so the order is an exact count.  Groups
    larger than the element-store limit are rejected.
    """
    if lat.rank == 0:
        return [], 1
    mapped = all_automorphisms(lat)
    order = len(mapped)
    ident = tuple(tuple(row) for row in exact.identity(lat.rank))
    gens: list[IntMatrix] = []
    closed = {ident}
    for q in mapped:
        if q in closed:
            continue
        gens.append(q)
        closed = exact.matrix_closure(gens, lat.rank, _ELEMENT_STORE_LIMIT)
    return [Isometry(q, exact.multiplicative_order([list(r) for r in q]))
            for q in gens], order


def group_order_from_generators(gens: list[IntMatrix], rank: int) -> int:
    """Order of the group generated by integer matrices (element store)."""
    return len(exact.matrix_closure(gens, rank, _ELEMENT_STORE_LIMIT))


def is_isometric(l1: Lattice, l2: Lattice) -> Optional[Isometry]:
    """An isometry L1 -> L2 as a matrix Q with Q.G2.Q^T = G1, or None."""
    if l1.rank != l2.rank:
        raise ValueError("rank mismatch")
    if l1.rank == 0:
        return Isometry((), 1)
    if l1.det != l2.det or l1.signature != l2.signature:
        return None
    sign = _definite_sign(l1)
    if sign != _definite_sign(l2):
        return None
    g1 = l1.gram if sign > 0 else tuple(tuple(-x for x in row) for row in l1.gram)
    g2 = l2.gram if sign > 0 else tuple(tuple(-x for x in row) for row in l2.gram)
    g1_red, u1 = _reduced_basis(g1)
    g2_red, u2 = _reduced_basis(g2)
    # fingerprint: counts of short vectors must agree
    max_norm = max(max(g1_red[i][i] for i in range(l1.rank)), 2)
    for k in range(1, max_norm + 1):
        if len(_fp_vectors(g1_red, k)) != len(_fp_vectors(g2_red, k)):
            return None
    by_norm: dict[int, list[Vector]] = {}
    for i in range(l1.rank):
        norm = g1_red[i][i]
        if norm not in by_norm:
            by_norm[norm] = _fp_vectors(g2_red, norm)
    candidates = [by_norm[g1_red[i][i]] for i in range(l1.rank)]
    hits = _image_backtrack(g2_red, g1_red, candidates, first_only=True)
    if not hits:
        return None
    # rows of M are images in reduced L2 coordinates: M.G2'.M^T = G1'
    m_rows = [list(r) for r in hits[0]]
    u1_inv = exact.rational_inverse([list(r) for r in u1])
    prod = exact.mat_mul(exact.mat_mul(u1_inv, m_rows), [list(r) for r in u2])
    q = tuple(tuple(int(x) for x in row) for row in prod)
    assert exact.conjugate_rows([list(r) for r in q], [list(r) for r in l2.gram]) \
        == [list(r) for r in l1.gram]
    order = exact.multiplicative_order([list(r) for r in q]) if l1.gram == l2.gram \
        else None
    return Isometry(q, order)


def wall_divisor_scan(m_lat: Lattice, glue_image=None) -> bool:
    """True iff the lattice contains a wall divisor: a vector of square -2,
    or of square -10 with divisibility 2 in the glued ambient lattice."""
    if m_lat.rank and not m_lat.is_negative_definite:
        raise ValueError("wall scan expects a negative definite lattice")
    if vectors_of_norm(m_lat, -2):
        return True
    for v in vectors_of_norm(m_lat, -10):
        if glue_image is None:
            div = divisibility(m_lat, v)
        else:
            div = divisibility_in_glued(m_lat, v, glue_image)
        if div == 2:
            return True
    return False
