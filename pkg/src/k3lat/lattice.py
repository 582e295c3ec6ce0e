"""Integral lattices presented by Gram matrices.

A lattice is Z^n with a nondegenerate symmetric pairing; vectors are integer
row tuples in the basis, and an isometry Q acts on rows, v -> v*Q, so the
defining invariant is Q*G*Qᵀ = G.  Dual vectors live in Q^n as rational rows
in the same basis.  The discriminant group D_L = L^dual / L is produced as an
Fqm together with the lift/projection data the gluing code needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, cached_property
from typing import Iterable, Sequence

from . import exact
from .fqm import Fqm, FqmHom

Vec = tuple[int, ...]


@dataclass(frozen=True)
class Lattice:
    gram: tuple[tuple[int, ...], ...]

    def __init__(self, gram):
        rows = tuple(tuple(int(x) for x in row) for row in gram)
        object.__setattr__(self, "gram", rows)
        if not exact.is_symmetric(rows):
            raise ValueError("gram matrix must be symmetric")
        if self.rank and exact.bareiss_det([list(r) for r in rows]) == 0:
            raise ValueError("gram matrix must be nondegenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return exact.bareiss_det([list(r) for r in self.gram])

    @cached_property
    def signature(self) -> tuple[int, int]:
        if self.rank == 0:
            return (0, 0)
        return exact.signature([list(r) for r in self.gram])

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_positive_definite(self) -> bool:
        return self.signature == (self.rank, 0) and self.rank > 0

    @property
    def is_negative_definite(self) -> bool:
        return self.signature == (0, self.rank) and self.rank > 0

    @property
    def is_definite(self) -> bool:
        return self.is_positive_definite or self.is_negative_definite

    def pair(self, v: Sequence, w: Sequence):
        return sum(v[i] * self.gram[i][j] * w[j]
                   for i in range(self.rank) for j in range(self.rank))

    def norm(self, v: Sequence):
        return self.pair(v, v)

    def is_isometry(self, q: Sequence[Sequence[int]]) -> bool:
        g = [list(r) for r in self.gram]
        return exact.conjugate_rows(q, g) == g


def divisibility(lat: Lattice, v: Sequence[int]) -> int:
    """Positive generator of the pairing ideal v . L."""
    if not any(v):
        raise ValueError("divisibility of the zero vector")
    return math.gcd(*exact.mat_vec(list(v), [list(r) for r in lat.gram]))


@dataclass(frozen=True)
class Sublattice:
    """Saturated sublattice given by basis rows in ambient coordinates."""

    ambient: Lattice
    rows: tuple[Vec, ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    @cached_property
    def gram_matrix(self) -> tuple[tuple[int, ...], ...]:
        g = exact.conjugate_rows([list(r) for r in self.rows],
                                 [list(r) for r in self.ambient.gram])
        return tuple(tuple(row) for row in g)

    def as_lattice(self) -> Lattice:
        return Lattice(self.gram_matrix)


def saturate(rows: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Basis of the smallest primitive subgroup of Z^n containing the rows."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    s, _, v = exact.smith_normal_form(rows)
    r = sum(1 for i in range(min(len(rows), n)) if s[i][i] != 0)
    vinv = exact.rational_inverse(v)
    out = []
    for i in range(r):
        row = [x if isinstance(x, int) else x.numerator for x in vinv[i]]
        assert all(Fraction(x) == y for x, y in zip(row, vinv[i]))
        out.append(row)
    return out


def sublattice(ambient: Lattice, rows: Iterable[Sequence[int]]) -> Sublattice:
    sat = saturate(list(rows), ambient.rank)
    return Sublattice(ambient, tuple(tuple(r) for r in sat))


def orthogonal_complement(ambient: Lattice, rows: Iterable[Sequence[int]]) -> Sublattice:
    """Primitive basis of {v in L : v . span(rows) = 0}."""
    rows = [list(r) for r in rows]
    if not rows:
        return Sublattice(ambient, tuple(tuple(r) for r in exact.identity(ambient.rank)))
    pairing_cols = exact.mat_mul([list(r) for r in ambient.gram], exact.transpose(rows))
    basis = exact.integer_kernel(pairing_cols)
    return Sublattice(ambient, tuple(tuple(r) for r in basis))


def invariant_and_coinvariant(lat: Lattice, gens: Sequence[Sequence[Sequence[int]]]
                              ) -> tuple[Sublattice, Sublattice]:
    """Fixed sublattice of the group generated by gens, and its complement."""
    n = lat.rank
    for q in gens:
        if not lat.is_isometry(q):
            raise ValueError("generator is not an isometry")
    if not gens:
        inv_rows = exact.identity(n)
    else:
        stack = [[q[i][j] - int(i == j) for q in gens for j in range(n)]
                 for i in range(n)]
        inv_rows = exact.integer_kernel(stack)
    inv = Sublattice(lat, tuple(tuple(r) for r in inv_rows))
    coinv = orthogonal_complement(lat, inv.rows) if inv.rows else \
        Sublattice(lat, tuple(tuple(r) for r in exact.identity(n)))
    return inv, coinv


# -- discriminant group -----------------------------------------------------

@dataclass(frozen=True)
class DiscMap:
    """Discriminant group of an even lattice with lift and projection data."""

    lattice: Lattice
    fqm: Fqm
    gen_lifts: tuple[tuple[Fraction, ...], ...]  # dual vectors, basis coords
    _v_cols: tuple[tuple[int, ...], ...]
    _kept: tuple[int, ...]

    def project(self, x: Sequence) -> tuple[int, ...]:
        """Class of a dual vector x (rational row, basis coordinates) in D_L."""
        g = [list(r) for r in self.lattice.gram]
        y = exact.mat_vec([Fraction(c) for c in x], g)
        if any(c.denominator != 1 for c in map(Fraction, y)):
            raise ValueError("vector does not pair integrally with the lattice")
        w = exact.mat_vec([int(c) for c in y], [list(r) for r in self._v_cols])
        orders = self.fqm.orders
        return tuple(w[i] % d for i, d in zip(self._kept, orders))

    def lift(self, coeffs: Sequence[int]) -> tuple[Fraction, ...]:
        """A dual vector representing the class with the given coefficients."""
        n = self.lattice.rank
        out = [Fraction(0)] * n
        for c, gen in zip(coeffs, self.gen_lifts):
            if c:
                out = [a + c * b for a, b in zip(out, gen)]
        return tuple(out)


@cache
def disc_map(lat: Lattice) -> DiscMap:
    if not lat.is_even:
        raise ValueError("discriminant form requires an even lattice")
    n = lat.rank
    g = [list(r) for r in lat.gram]
    s, _, v = exact.smith_normal_form(g)
    ginv = exact.rational_inverse(g)
    vinv = exact.rational_inverse(v)
    kept = [i for i in range(n) if s[i][i] > 1]
    lifts = []
    for i in kept:
        yi = [int(x) for x in vinv[i]]
        lifts.append(tuple(exact.mat_vec([Fraction(c) for c in yi], ginv)))
    orders = tuple(s[i][i] for i in kept)
    q_diag = []
    b_rows = []
    for a, va in enumerate(lifts):
        q_diag.append(lat.pair(va, va) % 2)
        b_rows.append(tuple(lat.pair(va, vb) % 1 for vb in lifts[a + 1:]))
    fqm = Fqm(orders, tuple(q_diag), tuple(b_rows))
    return DiscMap(lat, fqm, tuple(lifts), tuple(tuple(r) for r in v), tuple(kept))


def discriminant_group(lat: Lattice) -> Fqm:
    return disc_map(lat).fqm


def induced_map(lat: Lattice, f: Sequence[Sequence[int]]) -> FqmHom:
    """Action of an isometry on the discriminant group."""
    if not lat.is_isometry(f):
        raise ValueError("not an isometry of the lattice")
    dm = disc_map(lat)
    flist = [list(r) for r in f]
    images = tuple(dm.project(exact.mat_vec(list(lift), flist))
                   for lift in dm.gen_lifts)
    return FqmHom(dm.fqm, dm.fqm, images)


def reflection_compose(lat: Lattice, h: Sequence[int], v: Sequence[int]) -> Vec:
    """v -> -v + (h.v) h; an isometry fixing h and negating its complement."""
    if lat.norm(h) != 2:
        raise ValueError("formula is integral only for h of square 2")
    hv = lat.pair(h, v)
    return tuple(-a + hv * b for a, b in zip(v, h))


# -- standard constructions -------------------------------------------------

def hyperbolic_plane() -> Lattice:
    return Lattice([[0, 1], [1, 0]])


def a2(sign: int = 1) -> Lattice:
    return rescale(Lattice([[2, 1], [1, 2]]), sign)


_E8_EDGES = [(1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)]


def e8(sign: int = 1) -> Lattice:
    g = [[0] * 8 for _ in range(8)]
    for i in range(8):
        g[i][i] = 2
    for i, j in _E8_EDGES:
        g[i - 1][j - 1] = g[j - 1][i - 1] = -1
    return rescale(Lattice(g), sign)


def span_of_square(k: int) -> Lattice:
    if k == 0:
        raise ValueError("rank-1 lattice needs a nonzero square")
    return Lattice([[k]])


def rescale(lat: Lattice, m: int) -> Lattice:
    if m == 0:
        raise ValueError("rescaling by zero is degenerate")
    if m == 1:
        return lat
    return Lattice([[m * x for x in row] for row in lat.gram])


def direct_sum(*lats: Lattice) -> Lattice:
    n = sum(l.rank for l in lats)
    g = [[0] * n for _ in range(n)]
    off = 0
    for l in lats:
        for i in range(l.rank):
            for j in range(l.rank):
                g[off + i][off + j] = l.gram[i][j]
        off += l.rank
    return Lattice(g)


def k3_lattice() -> Lattice:
    return direct_sum(e8(-1), e8(-1), hyperbolic_plane(),
                      hyperbolic_plane(), hyperbolic_plane())


def k3_square_lattice() -> Lattice:
    """Second cohomology of a Hilbert square of a K3: signature (3, 20), det 2."""
    return direct_sum(k3_lattice(), span_of_square(-2))


def leech_lattice() -> Lattice:
    from .leech import LEECH_GRAM
    return Lattice(LEECH_GRAM)
