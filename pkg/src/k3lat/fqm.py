"""Finite quadratic modules: finite abelian groups with a Q/2Z-valued form.

A module is presented on invariant-factor generators g_1, ..., g_r of orders
d_1 | d_2 | ... | d_r (trivial factors dropped), with q(g_i) stored in [0, 2)
and the pairing b(g_i, g_j) in [0, 1).  Elements are coefficient tuples
reduced modulo the orders.  These objects model discriminant groups of even
lattices, but nothing in this module depends on a lattice.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional

Element = tuple[int, ...]


@dataclass(frozen=True)
class Fqm:
    orders: tuple[int, ...]
    q_diag: tuple[Fraction, ...]
    b_off: tuple[tuple[Fraction, ...], ...]  # row i lists b(g_i, g_j) for j > i

    def __post_init__(self):
        r = len(self.orders)
        if len(self.q_diag) != r or len(self.b_off) != r:
            raise ValueError("generator data length mismatch")
        for i, d in enumerate(self.orders):
            if d <= 1:
                raise ValueError("orders must exceed 1")
            if i + 1 < r and self.orders[i + 1] % d:
                raise ValueError("orders must form a divisibility chain")
            if len(self.b_off[i]) != r - i - 1:
                raise ValueError("pairing row length mismatch")
            q = self.q_diag[i]
            if not (0 <= q < 2):
                raise ValueError("q values must be reduced into [0, 2)")
            # q(k g) = k^2 q(g) is well defined mod 2 iff both of these hold
            if (q * d) % 1:
                raise ValueError(f"{d} * q(g) must be an integer")
            if (q * d * d) % 2:
                raise ValueError(f"q({d}*g) must vanish mod 2")
            for k, b in enumerate(self.b_off[i]):
                if not (0 <= b < 1):
                    raise ValueError("b values must be reduced into [0, 1)")
                if (b * d) % 1:
                    raise ValueError("pairing must kill the generator order")

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def zero(self) -> Element:
        return (0,) * self.rank

    def reduce(self, x: Iterable[int]) -> Element:
        return tuple(c % d for c, d in zip(x, self.orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % d for a, d in zip(x, self.orders))

    def scale(self, k: int, x: Element) -> Element:
        return tuple((k * a) % d for a, d in zip(x, self.orders))

    def elements(self) -> Iterator[Element]:
        return itertools.product(*[range(d) for d in self.orders])

    def element_order(self, x: Element) -> int:
        return math.lcm(1, *[d // math.gcd(d, c) for c, d in zip(x, self.orders)])

    def _b_gen(self, i: int, j: int) -> Fraction:
        if i == j:
            return self.q_diag[i] % 1
        if i > j:
            i, j = j, i
        return self.b_off[i][j - i - 1]

    def q(self, x: Iterable[int]) -> Fraction:
        """q(x) = sum c_i^2 q_i + 2 sum_{i<j} c_i c_j b_ij, reduced mod 2."""
        c = self.reduce(x)
        total = Fraction(0)
        for i in range(self.rank):
            if not c[i]:
                continue
            total += c[i] * c[i] * self.q_diag[i]
            for j in range(i + 1, self.rank):
                if c[j]:
                    total += 2 * c[i] * c[j] * self.b_off[i][j - i - 1]
        return total % 2

    def b(self, x: Iterable[int], y: Iterable[int]) -> Fraction:
        cx, cy = self.reduce(x), self.reduce(y)
        total = Fraction(0)
        for i in range(self.rank):
            for j in range(self.rank):
                if cx[i] and cy[j]:
                    total += cx[i] * cy[j] * self._b_gen(i, j)
        return total % 1


TRIVIAL = Fqm((), (), ())


@dataclass(frozen=True)
class FqmHom:
    """Group homomorphism between modules, given by generator images."""

    source: Fqm
    target: Fqm
    images: tuple[Element, ...]

    def __post_init__(self):
        if len(self.images) != self.source.rank:
            raise ValueError("one image per source generator required")
        object.__setattr__(self, "images",
                           tuple(self.target.reduce(im) for im in self.images))
        for d, im in zip(self.source.orders, self.images):
            if any(self.target.scale(d, im)):
                raise ValueError("image order does not divide generator order")

    def __call__(self, x: Iterable[int]) -> Element:
        c = self.source.reduce(x)
        out = self.target.zero()
        for k, im in zip(c, self.images):
            if k:
                out = self.target.add(out, self.target.scale(k, im))
        return out

    def is_injective(self) -> bool:
        img = Subgroup.generated(self.target, self.images)
        return img.order == self.source.order

    def _form_sign_ok(self, sign: int) -> bool:
        src = self.source
        for i in range(src.rank):
            if self.target.q(self.images[i]) != (sign * src.q_diag[i]) % 2:
                return False
            for j in range(i + 1, src.rank):
                want = (sign * src._b_gen(i, j)) % 1
                if self.target.b(self.images[i], self.images[j]) != want:
                    return False
        return True

    def preserves_form(self) -> bool:
        return self._form_sign_ok(1)

    def negates_form(self) -> bool:
        return self._form_sign_ok(-1)

    def compose(self, other: "FqmHom") -> "FqmHom":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition type mismatch")
        return FqmHom(other.source, self.target,
                      tuple(self(im) for im in other.images))


def identity_hom(m: Fqm) -> FqmHom:
    return FqmHom(m, m, tuple(m.reduce([int(i == j) for j in range(m.rank)])
                              for i in range(m.rank)))


def negation_hom(m: Fqm) -> FqmHom:
    return FqmHom(m, m, tuple(m.neg(im) for im in identity_hom(m).images))


def negated(m: Fqm) -> Fqm:
    """The same group carrying -q: what a glue partner's form looks like."""
    return Fqm(m.orders, tuple((-q) % 2 for q in m.q_diag),
               tuple(tuple((-x) % 1 for x in row) for row in m.b_off))


@dataclass(frozen=True)
class Subgroup:
    ambient: Fqm
    generators: tuple[Element, ...]
    _elements: frozenset[Element]

    @classmethod
    def generated(cls, ambient: Fqm, gens: Iterable[Iterable[int]]) -> "Subgroup":
        gs = tuple(ambient.reduce(g) for g in gens)
        zero = ambient.zero()
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gs:
                    y = ambient.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return cls(ambient, gs, frozenset(seen))

    def __contains__(self, x) -> bool:
        return self.ambient.reduce(x) in self._elements

    @property
    def order(self) -> int:
        return len(self._elements)

    def elements(self) -> list[Element]:
        return sorted(self._elements)


def hom_image(f: FqmHom) -> Subgroup:
    return Subgroup.generated(f.target, f.images)


def hom_preimage(f: FqmHom, y: Iterable[int]) -> Element:
    """Some x with f(x) = y; raises if y is not in the image."""
    want = f.target.reduce(y)
    for x in f.source.elements():
        if f(x) == want:
            return x
    raise ValueError("element is not in the image")


def _form_embeddings(a: Fqm, b: Fqm, sign: int, bound: int) -> list[FqmHom]:
    if a.order > bound or b.order > bound:
        raise ValueError(f"module order exceeds search bound {bound}")
    candidates: list[list[Element]] = []
    for i in range(a.rank):
        d, qi = a.orders[i], (sign * a.q_diag[i]) % 2
        cand = [y for y in b.elements()
                if not any(b.scale(d, y)) and b.q(y) == qi]
        candidates.append(cand)

    found: list[FqmHom] = []

    def extend(chosen: list[Element]):
        i = len(chosen)
        if i == a.rank:
            hom = FqmHom(a, b, tuple(chosen))
            if hom.is_injective():
                found.append(hom)
            return
        for y in candidates[i]:
            if all(b.b(y, chosen[j]) == (sign * a._b_gen(i, j)) % 1
                   for j in range(i)):
                extend(chosen + [y])

    extend([])
    return found


def anti_embeddings(a: Fqm, b: Fqm, bound: int = 10 ** 6) -> list[FqmHom]:
    """All injective homs A -> B negating q (and hence the pairing)."""
    return _form_embeddings(a, b, -1, bound)


def isomorphisms(a: Fqm, b: Fqm, bound: int = 10 ** 6) -> list[FqmHom]:
    if a.order != b.order:
        return []
    return _form_embeddings(a, b, 1, bound)


def orthogonal_group(m: Fqm, bound: int = 10 ** 6) -> tuple[list[FqmHom], int]:
    """Generators of the form-preserving automorphism group, plus its order."""
    autos = _form_embeddings(m, m, 1, bound)
    ident = identity_hom(m).images
    gens: list[FqmHom] = []
    generated = {ident}
    for f in autos:
        if f.images in generated:
            continue
        gens.append(f)
        generated = hom_closure_images(m, gens)
    return gens, len(autos)


def hom_closure_images(m: Fqm, gens: Iterable[FqmHom]) -> set[tuple[Element, ...]]:
    """Image-tuples of the subgroup of O(m) generated by the given maps."""
    glist = [g.images for g in gens]
    ident = identity_hom(m).images

    def compose_images(f, g):
        # (f o g) on generators: push each image of g through f
        hom_f = FqmHom(m, m, f)
        return tuple(hom_f(im) for im in g)

    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for f in frontier:
            for g in glist:
                h = compose_images(g, f)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def k3sq_glue_admissible(d_n: Fqm, image: Subgroup) -> bool:
    """Does gluing along the image leave exactly the order-2, q = 3/2 quotient?

    True iff some x outside the image pairs integrally with the whole image
    and has q(x) = 3/2 mod 2.  This is the uniqueness criterion for the glued
    lattice being the rank-23 hyperkaehler one.
    """
    if image.ambient != d_n:
        raise ValueError("image must be a subgroup of the given module")
    three_half = Fraction(3, 2)
    for x in d_n.elements():
        if x in image:
            continue
        if d_n.q(x) != three_half:
            continue
        if all(d_n.b(x, g) == 0 for g in image.generators):
            return True
    return False


def subgroup_presentation(sub: Subgroup) -> FqmHom:
    """Present a subgroup on invariant-factor generators of its own.

    Returns the inclusion hom: its source is the subgroup as a standalone
    module (with the restricted form), its images are the chosen generators
    inside the ambient module.
    """
    from . import exact

    amb = sub.ambient
    gens = [g for g in sub.generators if any(g)]
    if not gens:
        return FqmHom(TRIVIAL, amb, ())
    k, n = len(gens), amb.rank
    # relation lattice: integer rows c with sum_i c_i g_i = 0 in the ambient,
    # i.e. c.A = -y.diag(orders) for some integer y
    stacked = [list(g) for g in gens]
    stacked += [[amb.orders[j] if i == j else 0 for j in range(n)]
                for i in range(n)]
    kernel = exact.integer_kernel(stacked)
    relations = [row[:k] for row in kernel]
    s, u, _ = exact.smith_normal_form(exact.transpose(relations))
    # in coordinates y = U x the relations are diagonal, so the new
    # generators are the columns of U^{-1} applied to the old ones
    u_inv = exact.rational_inverse(u)
    new_gens = []
    orders = []
    for i in range(k):
        d = s[i][i] if i < len(s) and i < len(s[0]) else 0
        if d == 0:
            raise ValueError("subgroup presentation is not finite")
        if d == 1:
            continue
        combo = [u_inv[j][i] for j in range(k)]
        assert all(c.denominator == 1 for c in combo)
        elem = amb.zero()
        for c, g in zip(combo, gens):
            elem = amb.add(elem, amb.scale(int(c), g))
        assert amb.element_order(elem) == d
        new_gens.append(elem)
        orders.append(d)
    if not new_gens:
        return FqmHom(TRIVIAL, amb, ())
    q_diag = tuple(amb.q(g) for g in new_gens)
    b_off = tuple(tuple(amb.b(new_gens[i], new_gens[j])
                        for j in range(i + 1, len(new_gens)))
                  for i in range(len(new_gens)))
    presented = Fqm(tuple(orders), q_diag, b_off)
    assert presented.order == sub.order
    return FqmHom(presented, amb, tuple(new_gens))
