"""Good isometries of rank-3 lattices and assembly of classification rows.

Pipeline: enumerate good isometries of each invariant lattice, filter
anti-embeddings of the coinvariant discriminant form through the
uniqueness criterion, keep the isometries extending over the glued
lattice, and emit deduplicated rows carrying the polarization degree,
its divisibility, the transcendental lattice, and the K3-birational flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import exact
from .enumeration import Isometry, all_automorphisms, is_isometric
from .fqm import Fqm, FqmHom, Subgroup, anti_embeddings, hom_image, \
    k3sq_glue_admissible
from .glue import check_extendable, divisibility_in_glued, lift_order_search
from .lattice import Lattice, disc_map, invariant_and_coinvariant

IntMatrix = tuple[tuple[int, ...], ...]

# order k paired with trace 1 + 2cos(2pi/k): eigenvalues 1, zeta_k, conj
GOOD_TRACES = {2: -1, 3: 0, 4: 1, 6: 2}


def good_isometries(n: Lattice) -> list[Isometry]:
    """All f in O(N) with a single fixed line and primitive-root rotation
    part, i.e. (order, trace) in {(2,-1), (3,0), (4,1), (6,2)}."""
    if n.rank != 3 or not n.is_positive_definite:
        raise ValueError("good isometries live on rank-3 positive definite lattices")
    out = []
    for q in all_automorphisms(n):
        order = exact.multiplicative_order([list(r) for r in q])
        trace = q[0][0] + q[1][1] + q[2][2]
        if GOOD_TRACES.get(order) == trace:
            out.append(Isometry(q, order))
    return out


def _matrix_of(f) -> list[list[int]]:
    m = f.matrix if hasattr(f, "matrix") else f
    return [list(r) for r in m]


def _fixed_line_and_complement(n: Lattice, matrix):
    """(h, T basis rows, normalized T gram) for an isometry fixing a line."""
    inv, coinv = invariant_and_coinvariant(n, [matrix])
    if inv.rank != 1:
        raise ValueError("isometry must fix exactly one line")
    h = list(inv.rows[0])
    for x in h:
        if x:
            if x < 0:
                h = [-y for y in h]
            break
    t_rows = [list(r) for r in coinv.rows]
    gram = exact.conjugate_rows(t_rows, [list(r) for r in n.gram])
    if gram[0][0] > gram[1][1]:
        t_rows.reverse()
        gram = exact.conjugate_rows(t_rows, [list(r) for r in n.gram])
    if gram[0][1] < 0:
        t_rows[1] = [-x for x in t_rows[1]]
        gram = exact.conjugate_rows(t_rows, [list(r) for r in n.gram])
    return (tuple(h), tuple(tuple(r) for r in t_rows),
            tuple(tuple(x) for x in gram))


def polarization_and_transcendental(n: Lattice, f) -> tuple[tuple[int, ...], Lattice]:
    """Primitive generator of the fixed line (first nonzero entry positive)
    and the complementary rank-2 lattice, off-diagonal normalized >= 0."""
    h, _, gram = _fixed_line_and_complement(n, _matrix_of(f))
    return h, Lattice(gram)


def transcendental_restriction(n: Lattice, f) -> IntMatrix:
    """The action of f on the rank-2 complement of its fixed line, written
    in the same basis polarization_and_transcendental normalizes."""
    matrix = _matrix_of(f)
    _, t_rows, _ = _fixed_line_and_complement(n, matrix)
    b = [list(r) for r in t_rows]
    bt = exact.transpose(b)
    moved = exact.mat_mul(exact.mat_mul(b, matrix), bt)
    r = exact.mat_mul(moved, exact.rational_inverse(exact.mat_mul(b, bt)))
    assert all(x.denominator == 1 for row in r for x in row)
    return tuple(tuple(int(x) for x in row) for row in r)


def k3_birational_flag(n: Lattice, t_basis: Sequence[Sequence[int]],
                       image: Subgroup) -> str:
    """"excluded" when t1, t2 or t1+t2 has divisibility 2 in the glued
    lattice (a wall class survives on the transcendental side), else
    "unknown"."""
    t1, t2 = [list(r) for r in t_basis]
    for v in (t1, t2, [a + b for a, b in zip(t1, t2)]):
        if divisibility_in_glued(n, v, image) == 2:
            return "excluded"
    return "unknown"


def max_group_order_check(symplectic_order: int, m: int) -> int:
    """Order of the full automorphism group over its symplectic part."""
    return symplectic_order * m


@dataclass(frozen=True)
class CoinvariantData:
    """Discriminant-side data of the rank-20 coinvariant lattice.

    Only the discriminant form is required.  The optional pieces unlock
    exact mode (obar: generators of the image of O(M) in O(D_M)) and the
    lift-improvement report (gram + isometries + base-group generators).
    """

    disc: Fqm
    gram: Optional[Lattice] = None
    obar: Optional[tuple[FqmHom, ...]] = None
    isometries: Optional[tuple[IntMatrix, ...]] = None
    g_gens: tuple[IntMatrix, ...] = ()

    def __post_init__(self):
        if self.gram is not None and disc_map(self.gram).fqm != self.disc:
            raise ValueError("declared discriminant does not match the Gram")


@dataclass(frozen=True)
class ClassificationRow:
    group_name: str
    h_sq: int
    h_div: int
    m: int
    t_gram: IntMatrix
    k3_flag: str  # "excluded" / "unknown" / "possible" (ingested only)
    invariant_gram: IntMatrix
    mode: str  # "exact" / "permissive"
    lift_improved: Optional[bool] = None


def _row_key(row: ClassificationRow):
    return (row.h_sq, row.h_div, row.m, row.t_gram, row.invariant_gram)


def _dedup(rows: list[ClassificationRow]) -> list[ClassificationRow]:
    kept: list[ClassificationRow] = []
    for row in sorted(rows, key=_row_key):
        duplicate = False
        for r in kept:
            if (r.h_sq, r.h_div, r.m, r.invariant_gram) != \
                    (row.h_sq, row.h_div, row.m, row.invariant_gram):
                continue
            if is_isometric(Lattice(r.t_gram), Lattice(row.t_gram)) is not None:
                duplicate = True
                break
        if not duplicate:
            kept.append(row)
    return kept


def classify(invariant_lattices: Sequence[Lattice], m_data: CoinvariantData,
             group_name: str) -> list[ClassificationRow]:
    """Rows for every (invariant lattice, admissible glue, extendable good
    isometry) triple, deduplicated by (h^2, div, m, T-isometry class,
    invariant Gram) and deterministically ordered."""
    mode = "exact" if m_data.obar is not None else "permissive"
    rows: list[ClassificationRow] = []
    for n in invariant_lattices:
        if n.rank != 3 or not n.is_positive_definite:
            raise ValueError("invariant lattices must be rank-3 positive definite")
        d_n = disc_map(n).fqm
        goods = good_isometries(n)
        if not goods:
            continue
        for gam in anti_embeddings(m_data.disc, d_n):
            image = hom_image(gam)
            if not k3sq_glue_admissible(d_n, image):
                continue
            for f in goods:
                ok, witness = check_extendable(n, f, gam, obar_m=m_data.obar)
                if not ok:
                    continue
                h, t_rows, t_gram = _fixed_line_and_complement(n, _matrix_of(f))
                improved = None
                if m_data.isometries is not None and m_data.gram is not None:
                    improved = lift_order_search(
                        witness, m_data.gram, m_data.g_gens,
                        isos_m=m_data.isometries).improved
                rows.append(ClassificationRow(
                    group_name=group_name,
                    h_sq=n.norm(h),
                    h_div=divisibility_in_glued(n, h, image),
                    m=f.order,
                    t_gram=t_gram,
                    k3_flag=k3_birational_flag(n, t_rows, image),
                    invariant_gram=n.gram,
                    mode=mode,
                    lift_improved=improved))
    return _dedup(rows)
