"""Ample-cone obstructions for Hilbert squares of polarized K3 surfaces.

For a polarization h of square ``h_sq`` on a K3 surface S, the class h - xi
on the Hilbert square (xi the half-diagonal, xi^2 = -2) is ample on some
birational model unless a -10-class of divisibility 2 is orthogonal to
h - xi, or a wall orthogonal to a -2-class crosses the open segment from h
to h - xi.  Writing such classes as 2k*x + (2l+1)*xi resp. k*x + l*xi with
x a primitive surface class turns both cases into two-variable Diophantine
systems; each solution pins down the Gram matrix of <x, h>, a rank-2 block
that would have to embed into the Picard lattice of S.  This module
enumerates those blocks exactly.  Whether a block really embeds is geometry
the caller supplies, e.g. "S contains no lines".
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

IntMatrix = tuple[tuple[int, ...], ...]
# wall datum: parameter t of the pierced point h - t*xi, coefficients (k, l)
WallSolution = tuple[Fraction, int, int]


@dataclass(frozen=True)
class ObstructionReport:
    minus10_grams: tuple[IntMatrix, ...]
    wall_solutions: tuple[WallSolution, ...]
    line_class_needed: bool


@dataclass(frozen=True)
class WallScan:
    solutions: tuple[WallSolution, ...]
    # Gram of <z, h> for the -2-class z the wall forces into the Picard lattice
    terminal_gram: Optional[IntMatrix]
    # t = 0 endpoint: solutions surviving the ampleness filter (always none,
    # a -2-class orthogonal to an ample class cannot exist)
    boundary_solutions: tuple[WallSolution, ...]


def _check_degree(h_sq: int) -> None:
    if h_sq <= 0 or h_sq % 2:
        raise ValueError("polarization square must be a positive even integer")


def minus10_solutions(h_sq: int, l_bound: Optional[int] = None):
    """Solutions of the -10-class system as (gram, k, l) triples.

    A primitive class y = 2k*x + (2l+1)*xi of square -10 and divisibility 2
    orthogonal to h - xi forces x^2 = 2(l^2+l-1)/k^2 and h.x = -(2l+1)/k.
    The Hodge index theorem bounds l whenever h_sq >= 4; for h_sq = 2 the
    inequality is vacuous and the caller must cap |l| explicitly.

    Witnesses are canonical: k >= 1, l >= 0 (the maps l -> -1-l and
    k -> -k only flip the sign of x), and h.x is recorded >= 0.
    """
    _check_degree(h_sq)
    if h_sq == 2:
        if l_bound is None:
            raise ValueError(
                "square 2 admits infinitely many obstruction blocks; "
                "pass l_bound to truncate the scan")
        l_range = range(0, l_bound + 1)
    else:
        l_range = itertools.takewhile(
            lambda l: (2 * h_sq - 4) * (l * l + l) < 2 * h_sq + 1,
            itertools.count(0))
    out = []
    for l in l_range:
        num = 2 * (l * l + l - 1)
        odd = 2 * l + 1
        for k in range(1, odd + 1):
            if odd % k or num % (k * k):
                continue
            if math.gcd(k, odd) != 1:  # y would not be primitive
                continue
            x_sq = num // (k * k)
            assert x_sq % 2 == 0  # x lives in the even K3 lattice
            h_x = odd // k
            if h_sq * x_sq >= h_x * h_x:  # Hodge index, strict
                continue
            out.append((((x_sq, h_x), (h_x, h_sq)), k, l))
    return out


def minus10_obstruction_grams(h_sq: int,
                              l_bound: Optional[int] = None) -> list[IntMatrix]:
    """Rank-2 Gram blocks forced by -10-classes of divisibility 2."""
    grams = {g for g, _, _ in minus10_solutions(h_sq, l_bound)}
    return sorted(grams)


def minus2_wall_scan(h_sq: int) -> WallScan:
    """Walls orthogonal to -2-classes crossing the open segment h to h - xi.

    y = k*x + l*xi orthogonal to h - t*xi with 0 < t < 1 forces
    x^2 = 2(l^2-1)/k^2 and h.x = 2tl/k =: m.  Solutions are canonical with
    k, l, m >= 1.  The l = 0 branch would need a -2-class orthogonal to h
    itself, impossible since h is ample on the surface; the same filter
    empties the t = 0 endpoint check.
    """
    _check_degree(h_sq)
    solutions = []
    gram_seen = None
    for l in itertools.count(1):
        # largest admissible m*k is 2l - 1; below that Hodge needs
        # (mk)^2 > 2*h_sq*(l^2-1), and the bound only tightens with l
        if (2 * l - 1) ** 2 <= 2 * h_sq * (l * l - 1):
            break
        for k in range(1, 2 * l):
            if (2 * (l * l - 1)) % (k * k):
                continue
            x_sq = 2 * (l * l - 1) // (k * k)
            for m in range(1, (2 * l - 1) // k + 1):
                if h_sq * x_sq >= m * m:
                    continue
                t = Fraction(m * k, 2 * l)
                if not 0 < t < 1:
                    continue
                solutions.append((t, k, l))
                gram_seen = ((x_sq, m), (m, h_sq))
    terminal = None
    if gram_seen is not None:
        z = minus_two_class(gram_seen, pairing=None)
        assert z is not None  # det < 0 guarantees a -2 vector here
        terminal = _span_with_h(gram_seen, z)
    # t = 0: h.x = 0 and Hodge force x^2 < 0, so l = 0 and k*x is a
    # -2-class orthogonal to the ample h; nothing survives
    return WallScan(tuple(solutions), terminal, ())


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return abs(a), (1 if a >= 0 else -1), 0
    g, u, v = _ext_gcd(b, a % b)
    return g, v, u - (a // b) * v


def _quadratic_roots(a: int, b: int, c: int) -> list[int]:
    """Integer roots of a*s^2 + b*s + c with a != 0."""
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    r = math.isqrt(disc)
    if r * r != disc:
        return []
    return sorted({(-b + s) // (2 * a) for s in (r, -r)
                   if (-b + s) % (2 * a) == 0})


def vector_with(gram: IntMatrix, norm: int, pairing: int):
    """An integer vector of the given norm and pairing with the second
    basis vector, or None.  Exact: the pairing condition is a line, and
    restricting the form to it leaves one quadratic in one variable."""
    (g00, g01), (_, g11) = gram
    g, u, v = _ext_gcd(g01, g11)
    if pairing % g:
        return None
    a0, b0 = u * (pairing // g), v * (pairing // g)
    d, e = g11 // g, g01 // g  # direction (d, -e) keeps the pairing fixed
    qa = g00 * d * d - 2 * g01 * d * e + g11 * e * e
    qb = 2 * (g00 * a0 * d + g01 * (b0 * d - a0 * e) - g11 * b0 * e)
    qc = g00 * a0 * a0 + 2 * g01 * a0 * b0 + g11 * b0 * b0 - norm
    if qa == 0:
        if qb == 0:
            return (a0, b0) if qc == 0 else None
        if qc % qb:
            return None
        s = -qc // qb
        return (a0 + d * s, b0 - e * s)
    roots = _quadratic_roots(qa, qb, qc)
    if not roots:
        return None
    s = roots[-1]
    return (a0 + d * s, b0 - e * s)


def minus_two_class(gram: IntMatrix, pairing: Optional[int]):
    """A norm -2 vector, of the given pairing with h if one is requested,
    else the one of smallest nonnegative pairing."""
    if pairing is not None:
        return vector_with(gram, -2, pairing)
    for p in range(0, 2 * gram[1][1] + 1):
        z = vector_with(gram, -2, p)
        if z is not None:
            return z
    return None


def _span_with_h(gram: IntMatrix, z: tuple[int, int]) -> IntMatrix:
    (g00, g01), (_, g11) = gram
    z_sq = g00 * z[0] * z[0] + 2 * g01 * z[0] * z[1] + g11 * z[1] * z[1]
    z_h = g01 * z[0] + g11 * z[1]
    return ((z_sq, abs(z_h)), (abs(z_h), g11))


def line_witness(gram: IntMatrix):
    """A class of norm -2 meeting h in exactly one point: on a surface
    whose polarization is a hyperplane section, an effective line."""
    return vector_with(gram, -2, 1)


def _excluded(gram: IntMatrix, no_lines: bool,
              picard_excludes: Optional[Callable[[IntMatrix], bool]]) -> bool:
    if picard_excludes is not None and picard_excludes(gram):
        return True
    # a -2-class orthogonal to the ample h can never embed
    if vector_with(gram, -2, 0) is not None:
        return True
    return no_lines and line_witness(gram) is not None


def obstruction_report(h_sq: int,
                       l_bound: Optional[int] = None) -> ObstructionReport:
    _check_degree(h_sq)
    grams = minus10_obstruction_grams(h_sq, l_bound)
    scan = minus2_wall_scan(h_sq)
    blocks = list(grams)
    if scan.terminal_gram is not None:
        blocks.append(scan.terminal_gram)
    needs_line = any(line_witness(g) is not None for g in blocks)
    return ObstructionReport(tuple(grams), scan.solutions, needs_line)


def ample_model_verdict(h_sq: int, no_lines: bool,
                        picard_excludes=None,
                        l_bound: Optional[int] = None) -> bool:
    """True iff every obstruction block is excluded from the Picard lattice.

    Exclusion of a block comes from the caller's predicate, from containing
    a -2-class orthogonal to h (impossible next to an ample class), or,
    when no_lines is set, from containing a line class.
    """
    scan = minus2_wall_scan(h_sq)
    blocks = minus10_obstruction_grams(h_sq, l_bound)
    if scan.solutions:
        blocks.append(scan.terminal_gram)
    return all(_excluded(g, no_lines, picard_excludes) for g in blocks)
