"""Exact rank, kernel, and left-kernel computations over the rationals.

Rank on the hot path uses fraction-free (Bareiss) elimination on integer
matrices after clearing denominators; kernels use plain Fraction RREF.
No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Row = list[Fraction]


def integer_rank(rows: list[list[int]]) -> int:
    """Rank via fraction-free Gaussian elimination with column skipping.

    Intermediate entries stay integral (each update divides exactly by the
    previous pivot), so there is no rational blow-up.
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev_pivot = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pivot = m[rank][col]
        for i in range(rank + 1, nrows):
            head = m[i][col]
            row_i, row_r = m[i], m[rank]
            for j in range(col + 1, ncols):
                row_i[j] = (row_i[j] * pivot - head * row_r[j]) // prev_pivot
            row_i[col] = 0
        prev_pivot = pivot
        rank += 1
        if rank == nrows:
            break
    return rank


def fraction_matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank of a rational matrix (clears denominators, then Bareiss)."""
    if not rows:
        return 0
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, x.denominator)
    scaled = [[int(x * den) for x in row] for row in rows]
    return integer_rank(scaled)


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][col]
        m[r] = [x / inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def kernel_basis(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Row]:
    """Basis of the right kernel; one vector per free column, scaled to
    clear denominators (smallest integer vector, positive free entry)."""
    reduced, pivots = rref(rows)
    pivot_set = set(pivots)
    basis: list[Row] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for row, pcol in zip(reduced, pivots):
            vec[pcol] = -row[free]
        basis.append(_clear_denominators(vec))
    return basis


def left_kernel_basis(rows: Sequence[Sequence[Fraction]]) -> list[Row]:
    """Basis of the left kernel (vectors w with w @ M == 0)."""
    if not rows:
        return []
    nrows, ncols = len(rows), len(rows[0])
    transpose = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
    return kernel_basis(transpose, nrows)


def _clear_denominators(vec: Row) -> Row:
    den = 1
    for x in vec:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return [Fraction(x) for x in ints]
