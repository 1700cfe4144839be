"""Tiny exact linear algebra over Fraction, sized for dimension <= 4 work."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

__all__ = ["solve_exact", "rank_exact"]


def _echelon(rows: List[List[Fraction]]):
    """In-place fraction-free-ish Gaussian elimination; returns pivot columns."""
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank_exact(matrix: Sequence[Sequence[Fraction]]) -> int:
    rows = [[Fraction(x) for x in row] for row in matrix if any(x != 0 for x in row)]
    if not rows:
        return 0
    return len(_echelon(rows))


def solve_exact(
    matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Optional[List[Fraction]]:
    """Solve A x = b exactly; returns None when singular or inconsistent.

    Underdetermined consistent systems also return None: callers enumerate
    full-rank subsets, so a unique solution is required.
    """
    m = len(matrix)
    if m == 0:
        return None
    ncols = len(matrix[0])
    rows = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = _echelon(rows)
    # inconsistent: pivot in the rhs column
    if ncols in pivots:
        return None
    if len(pivots) < ncols:
        return None
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = rows[r][ncols]
    return x
