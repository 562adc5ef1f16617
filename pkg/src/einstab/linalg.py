"""Exact linear algebra over the rationals.

Elimination is fraction-free (Bareiss): every row is first scaled to integers,
and the pivot is always the first nonzero entry in the current column, so
results are deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import DimensionMismatchError, NoSolutionError

Vector = tuple[Fraction, ...]


def _shape(rows: Sequence[Sequence]) -> tuple[int, int]:
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    for row in rows:
        if len(row) != ncols:
            raise DimensionMismatchError("ragged matrix")
    return nrows, ncols


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = lcm(1, *(x.denominator for x in fr))
        out.append([int(x * den) for x in fr])
    return out


def _bareiss(m: list[list[int]], ncols: int) -> list[int]:
    """Reduce ``m`` in place to integer row echelon form; return pivot columns."""
    pivots: list[int] = []
    prev = 1
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        pivot_row = m[r]
        for i in range(r + 1, nrows):
            row = m[i]
            lead = row[c]
            for j in range(c + 1, ncols):
                q, rem = divmod(piv * row[j] - lead * pivot_row[j], prev)
                assert rem == 0, "Bareiss step not exact"
                row[j] = q
            row[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def _back_substitute(m, pivots, ncols, free_values: dict[int, Fraction], rhs_col=None) -> Vector:
    x = [Fraction(0)] * ncols
    for c, v in free_values.items():
        x[c] = Fraction(v)
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        row = m[r]
        s = Fraction(row[rhs_col]) if rhs_col is not None else Fraction(0)
        for j in range(c + 1, ncols):
            if row[j] and x[j]:
                s -= row[j] * x[j]
        x[c] = s / row[c]
    return tuple(x)


def rank(rows: Sequence[Sequence]) -> int:
    nrows, ncols = _shape(rows)
    if nrows == 0 or ncols == 0:
        return 0
    return len(_bareiss(_integer_rows(rows), ncols))


def kernel_basis(rows: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of the null space, one vector per free column (in column order).

    ``ncols`` is needed only when ``rows`` is empty.
    """
    nrows, nc = _shape(rows)
    if nrows == 0:
        if ncols is None:
            raise DimensionMismatchError("column count unknown for an empty matrix")
        nc = ncols
    m = _integer_rows(rows)
    pivots = _bareiss(m, nc)
    free = [c for c in range(nc) if c not in set(pivots)]
    return [_back_substitute(m, pivots, nc, {f: Fraction(1)}) for f in free]


def solve_exact(rows: Sequence[Sequence], b: Sequence) -> Vector:
    """Return one solution of ``M x = b`` (free variables set to zero)."""
    nrows, ncols = _shape(rows)
    if len(b) != nrows:
        raise DimensionMismatchError(f"right-hand side has length {len(b)}, expected {nrows}")
    aug = _integer_rows([list(row) + [b[i]] for i, row in enumerate(rows)])
    pivots = _bareiss(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        raise NoSolutionError("inconsistent linear system")
    free = {c: Fraction(0) for c in range(ncols) if c not in set(pivots)}
    return _back_substitute(aug, pivots, ncols, free, rhs_col=ncols)


def mat_vec(rows: Sequence[Sequence], v: Sequence) -> Vector:
    if rows and len(rows[0]) != len(v):
        raise DimensionMismatchError("matrix/vector shape mismatch")
    return tuple(sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in rows)


def span_contains(basis: Sequence[Sequence], v: Sequence) -> bool:
    """True when ``v`` lies in the span of the given vectors."""
    if not basis:
        return all(x == 0 for x in v)
    return rank(list(basis) + [list(v)]) == rank(basis)


def same_span(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    ra, rb = rank(a) if a else 0, rank(b) if b else 0
    if ra != rb:
        return False
    if not a:
        return True
    return rank(list(a) + list(b)) == ra
