"""Dense Gaussian elimination over an exact field (Fraction, QFraction, Cyclotomic3)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class SingularMatrixError(ArithmeticError):
    pass


def _row_reduce(rows: list[list], ncols: int):
    """In-place reduced row echelon form; returns the pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = Fraction(1) / rows[r][c]
        pr = [x * inv if x else x for x in rows[r]]
        rows[r] = pr
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rank(matrix: Sequence[Sequence]) -> int:
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    return len(_row_reduce(rows, len(rows[0])))


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Unique solution of a square system; raises SingularMatrixError otherwise."""
    n = len(matrix)
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    pivots = _row_reduce(rows, n)
    if pivots != list(range(n)):
        raise SingularMatrixError(f"matrix has rank {len(pivots)} < {n}")
    return [rows[i][n] for i in range(n)]


def particular_solution(columns: Sequence[Sequence], target: Sequence):
    """Some ``c`` with ``sum c_j * columns[j] == target``, or ``None`` if there is none.

    Free variables are set to zero (first-solution selection).
    """
    m = len(target)
    k = len(columns)
    zero = target[0] - target[0] if m else 0
    rows = [[columns[j][i] for j in range(k)] + [target[i]] for i in range(m)]
    pivots = _row_reduce(rows, k + 1)
    if k in pivots:
        return None
    sol = [zero] * k
    for r, c in enumerate(pivots):
        sol[c] = rows[r][k]
    return sol


def solve_many(matrix: Sequence[Sequence], rhs_columns: Sequence[Sequence]) -> list[list]:
    """Solve ``matrix @ x = b`` for several right-hand sides with one elimination."""
    n = len(matrix)
    k = len(rhs_columns)
    rows = [list(matrix[i]) + [b[i] for b in rhs_columns] for i in range(n)]
    pivots = _row_reduce(rows, n)
    if pivots != list(range(n)):
        raise SingularMatrixError(f"matrix has rank {len(pivots)} < {n}")
    return [[rows[i][n + c] for i in range(n)] for c in range(k)]
