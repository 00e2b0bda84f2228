"""Exact rational simplex for small dense linear programs.

Solves  max c.x  subject to  A x <= b, x >= 0  with all data Fractions and
b >= 0, so the origin is feasible and no phase-1 is needed.  Dantzig
pricing with a Bland fallback after a pivot budget guards against cycling;
all arithmetic is exact, so the optimum is returned as exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ZERO = Fraction(0)


@dataclass(frozen=True)
class SimplexResult:
    value: Fraction
    solution: tuple[Fraction, ...]


def maximize(
    objective: list[Fraction],
    rows: list[list[Fraction]],
    rhs: list[Fraction],
) -> SimplexResult:
    """Maximize objective . x over {x >= 0 : rows x <= rhs} exactly.

    Requires rhs >= 0. Raises if the program is unbounded (callers are
    expected to include box constraints that prevent this).
    """
    n = len(objective)
    m = len(rows)
    if any(len(row) != n for row in rows) or len(rhs) != m:
        raise ValueError("inconsistent LP dimensions")
    if any(b < 0 for b in rhs):
        raise ValueError("rhs must be nonnegative (origin must be feasible)")

    # tableau: m constraint rows [A | I | b], then the objective row
    tableau = [list(rows[i]) + [ZERO] * m + [rhs[i]] for i in range(m)]
    for i in range(m):
        tableau[i][n + i] = Fraction(1)
    cost = [-c for c in objective] + [ZERO] * m + [ZERO]
    basis = [n + i for i in range(m)]
    total = n + m

    pivots = 0
    bland_after = 50 * (m + n + 1)
    while True:
        entering = -1
        if pivots < bland_after:
            most_negative = ZERO
            for j in range(total):
                if cost[j] < most_negative:
                    most_negative = cost[j]
                    entering = j
        else:  # Bland: first improving column, guarantees termination
            for j in range(total):
                if cost[j] < ZERO:
                    entering = j
                    break
        if entering < 0:
            break

        leaving = -1
        best_ratio = None
        for i in range(m):
            coeff = tableau[i][entering]
            if coeff > 0:
                ratio = tableau[i][-1] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            raise ArithmeticError("unbounded linear program")

        pivot_row = tableau[leaving]
        pivot = pivot_row[entering]
        if pivot != 1:
            tableau[leaving] = pivot_row = [v / pivot for v in pivot_row]
        for i in range(m):
            if i != leaving:
                factor = tableau[i][entering]
                if factor != 0:
                    row = tableau[i]
                    tableau[i] = [
                        row[j] - factor * pivot_row[j] for j in range(total + 1)
                    ]
        factor = cost[entering]
        if factor != 0:
            cost = [cost[j] - factor * pivot_row[j] for j in range(total + 1)]
        basis[leaving] = entering
        pivots += 1

    solution = [ZERO] * n
    for i in range(m):
        if basis[i] < n:
            solution[basis[i]] = tableau[i][-1]
    value = cost[-1]
    return SimplexResult(value, tuple(solution))
