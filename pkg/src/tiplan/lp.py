"""Exact linear programming over Fractions (two-phase tableau simplex, Bland's rule).

Solves ``min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0``.  Bland's
rule guarantees termination; everything is exact, so the returned optimum is
a rational vertex.  Intended for the small programs of the reward solver
(tens of variables, hundreds of rows).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Row = Sequence[Fraction]


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, col: int) -> None:
    row = tab[r]
    p = row[col]
    if p != 1:
        row[:] = [v / p for v in row]
    for i, other in enumerate(tab):
        if i != r:
            f = other[col]
            if f:
                other[:] = [a - f * b for a, b in zip(other, row)]
    basis[r] = col


def _run(tab: list[list[Fraction]], basis: list[int], allowed: int) -> bool:
    """Minimise the objective in the last row over columns < ``allowed``; False if unbounded."""
    obj = tab[-1]
    while True:
        col = next((j for j in range(allowed) if obj[j] < 0), None)
        if col is None:
            return True
        best = None
        for i in range(len(tab) - 1):
            a = tab[i][col]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(tab, basis, best[1], col)


def solve_lp(
    c: Row,
    a_ub: Sequence[Row] = (),
    b_ub: Row = (),
    a_eq: Sequence[Row] = (),
    b_eq: Row = (),
) -> LpResult:
    n = len(c)
    rows: list[tuple[list[Fraction], Fraction, bool]] = []
    for a, b in zip(a_ub, b_ub):
        rows.append(([Fraction(v) for v in a], Fraction(b), True))
    for a, b in zip(a_eq, b_eq):
        rows.append(([Fraction(v) for v in a], Fraction(b), False))
    m = len(rows)
    n_slack = sum(1 for _, _, ub in rows if ub)
    width = n + n_slack + m  # structural, slack, artificial

    tab: list[list[Fraction]] = []
    basis: list[int] = []
    k = 0
    for i, (a, b, ub) in enumerate(rows):
        row = a + [Fraction(0)] * (n_slack + m) + [b]
        if ub:
            row[n + k] = Fraction(1)
            k += 1
        if b < 0:
            row = [-v for v in row]
        row[n + n_slack + i] = Fraction(1)
        tab.append(row)
        basis.append(n + n_slack + i)

    # phase 1: minimise the sum of artificials
    phase1 = [Fraction(0)] * (width + 1)
    for row in tab:
        for j in range(n + n_slack):
            phase1[j] -= row[j]
        phase1[-1] -= row[-1]
    tab.append(phase1)
    _run(tab, basis, n + n_slack)
    if tab[-1][-1] != 0:
        return LpResult(LpStatus.INFEASIBLE)
    tab.pop()

    # drive remaining artificials out of the basis; drop redundant rows
    for i in range(m - 1, -1, -1):
        if basis[i] >= n + n_slack:
            col = next((j for j in range(n + n_slack) if tab[i][j] != 0), None)
            if col is None:
                del tab[i]
                del basis[i]
            else:
                _pivot(tab, basis, i, col)

    obj = [Fraction(v) for v in c] + [Fraction(0)] * (n_slack + m) + [Fraction(0)]
    for i, j in enumerate(basis):
        f = obj[j]
        if f:
            obj = [a - f * b for a, b in zip(obj, tab[i])]
    tab.append(obj)
    if not _run(tab, basis, n + n_slack):
        return LpResult(LpStatus.UNBOUNDED)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = tab[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LpResult(LpStatus.OPTIMAL, tuple(x), value)
