"""Exact rational linear programming.

Dense two-phase tableau simplex over ``fractions.Fraction`` with Bland's
rule, so it terminates and is tie-exact. Sized for the few-dozen-row
systems that describe GDoF regions; not a general-purpose solver.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    value: Optional[Fraction] = None
    x: Optional[list[Fraction]] = None


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        if p != 1:
            inv = 1 / p
            row[:] = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                other[:] = [a - f * b if b else a for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = c

    def optimize(self, cost: list[Fraction], allowed: int) -> str:
        """Maximize ``cost . x`` over columns ``< allowed`` from the current
        basic feasible solution."""
        n = allowed
        while True:
            # reduced costs: c_j - c_B B^-1 A_j
            cb = [cost[b] for b in self.basis]
            enter = None
            for j in range(n):
                if j in self.basis:
                    continue
                red = cost[j] - sum((cb[i] * self.rows[i][j] for i in range(len(self.rows))
                                     if cb[i] and self.rows[i][j]), Fraction(0))
                if red > 0:
                    enter = j
                    break
            if enter is None:
                return OPTIMAL
            leave = None
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return UNBOUNDED
            self.pivot(leave, enter)


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Maximize ``c . x`` subject to ``A x <= b`` and ``x >= 0``."""
    c = [Fraction(v) for v in c]
    n = len(c)
    m = len(A)
    # columns: x (n), slacks (m), artificials (one per negative-rhs row)
    neg = [i for i in range(m) if Fraction(b[i]) < 0]
    n_art = len(neg)
    width = n + m + n_art
    rows, rhs, basis = [], [], []
    art_col = {}
    for i in range(m):
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * (m + n_art)
        row[n + i] = Fraction(1)
        bi = Fraction(b[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
            col = n + m + len(art_col)
            art_col[i] = col
            row[col] = Fraction(1)
            basis.append(col)
        else:
            basis.append(n + i)
        rows.append(row)
        rhs.append(bi)
    tab = _Tableau(rows, rhs, basis)

    if n_art:
        phase1 = [Fraction(0)] * width
        for col in art_col.values():
            phase1[col] = Fraction(-1)
        tab.optimize(phase1, width)
        if any(tab.rhs[i] != 0 for i, bcol in enumerate(tab.basis) if bcol >= n + m):
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis
        for i in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[i] < n + m:
                continue
            col = next((j for j in range(n + m) if tab.rows[i][j] != 0), None)
            if col is None:
                del tab.rows[i], tab.rhs[i], tab.basis[i]
            else:
                tab.pivot(i, col)

    cost = c + [Fraction(0)] * (m + n_art)
    status = tab.optimize(cost, n + m)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * width
    for i, bcol in enumerate(tab.basis):
        x[bcol] = tab.rhs[i]
    xs = x[:n]
    return LPResult(OPTIMAL, sum((ci * xi for ci, xi in zip(c, xs)), Fraction(0)), xs)
