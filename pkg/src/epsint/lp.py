"""Exact rational linear programming.

Dense two-phase tableau simplex with Bland's anti-cycling rule. Arithmetic is
``gmpy2.mpq`` internally (about ten times faster than ``Fraction``); inputs and
outputs are ``Fraction``.

Several objectives may be given; they are minimized lexicographically on the
same tableau: after objective ``k`` is optimal, every column with positive
reduced cost is frozen at zero, which pins the iterate to the optimal face.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from gmpy2 import mpq

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple] = None
    values: tuple = ()

    @property
    def value(self):
        return self.values[0] if self.values else None


def _fr(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


class _Tableau:
    def __init__(self, rows, rhs, basis, ncols):
        self.T = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.frozen = [False] * ncols

    def pivot(self, i, j, obj):
        T, rhs = self.T, self.rhs
        row = T[i]
        p = row[j]
        if p != 1:
            inv = 1 / p
            nz = [k for k, v in enumerate(row) if v]
            for k in nz:
                row[k] *= inv
            rhs[i] *= inv
        else:
            nz = [k for k, v in enumerate(row) if v]
        ri = rhs[i]
        for r in range(len(T)):
            if r == i:
                continue
            other = T[r]
            f = other[j]
            if f:
                for k in nz:
                    other[k] -= f * row[k]
                rhs[r] -= f * ri
        f = obj[j]
        if f:
            for k in nz:
                obj[k] -= f * row[k]
            obj[-1] -= f * ri
        self.basis[i] = j

    def reduced(self, cost):
        """Reduced-cost row for ``cost`` (last entry holds minus the value)."""
        obj = list(cost) + [mpq(0)]
        for i, b in enumerate(self.basis):
            f = obj[b]
            if f:
                row = self.T[i]
                for k, v in enumerate(row):
                    if v:
                        obj[k] -= f * v
                obj[-1] -= f * self.rhs[i]
        return obj

    def run(self, obj) -> str:
        T, rhs, basis = self.T, self.rhs, self.basis
        while True:
            j = next((k for k in range(self.ncols) if not self.frozen[k] and obj[k] < 0), None)
            if j is None:
                return OPTIMAL
            best = None
            for i in range(len(T)):
                a = T[i][j]
                if a > 0:
                    ratio = rhs[i] / a
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], j, obj)


def solve_lp(
    costs,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nonneg: Optional[Sequence[bool]] = None,
    n: Optional[int] = None,
) -> LPResult:
    """Minimize ``costs`` (one vector or a list of vectors, lexicographically).

    ``nonneg[j]`` marks ``x_j >= 0``; other variables are free.
    """
    if costs and not isinstance(costs[0], (list, tuple)):
        costs = [costs]
    if n is None:
        n = len(costs[0]) if costs else (len(A_ub[0]) if A_ub else len(A_eq[0]))
    if nonneg is None:
        nonneg = [False] * n

    # structural columns: x_j = col+ - col-
    colmap = []
    ncol = 0
    for j in range(n):
        if nonneg[j]:
            colmap.append((ncol, None))
            ncol += 1
        else:
            colmap.append((ncol, ncol + 1))
            ncol += 2
    n_struct = ncol
    m_ub, m_eq = len(A_ub), len(A_eq)
    n_slack = m_ub
    width_pre = n_struct + n_slack

    rows, rhs, basis, needs_art = [], [], [], []
    for i in range(m_ub + m_eq):
        src, b = (A_ub[i], b_ub[i]) if i < m_ub else (A_eq[i - m_ub], b_eq[i - m_ub])
        row = [mpq(0)] * width_pre
        for j, v in enumerate(src):
            if v:
                v = mpq(v)
                pc, nc = colmap[j]
                row[pc] = v
                if nc is not None:
                    row[nc] = -v
        if i < m_ub:
            row[n_struct + i] = mpq(1)
        b = mpq(b)
        if b < 0:
            row = [-v for v in row]
            b = -b
        rows.append(row)
        rhs.append(b)
        if i < m_ub and row[n_struct + i] == 1:
            basis.append(n_struct + i)
            needs_art.append(False)
        else:
            basis.append(-1)
            needs_art.append(True)

    n_art = sum(needs_art)
    ncols = width_pre + n_art
    a = width_pre
    for i, row in enumerate(rows):
        row.extend([mpq(0)] * n_art)
        if needs_art[i]:
            row[a] = mpq(1)
            basis[i] = a
            a += 1
    tab = _Tableau(rows, rhs, basis, ncols)

    if n_art:
        cost1 = [mpq(0)] * width_pre + [mpq(1)] * n_art
        obj = tab.reduced(cost1)
        tab.run(obj)
        if -obj[-1] > 0:
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis
        i = 0
        while i < len(tab.T):
            if tab.basis[i] >= width_pre:
                j = next((k for k in range(width_pre) if tab.T[i][k] != 0), None)
                if j is None:
                    del tab.T[i]
                    del tab.rhs[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, j, [mpq(0)] * (ncols + 1))
            i += 1
        for k in range(width_pre, ncols):
            tab.frozen[k] = True

    values = []
    for c in costs:
        full = [mpq(0)] * ncols
        for j, v in enumerate(c):
            if v:
                v = mpq(v)
                pc, nc = colmap[j]
                full[pc] = v
                if nc is not None:
                    full[nc] = -v
        obj = tab.reduced(full)
        status = tab.run(obj)
        if status == UNBOUNDED:
            return LPResult(UNBOUNDED)
        values.append(_fr(-obj[-1]))
        for k in range(ncols):
            if obj[k] > 0:
                tab.frozen[k] = True

    colval = [mpq(0)] * ncols
    for i, b in enumerate(tab.basis):
        colval[b] = tab.rhs[i]
    x = []
    for pc, nc in colmap:
        v = colval[pc] - (colval[nc] if nc is not None else 0)
        x.append(_fr(v))
    return LPResult(OPTIMAL, tuple(x), tuple(values))
