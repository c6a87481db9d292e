#!/usr/bin/env python3
"""
Exact Linear Programming

Two-phase dense tableau simplex over fractions.Fraction with Bland's rule, so
every pivot sequence terminates and every answer is exact. Used for conic-hull
membership, for redundancy certificates the float prescreen could not settle,
and for the probabilistic-transformation feasibility program.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from loguru import logger
from ratgeo.rational import Number

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPError(Exception):
    """Exception raised for malformed linear programs."""

    pass


@dataclass
class LPResult:
    """Outcome of an exact linear program (minimisation)."""

    status: str
    x: Optional[List[Fraction]] = None
    objective: Optional[Fraction] = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _pivot(tab: List[List[Fraction]], obj: List[Fraction], row: int, col: int) -> None:
    lead = tab[row]
    piv = lead[col]
    if piv != 1:
        lead = [v / piv for v in lead]
        tab[row] = lead
    for i, other in enumerate(tab):
        if i != row and other[col]:
            f = other[col]
            tab[i] = [a - f * b for a, b in zip(other, lead)]
    if obj[col]:
        f = obj[col]
        obj[:] = [a - f * b for a, b in zip(obj, lead)]


def _run(
    tab: List[List[Fraction]],
    obj: List[Fraction],
    basis: List[int],
    allowed: Sequence[int],
) -> Tuple[str, int]:
    pivots = 0
    while True:
        enter = next((j for j in allowed if obj[j] < 0), None)
        if enter is None:
            return OPTIMAL, pivots
        best_row = -1
        best_ratio = Fraction(0)
        for i, row in enumerate(tab):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if (
                    best_row < 0
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[best_row])
                ):
                    best_row, best_ratio = i, ratio
        if best_row < 0:
            return UNBOUNDED, pivots
        _pivot(tab, obj, best_row, enter)
        basis[best_row] = enter
        pivots += 1


def solve_lp(
    objective: Sequence[Number],
    a_ub: Sequence[Sequence[Number]] = (),
    b_ub: Sequence[Number] = (),
    a_eq: Sequence[Sequence[Number]] = (),
    b_eq: Sequence[Number] = (),
    free: Optional[Sequence[bool]] = None,
) -> LPResult:
    """
    Minimise objective·x subject to a_ub x ≤ b_ub, a_eq x = b_eq.

    Variables are nonnegative unless flagged in `free`.

    Args:
        objective: Cost vector
        a_ub: Inequality rows (≤)
        b_ub: Inequality right-hand sides
        a_eq: Equality rows
        b_eq: Equality right-hand sides
        free: Per-variable flag for unrestricted sign

    Returns:
        LPResult with exact solution and objective when optimal

    Raises:
        LPError: If row lengths disagree with the objective
    """
    n = len(objective)
    if len(a_ub) != len(b_ub) or len(a_eq) != len(b_eq):
        raise LPError("Row and right-hand side counts differ")
    for row in list(a_ub) + list(a_eq):
        if len(row) != n:
            raise LPError(f"Constraint row has length {len(row)}, expected {n}")
    flags = list(free) if free is not None else [False] * n

    # Each free variable becomes x+ − x−.
    columns: List[Tuple[Tuple[int, int], ...]] = []
    width = 0
    for j in range(n):
        if flags[j]:
            columns.append(((width, 1), (width + 1, -1)))
            width += 2
        else:
            columns.append(((width, 1),))
            width += 1
    n_struct = width
    n_slack = len(a_ub)

    def expand(values: Sequence[Number]) -> List[Fraction]:
        out = [Fraction(0)] * n_struct
        for j, v in enumerate(values):
            if v:
                for col, sign in columns[j]:
                    out[col] = Fraction(v) * sign
        return out

    raw: List[Tuple[List[Fraction], Fraction, Optional[int]]] = []
    for i, (row, rhs) in enumerate(zip(a_ub, b_ub)):
        coeffs = expand(row) + [Fraction(0)] * n_slack
        coeffs[n_struct + i] = Fraction(1)
        raw.append((coeffs, Fraction(rhs), n_struct + i))
    for row, rhs in zip(a_eq, b_eq):
        raw.append((expand(row) + [Fraction(0)] * n_slack, Fraction(rhs), None))

    base_width = n_struct + n_slack
    needs_artificial = [slack is None or rhs < 0 for _, rhs, slack in raw]
    n_art = sum(needs_artificial)
    tab: List[List[Fraction]] = []
    basis: List[int] = []
    art_index = base_width
    for (coeffs, rhs, slack), needs in zip(raw, needs_artificial):
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
        art = [Fraction(0)] * n_art
        if needs:
            art[art_index - base_width] = Fraction(1)
            basis.append(art_index)
            art_index += 1
        else:
            basis.append(slack)  # type: ignore[arg-type]
        tab.append(coeffs + art + [rhs])

    total_width = base_width + n_art
    real_columns = list(range(base_width))
    pivots = 0

    if n_art:
        obj = [Fraction(0)] * (total_width + 1)
        for row, b in zip(tab, basis):
            if b >= base_width:
                obj = [o - v for o, v in zip(obj, row)]
        for j in range(base_width, total_width):
            obj[j] = Fraction(0)
        status, count = _run(tab, obj, basis, real_columns)
        pivots += count
        if obj[-1] != 0:
            return LPResult(INFEASIBLE, pivots=pivots)
        # Drive remaining artificials out of the basis, dropping dependent rows.
        keep_rows = []
        for i in range(len(tab)):
            if basis[i] < base_width:
                keep_rows.append(i)
                continue
            col = next((j for j in real_columns if tab[i][j] != 0), None)
            if col is None:
                continue
            _pivot(tab, obj, i, col)
            basis[i] = col
            keep_rows.append(i)
        tab = [tab[i] for i in keep_rows]
        basis = [basis[i] for i in keep_rows]

    cost = expand(objective) + [Fraction(0)] * (n_slack + n_art) + [Fraction(0)]
    obj = list(cost)
    for row, b in zip(tab, basis):
        if cost[b]:
            f = cost[b]
            obj = [o - f * v for o, v in zip(obj, row)]
    status, count = _run(tab, obj, basis, real_columns)
    pivots += count
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=pivots)

    values = [Fraction(0)] * total_width
    for row, b in zip(tab, basis):
        values[b] = row[-1]
    x = []
    for j in range(n):
        x.append(sum((values[col] * sign for col, sign in columns[j]), Fraction(0)))
    logger.debug(f"Exact LP solved: {len(tab)} rows, {n} variables, {pivots} pivots")
    return LPResult(OPTIMAL, x=x, objective=-obj[-1], pivots=pivots)


def is_feasible(
    a_ub: Sequence[Sequence[Number]] = (),
    b_ub: Sequence[Number] = (),
    a_eq: Sequence[Sequence[Number]] = (),
    b_eq: Sequence[Number] = (),
    n: Optional[int] = None,
    free: Optional[Sequence[bool]] = None,
) -> LPResult:
    """Feasibility program: minimise 0 over the constraints."""
    if n is None:
        rows = list(a_ub) + list(a_eq)
        if not rows:
            raise LPError("Cannot infer the number of variables from an empty system")
        n = len(rows[0])
    return solve_lp([0] * n, a_ub, b_ub, a_eq, b_eq, free=free)
