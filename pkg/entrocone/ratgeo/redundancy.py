#!/usr/bin/env python3
"""
Redundancy Removal

Reduces an HCone to its irredundant canonical form. Work happens in the
coordinates of the equality null space, where the cone is full-dimensional
once implicit equalities have been promoted. Each decision is proposed by a
float LP (scipy HiGHS) and then certified exactly:

- irredundant row: a rational point satisfying every other row and violating it
- redundant row: nonnegative rational multipliers expressing it through the others
- implicit equalities: a positive combination of them summing to zero

Whenever a certificate fails the decision is recomputed with the exact simplex.
"""

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
from loguru import logger
from ratgeo.cone import DimensionMismatchError, HCone, canonical_equalities
from ratgeo.lp import solve_lp
from ratgeo.rational import (
    IntRow,
    Number,
    independent_rows,
    int_dot,
    is_zero,
    nullspace,
    primitive,
    rationalize,
    solve,
)
from scipy.optimize import linprog, nnls
from settings import settings

_PARALLEL_MIN_ROWS = 48


def reduced_rows(
    inequalities: Sequence[IntRow], basis: Sequence[IntRow]
) -> List[IntRow]:
    """Express each inequality in the coordinates of a null-space basis."""
    return [primitive([int_dot(row, b) for b in basis]) for row in inequalities]


def _rationalize_vector(values: Sequence[float]) -> List[Fraction]:
    return [rationalize(float(v), settings.RATIONALIZE_DENOMINATOR) for v in values]


def _exact_interior(rows: Sequence[IntRow], k: int) -> Tuple[Set[int], List[Fraction]]:
    """
    Exact implicit-equality detection.

    Maximises Σ t_i subject to rows·y ≥ t, 0 ≤ t ≤ 1. At the optimum t_i = 1 on
    every row that is strictly positive somewhere on the cone and 0 on the
    implicit equalities.
    """
    m = len(rows)
    n = k + m
    objective = [0] * k + [-1] * m
    a_ub: List[List[int]] = []
    b_ub: List[int] = []
    for i, row in enumerate(rows):
        # −row·y + t_i ≤ 0
        a_ub.append([-v for v in row] + [1 if j == i else 0 for j in range(m)])
        b_ub.append(0)
    for i in range(m):
        a_ub.append([0] * k + [1 if j == i else 0 for j in range(m)])
        b_ub.append(1)
    result = solve_lp(objective, a_ub, b_ub, free=[True] * k + [False] * m)
    assert result.x is not None
    t = result.x[k:]
    implicit = {i for i in range(m) if t[i] == 0}
    return implicit, result.x[:k]


def _float_interior(
    rows: Sequence[IntRow], k: int
) -> Optional[Tuple[Set[int], List[Fraction]]]:
    """Float proposal for implicit equalities plus an exact interior point, or None."""
    m = len(rows)
    b = np.array(rows, dtype=float)
    c = np.concatenate([np.zeros(k), -np.ones(m)])
    a_ub = np.hstack([-b, np.eye(m)])
    bounds = [(None, None)] * k + [(0.0, 1.0)] * m
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), bounds=bounds, method="highs")
    if res.status != 0:
        return None
    t = res.x[k:]
    implicit = {i for i in range(m) if t[i] < 0.5}

    if implicit and not _certify_implicit([rows[i] for i in sorted(implicit)], k):
        return None

    # Interior point inside the subspace cut out by the implicit rows.
    sub_basis = nullspace([rows[i] for i in sorted(implicit)], k) if implicit else [
        tuple(1 if i == j else 0 for j in range(k)) for i in range(k)
    ]
    others = [i for i in range(m) if i not in implicit]
    if not others:
        return implicit, [Fraction(0)] * k
    if not sub_basis:
        return None
    projected = np.array(
        [[int_dot(rows[i], v) for v in sub_basis] for i in others], dtype=float
    )
    p = len(sub_basis)
    res = linprog(
        np.zeros(p),
        A_ub=-projected,
        b_ub=-np.ones(len(others)),
        bounds=[(None, None)] * p,
        method="highs",
    )
    if res.status != 0:
        return None
    z = _rationalize_vector(res.x)
    y = [sum((z[j] * sub_basis[j][i] for j in range(p)), Fraction(0)) for i in range(k)]
    if all(sum((r * v for r, v in zip(rows[i], y)), Fraction(0)) > 0 for i in others):
        return implicit, y
    return None


def _certify_implicit(rows: Sequence[IntRow], k: int) -> bool:
    """Check exactly that some λ ≥ 1 gives Σ λ_j rows_j = 0."""
    m = len(rows)
    # μ = λ − 1 ≥ 0:  Σ μ_j rows_j = −Σ rows_j
    a_eq = [[rows[j][i] for j in range(m)] for i in range(k)]
    b_eq = [-sum(rows[j][i] for j in range(m)) for i in range(k)]
    return solve_lp([0] * m, a_eq=a_eq, b_eq=b_eq).feasible


def find_interior(rows: Sequence[IntRow], k: int) -> Tuple[Set[int], List[Fraction]]:
    """
    Split rows into implicit equalities and genuine inequalities.

    Returns:
        (indices of implicit equalities, exact point strictly inside every other row)
    """
    if settings.FLOAT_PRESCREEN:
        proposal = _float_interior(rows, k)
        if proposal is not None:
            return proposal
        logger.warning("Float interior point not certified, solving exactly")
    return _exact_interior(rows, k)


def _exact_redundant(rows: Sequence[IntRow], i: int) -> bool:
    """min row_i·y s.t. row_j·y ≥ 0 (j≠i), row_i·y ≥ −1; redundant iff optimum is 0."""
    k = len(rows[i])
    a_ub = [[-v for v in row] for j, row in enumerate(rows) if j != i]
    b_ub: List[int] = [0] * len(a_ub)
    a_ub.append([-v for v in rows[i]])
    b_ub.append(1)
    result = solve_lp(list(rows[i]), a_ub, b_ub, free=[True] * k)
    return result.optimal and result.objective == 0


def _certify_redundant(rows: Sequence[IntRow], i: int) -> bool:
    others = [j for j in range(len(rows)) if j != i]
    if not others:
        return False
    mat = np.array([rows[j] for j in others], dtype=float).T
    target = np.array(rows[i], dtype=float)
    weights, _ = nnls(mat, target)
    support = [others[idx] for idx in np.argsort(-weights) if weights[idx] > 1e-12]
    if not support:
        return False
    basis = independent_rows([rows[j] for j in support], len(rows[i]))
    support = [support[idx] for idx in basis]
    lam = solve([rows[j] for j in support], rows[i])
    return lam is not None and all(v >= 0 for v in lam)


def _certify_irredundant(
    rows: Sequence[IntRow], i: int, y: Sequence[Fraction], interior: Sequence[Fraction]
) -> bool:
    s_i = sum((a * b for a, b in zip(rows[i], y)), Fraction(0))
    s_0 = sum((a * b for a, b in zip(rows[i], interior)), Fraction(0))
    if s_i >= 0:
        return False
    delta = -s_i / s_0 / 2 if s_0 > 0 else Fraction(1)
    point = [a + delta * b for a, b in zip(y, interior)]
    if sum((a * b for a, b in zip(rows[i], point)), Fraction(0)) >= 0:
        return False
    return all(
        sum((a * b for a, b in zip(row, point)), Fraction(0)) >= 0
        for j, row in enumerate(rows)
        if j != i
    )


def is_redundant(
    rows: Sequence[IntRow], i: int, interior: Optional[Sequence[Fraction]] = None
) -> bool:
    """
    Decide whether rows[i] is implied by the other rows.

    Args:
        rows: Reduced inequality rows of a full-dimensional cone, no duplicates
        i: Row under test
        interior: Exact point strictly inside every row, enables float certificates
    """
    if not settings.FLOAT_PRESCREEN or interior is None:
        return _exact_redundant(rows, i)
    k = len(rows[i])
    others = [row for j, row in enumerate(rows) if j != i]
    a_ub = np.array(
        [[-v for v in row] for row in others] + [[-v for v in rows[i]]], dtype=float
    )
    b_ub = np.concatenate([np.zeros(len(others)), np.ones(1)])
    res = linprog(
        np.array(rows[i], dtype=float),
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=[(None, None)] * k,
        method="highs",
    )
    if res.status == 0:
        if res.fun < -0.5:
            if _certify_irredundant(rows, i, _rationalize_vector(res.x), interior):
                return False
        elif _certify_redundant(rows, i):
            return True
    logger.warning(
        f"Redundancy certificate failed for row {i}, falling back to exact LP"
    )
    return _exact_redundant(rows, i)


_WORKER_ROWS: List[IntRow] = []
_WORKER_INTERIOR: List[Fraction] = []


def _init_worker(rows: List[IntRow], interior: List[Fraction]) -> None:
    global _WORKER_ROWS, _WORKER_INTERIOR
    _WORKER_ROWS = rows
    _WORKER_INTERIOR = interior


def _worker_is_redundant(i: int) -> bool:
    return is_redundant(_WORKER_ROWS, i, _WORKER_INTERIOR)


def _classify(
    rows: List[IntRow], interior: List[Fraction], workers: int
) -> List[bool]:
    if workers > 1 and len(rows) >= _PARALLEL_MIN_ROWS:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker, initargs=(rows, interior)
        ) as pool:
            return list(pool.map(_worker_is_redundant, range(len(rows)), chunksize=8))
    return [is_redundant(rows, i, interior) for i in range(len(rows))]


def remove_redundant(cone: HCone, workers: Optional[int] = None) -> HCone:
    """
    Irredundant canonical form of a cone.

    Implicit equalities are promoted to the equality block, duplicate rows
    (equal modulo the equalities) collapse, and every remaining inequality is
    certified irredundant. The result is canonical, so equal cones give equal
    outputs.

    Args:
        cone: Input cone
        workers: Process count for the per-row LPs (defaults to settings.THREADS)

    Returns:
        Canonical irredundant HCone
    """
    workers = settings.THREADS if workers is None else workers
    dim = cone.dim
    equalities = canonical_equalities(cone.equalities, dim)
    _, inequalities = cone.integer_rows()

    while True:
        basis = nullspace(equalities, dim) if equalities else [
            tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)
        ]
        k = len(basis)
        if k == 0:
            logger.debug("Cone is the origin; no inequalities survive")
            return HCone(dim, equalities, (), label=cone.label).canonical()

        unique: Dict[IntRow, int] = {}
        for idx, row in enumerate(reduced_rows(inequalities, basis)):
            if not is_zero(row) and row not in unique:
                unique[row] = idx
        rows = list(unique.keys())
        originals = [inequalities[idx] for idx in unique.values()]
        if not rows:
            return HCone(dim, equalities, (), label=cone.label).canonical()

        implicit, interior = find_interior(rows, k)
        if implicit:
            logger.debug(f"Promoting {len(implicit)} implicit equalities")
            equalities = canonical_equalities(
                list(equalities) + [originals[i] for i in sorted(implicit)], dim
            )
            inequalities = [originals[i] for i in range(len(rows)) if i not in implicit]
            continue
        break

    flags = _classify(rows, interior, workers)
    kept = [originals[i] for i, redundant in enumerate(flags) if not redundant]
    logger.debug(
        f"Redundancy removal: {len(cone.inequalities)} -> {len(kept)} inequalities, "
        f"{len(equalities)} equalities"
    )
    return HCone(dim, equalities, kept, label=cone.label).canonical()


def implies(cone: HCone, row: Sequence[Number]) -> bool:
    """
    Decide exactly whether row·v ≥ 0 holds on the whole cone.

    Args:
        cone: Cone in H-representation
        row: Candidate inequality over the same coordinates

    Returns:
        True when the inequality is a consequence of the cone's rows
    """
    if len(row) != cone.dim:
        raise DimensionMismatchError(
            f"Row has length {len(row)}, cone dimension is {cone.dim}"
        )
    reduced = remove_redundant(cone)
    dim = reduced.dim
    equalities, inequalities = reduced.integer_rows()
    basis = nullspace(equalities, dim) if equalities else [
        tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)
    ]
    if not basis:
        return True
    target = primitive([int_dot(primitive(row), b) for b in basis])
    if is_zero(target):
        return True
    rows = reduced_rows(inequalities, basis)
    if target in rows:
        return True
    if not rows:
        return False
    _, interior = find_interior(rows, len(basis))
    return is_redundant(rows + [target], len(rows), interior)
