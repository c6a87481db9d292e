#!/usr/bin/env python3
"""
Fourier–Motzkin Elimination

Projects an HCone onto a subset of its coordinates. Equalities substitute
coordinates away first; the remaining coordinates are eliminated one at a time,
always picking the coordinate with the fewest new row pairs. Černikov's rule
prunes combinations with too many ancestors, and an exact redundancy sweep runs
every `stride` eliminations.
"""

from math import gcd
from typing import Dict, Iterable, List, Optional, Set, Tuple

from loguru import logger
from ratgeo.cone import GeometryError, HCone
from ratgeo.rational import IntRow, is_zero, primitive
from ratgeo.redundancy import remove_redundant
from settings import settings


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _drop(row: IntRow, position: int) -> IntRow:
    return row[:position] + row[position + 1 :]


def _combine(p: IntRow, n: IntRow, position: int) -> IntRow:
    """Positive combination of p (coefficient > 0) and n (< 0) cancelling `position`."""
    a, b = p[position], -n[position]
    g = gcd(a, b)
    fp, fn = b // g, a // g
    return primitive([fp * x + fn * y for x, y in zip(p, n)])


def _substitute(
    equalities: List[IntRow],
    inequalities: List[IntRow],
    active: List[int],
    targets: Set[int],
) -> Tuple[List[IntRow], List[IntRow], List[int], Set[int]]:
    """
    Use equalities to solve for target coordinates and drop those columns.

    Returns:
        (equalities, inequalities, active columns, coordinates substituted away)
    """
    done: Set[int] = set()
    while True:
        choice = None
        for e_idx, eq in enumerate(equalities):
            pos = next(
                (p for p, c in enumerate(active) if c in targets and eq[p] != 0), None
            )
            if pos is not None:
                choice = (e_idx, pos)
                break
        if choice is None:
            return equalities, inequalities, active, done
        e_idx, pos = choice
        eq = equalities.pop(e_idx)
        coef = eq[pos]
        sign = 1 if coef > 0 else -1

        def eliminate(row: IntRow) -> IntRow:
            if row[pos] == 0:
                return _drop(row, pos)
            mixed = [abs(coef) * x - sign * row[pos] * y for x, y in zip(row, eq)]
            return _drop(primitive(mixed), pos)

        equalities = [r for r in (eliminate(r) for r in equalities) if not is_zero(r)]
        inequalities = [
            r for r in (eliminate(r) for r in inequalities) if not is_zero(r)
        ]
        done.add(active[pos])
        logger.debug(f"Substituted coordinate {active[pos]} using an equality")
        active = active[:pos] + active[pos + 1 :]


def _choose(rows: Iterable[IntRow], active: List[int], targets: Set[int]) -> int:
    best_pos, best_cost = -1, -1
    row_list = list(rows)
    for pos, coordinate in enumerate(active):
        if coordinate not in targets:
            continue
        positive = sum(1 for r in row_list if r[pos] > 0)
        negative = sum(1 for r in row_list if r[pos] < 0)
        cost = positive * negative
        if best_pos < 0 or cost < best_cost:
            best_pos, best_cost = pos, cost
    return best_pos


def fm_eliminate(
    cone: HCone,
    coords: Iterable[int],
    stride: Optional[int] = None,
    workers: Optional[int] = None,
) -> HCone:
    """
    Orthogonal projection of a cone that removes the given coordinates.

    Args:
        cone: Input cone
        coords: Coordinate indices to eliminate
        stride: Eliminations between exact redundancy sweeps (0 disables
            intermediate sweeps; defaults to settings.REDUNDANCY_STRIDE)
        workers: Worker processes for the redundancy LPs

    Returns:
        Irredundant canonical cone over the remaining coordinates, in their
        original order

    Raises:
        GeometryError: If a coordinate is out of range or nothing would remain
    """
    targets = set(coords)
    stride = settings.REDUNDANCY_STRIDE if stride is None else stride
    for c in targets:
        if not 0 <= c < cone.dim:
            raise GeometryError(f"Coordinate {c} outside 0..{cone.dim - 1}")
    if len(targets) >= cone.dim:
        raise GeometryError("Elimination would leave a cone of dimension 0")

    equalities, inequalities = cone.integer_rows()
    active = list(range(cone.dim))
    ancestors: List[int] = [1 << i for i in range(len(inequalities))]
    step = 0
    since_sweep = 0
    logger.info(
        f"FM elimination of {len(targets)} coordinates from a "
        f"{cone.dim}-dimensional cone with {cone.n_rows} rows"
    )

    while targets:
        equalities, inequalities, active, substituted = _substitute(
            equalities, inequalities, active, targets
        )
        if substituted:
            targets -= substituted
            ancestors = [1 << i for i in range(len(inequalities))]
            step = 0
            continue

        pos = _choose(inequalities, active, targets)
        coordinate = active[pos]
        step += 1
        since_sweep += 1
        positive, negative = [], []
        survivors: Dict[IntRow, int] = {}
        for row, anc in zip(inequalities, ancestors):
            if row[pos] > 0:
                positive.append((row, anc))
            elif row[pos] < 0:
                negative.append((row, anc))
            else:
                survivors[_drop(row, pos)] = anc
        pruned = 0
        for p_row, p_anc in positive:
            for n_row, n_anc in negative:
                anc = p_anc | n_anc
                if _popcount(anc) > step + 1:
                    pruned += 1
                    continue
                new = _drop(_combine(p_row, n_row, pos), pos)
                if is_zero(new):
                    continue
                previous = survivors.get(new)
                if previous is None or _popcount(anc) < _popcount(previous):
                    survivors[new] = anc
        equalities = [_drop(r, pos) for r in equalities]
        inequalities = list(survivors.keys())
        ancestors = list(survivors.values())
        active = active[:pos] + active[pos + 1 :]
        targets.discard(coordinate)
        logger.debug(
            f"Eliminated coordinate {coordinate}: "
            f"{len(positive)}x{len(negative)} pairs, "
            f"{pruned} pruned, {len(inequalities)} rows"
        )

        if stride and since_sweep >= stride and targets:
            swept = remove_redundant(
                HCone(len(active), equalities, inequalities), workers=workers
            )
            equalities, inequalities = swept.integer_rows()
            ancestors = [1 << i for i in range(len(inequalities))]
            step = 0
            since_sweep = 0
            logger.info(
                f"Redundancy sweep: {len(inequalities)} inequalities, "
                f"{len(equalities)} equalities, {len(targets)} coordinates left"
            )

    projected = HCone(len(active), equalities, inequalities)
    return remove_redundant(projected, workers=workers)
