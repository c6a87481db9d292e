#!/usr/bin/env python3
"""
Shannon Inequalities

The elemental (Yeung) form of the Shannon cone over n variables:

    H(Ω) − H(Ω∖Xi) ≥ 0                       n monotonicity rows
    I(Xi:Xj|XK) ≥ 0,  K ⊆ Ω∖{Xi,Xj}          n(n−1)2^(n−3) submodularity rows

This set is minimal; every other Shannon inequality is a positive combination.
"""

from itertools import combinations
from typing import List, Optional, Sequence

from entspace.coords import CoordSystem, EntropySpaceError
from entspace.expressions import EntropyExpr, H, cond_entropy, mutual_info
from loguru import logger
from ratgeo.cone import HCone
from ratgeo.rational import Row


def monotonicity_exprs(variables: Sequence[str]) -> List[EntropyExpr]:
    """H(Xi | Ω∖Xi) ≥ 0 for each variable."""
    return [cond_entropy(v, [w for w in variables if w != v]) for v in variables]


def submodularity_exprs(variables: Sequence[str]) -> List[EntropyExpr]:
    """I(Xi:Xj|XK) ≥ 0 over pairs i < j and every K in the remaining variables."""
    exprs = []
    for i, j in combinations(range(len(variables)), 2):
        rest = [v for k, v in enumerate(variables) if k not in (i, j)]
        for size in range(len(rest) + 1):
            for given in combinations(rest, size):
                exprs.append(mutual_info(variables[i], variables[j], given))
    return exprs


def elemental_exprs(variables: Sequence[str]) -> List[EntropyExpr]:
    """Elemental Shannon inequalities as expressions (monotonicity first)."""
    if len(variables) == 1:
        return [H(variables[0])]
    return monotonicity_exprs(variables) + submodularity_exprs(variables)


def elemental_count(n: int) -> int:
    """n + n(n−1)2^(n−3), written to stay integral for n = 2."""
    return n + n * (n - 1) * (1 << n) // 8


def shannon_rows(
    coords: CoordSystem, variables: Optional[Sequence[str]] = None
) -> List[Row]:
    """Elemental rows over `variables` (default: all of coords.variables)."""
    names = list(variables) if variables is not None else list(coords.variables)
    return [expr.to_row(coords) for expr in elemental_exprs(names)]


def shannon_elemental(n: int, coords: Optional[CoordSystem] = None) -> HCone:
    """
    Shannon outer cone Γ_n in elemental form.

    Args:
        n: Number of variables, at least 2
        coords: Full coordinate system over n variables (default X1..Xn)

    Returns:
        HCone with n monotonicity and n(n−1)2^(n−3) submodularity rows

    Raises:
        EntropySpaceError: If n < 2 or coords does not match n
    """
    if n < 2:
        raise EntropySpaceError(f"Shannon cone needs at least 2 variables, got {n}")
    coords = coords if coords is not None else CoordSystem.standard(n)
    if coords.n != n:
        raise EntropySpaceError(
            f"Coordinate system has {coords.n} variables, expected {n}"
        )
    rows = shannon_rows(coords)
    logger.debug(f"Shannon cone on {n} variables: {len(rows)} elemental rows")
    return HCone(coords.dim, (), rows, label=coords)
