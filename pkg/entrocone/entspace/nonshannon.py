#!/usr/bin/env python3
"""
Non-Shannon and Linear-Rank Inequalities

Built-in valid inequalities for four variables (Zhang–Yeung and the two Matúš
families), the marginal families they induce on the triangle structure, and
the Ingleton inequality that bounds linearly representable entropy vectors.
All rows are "≥ 0" rows over a CoordSystem.
"""

from fractions import Fraction
from itertools import combinations, permutations
from typing import List, Sequence, Tuple

from entspace.coords import CoordSystem, EntropySpaceError
from entspace.expressions import EntropyExpr, H, mutual_info
from entspace.shannon import shannon_rows
from loguru import logger
from ratgeo.cone import HCone
from ratgeo.rational import Row

Quad = Tuple[str, str, str, str]

MARGINAL_FAMILIES = ("matus1", "matus1fam2", "matus2")


def _check_quad(quad: Sequence[str]) -> Quad:
    if len(quad) != 4 or len(set(quad)) != 4:
        raise EntropySpaceError(f"Expected four distinct variables, got {tuple(quad)}")
    return (quad[0], quad[1], quad[2], quad[3])


def ingleton_expr(quad: Sequence[str]) -> EntropyExpr:
    """I(W:X|Y) + I(W:X|Z) + I(Y:Z) − I(W:X) for the tuple (W, X; Y, Z)."""
    w, x, y, z = _check_quad(quad)
    return (
        mutual_info(w, x, y)
        + mutual_info(w, x, z)
        + mutual_info(y, z)
        - mutual_info(w, x)
    )


def zhang_yeung_expr(quad: Sequence[str]) -> EntropyExpr:
    """
    Zhang–Yeung inequality, scaled to integer coefficients.

    Written as the Ingleton expression plus the correction terms
    I(X1:X3|X2) + I(X2:X3|X1) + I(X1:X2|X3).
    """
    a, b, c, d = _check_quad(quad)
    return (
        ingleton_expr((a, b, c, d))
        + mutual_info(a, c, b)
        + mutual_info(b, c, a)
        + mutual_info(a, b, c)
    )


def matus_expr(family: int, s: int, quad: Sequence[str]) -> EntropyExpr:
    """
    Member s of one of the two Matúš families of valid inequalities.

    Args:
        family: 1 or 2
        s: Positive integer parameter
        quad: Ordered tuple (X1, X2, X3, X4)

    Raises:
        EntropySpaceError: For an unknown family or s < 1
    """
    if s < 1:
        raise EntropySpaceError(
            f"Matúš parameter s must be a positive integer, got {s}"
        )
    a, b, c, d = _check_quad(quad)
    if family == 1:
        return (
            s * ingleton_expr((a, b, c, d))
            + mutual_info(a, c, b)
            + Fraction(s * (s + 1), 2) * (mutual_info(b, c, a) + mutual_info(a, b, c))
        )
    if family == 2:
        return (
            s
            * (
                mutual_info(b, c, a)
                + 2 * mutual_info(a, b, c)
                + mutual_info(a, b, d)
                + mutual_info(c, d)
                - mutual_info(a, b)
            )
            + mutual_info(a, c, b)
            + Fraction(s * (s - 1), 2) * (mutual_info(b, d, a) + mutual_info(a, b, d))
        )
    raise EntropySpaceError(f"Unknown Matúš family {family}, expected 1 or 2")


def zhang_yeung_row(quad: Sequence[str], coords: CoordSystem) -> Row:
    """Zhang–Yeung row on the ordered tuple."""
    return zhang_yeung_expr(quad).to_row(coords)


def diamond_row(quad: Sequence[str], coords: CoordSystem) -> Row:
    """The diamond shorthand ◇_{ABCD} is the Zhang–Yeung row on (A, B, C, D)."""
    return zhang_yeung_row(quad, coords)


def matus_row(family: int, s: int, quad: Sequence[str], coords: CoordSystem) -> Row:
    return matus_expr(family, s, quad).to_row(coords)


def marginal_matus_expr(kind: str, s: int, triple: Sequence[str]) -> EntropyExpr:
    """
    Triangle-marginal family obtained from the Matúš inequalities.

    Args:
        kind: "matus1", "matus1fam2" or "matus2"
        s: Positive integer parameter
        triple: Observed variables (X, Y, Z) in the role order of the family

    Raises:
        EntropySpaceError: For an unknown kind, s < 1 or a bad triple
    """
    if s < 1:
        raise EntropySpaceError(
            f"Family parameter s must be a positive integer, got {s}"
        )
    if len(triple) != 3 or len(set(triple)) != 3:
        raise EntropySpaceError(
            f"Expected three distinct variables, got {tuple(triple)}"
        )
    x, y, z = triple
    t = Fraction(s)
    half = t * t / 2 + 3 * t / 2
    if kind == "matus1":
        return (
            -half * (H(x) + H(z))
            + (-t - 1) * H(y)
            + (half + 1) * (H(x, y) + H(y, z))
            + (t * t + 2 * t) * H(x, z)
            + (-t * t - 2 * t - 1) * H(x, y, z)
        )
    if kind == "matus1fam2":
        return (
            -(half + 2) * (H(x) + H(y) + H(z) - H(x, y))
            + (half + 1) * H(x, z)
            + (t + 2) * H(y, z)
            + (-t - 1) * H(x, y, z)
        )
    if kind == "matus2":
        return (
            -(half + 2) * (H(x) + H(z) - H(x, y))
            + (-2 * t - 2) * H(y)
            + (t * t + 2) * H(x, z)
            + (half + 1) * H(y, z)
            + (-t * t - 1) * H(x, y, z)
        )
    raise EntropySpaceError(
        f"Unknown marginal family '{kind}', expected one of {MARGINAL_FAMILIES}"
    )


def marginal_matus_rows(
    kind: str, s: int, coords: CoordSystem, triple: Sequence[str]
) -> List[Row]:
    """The family member for s under every permutation of the triple, de-duplicated."""
    rows: List[Row] = []
    for perm in permutations(triple):
        row = marginal_matus_expr(kind, s, perm).to_row(coords)
        if row not in rows:
            rows.append(row)
    return rows


def ingleton_instances(variables: Sequence[str]) -> List[Quad]:
    """
    The six inequivalent Ingleton tuples on four variables.

    The expression is symmetric under W↔X and Y↔Z, so an instance is fixed by
    the unordered pair {W, X}.
    """
    if len(variables) != 4:
        raise EntropySpaceError(
            f"Ingleton instances need four variables, got {len(variables)}"
        )
    instances = []
    for pair in combinations(variables, 2):
        rest = tuple(v for v in variables if v not in pair)
        instances.append((pair[0], pair[1], rest[0], rest[1]))
    return instances


def ingleton_rows_on_subsets(
    coords: CoordSystem, variables: Sequence[str] = ()
) -> List[Row]:
    """Ingleton rows on every four-variable subset, 6 per subset, not de-duplicated."""
    names = list(variables) or list(coords.variables)
    rows: List[Row] = []
    for subset in combinations(names, 4):
        rows.extend(ingleton_expr(q).to_row(coords) for q in ingleton_instances(subset))
    return rows


def ingleton_cone(coords: CoordSystem) -> HCone:
    """
    Linear-rank inner cone: Shannon rows plus Ingleton rows.

    For four variables this is the 28 Shannon rows and the 6 Ingleton
    instances; for five, Ingleton is imposed on each four-variable subset.

    Raises:
        EntropySpaceError: For fewer than 4 or more than 5 variables
    """
    if coords.n not in (4, 5):
        raise EntropySpaceError(
            f"Ingleton cone is supported for 4 or 5 variables, got {coords.n}"
        )
    rows = shannon_rows(coords) + ingleton_rows_on_subsets(coords)
    logger.debug(f"Ingleton cone on {coords.n} variables: {len(rows)} rows")
    return HCone(coords.dim, (), rows, label=coords)
