#!/usr/bin/env python3
"""
Triangle Searches

The classical triangle C3: X, Y, Z observed, each pair sharing one latent
source (A between Y and Z, B between X and Z, C between X and Y). Its
latent-rank inner cone only adds -I(X:Y:Z) >= 0 to Shannon, so any
distribution with positive interaction information certifies that the inner
cone is strictly smaller than the true marginal cone.
"""

from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from causal.structure import CausalStructure
from entspace.coords import CoordSystem, EntropyVector
from entspace.distribution import (
    JointDistribution,
    entropy_vector,
    interaction_information,
)
from entspace.strategy import Expr, Strategy, ref, strategy_eval
from loguru import logger
from pipeline.marginal import coords_of
from ratgeo.cone import HCone
from ratgeo.membership import contains_point
from settings import settings

TRIANGLE_OBSERVED = ("X", "Y", "Z")

# Truth table index t encodes f(u, v) = bit (2u + v) of t.
_TABLES = range(16)


def triangle_structure(name: str = "C3") -> CausalStructure:
    """The classical triangle with latent A, B, C."""
    return CausalStructure.build(
        observed=TRIANGLE_OBSERVED,
        latent=("A", "B", "C"),
        edges=[
            ("A", "Y"),
            ("A", "Z"),
            ("B", "X"),
            ("B", "Z"),
            ("C", "X"),
            ("C", "Y"),
        ],
        name=name,
    )


def _apply(table: int, u: int, v: int) -> int:
    return (table >> (2 * u + v)) & 1


def two_to_one_distribution(f: int, g: int, h: int) -> JointDistribution:
    """
    X = f(B, C), Y = g(A, C), Z = h(A, B) on three uniform bits.

    Args:
        f, g, h: Truth tables in 0..15
    """
    pmf: Dict[Tuple[int, int, int], Fraction] = {}
    for a, b, c in product((0, 1), repeat=3):
        outcome = (_apply(f, b, c), _apply(g, a, c), _apply(h, a, b))
        pmf[outcome] = pmf.get(outcome, Fraction(0)) + Fraction(1, 8)
    return JointDistribution(TRIANGLE_OBSERVED, pmf)


def enumerate_two_to_one(tol: Optional[float] = None) -> List[EntropyVector]:
    """
    Entropy vectors of all 16^3 two-bit-to-one-bit triples that violate
    -I(X:Y:Z) >= 0, deduplicated.

    Returns:
        Distinct violating vectors in order of first appearance
    """
    tol = settings.TOLERANCE if tol is None else tol
    coords = CoordSystem.full(TRIANGLE_OBSERVED)
    cache: Dict[Tuple[object, ...], EntropyVector] = {}
    found: Dict[Tuple[float, ...], EntropyVector] = {}
    for f, g, h in product(_TABLES, repeat=3):
        dist = two_to_one_distribution(f, g, h)
        key = tuple(sorted(dist.pmf.items()))
        if key not in cache:
            cache[key] = entropy_vector(dist, coords)
        vector = cache[key]
        if interaction_information(vector) <= tol:
            continue
        found.setdefault(tuple(round(x, 9) for x in vector.values), vector)
    logger.info(
        f"Two-to-one search: {len(cache)} distinct distributions, "
        f"{len(found)} vectors with positive interaction information"
    )
    return list(found.values())


def _and(*args: Expr) -> Expr:
    return Expr("and", tuple(args))


def _or(*args: Expr) -> Expr:
    return Expr("or", tuple(args))


def and_or_strategy() -> Strategy:
    """X = B AND C, Y = A AND C, Z = A OR B; I(X:Y:Z) is about 0.04 bits."""
    strategy = Strategy(name="triangle-and-or")
    for source in ("A", "B", "C"):
        strategy.add_source(source)
    strategy.define("X", _and(ref("B"), ref("C")))
    strategy.define("Y", _and(ref("A"), ref("C")))
    strategy.define("Z", _or(ref("A"), ref("B")))
    return strategy


def strict_inclusion_witness(
    inner: HCone,
    outer: HCone,
    candidates: Optional[Sequence[Strategy]] = None,
    tol: Optional[float] = None,
) -> Optional[Tuple[Strategy, EntropyVector]]:
    """
    First candidate strategy inside the outer cone but outside the inner one.

    Args:
        inner: Inner approximation, labelled with its coordinates
        outer: Outer approximation over the same coordinates
        candidates: Strategies to try (default: the AND/OR triangle strategy)
        tol: Membership tolerance

    Returns:
        (strategy, vector) or None when every candidate is inside the inner cone
    """
    tol = settings.TOLERANCE if tol is None else tol
    coords = coords_of(inner)
    candidates = list(candidates) if candidates is not None else [and_or_strategy()]
    for strategy in candidates:
        vector = entropy_vector(strategy_eval(strategy), coords)
        if not contains_point(outer, vector.values, tol):
            logger.warning(f"{strategy.name} lies outside the outer cone")
            continue
        report = contains_point(inner, vector.values, tol)
        if not report:
            logger.info(f"{strategy.name} separates the cones: {report.describe()}")
            return strategy, vector
    return None
