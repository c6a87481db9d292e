#!/usr/bin/env python3
"""
Ray Achievability

Checks that extremal rays of a computed cone are hit by entropy vectors of
concrete strategies, which certifies a cone as an inner approximation.
Reports are line oriented:

    RAY 1 OK strategy=triangle-inner-1
    RAY 2 PENDING
    RAY 3 FAIL strategy=s3 residual=0.5
"""

from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence, Tuple

import numpy as np
from entspace.coords import CoordSystem
from entspace.distribution import DistributionError, entropy_vector
from entspace.strategy import Strategy, StrategyError, strategy_eval
from loguru import logger
from pipeline.marginal import coords_of
from ratgeo.cone import VCone
from ratgeo.rational import Number
from settings import settings

OK = "OK"
FAIL = "FAIL"
PENDING = "PENDING"


class VerificationError(Exception):
    """Exception raised when rays and strategies cannot be paired up."""

    pass


@dataclass
class RayCheck:
    """Outcome for one ray (1-based index)."""

    index: int
    status: str
    strategy: Optional[str] = None
    detail: str = ""

    def line(self) -> str:
        text = f"RAY {self.index} {self.status}"
        if self.strategy:
            text += f" strategy={self.strategy}"
        if self.detail:
            text += f" {self.detail}"
        return text


@dataclass
class VerificationReport:
    checks: List[RayCheck] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        """Every ray has a passing strategy."""
        return all(c.status == OK for c in self.checks)

    @property
    def pending(self) -> List[int]:
        return [c.index for c in self.checks if c.status == PENDING]

    @property
    def failed(self) -> List[int]:
        return [c.index for c in self.checks if c.status == FAIL]

    @property
    def passed(self) -> int:
        return sum(1 for c in self.checks if c.status == OK)

    def lines(self) -> List[str]:
        return [c.line() for c in self.checks]

    def summary(self) -> str:
        state = "certified" if self.certified else "achievability pending"
        return f"{self.passed}/{len(self.checks)} rays verified ({state})"


def vector_on_ray(
    vector: Sequence[float], ray: Sequence[Number], tol: Optional[float] = None
) -> Tuple[bool, float]:
    """
    Whether a vector is a positive multiple of a ray.

    Returns:
        (on_ray, residual) where residual is the largest deviation from the
        best multiple t·ray, t = v·r / r·r
    """
    tol = settings.TOLERANCE if tol is None else tol
    v = np.asarray(vector, dtype=float)
    r = np.asarray([float(x) for x in ray], dtype=float)
    scale = float(r @ r)
    if scale == 0.0:
        return False, float(np.max(np.abs(v))) if v.size else 0.0
    t = float(v @ r) / scale
    residual = float(np.max(np.abs(v - t * r)))
    bound = tol * max(1.0, float(np.max(np.abs(v))))
    return t > tol and residual <= bound, residual


def strategy_vector(
    strategy: Strategy,
    coords: CoordSystem,
    aliases: Optional[Mapping[str, str]] = None,
) -> List[float]:
    """
    Entropy vector of a strategy on a coordinate system.

    Args:
        strategy: Strategy whose observed variables cover the coordinates
        coords: Target coordinates
        aliases: Strategy variable -> coordinate variable renaming, for names
            a strategy cannot spell (e.g. post-selected copies `X|A=0`)
    """
    dist = strategy_eval(strategy)
    if aliases:
        dist = dist.relabel(dict(aliases))
    return list(entropy_vector(dist, coords).values)


def verify_rays_achievable(
    rays: VCone,
    strategies: Sequence[Optional[Strategy]],
    coords: Optional[CoordSystem] = None,
    aliases: Optional[Mapping[str, str]] = None,
    tol: Optional[float] = None,
) -> VerificationReport:
    """
    Check one strategy per ray.

    Args:
        rays: Extremal rays, labelled with their coordinates unless coords is given
        strategies: Strategy for each ray in order; None marks the ray pending
        coords: Coordinates of the rays
        aliases: Strategy variable renaming applied before evaluation
        tol: Proportionality tolerance (default settings.TOLERANCE)

    Raises:
        VerificationError: If the counts differ
    """
    if len(strategies) != len(rays.rays):
        raise VerificationError(
            f"{len(rays.rays)} rays but {len(strategies)} strategies were supplied"
        )
    coords = coords if coords is not None else coords_of(rays)
    checks: List[RayCheck] = []
    for index, (ray, strategy) in enumerate(zip(rays.rays, strategies), start=1):
        if strategy is None:
            checks.append(RayCheck(index, PENDING))
            continue
        try:
            vector = strategy_vector(strategy, coords, aliases)
        except (StrategyError, DistributionError) as e:
            checks.append(RayCheck(index, FAIL, strategy.name, f"error={e}"))
            continue
        on_ray, residual = vector_on_ray(vector, ray, tol)
        if on_ray:
            checks.append(RayCheck(index, OK, strategy.name))
        else:
            detail = f"residual={residual:.3g}"
            checks.append(RayCheck(index, FAIL, strategy.name, detail))
    report = VerificationReport(checks)
    logger.info(f"Ray verification: {report.summary()}")
    return report


def match_strategies(
    rays: VCone,
    strategies: Sequence[Strategy],
    coords: Optional[CoordSystem] = None,
    aliases: Optional[Mapping[str, str]] = None,
    tol: Optional[float] = None,
) -> List[Optional[Strategy]]:
    """
    Pair unordered strategies with the rays they lie on.

    Each strategy is used at most once; rays without a match get None.
    """
    coords = coords if coords is not None else coords_of(rays)
    vectors = []
    for strategy in strategies:
        try:
            vectors.append(strategy_vector(strategy, coords, aliases))
        except (StrategyError, DistributionError) as e:
            logger.warning(f"Skipping strategy {strategy.name}: {e}")
            vectors.append(None)
    used = set()
    matched: List[Optional[Strategy]] = []
    for ray in rays.rays:
        found = None
        for j, vector in enumerate(vectors):
            if j in used or vector is None:
                continue
            if vector_on_ray(vector, ray, tol)[0]:
                found = j
                break
        if found is None:
            matched.append(None)
        else:
            used.add(found)
            matched.append(strategies[found])
    logger.debug(
        f"Matched {sum(m is not None for m in matched)} of {len(rays.rays)} rays "
        f"with {len(strategies)} strategies"
    )
    return matched
