#!/usr/bin/env python3
"""
Golden Reproduction

Recomputes the cones a cataloged scenario expects and compares canonical
forms with the shipped tables. Each expectation yields one report line:

    PASS outer: 16 inequalities, 0 equalities
    FAIL inner: 2 rays missing, 1 unexpected
    PASS strategies: 7/7 rays verified (certified)
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from entspace.shannon import shannon_rows
from loguru import logger
from pipeline.builders import (
    LATENT_RANK,
    inner_marginal_classical,
    nonshannon_exprs,
    outer_marginal_classical,
    outer_marginal_quantum,
    project,
)
from pipeline.catalog import CatalogError, Scenario
from pipeline.lines import pn_coords
from pipeline.marginal import align_hcone, align_vcone, coords_of
from pipeline.triangle import strict_inclusion_witness
from ratgeo.cone import HCone, VCone
from ratgeo.double_description import h_to_v
from ratgeo.redundancy import remove_redundant


@dataclass
class ItemResult:
    """Outcome of one golden expectation."""

    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.detail}" if self.detail else status


@dataclass
class ReproductionReport:
    scenario: str
    items: List[ItemResult] = field(default_factory=list)
    details: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(item.ok for item in self.items)

    def lines(self) -> List[str]:
        return [item.line() for item in self.items] + self.details

    def summary(self) -> str:
        good = sum(1 for item in self.items if item.ok)
        verdict = "reproduced" if self.passed else "MISMATCH"
        return f"{self.scenario}: {good}/{len(self.items)} expectations {verdict}"


def cones_match(computed: HCone, golden: HCone) -> Tuple[bool, str]:
    """
    Compare two labelled cones as sets.

    The golden cone may hold redundant rows and any coordinate order.
    """
    target = coords_of(computed)
    aligned = remove_redundant(align_hcone(golden, coords_of(golden), target))
    ours = remove_redundant(computed)
    if aligned == ours:
        return True, (
            f"{len(ours.inequalities)} inequalities, {len(ours.equalities)} equalities"
        )
    missing = set(aligned.inequalities) - set(ours.inequalities)
    extra = set(ours.inequalities) - set(aligned.inequalities)
    detail = f"{len(missing)} rows missing, {len(extra)} unexpected"
    if aligned.equalities != ours.equalities:
        detail += (
            f", equalities differ ({len(ours.equalities)} vs "
            f"{len(aligned.equalities)})"
        )
    return False, detail


def rays_match(computed: VCone, golden: VCone) -> Tuple[bool, str]:
    """Compare ray sets after aligning the golden table to the computed order."""
    aligned = align_vcone(golden, coords_of(golden), coords_of(computed)).canonical()
    ours = computed.canonical()
    if set(aligned.rays) == set(ours.rays):
        return True, f"{len(ours.rays)} rays"
    missing = set(aligned.rays) - set(ours.rays)
    extra = set(ours.rays) - set(aligned.rays)
    return False, f"{len(missing)} rays missing, {len(extra)} unexpected"


class _Builds:
    """Lazily computed cones of one scenario, shared between expectations."""

    def __init__(
        self, scenario: Scenario, stride: Optional[int], workers: Optional[int]
    ):
        self.scenario = scenario
        self.stride = stride
        self.workers = workers
        self._cache: Dict[str, HCone] = {}

    def get(self, key: str) -> HCone:
        if key not in self._cache:
            builders: Dict[str, Callable[[], HCone]] = {
                "outer": lambda: self._outer(False),
                "outer_rays": lambda: self.get("outer"),
                "nonshannon": lambda: self._outer(True),
                "inner": self._inner,
            }
            if key not in builders:
                raise CatalogError(f"No computation for expectation '{key}'")
            logger.info(f"{self.scenario.name}: computing {key} cone")
            self._cache[key] = builders[key]()
        return self._cache[key]

    def _outer(self, with_nonshannon: bool) -> HCone:
        structure = self.scenario.structure
        extra = (
            nonshannon_exprs(structure, self.scenario.nonshannon)
            if with_nonshannon
            else []
        )
        if structure.is_classical():
            return outer_marginal_classical(
                structure, self.scenario.family, extra, self.stride, self.workers
            )
        return outer_marginal_quantum(
            structure,
            self.scenario.family,
            extra=extra,
            stride=self.stride,
            workers=self.workers,
        )

    def _inner(self) -> HCone:
        return inner_marginal_classical(
            self.scenario.structure,
            self.scenario.inner_mode or LATENT_RANK,
            self.scenario.family,
            stride=self.stride,
            workers=self.workers,
        )


def _compare(computed: HCone, golden: object) -> Tuple[bool, str]:
    if isinstance(golden, HCone):
        return cones_match(computed, golden)
    if isinstance(golden, VCone):
        return rays_match(h_to_v(computed), golden)
    raise CatalogError(f"Cannot compare a cone with {type(golden).__name__}")


def _reduced_items(scenario: Scenario, builds: _Builds) -> List[ItemResult]:
    reduced: HCone = scenario.golden("reduced")
    outer = builds.get("outer")
    n = len(scenario.structure.observed_nodes())
    projected = project(outer, coords_of(outer), pn_coords(n), builds.stride)
    ok, detail = cones_match(projected, reduced)
    items = [ItemResult("reduced", ok, detail)]
    count = scenario.expected.get("reduced_ray_count")
    if count is not None:
        rays = len(h_to_v(reduced).rays)
        items.append(
            ItemResult("reduced_ray_count", rays == count, f"{rays} (expected {count})")
        )
    return items


def reproduce(
    scenario: Scenario,
    tol: Optional[float] = None,
    stride: Optional[int] = None,
    workers: Optional[int] = None,
) -> ReproductionReport:
    """
    Check every golden expectation of a scenario.

    Raises:
        CatalogError: If the scenario carries no golden data
    """
    if not scenario.expected:
        raise CatalogError(f"Scenario '{scenario.name}' has no golden data")
    report = ReproductionReport(scenario.name)
    builds = _Builds(scenario, stride, workers)

    for key, golden in scenario.expected.items():
        if key == "reduced_ray_count":
            continue
        if key == "reduced":
            report.items.extend(_reduced_items(scenario, builds))
        elif key == "glued_ray_count":
            rays = len(h_to_v(scenario.glued_cone()).rays)
            report.items.append(
                ItemResult(key, rays == golden, f"{rays} rays (expected {golden})")
            )
        else:
            ok, detail = _compare(builds.get(key), golden)
            report.items.append(ItemResult(key, ok, detail))

    if scenario.strategies and scenario.verify:
        verification = scenario.verify_strategies(tol)
        report.items.append(
            ItemResult("strategies", verification.certified, verification.summary())
        )
        report.details.extend(verification.lines())

    if scenario.witness:
        inner = builds.get("inner")
        coords = coords_of(inner)
        outer = HCone(coords.dim, (), shannon_rows(coords), label=coords)
        found = strict_inclusion_witness(inner, outer, tol=tol)
        detail = f"{found[0].name} lies outside the inner cone" if found else "none"
        report.items.append(ItemResult("witness", found is not None, detail))

    logger.info(report.summary())
    return report
