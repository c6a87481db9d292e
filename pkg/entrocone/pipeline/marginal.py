#!/usr/bin/env python3
"""
Marginal Families

The retained part of an entropy vector: a list of observed variable sets
whose nonempty subsets become the coordinates of a marginal cone. Helpers
here also move rows and rays between coordinate systems that name the same
subsets in a different order.
"""

from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from causal.structure import CausalStructure
from entspace.coords import CoordSystem
from ratgeo.cone import HCone, VCone
from ratgeo.rational import Row


class PipelineError(Exception):
    """Exception raised for cone pipeline requests that cannot be carried out."""

    pass


def copy_conditions(name: str) -> Dict[str, str]:
    """
    Conditions encoded in a post-selected copy name.

    `Y|X=0&W=1` gives {"X": "0", "W": "1"}; an ordinary name gives {}.
    """
    if "|" not in name:
        return {}
    _, _, tail = name.partition("|")
    conditions: Dict[str, str] = {}
    for part in tail.split("&"):
        node, sep, value = part.partition("=")
        if not sep or not node:
            raise PipelineError(
                f"Malformed post-selection condition '{part}' in '{name}'"
            )
        conditions[node] = value
    return conditions


@dataclass(frozen=True)
class MarginalFamily:
    """
    Variable sets kept in a marginal scenario.

    Attributes:
        variables: Variable order, fixes the coordinate order
        subsets: Maximal retained sets; every nonempty subset of each is a coordinate
    """

    variables: Tuple[str, ...]
    subsets: Tuple[Tuple[str, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "subsets", tuple(tuple(s) for s in self.subsets))
        if not self.subsets:
            raise PipelineError("A marginal family needs at least one variable set")
        for subset in self.subsets:
            if not subset:
                raise PipelineError("Marginal variable sets must be nonempty")
            unknown = [v for v in subset if v not in self.variables]
            if unknown:
                raise PipelineError(
                    f"Marginal set {subset} uses unknown variables {unknown}"
                )

    @classmethod
    def all_observed(cls, structure: CausalStructure) -> "MarginalFamily":
        observed = tuple(structure.observed_nodes())
        if not observed:
            raise PipelineError(f"{structure.label} has no observed nodes")
        return cls(observed, (observed,))

    @classmethod
    def from_subsets(
        cls, subsets: Sequence[Sequence[str]], variables: Sequence[str] = ()
    ) -> "MarginalFamily":
        """Family from explicit sets; variables default to first appearance order."""
        names: List[str] = list(variables)
        for subset in subsets:
            for name in subset:
                if name not in names:
                    names.append(name)
        return cls(tuple(names), tuple(tuple(s) for s in subsets))

    @classmethod
    def postselected(cls, structure: CausalStructure) -> "MarginalFamily":
        """
        Jointly observable sets of a post-selected structure.

        For every combination of conditioned values, the observed nodes whose
        copy conditions agree with it form one set. Bell post-selected on A
        and B gives the four pairs (X|A=a, Y|B=b).
        """
        observed = structure.observed_nodes()
        conditions = {node: copy_conditions(node) for node in observed}
        values: Dict[str, List[str]] = {}
        for cond in conditions.values():
            for node, value in cond.items():
                seen = values.setdefault(node, [])
                if value not in seen:
                    seen.append(value)
        if not values:
            return cls.all_observed(structure)
        conditioned = list(values)
        subsets: List[Tuple[str, ...]] = []
        for assignment in product(*(values[c] for c in conditioned)):
            chosen = dict(zip(conditioned, assignment))
            subset = tuple(
                node
                for node in observed
                if all(chosen[c] == v for c, v in conditions[node].items())
            )
            if subset and subset not in subsets:
                subsets.append(subset)
        return cls(tuple(observed), tuple(subsets))

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] = ()) -> "MarginalFamily":
        """Parse `X,Y;Y,Z`: sets separated by semicolons, names by commas."""
        subsets = [
            tuple(name.strip() for name in part.split(",") if name.strip())
            for part in text.split(";")
            if part.strip()
        ]
        if not subsets:
            raise PipelineError(f"Empty marginal family '{text}'")
        return cls.from_subsets(subsets, variables)

    def validate(self, structure: CausalStructure) -> None:
        """
        Raises:
            PipelineError: If a retained variable is not an observed node
        """
        observed = set(structure.observed_nodes())
        foreign = [v for s in self.subsets for v in s if v not in observed]
        if foreign:
            raise PipelineError(
                f"Marginal family uses {sorted(set(foreign))}, which are not observed "
                f"nodes of {structure.label}"
            )

    def coords(self) -> CoordSystem:
        return CoordSystem.from_families(self.variables, self.subsets)

    def __str__(self) -> str:
        return ";".join(",".join(s) for s in self.subsets)


def column_order(source: CoordSystem, target: CoordSystem) -> List[int]:
    """
    Source position of every target coordinate, matched by subset names.

    Raises:
        PipelineError: If a target subset is not a source coordinate
    """
    where = {frozenset(names): i for i, names in enumerate(source.subset_names())}
    order = []
    for names in target.subset_names():
        try:
            order.append(where[frozenset(names)])
        except KeyError:
            raise PipelineError(
                f"Coordinate {','.join(names)} is missing from {source}"
            )
    return order


def reorder_row(row: Sequence[object], order: Sequence[int]) -> Row:
    return tuple(row[i] for i in order)  # type: ignore[misc]


def align_hcone(cone: HCone, source: CoordSystem, target: CoordSystem) -> HCone:
    """Same cone written over the target's coordinate order."""
    if source.dim != target.dim:
        raise PipelineError(
            f"Cannot align {source.dim} coordinates onto {target.dim} coordinates"
        )
    order = column_order(source, target)
    return HCone(
        target.dim,
        [reorder_row(r, order) for r in cone.equalities],
        [reorder_row(r, order) for r in cone.inequalities],
        label=target,
    ).canonical()


def align_vcone(cone: VCone, source: CoordSystem, target: CoordSystem) -> VCone:
    if source.dim != target.dim:
        raise PipelineError(
            f"Cannot align {source.dim} coordinates onto {target.dim} coordinates"
        )
    order = column_order(source, target)
    return VCone(target.dim, [reorder_row(r, order) for r in cone.rays], label=target)


def coords_of(
    cone: Union[HCone, VCone], fallback: Iterable[Sequence[str]] = ()
) -> CoordSystem:
    """Coordinate system labelling a cone (COORDS list or CoordSystem)."""
    label = cone.label
    if isinstance(label, CoordSystem):
        return label
    if isinstance(label, list) and label:
        return CoordSystem.from_subset_names(label)
    fallback = list(fallback)
    if fallback:
        return CoordSystem.from_subset_names(fallback)
    raise PipelineError(f"{cone} carries no coordinate labels")
