#!/usr/bin/env python3
"""
Non-signalling Gluing

With general non-signalling resources, post-selection only yields one joint
distribution per value of the conditioned variable. Each gives its own
entropy cone (a block); blocks must agree on the entropies of the variables
they share. The glued cone lives on the union of the block coordinates:
coordinates naming the same variable set are one coordinate, further
identifications become equalities, and conjectured rows can be added on top.
"""

from typing import List, Optional, Sequence, Tuple

from entspace.coords import CoordSystem, MissingCoordinateError, Names, as_names
from entspace.expressions import EntropyExpr, H
from entspace.shannon import shannon_rows
from loguru import logger
from pipeline.marginal import PipelineError, coords_of
from ratgeo.cone import HCone
from ratgeo.redundancy import remove_redundant

Block = Tuple[CoordSystem, HCone]


def shannon_block(variables: Sequence[str]) -> Block:
    """Shannon cone of a set of variables, as a gluing block."""
    coords = CoordSystem.full(tuple(variables))
    return coords, HCone(coords.dim, (), shannon_rows(coords), label=coords)


def _union_coords(blocks: Sequence[Block]) -> CoordSystem:
    seen: List[frozenset] = []
    subsets: List[Tuple[str, ...]] = []
    for coords, _ in blocks:
        for names in coords.subset_names():
            if frozenset(names) not in seen:
                seen.append(frozenset(names))
                subsets.append(names)
    return CoordSystem.from_subset_names(subsets)


def _lift(row: Sequence[object], source: CoordSystem, target: CoordSystem) -> list:
    lifted: list = [0] * target.dim
    for value, names in zip(row, source.subset_names()):
        if value:
            lifted[target.index(names)] += value
    return lifted


def ns_glued_cone(
    blocks: Sequence[Block],
    identify: Sequence[Tuple[Names, Names]] = (),
    extra: Sequence[EntropyExpr] = (),
    coords: Optional[CoordSystem] = None,
) -> HCone:
    """
    Glue block cones into one cone.

    Args:
        blocks: (coordinates, cone) pairs; the cone may be labelled with the
            same coordinates or carry none
        identify: Pairs of coordinates (variable sets) whose entropies agree
        extra: Rows expr >= 0 over the glued coordinates
        coords: Target coordinate order (default: union in order of appearance)

    Returns:
        Canonical irredundant HCone labelled with the glued coordinates

    Raises:
        PipelineError: If a block is inconsistent with its coordinates, an
            identification is degenerate, or a row names an unknown coordinate
    """
    if not blocks:
        raise PipelineError("Gluing needs at least one block")
    union = _union_coords(blocks)
    if coords is None:
        coords = union
    elif {frozenset(s) for s in coords.subset_names()} != {
        frozenset(s) for s in union.subset_names()
    }:
        raise PipelineError(f"Target coordinates {coords} differ from the blocks")

    equalities: List[list] = []
    inequalities: List[list] = []
    for index, (block_coords, cone) in enumerate(blocks):
        if cone.dim != block_coords.dim:
            raise PipelineError(
                f"Block {index} has a {cone.dim}-dimensional cone over "
                f"{block_coords.dim} coordinates"
            )
        if isinstance(cone.label, CoordSystem) and cone.label != block_coords:
            raise PipelineError(f"Block {index} cone is labelled {cone.label}")
        equalities += [_lift(r, block_coords, coords) for r in cone.equalities]
        inequalities += [_lift(r, block_coords, coords) for r in cone.inequalities]

    for left, right in identify:
        a, b = frozenset(as_names(left)), frozenset(as_names(right))
        if a == b:
            raise PipelineError(f"Cannot identify {sorted(a)} with itself")
        try:
            equalities.append(list((H(tuple(a)) - H(tuple(b))).to_row(coords)))
        except MissingCoordinateError as e:
            raise PipelineError(f"Inconsistent gluing: {e}")

    for expr in extra:
        try:
            inequalities.append(list(expr.to_row(coords)))
        except MissingCoordinateError as e:
            raise PipelineError(
                f"Extra row {expr} is not on the glued coordinates: {e}"
            )

    logger.info(
        f"Gluing {len(blocks)} blocks: {coords.dim} coordinates, "
        f"{len(equalities)} equalities, {len(inequalities)} inequalities"
    )
    return remove_redundant(HCone(coords.dim, equalities, inequalities, label=coords))


def block_of(cone: HCone) -> Block:
    """Use a labelled cone as a block."""
    return coords_of(cone), cone
