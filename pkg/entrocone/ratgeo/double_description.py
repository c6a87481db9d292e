#!/usr/bin/env python3
"""
Double Description Conversions

h_to_v enumerates extreme rays incrementally: start from a simplicial cone on
a row basis, insert one inequality at a time and combine only adjacent ray
pairs (combinatorial test on zero sets). v_to_h runs the same routine on the
dual cone.
"""

from typing import Dict, List, Sequence, Tuple

from loguru import logger
from ratgeo.cone import HCone, NonPointedConeError, VCone, orthant
from ratgeo.rational import (
    IntRow,
    independent_rows,
    int_dot,
    nullspace,
    primitive,
    rref,
    solve,
)
from ratgeo.redundancy import reduced_rows, remove_redundant


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _lift(y: Sequence[int], basis: Sequence[IntRow], dim: int) -> IntRow:
    return primitive(
        [sum(y[j] * basis[j][i] for j in range(len(basis))) for i in range(dim)]
    )


def lineality_space(cone: HCone) -> List[IntRow]:
    """Integer basis of the largest linear subspace contained in the cone."""
    equalities, inequalities = cone.integer_rows()
    return nullspace(equalities + inequalities, cone.dim)


def cone_dimension(cone: HCone) -> int:
    """Dimension of the linear hull of the cone."""
    reduced = remove_redundant(cone)
    return cone.dim - len(reduced.equalities)


def _double_description(rows: List[IntRow], k: int) -> List[IntRow]:
    """
    Extreme rays of the pointed full-rank cone {y : rows·y ≥ 0} in dimension k.
    """
    order = independent_rows(rows, k)
    rest = [i for i in range(len(rows)) if i not in set(order)]
    initial = [rows[i] for i in order]
    columns = [[initial[r][c] for r in range(k)] for c in range(k)]

    rays: List[IntRow] = []
    zero_sets: List[int] = []
    for j in range(k):
        target = [1 if r == j else 0 for r in range(k)]
        solution = solve(columns, target)
        assert solution is not None
        rays.append(primitive(solution))
        zero_sets.append(((1 << k) - 1) & ~(1 << j))

    for step, row_index in enumerate(rest, start=k):
        row = rows[row_index]
        values = [int_dot(row, r) for r in rays]
        plus = [i for i, v in enumerate(values) if v > 0]
        minus = [i for i, v in enumerate(values) if v < 0]
        zero = [i for i, v in enumerate(values) if v == 0]
        bit = 1 << step

        new_rays: Dict[IntRow, int] = {}
        for i in plus:
            new_rays[rays[i]] = zero_sets[i]
        for i in zero:
            new_rays[rays[i]] = zero_sets[i] | bit

        for p in plus:
            for n in minus:
                common = zero_sets[p] & zero_sets[n]
                if _popcount(common) < k - 2:
                    continue
                if any(
                    (zero_sets[o] & common) == common
                    for o in range(len(rays))
                    if o != p and o != n
                ):
                    continue
                vp, vn = values[p], values[n]
                combined = primitive(
                    [vp * a - vn * b for a, b in zip(rays[n], rays[p])]
                )
                new_rays[combined] = common | bit

        rays = list(new_rays.keys())
        zero_sets = list(new_rays.values())
        logger.debug(f"DD step {step}: {len(rays)} rays")
    return rays


def h_to_v(cone: HCone, nonnegative: bool = False) -> VCone:
    """
    Extreme rays of a pointed cone.

    Args:
        cone: Cone in H-representation
        nonnegative: Intersect with the nonnegative orthant first

    Returns:
        Canonical VCone (the apex is implicit)

    Raises:
        NonPointedConeError: If the cone contains a line; the lineality basis
            is attached to the exception
    """
    if nonnegative:
        cone = cone.with_rows(inequalities=orthant(cone.dim).inequalities)
    reduced = remove_redundant(cone)
    dim = reduced.dim
    equalities, inequalities = reduced.integer_rows()
    basis = nullspace(equalities, dim) if equalities else [
        tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)
    ]
    k = len(basis)
    if k == 0:
        return VCone(dim, (), label=cone.label)

    rows = reduced_rows(inequalities, basis)
    lineality = nullspace(rows, k) if rows else [
        tuple(1 if i == j else 0 for j in range(k)) for i in range(k)
    ]
    if lineality:
        lifted = [_lift(v, basis, dim) for v in lineality]
        raise NonPointedConeError(
            f"Cone contains a {len(lifted)}-dimensional linear subspace", lifted
        )

    rays = _double_description(rows, k)
    lifted_rays = [_lift(r, basis, dim) for r in rays]
    logger.info(
        f"H->V conversion: {len(inequalities)} facets -> {len(lifted_rays)} rays"
    )
    return VCone(dim, lifted_rays, label=cone.label).canonical()


def v_to_h(cone: VCone) -> HCone:
    """
    Irredundant canonical facet description of a cone given by rays.

    The rays are written in coordinates of their row-echelon basis; the facet
    normals are the extreme rays of the dual cone there, embedded back on the
    pivot coordinates.
    """
    dim = cone.dim
    rays = [primitive(r) for r in cone.rays]
    if not rays:
        identity = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
        return HCone(dim, identity, (), label=cone.label).canonical()

    _, pivots = rref(rays, dim)
    k = len(pivots)
    equalities = nullspace(rays, dim)
    coordinates = [tuple(r[p] for p in pivots) for r in rays]

    dual = h_to_v(HCone(k, (), coordinates))
    facets: List[Tuple[int, ...]] = []
    for functional in dual.rays:
        row = [0] * dim
        for value, p in zip(functional, pivots):
            row[p] = int(value)
        facets.append(tuple(row))
    logger.info(f"V->H conversion: {len(rays)} rays -> {len(facets)} facets")
    return HCone(dim, equalities, facets, label=cone.label).canonical()
