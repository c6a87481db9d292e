#!/usr/bin/env python3
"""
Cone Builders

End-to-end marginal cones for causal structures:

1. write the constraints of the full structure (Shannon or quantum basic
   rows, independence equalities, optional extra rows),
2. eliminate every coordinate outside the marginal family,
3. return the canonical irredundant cone over the family's coordinates.

Inner approximations add Ingleton rows before the elimination, or intersect
the outer marginal cone with the Ingleton cone of the observed variables.
"""

from itertools import combinations, permutations
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from causal.independence import ci_rows, d_separated, parental_ci
from causal.quantum import (
    coexisting_sets,
    dpi_rows,
    quantum_basic_rows,
    quantum_ci_rows,
    quantum_coords,
)
from causal.structure import CausalStructure
from entspace.coords import CoordSystem, MissingCoordinateError
from entspace.expressions import EntropyExpr
from entspace.nonshannon import (
    ingleton_expr,
    ingleton_instances,
    ingleton_rows_on_subsets,
    matus_expr,
    zhang_yeung_expr,
)
from entspace.shannon import shannon_rows
from loguru import logger
from pipeline.marginal import MarginalFamily, PipelineError, align_hcone
from ratgeo.cone import HCone
from ratgeo.cone_io import ConeFormatError, read_hrep
from ratgeo.fourier_motzkin import fm_eliminate
from ratgeo.lp import is_feasible
from ratgeo.membership import intersect
from ratgeo.rational import Row
from ratgeo.redundancy import remove_redundant

LATENT_RANK = "latent-rank"
INTERSECT_OBSERVED = "intersect-observed"
INNER_MODES = (LATENT_RANK, INTERSECT_OBSERVED)

MAX_LATENT_RANK_NODES = 6
MAX_INTERSECT_OBSERVED = 5
EXACT_RELEVANCE_NODES = 5

Quad = Tuple[str, str, str, str]

# (x1, x2), (x1, x3), (x1, x4), (x2, x3), (x2, x4)
_DEPENDENT_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3))


def full_coords(structure: CausalStructure) -> CoordSystem:
    return CoordSystem.full(list(structure.nodes))


def project(
    cone: HCone,
    source: CoordSystem,
    target: CoordSystem,
    stride: Optional[int] = None,
    workers: Optional[int] = None,
) -> HCone:
    """
    Project a cone onto the coordinates of another system.

    Coordinates are matched by subset names; the result uses the target's
    order and carries it as label.

    Raises:
        PipelineError: If a target subset is not a source coordinate
    """
    present = {frozenset(names) for names in source.subset_names()}
    missing = [
        names for names in target.subset_names() if frozenset(names) not in present
    ]
    if missing:
        raise PipelineError(
            f"Marginal coordinates {[','.join(m) for m in missing]} are not available"
        )
    drop = source.positions_not_in(target)
    if drop:
        projected = fm_eliminate(cone, drop, stride=stride, workers=workers)
    else:
        projected = remove_redundant(cone, workers=workers)
    dropped = set(drop)
    kept = [names for i, names in enumerate(source.subset_names()) if i not in dropped]
    kept_coords = CoordSystem.from_subset_names(kept, source.variables)
    result = align_hcone(projected, kept_coords, target)
    logger.info(
        f"Projected {source.dim} coordinates onto {target.dim}: "
        f"{len(result.equalities)} equalities, {len(result.inequalities)} inequalities"
    )
    return result


def _check_classical(structure: CausalStructure) -> None:
    if not structure.is_classical():
        raise PipelineError(
            f"{structure.label} has quantum nodes {structure.quantum_nodes()}; "
            f"use the quantum pipeline"
        )


def _family(
    structure: CausalStructure, family: Optional[MarginalFamily]
) -> MarginalFamily:
    family = family if family is not None else MarginalFamily.all_observed(structure)
    family.validate(structure)
    return family


def _rows_of(exprs: Sequence[EntropyExpr], coords: CoordSystem) -> List[Row]:
    try:
        return [expr.to_row(coords) for expr in exprs]
    except MissingCoordinateError as e:
        raise PipelineError(f"Extra inequality does not fit the structure: {e}")


def classical_cone(
    structure: CausalStructure, extra: Sequence[EntropyExpr] = ()
) -> HCone:
    """Shannon rows, parental independence equalities and extra rows over all nodes."""
    coords = full_coords(structure)
    equalities = ci_rows(parental_ci(structure), coords)
    inequalities = shannon_rows(coords) + _rows_of(extra, coords)
    logger.debug(
        f"{structure.label}: {len(inequalities)} inequalities, "
        f"{len(equalities)} independence equalities over {coords.dim} coordinates"
    )
    return HCone(coords.dim, equalities, inequalities, label=coords)


def outer_marginal_classical(
    structure: CausalStructure,
    family: Optional[MarginalFamily] = None,
    extra: Sequence[EntropyExpr] = (),
    stride: Optional[int] = None,
    workers: Optional[int] = None,
) -> HCone:
    """
    Shannon outer approximation of a classical structure's marginal cone.

    Args:
        structure: Classical causal structure
        family: Retained observed sets (default: all observed nodes jointly)
        extra: Additional valid inequalities (e.g. non-Shannon) over any nodes
        stride: Redundancy sweep stride for the elimination
        workers: Worker processes for redundancy removal

    Returns:
        Canonical irredundant cone labelled with the family's coordinates

    Raises:
        PipelineError: For quantum structures or families outside the observed nodes
    """
    _check_classical(structure)
    family = _family(structure, family)
    logger.info(
        f"Classical outer marginal of {structure.label} onto {family} "
        f"({len(extra)} extra rows)"
    )
    cone = classical_cone(structure, extra)
    return project(cone, cone.label, family.coords(), stride, workers)


def _implied(cone: HCone, row: Sequence[object]) -> bool:
    """Exact Farkas test: nonnegative weights on inequalities, free on equalities."""
    generators = list(cone.inequalities) + list(cone.equalities)
    if not generators:
        return all(v == 0 for v in row)
    free = [False] * len(cone.inequalities) + [True] * len(cone.equalities)
    a_eq = [[g[i] for g in generators] for i in range(cone.dim)]
    return is_feasible(a_eq=a_eq, b_eq=list(row), n=len(generators), free=free).feasible


def _ingleton_key(quad: Sequence[str]) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    return frozenset(quad[:2]), frozenset(quad[2:])


def relevant_nonshannon_tuples(
    structure: CausalStructure, exact: Optional[bool] = None
) -> List[Quad]:
    """
    Ordered 4-tuples on which Ingleton-based inequalities may add constraints.

    A tuple (x1, x2, x3, x4) survives when none of I(x1:x2), I(x1:x3),
    I(x1:x4), I(x2:x3), I(x2:x4) is forced to vanish, i.e. each pair is
    d-connected given the empty set. The exact pass further drops tuples
    whose Ingleton row already follows from the Shannon and independence
    rows of the structure.

    Args:
        structure: Classical causal structure
        exact: Run the exact pass (default: for at most 5 nodes)
    """
    _check_classical(structure)
    nodes = list(structure.nodes)
    dependent = {
        (u, v): not d_separated(structure, u, v)
        for u, v in permutations(nodes, 2)
    }
    tuples: List[Quad] = [
        (t[0], t[1], t[2], t[3])
        for t in permutations(nodes, 4)
        if all(dependent[(t[a], t[b])] for a, b in _DEPENDENT_PAIRS)
    ]
    logger.debug(f"{structure.label}: {len(tuples)} tuples pass the dependence filter")
    exact = len(nodes) <= EXACT_RELEVANCE_NODES if exact is None else exact
    if exact and tuples:
        base = classical_cone(structure)
        coords = base.label
        verdict: Dict[Tuple[FrozenSet[str], FrozenSet[str]], bool] = {}
        for quad in tuples:
            key = _ingleton_key(quad)
            if key not in verdict:
                verdict[key] = _implied(base, ingleton_expr(quad).to_row(coords))
        tuples = [t for t in tuples if not verdict[_ingleton_key(t)]]
    logger.info(f"{structure.label}: {len(tuples)} relevant non-Shannon tuples")
    return tuples


def _parse_quads(text: str) -> List[Quad]:
    quads = []
    for part in text.split(";"):
        names = [n.strip() for n in part.split(",") if n.strip()]
        if len(names) != 4:
            raise PipelineError(
                f"Expected four comma-separated variables, got '{part}'"
            )
        quads.append((names[0], names[1], names[2], names[3]))
    return quads


def _file_exprs(path: Path) -> List[EntropyExpr]:
    try:
        cone = read_hrep(path, label_hook=CoordSystem.from_subset_names)
    except (OSError, ConeFormatError) as e:
        raise PipelineError(f"Cannot read inequalities from {path}: {e}")
    if not isinstance(cone.label, CoordSystem):
        raise PipelineError(f"{path} has no COORDS header naming its coordinates")
    exprs = [EntropyExpr.from_row(row, cone.label) for row in cone.inequalities]
    for row in cone.equalities:
        expr = EntropyExpr.from_row(row, cone.label)
        exprs.extend([expr, -expr])
    return exprs


def nonshannon_exprs(
    structure: CausalStructure, specs: Sequence[str]
) -> List[EntropyExpr]:
    """
    Extra valid inequalities from source specifications.

    Sources:
        zy: Zhang–Yeung on every relevant tuple
        matus:smax=k: both Matúš families for s = 1..k on every relevant tuple
        diamond:A,B,C,D;...: Zhang–Yeung on the listed ordered tuples
        file:<path>: rows of an H-representation file with a COORDS header

    Raises:
        PipelineError: For unknown sources or malformed arguments
    """
    exprs: List[EntropyExpr] = []
    relevant: Optional[List[Quad]] = None
    for spec in specs:
        kind, _, arg = spec.partition(":")
        kind = kind.strip().lower()
        if kind in ("zy", "matus") and relevant is None:
            if not structure.is_classical():
                raise PipelineError(
                    f"'{kind}' needs relevance filtering on a classical structure; "
                    f"list diamond tuples explicitly for {structure.label}"
                )
            relevant = relevant_nonshannon_tuples(structure)
        if kind == "zy":
            exprs.extend(zhang_yeung_expr(q) for q in relevant or [])
        elif kind == "matus":
            key, _, value = arg.partition("=")
            if key.strip() != "smax" or not value.strip().isdigit():
                raise PipelineError(f"Expected 'matus:smax=<k>', got '{spec}'")
            smax = int(value)
            for family in (1, 2):
                for s in range(1, smax + 1):
                    exprs.extend(matus_expr(family, s, q) for q in relevant or [])
        elif kind == "diamond":
            exprs.extend(zhang_yeung_expr(q) for q in _parse_quads(arg))
        elif kind == "file":
            exprs.extend(_file_exprs(Path(arg)))
        else:
            raise PipelineError(
                f"Unknown non-Shannon source '{spec}', expected zy, matus:smax=<k>, "
                f"diamond:<tuples> or file:<path>"
            )
    unique = list(dict.fromkeys(exprs))
    logger.info(f"{structure.label}: {len(unique)} non-Shannon rows from {list(specs)}")
    return unique


def inner_marginal_classical(
    structure: CausalStructure,
    mode: str = LATENT_RANK,
    family: Optional[MarginalFamily] = None,
    prune: bool = True,
    stride: Optional[int] = None,
    workers: Optional[int] = None,
) -> HCone:
    """
    Inner approximation of a classical marginal cone.

    Modes:
        latent-rank: Ingleton rows on 4-subsets of all nodes are added before
            elimination (only the relevant tuples when prune is set)
        intersect-observed: the outer marginal cone is intersected with the
            Ingleton cone of the observed variables

    The result is an inner approximation only once every extremal ray is
    matched by an achieving strategy (see verify_rays_achievable).

    Raises:
        PipelineError: For quantum structures, unknown modes or unsupported sizes
    """
    _check_classical(structure)
    family = _family(structure, family)
    if mode == LATENT_RANK:
        n = len(structure.nodes)
        if n > MAX_LATENT_RANK_NODES:
            raise PipelineError(
                f"latent-rank inner cones support at most {MAX_LATENT_RANK_NODES} "
                f"nodes, {structure.label} has {n}"
            )
        if n < 4:
            logger.info(f"{structure.label} has {n} nodes: inner equals outer")
            return outer_marginal_classical(structure, family, (), stride, workers)
        if prune:
            quads = relevant_nonshannon_tuples(structure)
            extra = list(dict.fromkeys(ingleton_expr(q) for q in quads))
            cone = classical_cone(structure, extra)
        else:
            cone = classical_cone(structure)
            cone = cone.with_rows(inequalities=ingleton_rows_on_subsets(cone.label))
        logger.info(
            f"Latent-rank inner marginal of {structure.label}: "
            f"{len(cone.inequalities)} inequalities before elimination"
        )
        return project(cone, cone.label, family.coords(), stride, workers)
    if mode == INTERSECT_OBSERVED:
        if len(family.variables) > MAX_INTERSECT_OBSERVED:
            raise PipelineError(
                f"intersect-observed supports at most {MAX_INTERSECT_OBSERVED} "
                f"observed variables, got {len(family.variables)}"
            )
        outer = outer_marginal_classical(structure, family, (), stride, workers)
        target = family.coords()
        rows: List[Row] = []
        for subset in family.subsets:
            for four in combinations(subset, 4):
                rows.extend(
                    ingleton_expr(q).to_row(target) for q in ingleton_instances(four)
                )
        if not rows:
            logger.info(f"{structure.label}: no observed 4-subsets, inner equals outer")
            return outer
        ingleton = HCone(target.dim, (), rows, label=target)
        return intersect(outer, ingleton)
    raise PipelineError(f"Unknown inner mode '{mode}', expected one of {INNER_MODES}")


def quantum_cone(
    structure: CausalStructure, purify: bool = False, extra: Sequence[EntropyExpr] = ()
) -> HCone:
    """Basic, independence and data processing rows over the coexisting sets."""
    coords = quantum_coords(structure)
    rows = (
        quantum_basic_rows(structure, coords, purify)
        + quantum_ci_rows(structure, coords)
        + dpi_rows(structure, coords)
    )
    equalities = [r.row for r in rows if r.equality]
    inequalities = [r.row for r in rows if not r.equality] + _rows_of(extra, coords)
    logger.debug(
        f"{structure.label}: {len(inequalities)} quantum inequalities, "
        f"{len(equalities)} equalities over {coords.dim} coordinates"
    )
    return HCone(coords.dim, equalities, inequalities, label=coords)


def outer_marginal_quantum(
    structure: CausalStructure,
    family: Optional[MarginalFamily] = None,
    purify: bool = False,
    extra: Sequence[EntropyExpr] = (),
    stride: Optional[int] = None,
    workers: Optional[int] = None,
) -> HCone:
    """
    Outer approximation of the marginal cone of a quantum or hybrid structure.

    Classical structures are handed to the classical pipeline. Extra rows
    must only involve members of one coexisting set (classical variables for
    non-Shannon inequalities).

    Raises:
        PipelineError: If a retained set does not coexist or extra rows do not fit
        UnsupportedStructureError: For quantum nodes with parents
    """
    if structure.is_classical():
        return outer_marginal_classical(structure, family, extra, stride, workers)
    family = _family(structure, family)
    sets = [set(s) for s in coexisting_sets(structure)]
    for subset in family.subsets:
        if not any(set(subset) <= members for members in sets):
            raise PipelineError(
                f"Marginal set {subset} of {structure.label} lies in no coexisting set"
            )
    logger.info(f"Quantum outer marginal of {structure.label} onto {family}")
    cone = quantum_cone(structure, purify, extra)
    return project(cone, cone.label, family.coords(), stride, workers)
