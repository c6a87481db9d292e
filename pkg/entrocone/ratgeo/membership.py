#!/usr/bin/env python3
"""
Cone Membership

Point-in-cone tests for both representations and cone intersection.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from ratgeo.cone import DimensionMismatchError, HCone, VCone
from ratgeo.lp import solve_lp
from ratgeo.rational import Number
from ratgeo.redundancy import remove_redundant

Scalar = Union[int, float, Fraction]


@dataclass
class Violation:
    """A violated row with its slack (row·v)."""

    kind: str  # "equality" | "inequality"
    index: int
    slack: float


@dataclass
class MembershipReport:
    """Result of contains_point."""

    inside: bool
    violations: List[Violation] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.inside

    def describe(self) -> str:
        if self.inside:
            return "inside"
        parts = [f"{v.kind} {v.index} slack={v.slack:.6g}" for v in self.violations]
        return "outside: " + "; ".join(parts)


@dataclass
class HullMembership:
    """Result of in_conic_hull with the combination witness θ."""

    member: bool
    witness: Optional[List[Fraction]] = None

    def __bool__(self) -> bool:
        return self.member


def _check_dim(dim: int, v: Sequence[Scalar]) -> None:
    if len(v) != dim:
        raise DimensionMismatchError(
            f"Point has length {len(v)}, cone dimension is {dim}"
        )


def contains_point(
    cone: HCone, v: Sequence[Scalar], tol: float = 1e-9
) -> MembershipReport:
    """
    Test v against every row of an H-representation.

    Rational inputs (ints and Fractions) are evaluated exactly; any float
    entry switches to binary64 evaluation.

    Args:
        cone: Cone in H-representation
        v: Point
        tol: Allowed slack, ≥ 0

    Returns:
        MembershipReport listing every violated row
    """
    if tol < 0:
        raise ValueError(f"Tolerance must be nonnegative, got {tol}")
    _check_dim(cone.dim, v)
    exact = all(isinstance(x, (int, Fraction)) for x in v)
    point: Sequence[Union[Fraction, float]] = (
        [Fraction(x) for x in v] if exact else [float(x) for x in v]
    )

    def evaluate(row: Sequence[Fraction]) -> Union[Fraction, float]:
        if exact:
            return sum((a * b for a, b in zip(row, point) if a), Fraction(0))
        return float(sum(float(a) * b for a, b in zip(row, point) if a))

    violations = []
    for idx, row in enumerate(cone.equalities):
        slack = evaluate(row)
        if abs(slack) > tol:
            violations.append(Violation("equality", idx, float(slack)))
    for idx, row in enumerate(cone.inequalities):
        slack = evaluate(row)
        if slack < -tol:
            violations.append(Violation("inequality", idx, float(slack)))
    return MembershipReport(not violations, violations)


def in_conic_hull(cone: VCone, v: Sequence[Number]) -> HullMembership:
    """
    Decide exactly whether v = Σ θ_i r_i with θ ≥ 0.

    Returns:
        HullMembership with the witness θ when v is in the hull
    """
    _check_dim(cone.dim, v)
    target = [Fraction(x) for x in v]
    if not cone.rays:
        zero = all(x == 0 for x in target)
        return HullMembership(zero, [] if zero else None)
    a_eq = [[ray[i] for ray in cone.rays] for i in range(cone.dim)]
    result = solve_lp([0] * len(cone.rays), a_eq=a_eq, b_eq=target)
    if not result.feasible:
        return HullMembership(False)
    return HullMembership(True, result.x)


def intersect(a: HCone, b: HCone) -> HCone:
    """
    Intersection of two cones over the same coordinates, irredundant.

    Raises:
        DimensionMismatchError: If dimensions or coordinate systems differ
    """
    if a.dim != b.dim:
        raise DimensionMismatchError(
            f"Cannot intersect cones of dimension {a.dim} and {b.dim}"
        )
    if a.label is not None and b.label is not None and a.label != b.label:
        raise DimensionMismatchError(
            "Cones are labelled with different coordinate systems"
        )
    label = a.label if a.label is not None else b.label
    merged = HCone(
        a.dim,
        list(a.equalities) + list(b.equalities),
        list(a.inequalities) + list(b.inequalities),
        label=label,
    )
    return remove_redundant(merged)
