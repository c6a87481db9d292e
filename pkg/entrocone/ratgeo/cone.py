#!/usr/bin/env python3
"""
Polyhedral Cone Representations

HCone (half-space form: equalities row·v = 0, inequalities row·v ≥ 0) and
VCone (extreme rays, the apex at the origin implicit) over exact rationals,
with the canonical forms used for golden-file comparison.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, List, Optional, Sequence, Tuple

from ratgeo.rational import (
    IntRow,
    Number,
    Row,
    as_row,
    is_zero,
    primitive,
    rref,
    sign_normalized,
)


class GeometryError(Exception):
    """Base exception for cone computations."""

    pass


class DimensionMismatchError(GeometryError):
    """Exception raised when rows, points or cones disagree in dimension."""

    pass


class NonPointedConeError(GeometryError):
    """Exception raised when a cone contains a line and lineality was not allowed."""

    def __init__(self, message: str, lineality: Optional[List[IntRow]] = None):
        super().__init__(message)
        self.lineality = lineality or []


def _rows(raw: Iterable[Sequence[Any]], dim: int, what: str) -> Tuple[Row, ...]:
    rows = []
    for idx, values in enumerate(raw):
        row = as_row(values)
        if len(row) != dim:
            raise DimensionMismatchError(
                f"{what} row {idx} has length {len(row)}, expected {dim}"
            )
        if not is_zero(row):
            rows.append(row)
    return tuple(rows)


def canonical_equalities(rows: Sequence[Sequence[Number]], dim: int) -> List[IntRow]:
    """
    Canonical basis of the span of the equality rows.

    Rows are the reduced row-echelon basis pivoting on the highest coordinates,
    scaled primitive with first nonzero entry positive, sorted.
    """
    reduced, _ = rref(rows, dim, reverse=True)
    return sorted(sign_normalized(primitive(r)) for r in reduced)


def equality_basis(
    equalities: Sequence[Sequence[Number]], dim: int
) -> Tuple[List[List[Fraction]], List[int]]:
    return rref(equalities, dim, reverse=True)


def reduce_modulo(
    row: Sequence[Number], basis: Tuple[List[List[Fraction]], List[int]]
) -> IntRow:
    """Reduce an inequality modulo an equality basis, then make it primitive."""
    reduced, pivots = basis
    vec = [Fraction(v) for v in row]
    for eq, p in zip(reduced, pivots):
        if vec[p]:
            f = vec[p]
            vec = [a - f * b for a, b in zip(vec, eq)]
    return primitive(vec)


@dataclass(frozen=True)
class HCone:
    """Cone {v : E v = 0, A v ≥ 0} in exact rationals."""

    dim: int
    equalities: Tuple[Row, ...] = ()
    inequalities: Tuple[Row, ...] = ()
    label: Optional[Any] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DimensionMismatchError(
                f"Cone dimension must be positive, got {self.dim}"
            )
        object.__setattr__(
            self, "equalities", _rows(self.equalities, self.dim, "equality")
        )
        object.__setattr__(
            self, "inequalities", _rows(self.inequalities, self.dim, "inequality")
        )

    @property
    def n_rows(self) -> int:
        return len(self.equalities) + len(self.inequalities)

    def canonical(self) -> "HCone":
        """
        Canonical representation without redundancy removal.

        Equalities become a reverse-RREF basis; inequalities are reduced modulo
        the equalities, scaled primitive, de-duplicated and sorted.
        """
        eqs = canonical_equalities(self.equalities, self.dim)
        basis = equality_basis(eqs, self.dim)
        ineqs = set()
        for row in self.inequalities:
            reduced = reduce_modulo(row, basis)
            if not is_zero(reduced):
                ineqs.add(reduced)
        return HCone(self.dim, eqs, sorted(ineqs), label=self.label)

    def with_rows(
        self,
        equalities: Iterable[Sequence[Any]] = (),
        inequalities: Iterable[Sequence[Any]] = (),
    ) -> "HCone":
        """Return a new cone with extra rows appended."""
        return HCone(
            self.dim,
            list(self.equalities) + list(equalities),
            list(self.inequalities) + list(inequalities),
            label=self.label,
        )

    def integer_rows(self) -> Tuple[List[IntRow], List[IntRow]]:
        return (
            [primitive(r) for r in self.equalities],
            [primitive(r) for r in self.inequalities],
        )

    def __str__(self) -> str:
        return (
            f"HCone(dim={self.dim}, {len(self.equalities)} equalities, "
            f"{len(self.inequalities)} inequalities)"
        )


@dataclass(frozen=True)
class VCone:
    """Cone generated by nonnegative combinations of its rays."""

    dim: int
    rays: Tuple[Row, ...] = ()
    label: Optional[Any] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DimensionMismatchError(
                f"Cone dimension must be positive, got {self.dim}"
            )
        rays = []
        for idx, values in enumerate(self.rays):
            ray = as_row(values)
            if len(ray) != self.dim:
                raise DimensionMismatchError(
                    f"ray {idx} has length {len(ray)}, expected {self.dim}"
                )
            if is_zero(ray):
                raise GeometryError(f"ray {idx} is the zero vector")
            rays.append(ray)
        object.__setattr__(self, "rays", tuple(rays))

    def canonical(self) -> "VCone":
        """Primitive integer rays, de-duplicated and sorted."""
        rays = sorted({primitive(r) for r in self.rays})
        return VCone(self.dim, rays, label=self.label)

    def __len__(self) -> int:
        return len(self.rays)

    def __str__(self) -> str:
        return f"VCone(dim={self.dim}, {len(self.rays)} rays)"


def orthant(dim: int) -> HCone:
    """The nonnegative orthant {v : v_i ≥ 0}."""
    rows = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    return HCone(dim, (), rows)
