"""Exact rational polyhedral cone algebra."""

from ratgeo.cone import (
    DimensionMismatchError,
    GeometryError,
    HCone,
    NonPointedConeError,
    VCone,
    orthant,
)
from ratgeo.cone_io import (
    ConeFormatError,
    format_hrep,
    format_vrep,
    parse_hrep,
    parse_vrep,
    read_hrep,
    read_vrep,
    write_hrep,
    write_vrep,
)
from ratgeo.double_description import cone_dimension, h_to_v, lineality_space, v_to_h
from ratgeo.fourier_motzkin import fm_eliminate
from ratgeo.lp import LPResult, solve_lp
from ratgeo.membership import (
    HullMembership,
    MembershipReport,
    contains_point,
    in_conic_hull,
    intersect,
)
from ratgeo.redundancy import implies, remove_redundant

__all__ = [
    "ConeFormatError",
    "DimensionMismatchError",
    "GeometryError",
    "HCone",
    "HullMembership",
    "LPResult",
    "MembershipReport",
    "NonPointedConeError",
    "VCone",
    "cone_dimension",
    "contains_point",
    "fm_eliminate",
    "format_hrep",
    "format_vrep",
    "h_to_v",
    "implies",
    "in_conic_hull",
    "intersect",
    "lineality_space",
    "orthant",
    "parse_hrep",
    "parse_vrep",
    "read_hrep",
    "read_vrep",
    "remove_redundant",
    "solve_lp",
    "v_to_h",
    "write_hrep",
    "write_vrep",
]
