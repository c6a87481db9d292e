#!/usr/bin/env python3
"""
Cone File Formats

H-representation:

    DIM 7
    COORDS X Y Z X,Y X,Z Y,Z X,Y,Z
    EQ
    ...
    INEQ
    -1 -1 0 1 0 0 0

V-representation:

    DIM 7
    COORDS ...
    RAYS
    1 1 1 2 2 2 2

Rows are space-separated rationals (p or p/q). COORDS is optional and lists one
entry per coordinate, each a comma-joined list of variable names. Blank lines
and lines starting with '#' are ignored.
"""

from pathlib import Path
from typing import Any, Callable, List, Optional, Tuple, Union

from loguru import logger
from ratgeo.cone import GeometryError, HCone, VCone
from ratgeo.rational import RationalParseError, Row, format_rational, parse_rational


class ConeFormatError(GeometryError):
    """Exception raised for malformed cone files, with the offending line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


CoordLabels = Optional[List[Tuple[str, ...]]]
LabelHook = Callable[[List[Tuple[str, ...]]], Any]


def _format_row(row: Row) -> str:
    return " ".join(format_rational(v) for v in row)


def _coords_line(labels: CoordLabels) -> List[str]:
    if not labels:
        return []
    return ["COORDS " + " ".join(",".join(names) for names in labels)]


def _labels_of(cone: Union[HCone, VCone]) -> CoordLabels:
    label = cone.label
    if label is None:
        return None
    if hasattr(label, "subset_names"):
        return list(label.subset_names())
    if isinstance(label, list):
        return label
    return None


def format_hrep(cone: HCone, labels: CoordLabels = None) -> str:
    """Print an HCone in the H-representation text format."""
    labels = labels if labels is not None else _labels_of(cone)
    lines = [f"DIM {cone.dim}"] + _coords_line(labels)
    lines.append("EQ")
    lines.extend(_format_row(r) for r in cone.equalities)
    lines.append("INEQ")
    lines.extend(_format_row(r) for r in cone.inequalities)
    return "\n".join(lines) + "\n"


def format_vrep(cone: VCone, labels: CoordLabels = None) -> str:
    """Print a VCone in the V-representation text format."""
    labels = labels if labels is not None else _labels_of(cone)
    lines = [f"DIM {cone.dim}"] + _coords_line(labels)
    lines.append("RAYS")
    lines.extend(_format_row(r) for r in cone.rays)
    return "\n".join(lines) + "\n"


def _parse(
    text: str, sections: Tuple[str, ...]
) -> Tuple[int, CoordLabels, dict]:
    dim: Optional[int] = None
    labels: CoordLabels = None
    rows: dict = {name: [] for name in sections}
    current: Optional[str] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "DIM":
            try:
                dim = int(rest)
            except ValueError:
                raise ConeFormatError(f"invalid dimension '{rest}'", number)
            if dim < 1:
                raise ConeFormatError(f"dimension must be positive, got {dim}", number)
            continue
        if head == "COORDS":
            labels = [tuple(entry.split(",")) for entry in rest.split()]
            continue
        if line in sections:
            current = line
            continue
        if current is None:
            raise ConeFormatError(f"row outside a section: '{line}'", number)
        if dim is None:
            raise ConeFormatError("row before DIM header", number)
        try:
            row = tuple(parse_rational(tok) for tok in line.split())
        except RationalParseError as e:
            raise ConeFormatError(str(e), number)
        if len(row) != dim:
            raise ConeFormatError(f"row has {len(row)} entries, expected {dim}", number)
        rows[current].append(row)
    if dim is None:
        raise ConeFormatError("missing DIM header")
    if labels is not None and len(labels) != dim:
        raise ConeFormatError(f"COORDS lists {len(labels)} entries, expected {dim}")
    return dim, labels, rows


def parse_hrep(text: str, label_hook: Optional[LabelHook] = None) -> HCone:
    """
    Parse the H-representation text format.

    Args:
        text: File contents
        label_hook: Builds a cone label (e.g. a coordinate system) from COORDS

    Raises:
        ConeFormatError: On malformed input
    """
    dim, labels, rows = _parse(text, ("EQ", "INEQ"))
    label = label_hook(labels) if (labels and label_hook) else labels
    return HCone(dim, rows["EQ"], rows["INEQ"], label=label)


def parse_vrep(text: str, label_hook: Optional[LabelHook] = None) -> VCone:
    """Parse the V-representation text format."""
    dim, labels, rows = _parse(text, ("RAYS",))
    label = label_hook(labels) if (labels and label_hook) else labels
    return VCone(dim, rows["RAYS"], label=label)


def read_hrep(path: Union[str, Path], label_hook: Optional[LabelHook] = None) -> HCone:
    path = Path(path)
    logger.debug(f"Reading H-representation from {path}")
    return parse_hrep(path.read_text(encoding="utf-8"), label_hook)


def read_vrep(path: Union[str, Path], label_hook: Optional[LabelHook] = None) -> VCone:
    path = Path(path)
    logger.debug(f"Reading V-representation from {path}")
    return parse_vrep(path.read_text(encoding="utf-8"), label_hook)


def write_hrep(cone: HCone, path: Union[str, Path], labels: CoordLabels = None) -> None:
    Path(path).write_text(format_hrep(cone, labels), encoding="utf-8")
    logger.info(f"Wrote {cone} to {path}")


def write_vrep(cone: VCone, path: Union[str, Path], labels: CoordLabels = None) -> None:
    Path(path).write_text(format_vrep(cone, labels), encoding="utf-8")
    logger.info(f"Wrote {cone} to {path}")
