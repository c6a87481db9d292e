"""Causal structures, their independence constraints and quantum coexistence."""

from causal.independence import CIStatement, ci_rows, d_separated, parental_ci
from causal.postselect import postselect
from causal.quantum import (
    QuantumRow,
    RowJustification,
    coexisting_sets,
    dpi_rows,
    quantum_basic_rows,
    quantum_ci_rows,
    quantum_coords,
    quantum_postselect_coex,
)
from causal.structure import (
    CausalStructure,
    CausalStructureError,
    PostSelectionError,
    StructureParseError,
    Subsystem,
    UnsupportedStructureError,
    parse_structure,
    read_structure,
)

__all__ = [
    "CIStatement",
    "CausalStructure",
    "CausalStructureError",
    "PostSelectionError",
    "QuantumRow",
    "RowJustification",
    "StructureParseError",
    "Subsystem",
    "UnsupportedStructureError",
    "ci_rows",
    "coexisting_sets",
    "d_separated",
    "dpi_rows",
    "parental_ci",
    "parse_structure",
    "postselect",
    "quantum_basic_rows",
    "quantum_ci_rows",
    "quantum_coords",
    "quantum_postselect_coex",
    "read_structure",
]
