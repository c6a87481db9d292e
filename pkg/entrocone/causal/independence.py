#!/usr/bin/env python3
"""
Conditional Independence

d-separation on causal structures and the conditional-independence
statements they imply for classical variables: every node is independent of
its non-descendants given its parents.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx
from causal.structure import CausalStructure, CausalStructureError, node_set
from entspace.coords import CoordSystem
from entspace.expressions import EntropyExpr, mutual_info
from loguru import logger
from ratgeo.rational import Row, is_zero

# networkx >= 3.3 renamed d_separated to is_d_separator
_is_d_separator = getattr(nx, "is_d_separator", None) or nx.d_separated

NodeSet = Union[str, Iterable[str]]


def _graph_d_separated(
    graph: nx.DiGraph, x: Set[str], y: Set[str], z: Set[str]
) -> bool:
    if not x or not y:
        return True
    return bool(_is_d_separator(graph, x, y, z))


def d_separated(
    structure: CausalStructure,
    x: NodeSet,
    y: NodeSet,
    z: NodeSet = (),
    graph: Optional[nx.DiGraph] = None,
) -> bool:
    """
    True iff every path between X and Y is blocked by Z.

    Args:
        structure: Causal structure
        x, y, z: Disjoint node sets (a single name is a one-node set)
        graph: Optional DAG to test on instead of the structure's graph,
            e.g. the expanded graph with explicit subsystems

    Raises:
        CausalStructureError: If the sets overlap or name unknown nodes
    """
    xs, ys, zs = node_set(x), node_set(y), node_set(z)
    if xs & ys or xs & zs or ys & zs:
        raise CausalStructureError(
            f"d-separation needs disjoint sets, "
            f"got {sorted(xs)}, {sorted(ys)}, {sorted(zs)}"
        )
    graph = graph if graph is not None else structure.graph
    unknown = (xs | ys | zs) - set(graph.nodes)
    if unknown:
        raise CausalStructureError(
            f"Unknown nodes {sorted(unknown)} in {structure.label}"
        )
    return _graph_d_separated(graph, xs, ys, zs)


def _join(names: Sequence[str]) -> str:
    if all(len(n) == 1 for n in names):
        return "".join(names)
    return ",".join(names)


@dataclass(frozen=True)
class CIStatement:
    """I(left : right | given) = 0."""

    left: Tuple[str, ...]
    right: Tuple[str, ...]
    given: Tuple[str, ...] = ()

    @property
    def key(self) -> Tuple[Tuple[Tuple[str, ...], ...], Tuple[str, ...]]:
        """Order-free key; I(A:B|C) and I(B:A|C) share it."""
        sides = sorted([tuple(sorted(self.left)), tuple(sorted(self.right))])
        return (tuple(sides), tuple(sorted(self.given)))

    def expr(self) -> EntropyExpr:
        return mutual_info(self.left, self.right, self.given)

    def __str__(self) -> str:
        text = f"I({_join(self.left)}:{_join(self.right)}"
        if self.given:
            text += f"|{_join(self.given)}"
        return text + ")=0"


def dedupe_statements(statements: Iterable[CIStatement]) -> List[CIStatement]:
    seen = set()
    unique = []
    for statement in statements:
        if statement.key not in seen:
            seen.add(statement.key)
            unique.append(statement)
    return unique


def parental_ci(
    structure: CausalStructure, observed_only: bool = False
) -> List[CIStatement]:
    """
    Local Markov statements of a classical structure.

    With observed_only=False every node X contributes I(X : nondesc(X) | pa(X)).
    With observed_only=True only observed nodes take part: X is paired with
    the observed non-descendants outside its observed parents that are
    d-separated from it by those parents.

    Vacuous statements are dropped; symmetric duplicates collapse.
    """
    graph = structure.graph
    observed = set(structure.observed_nodes())
    statements = []
    for node in structure.nodes:
        if observed_only and node not in observed:
            continue
        parents = structure.parents(node)
        if observed_only:
            parents = [p for p in parents if p in observed]
        candidates = [
            n
            for n in structure.non_descendants(node)
            if n not in parents and (not observed_only or n in observed)
        ]
        if observed_only:
            given = set(parents)
            candidates = [
                n for n in candidates if _graph_d_separated(graph, {node}, {n}, given)
            ]
        if candidates:
            statements.append(CIStatement((node,), tuple(candidates), tuple(parents)))
    unique = dedupe_statements(statements)
    logger.debug(
        f"{structure.label}: {len(unique)} parental CI statements "
        f"({'observed only' if observed_only else 'all nodes'})"
    )
    return unique


def ci_rows(statements: Iterable[CIStatement], coords: CoordSystem) -> List[Row]:
    """
    Equality rows I(A:B|C) = H(AC) + H(BC) − H(ABC) − H(C) = 0.

    Raises:
        MissingCoordinateError: If a term is not a coordinate of `coords`
    """
    rows: List[Row] = []
    for statement in statements:
        row = statement.expr().to_row(coords)
        if not is_zero(row) and row not in rows:
            rows.append(row)
    return rows
