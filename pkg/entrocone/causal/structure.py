#!/usr/bin/env python3
"""
Causal Structures

A causal structure is a DAG whose nodes are observed variables, latent
classical variables or latent quantum systems. Every outgoing edge of a
quantum node carries one subsystem, named `<owner>_<child>`; copies created by
post-selection share the subsystem of the node they were copied from.

Text format:

    # instrumental scenario
    node A latent-q
    node X observed
    node Z observed
    node Y observed
    edge X Z
    edge A Z
    edge A Y
    edge Z Y
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import networkx as nx
from loguru import logger

OBSERVED = "observed"
LATENT_CLASSICAL = "latent-classical"
LATENT_QUANTUM = "latent-quantum"
NODE_KINDS = (OBSERVED, LATENT_CLASSICAL, LATENT_QUANTUM)

_KIND_ALIASES = {
    "observed": OBSERVED,
    "obs": OBSERVED,
    "latent": LATENT_CLASSICAL,
    "latent-c": LATENT_CLASSICAL,
    "latent-classical": LATENT_CLASSICAL,
    "latent-q": LATENT_QUANTUM,
    "latent-quantum": LATENT_QUANTUM,
}


class CausalStructureError(Exception):
    """Exception raised for invalid causal structures or queries on them."""

    pass


class StructureParseError(CausalStructureError):
    """Exception raised for malformed structure text, with the offending line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class PostSelectionError(CausalStructureError):
    """Exception raised when a node cannot be post-selected on."""

    pass


class UnsupportedStructureError(CausalStructureError):
    """Exception raised for structures outside the supported quantum class."""

    pass


@dataclass(frozen=True)
class Subsystem:
    """Part of a quantum node's system sent to one child."""

    owner: str
    child: str

    @property
    def name(self) -> str:
        return f"{self.owner}_{self.child}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class CausalStructure:
    """
    Immutable DAG with typed nodes.

    Attributes:
        nodes: Node name -> kind, in declaration order
        edges: (parent, child) pairs
        origins: For post-selected copies, copy name -> original node name
        name: Optional label used in logs
    """

    nodes: Mapping[str, str]
    edges: Tuple[Tuple[str, str], ...]
    origins: Mapping[str, str] = field(default_factory=dict)
    name: str = ""
    _graph: nx.DiGraph = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        nodes = dict(self.nodes)
        for node, kind in nodes.items():
            if kind not in NODE_KINDS:
                raise CausalStructureError(
                    f"Node '{node}' has unknown kind '{kind}', "
                    f"expected one of {NODE_KINDS}"
                )
        graph = nx.DiGraph()
        graph.add_nodes_from(nodes)
        edges = tuple((str(p), str(c)) for p, c in self.edges)
        for parent, child in edges:
            for end in (parent, child):
                if end not in nodes:
                    raise CausalStructureError(
                        f"Edge {parent}->{child} uses unknown node '{end}'"
                    )
            if parent == child:
                raise CausalStructureError(f"Self-loop on '{parent}'")
            graph.add_edge(parent, child)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise CausalStructureError(
                f"Structure is cyclic: {' -> '.join(edge[0] for edge in cycle)}"
            )
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "origins", dict(self.origins))
        object.__setattr__(self, "_graph", graph)

    @classmethod
    def build(
        cls,
        observed: Sequence[str] = (),
        latent: Sequence[str] = (),
        quantum: Sequence[str] = (),
        edges: Iterable[Tuple[str, str]] = (),
        name: str = "",
    ) -> "CausalStructure":
        """Convenience constructor; latent nodes are declared first."""
        nodes: Dict[str, str] = {}
        groups = (
            (quantum, LATENT_QUANTUM),
            (latent, LATENT_CLASSICAL),
            (observed, OBSERVED),
        )
        for names, kind in groups:
            for node in names:
                nodes[node] = kind
        return cls(nodes, tuple(edges), name=name)

    @property
    def graph(self) -> nx.DiGraph:
        """A copy of the underlying networkx DiGraph."""
        return self._graph.copy()

    def kind(self, node: str) -> str:
        self._check(node)
        return self.nodes[node]

    def _check(self, *nodes: str) -> None:
        for node in nodes:
            if node not in self.nodes:
                raise CausalStructureError(f"Unknown node '{node}' in {self.label}")

    @property
    def label(self) -> str:
        return self.name or f"structure with {len(self.nodes)} nodes"

    def observed_nodes(self) -> List[str]:
        return [n for n, k in self.nodes.items() if k == OBSERVED]

    def latent_nodes(self) -> List[str]:
        return [n for n, k in self.nodes.items() if k != OBSERVED]

    def quantum_nodes(self) -> List[str]:
        return [n for n, k in self.nodes.items() if k == LATENT_QUANTUM]

    def classical_nodes(self) -> List[str]:
        return [n for n, k in self.nodes.items() if k != LATENT_QUANTUM]

    def is_classical(self) -> bool:
        return not self.quantum_nodes()

    def parents(self, node: str) -> List[str]:
        self._check(node)
        return self._ordered(self._graph.predecessors(node))

    def children(self, node: str) -> List[str]:
        self._check(node)
        return self._ordered(self._graph.successors(node))

    def ancestors(self, node: str) -> List[str]:
        self._check(node)
        return self._ordered(nx.ancestors(self._graph, node))

    def descendants(self, node: str) -> List[str]:
        self._check(node)
        return self._ordered(nx.descendants(self._graph, node))

    def non_descendants(self, node: str) -> List[str]:
        """Nodes that are neither `node` nor one of its descendants."""
        below = set(self.descendants(node)) | {node}
        return [n for n in self.nodes if n not in below]

    def topological_order(self) -> List[str]:
        """Topological order, ties broken by declaration order."""
        rank = {n: i for i, n in enumerate(self.nodes)}
        order = nx.lexicographical_topological_sort(self._graph, key=rank.__getitem__)
        return list(order)

    def _ordered(self, nodes: Iterable[str]) -> List[str]:
        chosen = set(nodes)
        return [n for n in self.nodes if n in chosen]

    def origin(self, node: str) -> str:
        """Original node a post-selected copy stems from (the node itself otherwise)."""
        return self.origins.get(node, node)

    def subsystems(self) -> List[Subsystem]:
        """
        Subsystems of all quantum nodes, sorted by name.

        Copies of the same original child share one subsystem.

        Raises:
            UnsupportedStructureError: If a quantum node has parents or a
                subsystem name collides with a node name
        """
        found: Dict[str, Subsystem] = {}
        for owner in self.quantum_nodes():
            if self.parents(owner):
                raise UnsupportedStructureError(
                    f"Quantum node '{owner}' has parents; "
                    f"only parentless quantum nodes "
                    f"are supported"
                )
            for child in self.children(owner):
                sub = Subsystem(owner, self.origin(child))
                if sub.name in self.nodes:
                    raise UnsupportedStructureError(
                        f"Subsystem name '{sub.name}' collides with a node name"
                    )
                found[sub.name] = sub
        return [found[name] for name in sorted(found)]

    def subsystem_of(self, owner: str, child: str) -> Subsystem:
        return Subsystem(owner, self.origin(child))

    def with_name(self, name: str) -> "CausalStructure":
        return CausalStructure(self.nodes, self.edges, self.origins, name)

    def to_text(self) -> str:
        lines = [f"node {n} {k}" for n, k in self.nodes.items()]
        lines += [f"edge {p} {c}" for p, c in self.edges]
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        return (
            f"CausalStructure({self.label}: "
            f"{len(self.nodes)} nodes, {len(self.edges)} edges)"
        )


def expanded_graph(structure: CausalStructure) -> nx.DiGraph:
    """
    DAG with subsystems as explicit nodes.

    Each quantum node feeds its subsystems, and each subsystem feeds the
    children (and their post-selected copies) it was sent to.
    """
    graph = structure.graph
    for owner in structure.quantum_nodes():
        for child in structure.children(owner):
            sub = structure.subsystem_of(owner, child).name
            graph.remove_edge(owner, child)
            graph.add_edge(owner, sub)
            graph.add_edge(sub, child)
    return graph


def quantum_ancestors(structure: CausalStructure, node: str) -> List[str]:
    """Names of the subsystems `node` descends from, sorted."""
    subs = {s.name for s in structure.subsystems()}
    if node not in structure.nodes and node not in subs:
        raise CausalStructureError(f"Unknown node or subsystem '{node}'")
    graph = expanded_graph(structure)
    return sorted(a for a in nx.ancestors(graph, node) if a in subs)


def parse_structure(text: str, name: str = "") -> CausalStructure:
    """
    Parse structure text.

    Raises:
        StructureParseError: On malformed lines, with the line number
    """
    nodes: Dict[str, str] = {}
    edges: List[Tuple[str, str]] = []
    edge_lines: List[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "node":
            if len(tokens) not in (2, 3):
                raise StructureParseError(
                    f"expected 'node NAME [KIND]', got '{line}'", number
                )
            kind = _KIND_ALIASES.get(tokens[2] if len(tokens) == 3 else "observed")
            if kind is None:
                raise StructureParseError(f"unknown node kind '{tokens[2]}'", number)
            if tokens[1] in nodes:
                raise StructureParseError(f"node '{tokens[1]}' declared twice", number)
            nodes[tokens[1]] = kind
        elif tokens[0] == "edge":
            if len(tokens) != 3:
                raise StructureParseError(
                    f"expected 'edge PARENT CHILD', got '{line}'", number
                )
            edges.append((tokens[1], tokens[2]))
            edge_lines.append(number)
        else:
            raise StructureParseError(f"unknown statement '{tokens[0]}'", number)
    for (parent, child), number in zip(edges, edge_lines):
        for end in (parent, child):
            if end not in nodes:
                raise StructureParseError(f"edge uses undeclared node '{end}'", number)
    try:
        structure = CausalStructure(nodes, tuple(edges), name=name)
    except CausalStructureError as e:
        raise StructureParseError(str(e))
    logger.debug(f"Parsed {structure}")
    return structure


def read_structure(path: Union[str, Path]) -> CausalStructure:
    path = Path(path)
    return parse_structure(path.read_text(encoding="utf-8"), name=path.stem)


def node_set(nodes: Union[str, Iterable[str]]) -> Set[str]:
    return {nodes} if isinstance(nodes, str) else set(nodes)
