#!/usr/bin/env python3
"""
Quantum and Hybrid Causal Structures

Entropy constraints for structures with latent quantum nodes. Quantum nodes
are parentless; each outgoing edge carries a subsystem, and observed nodes
are measurements on their quantum inputs and classical parents. Only members
of one coexisting set (no member a quantum ancestor of another) share a joint
state, so every row below lives inside a single coexisting set:

- basic rows: submodularity, monotonicity where the dropped part is
  classical, conditional entropies of quantum parts given all classical
  members, weak monotonicity for single subsystems, optional purity;
- independence rows: members with disjoint root sources are independent,
  and latent classical members obey local Markov statements;
- data processing rows: measuring a node's inputs cannot increase their
  correlation with the rest of a coexisting set.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import networkx as nx
from causal.independence import CIStatement, d_separated
from causal.postselect import postselect
from causal.structure import LATENT_CLASSICAL, CausalStructure, expanded_graph
from entspace.coords import CoordSystem, MissingCoordinateError
from entspace.expressions import EntropyExpr, H, cond_entropy, mutual_info
from loguru import logger
from ratgeo.rational import Row, is_zero, primitive

CoexistingSet = Tuple[str, ...]


@dataclass(frozen=True)
class RowJustification:
    """Why a row holds: the coexisting set it lives in, the rule and the statement."""

    members: CoexistingSet
    rule: str
    text: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.text} in {{{', '.join(self.members)}}}"


@dataclass(frozen=True)
class QuantumRow:
    row: Row
    justification: RowJustification
    equality: bool = False


def member_order(structure: CausalStructure) -> List[str]:
    """Subsystems sorted by name, then classical nodes in declaration order."""
    return [s.name for s in structure.subsystems()] + structure.classical_nodes()


def _quantum_ancestry(
    structure: CausalStructure,
) -> Tuple[nx.DiGraph, Dict[str, Set[str]]]:
    graph = expanded_graph(structure)
    subs = {s.name for s in structure.subsystems()}
    ancestry = {
        member: {a for a in nx.ancestors(graph, member) if a in subs}
        for member in member_order(structure)
    }
    return graph, ancestry


def _copies_of_one_node(structure: CausalStructure, u: str, v: str) -> bool:
    if u not in structure.nodes or v not in structure.nodes:
        return False
    return u != structure.origin(u) and structure.origin(u) == structure.origin(v)


def coexisting_sets(structure: CausalStructure) -> List[CoexistingSet]:
    """
    Maximal coexisting sets.

    Two members coexist unless one is a quantum ancestor of the other, or
    they are post-selected copies of the same node with a quantum ancestor
    (a measured system cannot be measured again for another copy).
    A classical structure has the single set of all its nodes.

    Raises:
        UnsupportedStructureError: If a quantum node has parents
    """
    members = member_order(structure)
    if structure.is_classical():
        return [tuple(members)]
    _, ancestry = _quantum_ancestry(structure)
    position = {m: i for i, m in enumerate(members)}
    graph = nx.Graph()
    graph.add_nodes_from(members)
    for u, v in combinations(members, 2):
        if u in ancestry[v] or v in ancestry[u]:
            continue
        if ancestry[u] and _copies_of_one_node(structure, u, v):
            continue
        graph.add_edge(u, v)
    cliques = nx.find_cliques(graph)
    sets = [tuple(sorted(c, key=position.__getitem__)) for c in cliques]
    sets.sort(key=lambda s: [position[m] for m in s])
    logger.debug(f"{structure.label}: {len(sets)} maximal coexisting sets")
    return sets


def quantum_coords(
    structure: CausalStructure, sets: Optional[Sequence[CoexistingSet]] = None
) -> CoordSystem:
    """Every nonempty subset of every coexisting set."""
    sets = sets if sets is not None else coexisting_sets(structure)
    return CoordSystem.from_families(member_order(structure), sets)


def _subsets(members: Sequence[str]) -> List[Tuple[str, ...]]:
    sizes = range(len(members) + 1)
    return [subset for size in sizes for subset in combinations(members, size)]


def _add(
    rows: List[QuantumRow],
    seen: Set[Tuple[Tuple[int, ...], bool]],
    expr: EntropyExpr,
    coords: CoordSystem,
    justification: RowJustification,
    equality: bool = False,
) -> None:
    row = expr.to_row(coords)
    if is_zero(row):
        return
    key = (tuple(primitive(row)), equality)
    if key in seen:
        return
    seen.add(key)
    rows.append(QuantumRow(row, justification, equality))


def _check_coords(sets: Sequence[CoexistingSet], coords: CoordSystem) -> None:
    for members in sets:
        for name in members:
            if name not in coords.variables:
                raise MissingCoordinateError(
                    f"Coexisting member '{name}' is not a variable of {coords}"
                )


def quantum_basic_rows(
    structure: CausalStructure, coords: CoordSystem, purify: bool = False
) -> List[QuantumRow]:
    """
    Basic inequalities of every coexisting set, each with its justification.

    Args:
        structure: Quantum or hybrid causal structure
        coords: Coordinates containing every subset of every coexisting set
        purify: Add purity and Schmidt equalities for each quantum node

    Raises:
        MissingCoordinateError: If a coexisting subset is not a coordinate
    """
    sets = coexisting_sets(structure)
    _check_coords(sets, coords)
    quantum = {s.name for s in structure.subsystems()}
    classical_of = {m: {v for v in m if v not in quantum} for m in sets}
    rows: List[QuantumRow] = []
    seen: Set[Tuple[Tuple[int, ...], bool]] = set()
    for members in sets:
        classical = [m for m in members if m not in quantum]
        parts = [m for m in members if m in quantum]
        for a, b in combinations(members, 2):
            rest = [m for m in members if m not in (a, b)]
            for given in _subsets(rest):
                expr = mutual_info(a, b, given)
                why = RowJustification(members, "submodularity", f"{expr} >= 0")
                _add(rows, seen, expr, coords, why)
        for c in classical:
            expr = cond_entropy(c, [m for m in members if m != c])
            why = RowJustification(
                members, "monotonicity", f"{expr} >= 0, {c} classical"
            )
            _add(rows, seen, expr, coords, why)
        for size in range(1, len(parts) + 1):
            for chosen in combinations(parts, size):
                # H(Q|C) = H(Q|C') + I(Q : C'-C | C) for a set with more
                # classical members alongside Q
                if any(
                    set(chosen) <= set(other)
                    and set(classical) < classical_of[other]
                    for other in sets
                ):
                    continue
                expr = cond_entropy(chosen, classical)
                why = RowJustification(
                    members,
                    "cq-conditioning",
                    f"{expr} >= 0, conditioning is classical",
                )
                _add(rows, seen, expr, coords, why)
        for q in parts:
            rest = [m for m in members if m != q]
            for size in range(len(rest) // 2 + 1):
                for left in combinations(rest, size):
                    right = tuple(m for m in rest if m not in left)
                    # both halves classical: each term is a cq-conditioning row
                    if all(m not in quantum for m in left + right):
                        continue
                    expr = cond_entropy(q, left) + cond_entropy(q, right)
                    why = RowJustification(members, "weak-monotonicity", f"{expr} >= 0")
                    _add(rows, seen, expr, coords, why)
    if purify:
        rows.extend(_purity_rows(structure, coords, seen))
    logger.debug(
        f"{structure.label}: {len(rows)} basic quantum rows over {len(sets)} sets"
    )
    return rows


def _purity_rows(
    structure: CausalStructure,
    coords: CoordSystem,
    seen: Set[Tuple[Tuple[int, ...], bool]],
) -> List[QuantumRow]:
    rows: List[QuantumRow] = []
    for owner in structure.quantum_nodes():
        subs = tuple(s.name for s in structure.subsystems() if s.owner == owner)
        if subs in coords:
            text = f"H({','.join(subs)}) = 0, pure source"
            why = RowJustification(subs, "purity", text)
            _add(rows, seen, H(subs), coords, why, equality=True)
        for size in range(1, len(subs) // 2 + 1):
            for part in combinations(subs, size):
                rest = tuple(s for s in subs if s not in part)
                if part not in coords or rest not in coords:
                    continue
                expr = H(part) - H(rest)
                why = RowJustification(subs, "schmidt", f"{expr} = 0, pure source")
                _add(rows, seen, expr, coords, why, equality=True)
    return rows


def _roots(structure: CausalStructure, member: str) -> FrozenSet[str]:
    if member not in structure.nodes:
        return frozenset(s.owner for s in structure.subsystems() if s.name == member)
    graph = structure.graph
    above = nx.ancestors(graph, member) | {member}
    return frozenset(n for n in above if graph.in_degree(n) == 0)


def quantum_ci_rows(
    structure: CausalStructure, coords: CoordSystem
) -> List[QuantumRow]:
    """
    Independence equalities inside coexisting sets.

    Members are linked when they share a root source; each linkage
    component is independent of the rest of its set. Latent classical
    members also contribute local Markov statements checked by d-separation
    on the graph with explicit subsystems. Classical structures give none.
    """
    if structure.is_classical():
        return []
    sets = coexisting_sets(structure)
    _check_coords(sets, coords)
    graph, _ = _quantum_ancestry(structure)
    roots = {m: _roots(structure, m) for members in sets for m in members}
    rows: List[QuantumRow] = []
    seen: Set[Tuple[Tuple[int, ...], bool]] = set()
    for members in sets:
        statements: List[Tuple[CIStatement, str]] = []
        linkage = nx.Graph()
        linkage.add_nodes_from(members)
        for u, v in combinations(members, 2):
            if roots[u] & roots[v]:
                linkage.add_edge(u, v)
        components = [
            tuple(m for m in members if m in comp)
            for comp in nx.connected_components(linkage)
        ]
        if len(components) > 1:
            components.sort(key=lambda comp: members.index(comp[0]))
            for comp in components:
                rest = tuple(m for m in members if m not in comp)
                statements.append((CIStatement(comp, rest), "independent-sources"))
        for member in members:
            if structure.nodes.get(member) != LATENT_CLASSICAL:
                continue
            parents = list(graph.predecessors(member))
            if any(p not in members for p in parents):
                continue
            below = nx.descendants(graph, member)
            candidates = [
                m
                for m in members
                if m != member
                and m in structure.nodes
                and m not in parents
                and m not in below
                and d_separated(structure, member, m, parents, graph=graph)
            ]
            if candidates:
                statement = CIStatement((member,), tuple(candidates), tuple(parents))
                statements.append((statement, "local-markov"))
        keys = set()
        for statement, rule in statements:
            if statement.key in keys:
                continue
            keys.add(statement.key)
            why = RowJustification(members, rule, str(statement))
            _add(rows, seen, statement.expr(), coords, why, equality=True)
    logger.debug(f"{structure.label}: {len(rows)} quantum independence rows")
    return rows


def dpi_rows(structure: CausalStructure, coords: CoordSystem) -> List[QuantumRow]:
    """
    Data processing inequalities of the measurement nodes.

    For a node N with quantum inputs Q and classical parents C, every
    coexisting set containing Q ∪ C, and every split of the remaining
    members into S and a nonempty T:
    I(QCS : T) ≥ I(NCS : T). Compositions of maps are implied and skipped.
    """
    if structure.is_classical():
        return []
    sets = coexisting_sets(structure)
    _check_coords(sets, coords)
    graph = expanded_graph(structure)
    quantum = {s.name for s in structure.subsystems()}
    rows: List[QuantumRow] = []
    seen: Set[Tuple[Tuple[int, ...], bool]] = set()
    for node in structure.classical_nodes():
        inputs = list(graph.predecessors(node))
        q_in = [p for p in inputs if p in quantum]
        if not q_in:
            continue
        c_in = [p for p in inputs if p not in quantum]
        for members in sets:
            if not set(inputs) <= set(members):
                continue
            rest = [m for m in members if m not in inputs]
            pre = tuple(m for m in members if m in inputs)
            post = (node,) + tuple(m for m in members if m in c_in)
            for kept in _subsets(rest):
                target = tuple(m for m in rest if m not in kept)
                if not target:
                    continue
                expr = mutual_info(pre + tuple(kept), target) - mutual_info(
                    post + tuple(kept), target
                )
                text = f"{expr} >= 0 for {node}"
                why = RowJustification(members, "data-processing", text)
                try:
                    _add(rows, seen, expr, coords, why)
                except MissingCoordinateError as e:
                    logger.debug(f"Skipping data processing row for {node}: {e}")
    logger.debug(f"{structure.label}: {len(rows)} data processing rows")
    return rows


def quantum_postselect_coex(
    structure: CausalStructure, node: str, k: int = 2
) -> Tuple[CausalStructure, List[CoexistingSet]]:
    """
    Post-select on a parentless observed node and list the coexisting sets.

    Copies of a node with a quantum ancestor land in separate sets; for a
    classical structure the result is the post-selected structure with a
    single joint set.

    Raises:
        PostSelectionError: As for postselect
    """
    selected = postselect(structure, node, k)
    return selected, coexisting_sets(selected)
