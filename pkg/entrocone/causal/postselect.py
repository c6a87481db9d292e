#!/usr/bin/env python3
"""
Post-selection

Conditioning on the values of a parentless observed node X. The node is
removed and every descendant of X is replaced by one copy per value of X,
named `Y|X=x` (further post-selections append `&W=w`). Parent relations:

- between two non-descendants they are kept;
- a non-descendant is a parent of every copy of each of its former children;
- `B|X=x` is a parent of `A|X=x` iff B was a parent of A, for equal x only.
"""

from typing import Dict, List, Tuple

from causal.structure import OBSERVED, CausalStructure, PostSelectionError
from loguru import logger


def copy_name(node: str, conditioned: str, value: int) -> str:
    separator = "&" if "|" in node else "|"
    return f"{node}{separator}{conditioned}={value}"


def postselect(structure: CausalStructure, node: str, k: int = 2) -> CausalStructure:
    """
    Post-select on every value of a parentless observed node.

    Args:
        structure: Causal structure
        node: Parentless observed node to condition on
        k: Number of values the node takes

    Returns:
        The post-selected structure. Nodes keep declaration order; the copies
        of a descendant replace it in place, ordered by value.

    Raises:
        PostSelectionError: If the node is unknown, latent, has parents or k < 1
    """
    if node not in structure.nodes:
        raise PostSelectionError(f"Cannot post-select on unknown node '{node}'")
    if structure.kind(node) != OBSERVED:
        raise PostSelectionError(f"Cannot post-select on latent node '{node}'")
    if structure.parents(node):
        raise PostSelectionError(
            f"Cannot post-select on '{node}': it has parents {structure.parents(node)}"
        )
    if k < 1:
        raise PostSelectionError(f"Cardinality of '{node}' must be positive, got {k}")

    below = set(structure.descendants(node))
    copies: Dict[str, List[str]] = {}
    nodes: Dict[str, str] = {}
    origins = dict(structure.origins)
    for name, kind in structure.nodes.items():
        if name == node:
            continue
        if name in below:
            copies[name] = [copy_name(name, node, x) for x in range(k)]
            for copy in copies[name]:
                nodes[copy] = kind
                origins[copy] = structure.origin(name)
        else:
            nodes[name] = kind

    edges: List[Tuple[str, str]] = []
    for parent, child in structure.edges:
        if node in (parent, child):
            continue
        if parent in below:
            edges.extend(zip(copies[parent], copies[child]))
        elif child in below:
            edges.extend((parent, copy) for copy in copies[child])
        else:
            edges.append((parent, child))

    origins = {n: o for n, o in origins.items() if n in nodes}
    label = f"{structure.label}|{node}" if structure.name else ""
    result = CausalStructure(nodes, tuple(edges), origins, label)
    logger.debug(
        f"Post-selected {structure.label} on {node} (k={k}): "
        f"{len(below)} descendants copied, {len(result.nodes)} nodes"
    )
    return result
