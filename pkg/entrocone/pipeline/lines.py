#!/usr/bin/env python3
"""
Line-like Structures

P_n: observed X1..Xn with latent C_i shared by neighbours X_i and X_{i+1}.
Its independence constraints fix every entropy from the entropies of the
contiguous sequences, and only n monotonicity plus n(n−1)/2 submodularity
rows survive, giving a simplicial marginal cone with n(n+1)/2 rays. Each ray
is reached by one of the distributions D_{i,j}, 1 ≤ i ≤ j ≤ n.
"""

from typing import List, Optional, Tuple

from causal.structure import CausalStructure
from entspace.coords import CoordSystem
from entspace.expressions import EntropyExpr, H
from entspace.strategy import Expr, Strategy, const, ref, xor
from loguru import logger
from pipeline.marginal import PipelineError
from ratgeo.cone import HCone


def _check(n: int) -> None:
    if n < 2:
        raise PipelineError(f"Line-like structures need n >= 2, got {n}")


def _x(k: int) -> str:
    return f"X{k}"


def _c(k: int) -> str:
    return f"C{k}"


def pn_structure(n: int) -> CausalStructure:
    """P_n with 2n − 1 nodes."""
    _check(n)
    observed = [_x(k) for k in range(1, n + 1)]
    latent = [_c(k) for k in range(1, n)]
    edges = []
    for k in range(1, n):
        edges += [(_c(k), _x(k)), (_c(k), _x(k + 1))]
    return CausalStructure.build(observed, latent, edges=edges, name=f"P{n}")


def _sequence(start: int, end: int) -> Tuple[str, ...]:
    return tuple(_x(k) for k in range(start, end + 1))


def pn_coords(n: int) -> CoordSystem:
    """Contiguous sequences X_i..X_j ordered by length, then start."""
    _check(n)
    subsets = [
        _sequence(start, start + length - 1)
        for length in range(1, n + 1)
        for start in range(1, n - length + 2)
    ]
    return CoordSystem.from_subset_names(subsets, [_x(k) for k in range(1, n + 1)])


def _h(start: int, end: int) -> EntropyExpr:
    """H(X_start..X_end), zero for an empty range."""
    if start > end:
        return EntropyExpr()
    return H(_sequence(start, end))


def pn_rows(n: int) -> List[EntropyExpr]:
    """
    The surviving Shannon rows.

    Monotonicity H(X1..Xn) − H(X1..X_{k−1}) − H(X_{k+1}..Xn) ≥ 0 for every k,
    then I(X_i : X_j | X_{i+1}..X_{j−1}) ≥ 0 for i < j.
    """
    _check(n)
    rows = [_h(1, n) - _h(1, k - 1) - _h(k + 1, n) for k in range(1, n + 1)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            rows.append(_h(i, j - 1) + _h(i + 1, j) - _h(i, j) - _h(i + 1, j - 1))
    return rows


def pn_reduced_cone(n: int) -> HCone:
    """Marginal cone of P_n over the contiguous-sequence coordinates."""
    coords = pn_coords(n)
    rows = [expr.to_row(coords) for expr in pn_rows(n)]
    logger.info(f"P{n} reduced cone: {len(rows)} rows over {coords.dim} coordinates")
    return HCone(coords.dim, (), rows, label=coords)


def _dij_definition(n: int, i: int, j: int, k: int) -> Expr:
    if i == j:
        if k != i:
            return const(1)
        return ref(_c(i)) if i < n else ref(_c(n - 1))
    if k == i:
        return ref(_c(i))
    if i < k < j:
        return xor(ref(_c(k - 1)), ref(_c(k)))
    if k == j:
        return ref(_c(j - 1))
    return const(1)


def pn_dij_strategy(n: int, i: int, j: int) -> Strategy:
    """
    Distribution D_{i,j} on the uniform bits C1..C_{n−1}.

    D_{i,i} sets X_i = C_i (X_n = C_{n−1}); for i < j, X_i = C_i,
    X_k = C_{k−1} ⊕ C_k strictly between, X_j = C_{j−1}. All other
    observed variables are the constant 1.
    """
    _check(n)
    if not 1 <= i <= j <= n:
        raise PipelineError(f"D_{{i,j}} needs 1 <= i <= j <= {n}, got ({i}, {j})")
    strategy = Strategy(name=f"P{n}-D{i},{j}")
    for k in range(1, n):
        strategy.add_source(_c(k))
    for k in range(1, n + 1):
        strategy.define(_x(k), _dij_definition(n, i, j, k))
    return strategy


def pn_dij_strategies(n: int) -> List[Strategy]:
    """All D_{i,j} in the order (1,1), (1,2), ..., (n,n)."""
    _check(n)
    return [
        pn_dij_strategy(n, i, j) for i in range(1, n + 1) for j in range(i, n + 1)
    ]


def pn_dij_vector(
    n: int, i: int, j: int, coords: Optional[CoordSystem] = None
) -> List[int]:
    """
    Entropy vector of D_{i,j} on contiguous sequences, in closed form.

    H(X_k..X_l) counts the active variables in [k, l]; when i < j and the
    sequence covers all of [i, j] the parity constraint removes one bit.
    """
    coords = coords if coords is not None else pn_coords(n)
    values = []
    for names in coords.subset_names():
        positions = sorted(int(name[1:]) for name in names)
        k, l = positions[0], positions[-1]
        overlap = max(0, min(l, j) - max(k, i) + 1)
        if i < j and k <= i and j <= l:
            overlap -= 1
        values.append(overlap)
    return values
