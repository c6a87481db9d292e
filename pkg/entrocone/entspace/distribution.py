#!/usr/bin/env python3
"""
Joint Distributions and Their Entropy Vectors

JointDistribution stores a probability mass function over named variables.
Probabilities are exact Fractions when they come from strategies or files and
binary64 when they come from quantum states; entropies are always evaluated
in binary64 (numpy), in bits.

File format (one outcome per line, optional VARS header):

    VARS X Y Z
    0 0 0 1/2
    1 1 1 1/2
"""

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Any, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from entspace.coords import (
    CoordSystem,
    EntropySpaceError,
    EntropyVector,
    Names,
    as_names,
)
from entspace.expressions import interaction_info
from entspace.nonshannon import ingleton_expr
from loguru import logger
from ratgeo.rational import RationalParseError, parse_rational

Probability = Union[Fraction, float]
Outcome = Tuple[Hashable, ...]

_NORMALIZATION_TOL = 1e-9


class DistributionError(EntropySpaceError):
    """Exception raised for invalid or malformed probability distributions."""

    pass


@dataclass(frozen=True)
class JointDistribution:
    """Probability mass function over named finite variables."""

    variables: Tuple[str, ...]
    pmf: Mapping[Outcome, Probability]

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise DistributionError(f"Duplicate variable names in {self.variables}")
        cleaned: Dict[Outcome, Probability] = {}
        total: Probability = Fraction(0)
        for outcome, p in self.pmf.items():
            outcome = tuple(outcome)
            if len(outcome) != len(self.variables):
                raise DistributionError(
                    f"Outcome {outcome} has {len(outcome)} entries, "
                    f"expected {len(self.variables)}"
                )
            if p < 0:
                raise DistributionError(
                    f"Negative probability {p} for outcome {outcome}"
                )
            if p:
                cleaned[outcome] = cleaned.get(outcome, 0) + p
            total += p
        exact = all(isinstance(p, (int, Fraction)) for p in cleaned.values())
        off = total != 1 if exact else abs(float(total) - 1) > _NORMALIZATION_TOL
        if off:
            raise DistributionError(f"Probabilities sum to {total}, not 1")
        object.__setattr__(self, "pmf", cleaned)

    @property
    def exact(self) -> bool:
        return all(isinstance(p, (int, Fraction)) for p in self.pmf.values())

    def _positions(self, names: Names) -> List[int]:
        positions = []
        for name in as_names(names):
            if name not in self.variables:
                raise DistributionError(
                    f"Unknown variable '{name}', distribution has {self.variables}"
                )
            positions.append(self.variables.index(name))
        return positions

    def marginal(self, names: Names) -> "JointDistribution":
        """Marginal distribution on the given variables, in the given order."""
        positions = self._positions(names)
        table: Dict[Outcome, Probability] = defaultdict(lambda: Fraction(0))
        for outcome, p in self.pmf.items():
            table[tuple(outcome[i] for i in positions)] += p
        return JointDistribution(tuple(as_names(names)), dict(table))

    def relabel(self, mapping: Mapping[str, str]) -> "JointDistribution":
        return JointDistribution(
            tuple(mapping.get(v, v) for v in self.variables), dict(self.pmf)
        )

    def probability(self, **assignment: Hashable) -> Probability:
        """Marginal probability of a partial assignment, e.g. probability(Z=1)."""
        positions = self._positions(list(assignment))
        values = list(assignment.values())
        matching = (
            p
            for o, p in self.pmf.items()
            if all(o[i] == v for i, v in zip(positions, values))
        )
        return sum(matching, Fraction(0))

    def entropy(self, names: Names) -> float:
        """Shannon entropy in bits of the marginal on `names`."""
        if not as_names(names):
            return 0.0
        return shannon_entropy(list(self.marginal(names).pmf.values()))

    def support_size(self) -> int:
        return len(self.pmf)

    def __str__(self) -> str:
        names = ", ".join(self.variables)
        return f"JointDistribution({names}; {len(self.pmf)} outcomes)"


def entropy_vector(
    dist: JointDistribution, coords: Optional[CoordSystem] = None
) -> EntropyVector:
    """
    Entropy vector of a distribution in bits.

    Args:
        dist: Joint distribution
        coords: Coordinates over (a subset of) the distribution's variables;
            defaults to the full system over all of them

    Raises:
        DistributionError: If a coordinate names an unknown variable
    """
    coords = coords if coords is not None else CoordSystem.full(dist.variables)
    missing = [v for v in coords.variables if v not in dist.variables]
    if missing:
        raise DistributionError(f"Variables {missing} are not part of {dist}")
    values = tuple(dist.entropy(names) for names in coords.subset_names())
    return EntropyVector(coords, values)


def interaction_information(vector: EntropyVector) -> float:
    """
    I(X:Y:Z) of a three-variable entropy vector.

    Raises:
        EntropySpaceError: If the vector is not on a full three-variable system
    """
    coords = vector.coords
    if coords.n != 3 or not coords.is_full():
        raise EntropySpaceError(
            f"Interaction information needs a full 3-variable vector, "
            f"got {coords.dim} coordinates"
        )
    x, y, z = coords.variables
    return interaction_info(x, y, z).evaluate(vector)


def ingleton_quantity(vector: EntropyVector, quad: Sequence[str]) -> float:
    """Value of the Ingleton expression on (W, X; Y, Z); negative means violated."""
    return ingleton_expr(quad).evaluate(vector)


def _parse_outcome(token: str) -> Hashable:
    try:
        return int(token)
    except ValueError:
        return token


def parse_distribution(text: str, variables: Sequence[str] = ()) -> JointDistribution:
    """
    Parse the distribution file format.

    Raises:
        DistributionError: On malformed lines (with line number) or bad normalisation
    """
    names: List[str] = list(variables)
    pmf: Dict[Outcome, Probability] = defaultdict(lambda: Fraction(0))
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "VARS":
            names = tokens[1:]
            continue
        if not names:
            names = [f"X{i}" for i in range(1, len(tokens))]
        if len(tokens) != len(names) + 1:
            raise DistributionError(
                f"line {number}: expected {len(names)} outcomes and a probability"
            )
        try:
            p = parse_rational(tokens[-1])
        except RationalParseError as e:
            raise DistributionError(f"line {number}: {e}")
        pmf[tuple(_parse_outcome(t) for t in tokens[:-1])] += p
    if not pmf:
        raise DistributionError("Distribution file has no outcomes")
    return JointDistribution(tuple(names), dict(pmf))


def read_distribution(path: Union[str, Path]) -> JointDistribution:
    path = Path(path)
    logger.debug(f"Reading distribution from {path}")
    return parse_distribution(path.read_text(encoding="utf-8"))


def independent_product(*parts: JointDistribution) -> JointDistribution:
    """Product distribution of independent parts with disjoint variables."""
    variables: Tuple[str, ...] = ()
    pmf: Dict[Outcome, Probability] = {(): Fraction(1)}
    for part in parts:
        variables = variables + part.variables
        pmf = {
            o + q: p * r
            for (o, p), (q, r) in product(pmf.items(), part.pmf.items())
        }
    return JointDistribution(variables, pmf)


def uniform_bits(names: Sequence[str]) -> JointDistribution:
    """Independent uniform bits."""
    weight = Fraction(1, 2 ** len(names))
    outcomes = product((0, 1), repeat=len(names))
    return JointDistribution(tuple(names), {o: weight for o in outcomes})


def _gf2_rank(vectors: Sequence[int]) -> int:
    basis: Dict[int, int] = {}
    for vec in vectors:
        while vec:
            lead = vec.bit_length() - 1
            if lead not in basis:
                basis[lead] = vec
                break
            vec ^= basis[lead]
    return len(basis)


def linear_rank_vector(
    coords: CoordSystem,
    ambient_dim: int = 4,
    max_generators: int = 2,
    rng: Optional[np.random.Generator] = None,
) -> EntropyVector:
    """
    Rank vector of random subspaces of GF(2)^d.

    Each variable is the span of up to `max_generators` random vectors; the
    coordinate of a subset is the dimension of the sum of its subspaces.
    Such vectors are linearly representable and satisfy every Ingleton row.
    """
    rng = rng if rng is not None else np.random.default_rng()
    generators: List[List[int]] = []
    for _ in coords.variables:
        count = int(rng.integers(1, max_generators + 1))
        generators.append(
            [int(rng.integers(0, 1 << ambient_dim)) for _ in range(count)]
        )
    values = []
    for mask in coords.masks:
        vectors = [
            g for i, gens in enumerate(generators) if mask >> i & 1 for g in gens
        ]
        values.append(float(_gf2_rank(vectors)))
    return EntropyVector(coords, tuple(values))


ConditionalTable = Mapping[Tuple[int, int], Any]


def chsh_value(conditional: ConditionalTable) -> float:
    """
    CHSH expression Σ_{a,b} (−1)^{ab} E_ab with E_ab = Σ_{x,y} (−1)^{x⊕y} P(x,y|a,b).

    Args:
        conditional: Map (a, b) -> 2×2 array-like of P(x, y | a, b)
    """
    value = 0.0
    for a, b in product((0, 1), repeat=2):
        table = np.asarray(conditional[(a, b)], dtype=float)
        if abs(table.sum() - 1) > _NORMALIZATION_TOL:
            raise DistributionError(f"P(x,y|{a},{b}) sums to {table.sum()}, not 1")
        correlator = table[0, 0] + table[1, 1] - table[0, 1] - table[1, 0]
        value += (-1) ** (a * b) * correlator
    return float(value)


def shannon_entropy(probs: Sequence[Probability]) -> float:
    """Entropy in bits of a probability list."""
    arr = np.array([float(p) for p in probs], dtype=float)
    arr = arr[arr > 0]
    if arr.size and not math.isclose(float(arr.sum()), 1.0, abs_tol=_NORMALIZATION_TOL):
        raise DistributionError(f"Probabilities sum to {arr.sum()}, not 1")
    return float(-np.sum(arr * np.log2(arr)))
