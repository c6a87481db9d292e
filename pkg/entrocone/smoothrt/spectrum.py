#!/usr/bin/env python3
"""
Spectra

Eigenvalue spectra of diagonal states kept as run-length encoded lists of
(value, multiplicity) pairs in strictly decreasing value order. Values are
exact Fractions whenever the input is rational; floats are accepted for
large computations and compared with a small slack. Tensor powers never
expand the d^n entries: runs are indexed by compositions of n.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

from loguru import logger
from ratgeo.rational import RationalParseError, format_rational, to_fraction

Value = Union[Fraction, float]
Entry = Tuple[Value, int]

# Comparison slack once a float enters the arithmetic
SLACK = 1e-12


class SpectrumError(ValueError):
    """Exception raised for malformed or unnormalized spectra."""

    pass


def is_exact(*values: object) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def leq(x: Value, y: Value) -> bool:
    """x ≤ y, exactly for rationals and with SLACK otherwise."""
    if is_exact(x, y):
        return x <= y
    return float(x) <= float(y) + SLACK


def log2(value: Value) -> float:
    """Base-2 logarithm that survives rationals far below the float range."""
    if isinstance(value, Fraction):
        return math.log2(value.numerator) - math.log2(value.denominator)
    return math.log2(value)


def _coerce(value: Union[int, float, str, Fraction]) -> Value:
    if isinstance(value, float):
        return value
    try:
        return to_fraction(value)
    except RationalParseError as e:
        raise SpectrumError(str(e))


def _canonical_runs(runs: Iterable[Tuple[Value, int]]) -> Tuple[Entry, ...]:
    merged: Dict[Value, int] = {}
    for value, mult in runs:
        if mult < 0:
            raise SpectrumError(f"Negative multiplicity {mult}")
        if mult == 0 or value == 0:
            continue
        merged[value] = merged.get(value, 0) + mult
    return tuple(sorted(merged.items(), key=lambda item: item[0], reverse=True))


@dataclass(frozen=True)
class Spectrum:
    """
    Decreasing eigenvalue list of a (sub)normalized state.

    Attributes:
        entries: Runs (value, multiplicity), values strictly decreasing and
            positive, total mass in (0, 1]
    """

    entries: Tuple[Entry, ...]

    def __post_init__(self):
        entries = tuple((v, int(m)) for v, m in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise SpectrumError("A spectrum needs at least one nonzero eigenvalue")
        previous = None
        for value, mult in entries:
            if mult < 1:
                raise SpectrumError(f"Multiplicity {mult} of {value} is not positive")
            if value <= 0:
                raise SpectrumError(f"Eigenvalue {value} is not positive")
            if previous is not None and value >= previous:
                raise SpectrumError("Eigenvalues must be strictly decreasing")
            previous = value
        if not leq(self.mass, 1):
            raise SpectrumError(f"Total mass {self.mass} exceeds 1")

    @classmethod
    def from_runs(cls, runs: Iterable[Tuple[Union[int, float, str, Fraction], int]]):
        """Build from unsorted runs; equal values merge and zeros drop."""
        return cls(_canonical_runs((_coerce(v), int(m)) for v, m in runs))

    @classmethod
    def from_values(cls, values: Iterable[Union[int, float, str, Fraction]]):
        return cls.from_runs((v, 1) for v in values)

    @classmethod
    def flat(cls, m: int) -> "Spectrum":
        """Maximally mixed state of rank m."""
        if m < 1:
            raise SpectrumError(f"Flat spectrum needs a positive rank, got {m}")
        return cls(((Fraction(1, m), m),))

    @classmethod
    def pure(cls) -> "Spectrum":
        return cls.flat(1)

    @classmethod
    def parse(cls, text: str) -> "Spectrum":
        """
        Parse "3/4,1/4" or run-length terms such as "1/8x8" (mixable).

        Raises:
            SpectrumError: On malformed terms or an invalid spectrum
        """
        runs = []
        for term in text.replace(" ", "").split(","):
            if not term:
                continue
            value, _, count = term.partition("x")
            try:
                mult = int(count) if count else 1
            except ValueError:
                raise SpectrumError(f"Invalid multiplicity in '{term}'")
            runs.append((_coerce(value), mult))
        if not runs:
            raise SpectrumError(f"Empty spectrum '{text}'")
        return cls.from_runs(runs)

    @property
    def rank(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def mass(self) -> Value:
        return sum((v * m for v, m in self.entries), Fraction(0))

    @property
    def top(self) -> Value:
        return self.entries[0][0]

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v, _ in self.entries)

    def is_normalized(self) -> bool:
        mass = self.mass
        return leq(mass, 1) and leq(1, mass)

    def require_normalized(self, what: str = "spectrum") -> None:
        if not self.is_normalized():
            raise SpectrumError(f"The {what} has mass {self.mass}, expected 1")

    def breakpoints(self) -> List[int]:
        """Cumulative ranks at which the step function changes value."""
        points, total = [], 0
        for _, mult in self.entries:
            total += mult
            points.append(total)
        return points

    def cumulative(self, positions: Sequence[int]) -> List[Value]:
        """
        Mass of the largest x eigenvalues for each x in positions (ascending).

        This is the integral of the step function from 0 to x.
        """
        results: List[Value] = []
        index, start, acc = 0, 0, Fraction(0)
        for x in positions:
            while index < len(self.entries) and start + self.entries[index][1] <= x:
                value, mult = self.entries[index]
                acc += value * mult
                start += mult
                index += 1
            if index < len(self.entries) and x > start:
                results.append(acc + self.entries[index][0] * (x - start))
            else:
                results.append(acc)
        return results

    def top_mass(self, k: int) -> Value:
        return self.cumulative([k])[0]

    def dense(self, limit: int = 4096) -> List[Value]:
        """
        Expanded eigenvalue list.

        Raises:
            SpectrumError: If the rank exceeds limit
        """
        if self.rank > limit:
            raise SpectrumError(f"Rank {self.rank} is too large to expand")
        return [v for v, m in self.entries for _ in range(m)]

    def to_float(self) -> "Spectrum":
        return Spectrum.from_runs((float(v), m) for v, m in self.entries)

    def shannon_entropy(self) -> float:
        """Von Neumann entropy in bits."""
        return -sum(float(v * m) * log2(v) for v, m in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        terms = []
        for value, mult in self.entries:
            text = format_rational(value) if is_exact(value) else repr(value)
            terms.append(text if mult == 1 else f"{text}x{mult}")
        return ",".join(terms)


@dataclass(frozen=True)
class MeterState:
    """
    Flat meter state: m eigenvalues 1/m, carrying λ = log2 m.

    The rank is stored since λ is only meaningful for integer m.
    """

    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise SpectrumError(f"Meter rank must be positive, got {self.rank}")

    @classmethod
    def from_lambda(cls, lam: float) -> "MeterState":
        rank = round(2**lam)
        if rank < 1 or abs(math.log2(rank) - lam) > 1e-9:
            raise SpectrumError(f"λ={lam} is not log2 of a positive integer")
        return cls(rank)

    @property
    def lam(self) -> float:
        return math.log2(self.rank)

    def to_spectrum(self) -> Spectrum:
        return Spectrum.flat(self.rank)


def tensor(a: Spectrum, b: Spectrum) -> Spectrum:
    """Spectrum of a ⊗ b."""
    return Spectrum.from_runs(
        (va * vb, ma * mb) for va, ma in a.entries for vb, mb in b.entries
    )


def _multinomial(n: int, counts: Sequence[int]) -> int:
    result, remaining = 1, n
    for k in counts:
        result *= math.comb(remaining, k)
        remaining -= k
    return result


def _compositions(n: int, r: int) -> Iterator[Tuple[int, ...]]:
    if r == 1:
        yield (n,)
        return
    for k in range(n, -1, -1):
        for rest in _compositions(n - k, r - 1):
            yield (k,) + rest


def tensor_power(a: Spectrum, n: int) -> Spectrum:
    """
    Spectrum of a^⊗n.

    One run per composition (k_1..k_r) of n over the r runs of a, with value
    Π v_i^k_i and multiplicity multinomial(n; k)·Π m_i^k_i.
    """
    if n < 0:
        raise SpectrumError(f"Tensor power must be nonnegative, got {n}")
    if n == 0:
        return Spectrum.pure()
    runs: List[Tuple[Value, int]] = []
    for counts in _compositions(n, len(a.entries)):
        value: Value = Fraction(1)
        mult = _multinomial(n, counts)
        for (v, m), k in zip(a.entries, counts):
            if k:
                value *= v**k
                mult *= m**k
        runs.append((value, mult))
    power = Spectrum(_canonical_runs(runs))
    logger.debug(f"Tensor power n={n} of {len(a)} runs: {len(power)} runs")
    return power
