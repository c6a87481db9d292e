#!/usr/bin/env python3
"""
Linear Entropy Expressions

EntropyExpr is a linear combination of joint entropies H(S) keyed by variable
name sets, independent of any coordinate order. Information measures expand
into joint entropies:

    H(A|B)     = H(AB) − H(B)
    I(A:B|C)   = H(AC) + H(BC) − H(ABC) − H(C)
    I(A:B:C)   = I(A:B) − I(A:B|C)

to_row() turns an expression into a coefficient row of a CoordSystem.
"""

from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from entspace.coords import (
    CoordSystem,
    EntropyVector,
    MissingCoordinateError,
    Names,
    as_names,
)

Coefficient = Union[int, Fraction]


class EntropyExpr:
    """Linear combination Σ c_S H(S) with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[FrozenSet[str], Coefficient]] = None):
        self.terms: Dict[FrozenSet[str], Fraction] = {}
        for subset, coef in (terms or {}).items():
            self._accumulate(frozenset(subset), Fraction(coef))

    def _accumulate(self, subset: FrozenSet[str], coef: Fraction) -> None:
        if not subset or coef == 0:
            return
        value = self.terms.get(subset, Fraction(0)) + coef
        if value == 0:
            self.terms.pop(subset, None)
        else:
            self.terms[subset] = value

    def __add__(self, other: "EntropyExpr") -> "EntropyExpr":
        result = EntropyExpr(self.terms)
        for subset, coef in other.terms.items():
            result._accumulate(subset, coef)
        return result

    def __neg__(self) -> "EntropyExpr":
        return EntropyExpr({s: -c for s, c in self.terms.items()})

    def __sub__(self, other: "EntropyExpr") -> "EntropyExpr":
        return self + (-other)

    def __mul__(self, scalar: Coefficient) -> "EntropyExpr":
        return EntropyExpr({s: c * Fraction(scalar) for s, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EntropyExpr) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def variables(self) -> FrozenSet[str]:
        return frozenset().union(*self.terms) if self.terms else frozenset()

    def relabel(self, mapping: Dict[str, str]) -> "EntropyExpr":
        """Rename variables; names missing from the mapping are kept."""
        return EntropyExpr(
            {frozenset(mapping.get(v, v) for v in s): c for s, c in self.terms.items()}
        )

    def to_row(self, coords: CoordSystem) -> Tuple[Fraction, ...]:
        """
        Coefficient row over a coordinate system.

        Raises:
            MissingCoordinateError: If a term's subset has no coordinate
        """
        row = [Fraction(0)] * coords.dim
        for subset, coef in self.terms.items():
            try:
                row[coords.index(tuple(subset))] += coef
            except MissingCoordinateError:
                raise MissingCoordinateError(
                    f"Term H({','.join(sorted(subset))}) "
                    f"is not a coordinate of {coords}"
                )
        return tuple(row)

    @classmethod
    def from_row(cls, row: Sequence[Coefficient], coords: CoordSystem) -> "EntropyExpr":
        pairs = zip(coords.subset_names(), row)
        return cls({frozenset(names): c for names, c in pairs if c})

    def evaluate(self, vector: EntropyVector) -> float:
        return float(sum(float(c) * vector[tuple(s)] for s, c in self.terms.items()))

    def _sorted_terms(self) -> List[Tuple[FrozenSet[str], Fraction]]:
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), sorted(t[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for subset, coef in self._sorted_terms():
            names = sorted(subset)
            single = all(len(v) == 1 for v in names)
            label = "".join(names) if single else ",".join(names)
            sign = "-" if coef < 0 else "+"
            magnitude = abs(coef)
            factor = "" if magnitude == 1 else f"{magnitude}"
            parts.append(f"{sign}{factor}H({label})")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text

    def __repr__(self) -> str:
        return f"EntropyExpr({self})"


def _union(*groups: Names) -> FrozenSet[str]:
    result: FrozenSet[str] = frozenset()
    for group in groups:
        result = result | frozenset(as_names(group))
    return result


def H(*names: Names) -> EntropyExpr:
    """Joint entropy of the union of the given names."""
    return EntropyExpr({_union(*names): 1})


def cond_entropy(a: Names, b: Names = ()) -> EntropyExpr:
    """H(A|B)."""
    return H(a, b) - H(b)


def mutual_info(a: Names, b: Names, given: Names = ()) -> EntropyExpr:
    """I(A:B|C); overlapping arguments are allowed and follow the expansion."""
    return H(a, given) + H(b, given) - H(a, b, given) - H(given)


def interaction_info(a: Names, b: Names, c: Names) -> EntropyExpr:
    """I(A:B:C) = I(A:B) − I(A:B|C)."""
    return mutual_info(a, b) - mutual_info(a, b, c)


def total(exprs: Iterable[EntropyExpr]) -> EntropyExpr:
    result = EntropyExpr()
    for expr in exprs:
        result = result + expr
    return result
