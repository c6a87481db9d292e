#!/usr/bin/env python3
"""
Exact Rational Linear Algebra

Row reduction, null spaces and primitive integer scaling over
fractions.Fraction. Everything here is exact; the only float entry point is
rationalize(), which turns a float LP answer into a candidate certificate.
"""

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple, Union

Number = Union[int, Fraction]
Row = Tuple[Fraction, ...]
IntRow = Tuple[int, ...]


class RationalParseError(ValueError):
    """Exception raised when a token is not a valid rational number."""

    pass


def to_fraction(value: Union[int, float, str, Fraction]) -> Fraction:
    """
    Convert a value to an exact Fraction.

    Floats convert exactly (binary expansion), strings accept "p/q", integers
    and finite decimals.

    Raises:
        RationalParseError: If a string cannot be parsed
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


def parse_rational(token: str) -> Fraction:
    """Parse a single rational token such as "-3/4", "2" or "0.125"."""
    try:
        return Fraction(token.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise RationalParseError(f"Invalid rational number '{token}': {e}")


def format_rational(value: Fraction) -> str:
    """Print a rational as "p" or "p/q"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_row(values: Iterable[Union[int, float, str, Fraction]]) -> Row:
    return tuple(to_fraction(v) for v in values)


def is_zero(row: Sequence[Number]) -> bool:
    return all(v == 0 for v in row)


def dot(a: Sequence[Number], b: Sequence[Number]) -> Fraction:
    return Fraction(sum(x * y for x, y in zip(a, b) if x and y))


def int_dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def primitive(row: Sequence[Number]) -> IntRow:
    """
    Scale a row by a positive factor to the primitive integer vector.

    The direction (and hence the sign of every entry) is preserved, so this is
    safe for inequalities as well as rays. A zero row stays zero.
    """
    fracs = [Fraction(v) for v in row]
    denominators = [f.denominator for f in fracs if f]
    if not denominators:
        return tuple(0 for _ in fracs)
    lcm = reduce(lambda a, b: a * b // gcd(a, b), denominators, 1)
    ints = [int(f * lcm) for f in fracs]
    g = reduce(gcd, (abs(v) for v in ints if v), 0)
    return tuple(v // g for v in ints)


def sign_normalized(row: Sequence[int]) -> IntRow:
    """Flip a row so that its first nonzero entry is positive."""
    for v in row:
        if v:
            return tuple(row) if v > 0 else tuple(-x for x in row)
    return tuple(row)


def rref(
    rows: Sequence[Sequence[Number]], dim: int, reverse: bool = False
) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Reduced row-echelon form.

    Args:
        rows: Matrix rows
        dim: Number of columns
        reverse: Pivot on the highest columns first

    Returns:
        (nonzero reduced rows, pivot column per row)
    """
    mat = [[Fraction(v) for v in r] for r in rows]
    columns = range(dim - 1, -1, -1) if reverse else range(dim)
    pivots: List[int] = []
    r = 0
    for c in columns:
        if r == len(mat):
            break
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        lead = mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], lead)]
        pivots.append(c)
        r += 1
    return mat[:r], pivots


def rank(rows: Sequence[Sequence[Number]], dim: int) -> int:
    return len(rref(rows, dim)[0])


def nullspace(rows: Sequence[Sequence[Number]], dim: int) -> List[IntRow]:
    """
    Integer basis of {x : row·x = 0 for every row}.

    Basis vectors are primitive; the basis has dim − rank(rows) elements.
    """
    reduced, pivots = rref(rows, dim)
    pivot_set = set(pivots)
    basis: List[IntRow] = []
    for free in range(dim):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * dim
        vec[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[free]
        basis.append(primitive(vec))
    return basis


def independent_rows(rows: Sequence[Sequence[Number]], dim: int) -> List[int]:
    """Indices of a maximal linearly independent subset, chosen greedily."""
    chosen: List[int] = []
    basis: List[List[Fraction]] = []
    pivots: List[int] = []
    for idx, row in enumerate(rows):
        vec = [Fraction(v) for v in row]
        for b, p in zip(basis, pivots):
            if vec[p]:
                f = vec[p]
                vec = [a - f * x for a, x in zip(vec, b)]
        lead = next((c for c in range(dim) if vec[c]), None)
        if lead is None:
            continue
        inv = 1 / vec[lead]
        vec = [v * inv for v in vec]
        for k, b in enumerate(basis):
            if b[lead]:
                f = b[lead]
                basis[k] = [a - f * x for a, x in zip(b, vec)]
        basis.append(vec)
        pivots.append(lead)
        chosen.append(idx)
    return chosen


def solve(
    columns: Sequence[Sequence[Number]], target: Sequence[Number]
) -> Optional[List[Fraction]]:
    """
    Solve Σ_j x_j · columns[j] = target exactly.

    Returns one solution (free variables set to zero) or None when the system
    is inconsistent.
    """
    if not columns:
        return [] if is_zero(target) else None
    dim = len(target)
    n = len(columns)
    augmented = [[Fraction(columns[j][i]) for j in range(n)] + [Fraction(target[i])]
                 for i in range(dim)]
    reduced, pivots = rref(augmented, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(reduced, pivots):
        x[p] = row[n]
    return x


def rationalize(value: float, max_denominator: int = 10**9) -> Fraction:
    return Fraction(value).limit_denominator(max_denominator)


def lex_key(row: Sequence[Number]) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in row)
