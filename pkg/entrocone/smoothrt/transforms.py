#!/usr/bin/env python3
"""
State Transformations

Probabilistic transformations ρ → (1−ε)σ + εξ decided as an exact linear
program, and the embezzling construction that lowers a meter's λ at an
arbitrarily small error by borrowing from a catalyst.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from loguru import logger
from ratgeo.lp import solve_lp
from smoothrt.majorization import Eps, SmoothingError, as_eps
from smoothrt.spectrum import Spectrum, Value

# Dense dimension limit of the exact transformation LP (quadratic in d)
PROB_LP_MAX_DIM = 24


@dataclass
class TransformResult:
    """
    Feasibility of a probabilistic transformation.

    Attributes:
        possible: Whether ρ ≺ (1−ε)σ + εξ for some state ξ
        mixture: ξ on σ's eigenbasis (decreasing order of σ), when ε > 0
        target: The mixture (1−ε)σ + εξ that ρ majorizes
    """

    possible: bool
    mixture: Optional[List[Fraction]] = None
    target: Optional[List[Fraction]] = None

    def __bool__(self) -> bool:
        return self.possible


def _exact_dense(s: Spectrum, d: int) -> List[Fraction]:
    values = [Fraction(v) for v in s.dense(d)]
    return values + [Fraction(0)] * (d - len(values))


def prob_transform_possible(a: Spectrum, b: Spectrum, eps: Eps) -> TransformResult:
    """
    Decide ρ → (1−ε)σ + εξ for some state ξ.

    Searches μ ≥ (1−ε)·b pointwise with Σμ = 1 and, for every k, the sum of
    the k largest entries of μ at most the top-k mass A_k of a. Each of those
    sum-of-k-largest bounds is linearised with a free threshold t_k and slacks
    u_{k,i} ≥ max(μ_i − t_k, 0):

        k·t_k + Σ_i u_{k,i} ≤ A_k

    Raises:
        SmoothingError: If ε is outside [0, 1] or the dimension exceeds
            PROB_LP_MAX_DIM
    """
    e = as_eps(eps)
    a.require_normalized("source spectrum")
    b.require_normalized("target spectrum")
    d = max(a.rank, b.rank)
    if d > PROB_LP_MAX_DIM:
        raise SmoothingError(f"Dimension {d} exceeds the LP limit {PROB_LP_MAX_DIM}")
    av, bv = _exact_dense(a, d), _exact_dense(b, d)
    top = [sum(av[:k], Fraction(0)) for k in range(1, d + 1)]

    # Layout: μ_0..μ_{d-1}, then per k = 1..d-1 the block t_k, u_{k,0..d-1}
    ks = list(range(1, d))
    n = d + len(ks) * (d + 1)
    free = [False] * n
    a_ub: List[List[Fraction]] = []
    b_ub: List[Fraction] = []

    def block(k: int) -> int:
        return d + (k - 1) * (d + 1)

    for k in ks:
        t = block(k)
        free[t] = True
        for i in range(d):
            row = [Fraction(0)] * n
            row[i], row[t], row[t + 1 + i] = Fraction(1), Fraction(-1), Fraction(-1)
            a_ub.append(row)
            b_ub.append(Fraction(0))
        row = [Fraction(0)] * n
        row[t] = Fraction(k)
        for i in range(d):
            row[t + 1 + i] = Fraction(1)
        a_ub.append(row)
        b_ub.append(top[k - 1])
    for i in range(d):
        row = [Fraction(0)] * n
        row[i] = Fraction(-1)
        a_ub.append(row)
        b_ub.append(-(1 - e) * bv[i])
    a_eq = [[Fraction(1)] * d + [Fraction(0)] * (n - d)]

    result = solve_lp([0] * n, a_ub, b_ub, a_eq, [Fraction(1)], free=free)
    if not result.feasible or result.x is None:
        logger.debug(f"No probabilistic transformation {a} → {b} at ε={e}")
        return TransformResult(False)
    mu = list(result.x[:d])
    mixture = [(m - (1 - e) * v) / e for m, v in zip(mu, bv)] if e > 0 else None
    logger.debug(f"Probabilistic transformation {a} → {b} at ε={e}: μ={mu}")
    return TransformResult(True, mixture, mu)


def embezzling_spectrum(m: int, eps: Eps) -> Spectrum:
    """
    Catalyst ρ with ρ ⊗ χ_{log2 m} ≺^ε ρ ⊗ |0⟩⟨0|.

    With c = mε/(m−1) the eigenvalues are c once, then c/m^k repeated
    m^k − m^(k−1) times for k = 1, 2, ... Every block carries mass ε; the last
    one is cut short and its final eigenvalue lowered to normalize.

    Raises:
        SmoothingError: If m < 2 or ε is outside (0, 1)
    """
    if m < 2:
        raise SmoothingError(f"Embezzling needs a meter rank m ≥ 2, got {m}")
    e = as_eps(eps, allow_one=False)
    if e == 0:
        raise SmoothingError("Embezzling needs ε > 0")
    c = Fraction(m) * e / (m - 1)
    if c >= 1:
        return Spectrum.pure()
    runs: List[Tuple[Value, int]] = [(c, 1)]
    mass, k = c, 1
    while mass < 1:
        value = c / m**k
        count = m**k - m ** (k - 1)
        remaining = 1 - mass
        if value * count <= remaining:
            runs.append((value, count))
            mass += value * count
        else:
            full = math.floor(remaining / value)
            runs.append((value, full))
            if remaining - full * value > 0:
                runs.append((remaining - full * value, 1))
            mass = Fraction(1)
        k += 1
    rho = Spectrum.from_runs(runs)
    logger.debug(f"Embezzling state for m={m}, ε={e}: rank {rho.rank}, {k - 1} blocks")
    return rho
