#!/usr/bin/env python3
"""
Smooth Entropies

Min-, max- and hypothesis-testing entropies of spectra together with their
smoothed versions, and the two monotones each resource theory pairs them
into:

    adiabatic:      S₋ = H_min^ε          S₊ = H_H^{1-ε} + log2(1-ε)
    probabilistic:  S₋ = H_min + log2(1-ε) S₊ = H_0

Smoothing conventions per quantity:

- h_min_eps maximises over the subnormalized ε-ball: the spectrum is cut at
  the level m where the mass above it equals ε
- h_zero_eps minimises the rank over the ε-ball: the fewest eigenvalues that
  keep mass 1-ε
- h_hyp_eps is the optimum of the hypothesis-testing program, filled greedily
  from the top until the mass reaches exactly 1-ε (the LP optimum)
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

import numpy as np
from loguru import logger
from ratgeo.lp import solve_lp
from scipy.optimize import linprog
from smoothrt.majorization import Eps, SmoothingError, as_eps
from smoothrt.spectrum import SLACK, Spectrum, Value, is_exact, leq, log2

ADIABATIC = "adiabatic"
PROBABILISTIC = "probabilistic"
THEORIES = (ADIABATIC, PROBABILISTIC)

# Largest dense dimension handed to the hypothesis-testing LP
LP_MAX_DIM = 64


@dataclass
class SmoothEntropyReport:
    """
    An entropy value in bits and the parameters that certify it.

    Attributes:
        value: Entropy in bits
        witness: Named parameters (cut level, rank, filled entries)
        smoothed: Spectrum in the ε-ball attaining the value, when one exists
    """

    value: float
    witness: Dict[str, Value] = field(default_factory=dict)
    smoothed: Optional[Spectrum] = None

    def line(self) -> str:
        text = f"{self.value:.12g} bits"
        if self.witness:
            params = ",".join(f"{k}={v}" for k, v in self.witness.items())
            text += f" witness={params}"
        return text


def _prepare(s: Spectrum, eps: Eps) -> Value:
    value = as_eps(eps, allow_one=False)
    s.require_normalized()
    return value


def _ceil(value: Value) -> int:
    return math.ceil(value) if is_exact(value) else math.ceil(value - SLACK)


def h_min(s: Spectrum) -> SmoothEntropyReport:
    """−log2 of the largest eigenvalue."""
    s.require_normalized()
    return SmoothEntropyReport(-log2(s.top), {"top": s.top})


def h_zero(s: Spectrum) -> SmoothEntropyReport:
    """log2 of the rank."""
    s.require_normalized()
    return SmoothEntropyReport(math.log2(s.rank), {"rank": s.rank})


def h_min_eps(s: Spectrum, eps: Eps) -> SmoothEntropyReport:
    """
    Smooth min-entropy over the subnormalized ε-ball.

    Finds the water level m with Σ(λ_i − m)₊ = ε; every eigenvalue above m is
    cut down to it and the result is −log2 m.

    Raises:
        SmoothingError: If ε is outside [0, 1)
    """
    e = _prepare(s, eps)
    count, mass = 0, Fraction(0)
    level: Value = s.top
    for index, (value, mult) in enumerate(s.entries):
        count += mult
        mass += value * mult
        level = (mass - e) / count
        below = s.entries[index + 1][0] if index + 1 < len(s.entries) else 0
        if leq(below, level):
            break
    runs = [(level, count)] + list(s.entries[index + 1 :])
    return SmoothEntropyReport(
        -log2(level), {"cut_level": level}, Spectrum.from_runs(runs)
    )


def _fill_to(s: Spectrum, target: Value):
    """Run index, entries and mass strictly before the run that reaches target."""
    count, mass = 0, Fraction(0)
    for index, (value, mult) in enumerate(s.entries):
        if leq(target, mass + value * mult):
            return index, count, mass
        count += mult
        mass += value * mult
    value, mult = s.entries[-1]
    return len(s.entries) - 1, count - mult, mass - value * mult


def h_zero_eps(s: Spectrum, eps: Eps) -> SmoothEntropyReport:
    """
    Smooth max-entropy: log2 of the smallest j whose top-j mass is ≥ 1−ε.

    Raises:
        SmoothingError: If ε is outside [0, 1)
    """
    e = _prepare(s, eps)
    index, count, mass = _fill_to(s, 1 - e)
    value, mult = s.entries[index]
    rank = count + min(mult, max(1, _ceil((1 - e - mass) / value)))
    truncated = Spectrum.from_runs(
        list(s.entries[:index]) + [(value, rank - count)]
    )
    return SmoothEntropyReport(math.log2(rank), {"rank": rank}, truncated)


def h_hyp_eps(s: Spectrum, eps: Eps) -> SmoothEntropyReport:
    """
    Hypothesis-testing entropy H_H^{1-ε}.

    The optimal test fills eigenvalues from the top until the captured mass is
    exactly 1−ε: j* full entries and a fraction φ of the next, so that
    2^value·(1−ε) = j* + φ.

    Raises:
        SmoothingError: If ε is outside [0, 1)
    """
    e = _prepare(s, eps)
    index, count, mass = _fill_to(s, 1 - e)
    value, _ = s.entries[index]
    filled = count + (1 - e - mass) / value
    return SmoothEntropyReport(log2(filled / (1 - e)), {"filled": filled})


def h_hyp_eps_lp(s: Spectrum, eps: Eps) -> float:
    """
    H_H^{1-ε} from its defining program: minimise tr Q/(1−ε) over
    0 ≤ Q ≤ 1 with tr Qρ ≥ 1−ε.

    Exact spectra go through the rational simplex, float spectra through HiGHS.

    Raises:
        SmoothingError: If ε is outside [0, 1) or the rank exceeds LP_MAX_DIM
    """
    e = _prepare(s, eps)
    if s.rank > LP_MAX_DIM:
        raise SmoothingError(f"Rank {s.rank} exceeds the LP limit of {LP_MAX_DIM}")
    values = s.dense(LP_MAX_DIM)
    d = len(values)
    if s.exact and is_exact(e):
        a_ub = [[-v for v in values]]
        b_ub = [-(1 - e)]
        for i in range(d):
            a_ub.append([1 if j == i else 0 for j in range(d)])
            b_ub.append(1)
        result = solve_lp([1] * d, a_ub, b_ub)
        if not result.optimal:
            raise SmoothingError(f"Hypothesis-testing LP is {result.status}")
        optimum: float = float(result.objective)
    else:
        result = linprog(
            np.ones(d),
            A_ub=-np.asarray([values], dtype=float),
            b_ub=[-float(1 - e)],
            bounds=[(0, 1)] * d,
            method="highs",
        )
        if not result.success:
            raise SmoothingError(f"Hypothesis-testing LP failed: {result.message}")
        optimum = float(result.fun)
    logger.debug(f"H_H LP over {d} eigenvalues: tr Q = {optimum}")
    return math.log2(optimum / float(1 - e))


def _check_theory(theory: str) -> None:
    if theory not in THEORIES:
        raise SmoothingError(f"Unknown theory '{theory}', expected one of {THEORIES}")


def s_minus(s: Spectrum, eps: Eps, theory: str = ADIABATIC) -> float:
    """Lower monotone: work extractable into a meter."""
    _check_theory(theory)
    e = _prepare(s, eps)
    if theory == ADIABATIC:
        return h_min_eps(s, e).value
    return h_min(s).value + log2(1 - e)


def s_plus(s: Spectrum, eps: Eps, theory: str = ADIABATIC) -> float:
    """Upper monotone: work needed to form the state."""
    _check_theory(theory)
    e = _prepare(s, eps)
    if theory == ADIABATIC:
        return h_hyp_eps(s, e).value + log2(1 - e)
    return h_zero(s).value
