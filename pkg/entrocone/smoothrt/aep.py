#!/usr/bin/env python3
"""
Meters and Asymptotic Equipartition

Sandwiches a state between flat meter states, λ₋ from below and λ₊ from
above, and follows the per-copy rates on tensor powers. For i.i.d. copies
both rates converge to the von Neumann entropy of the base state.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from loguru import logger
from settings import settings
from smoothrt.entropies import ADIABATIC, h_zero_eps, s_minus, s_plus
from smoothrt.majorization import Eps, SmoothingError, as_eps, eps_majorizes
from smoothrt.spectrum import Spectrum, Value, leq, tensor_power


@dataclass(frozen=True)
class FlatSandwich:
    """Largest flat rank below and smallest flat rank above a state."""

    lower_rank: int
    upper_rank: int

    @property
    def lam_minus(self) -> float:
        return math.log2(self.lower_rank)

    @property
    def lam_plus(self) -> float:
        return math.log2(self.upper_rank)


@dataclass(frozen=True)
class AepRate:
    """Per-copy rates of the n-fold tensor power."""

    n: int
    s_minus: float
    s_plus: float
    lam_minus: float
    lam_plus: float

    def line(self) -> str:
        return (
            f"n={self.n} s-={self.s_minus:.6f} s+={self.s_plus:.6f} "
            f"lam-={self.lam_minus:.6f} lam+={self.lam_plus:.6f}"
        )


@dataclass(frozen=True)
class EquilibriumGap:
    """Necessary bounds for probabilistic flat sandwiching of (p, 1−p)^⊗n."""

    lam_minus_max: float
    lam_plus_min: float

    @property
    def gap(self) -> float:
        return self.lam_plus_min - self.lam_minus_max


def _largest_true(pred: Callable[[int], bool], guess: int) -> int:
    """Largest k ≥ 1 with pred(k), for pred true then false (pred(1) true)."""
    lo, hi = max(1, guess), None
    step = 1
    while not pred(lo):
        hi = lo
        lo = max(1, lo - step)
        step *= 2
    if hi is None:
        hi, step = lo + 1, 1
        while pred(hi):
            lo, hi = hi, hi + step
            step *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _lower_guess(s: Spectrum, e: Value) -> int:
    """min over kinks x with ∫₀ˣ f > ε of x/(∫₀ˣ f − ε), floored."""
    points = s.breakpoints()
    best: Optional[Value] = None
    for x, mass in zip(points, s.cumulative(points)):
        if not leq(mass, e):
            ratio = x / (mass - e)
            best = ratio if best is None or ratio < best else best
    if best is None:
        raise SmoothingError(f"No flat state lies below {s} at ε={e}")
    return max(1, math.floor(best))


def flat_sandwich(s: Spectrum, eps: Eps) -> FlatSandwich:
    """
    Flat ranks around a state.

    lower: largest k with flat(k) ≺^ε s; upper: smallest m with s ≺^ε flat(m).
    Both are located by galloping and binary search on eps_majorizes, started
    from the closed-form candidates.

    Raises:
        SmoothingError: If ε is outside [0, 1)
    """
    e = as_eps(eps, allow_one=False)
    s.require_normalized()

    def below(k: int) -> bool:
        return eps_majorizes(Spectrum.flat(k), s, e)

    def not_above(m: int) -> bool:
        return not eps_majorizes(s, Spectrum.flat(m), e)

    lower = _largest_true(below, _lower_guess(s, e))
    if eps_majorizes(s, Spectrum.pure(), e):
        upper = 1
    else:
        upper = _largest_true(not_above, h_zero_eps(s, e).witness["rank"] - 1) + 1
    logger.debug(f"Flat sandwich at ε={e}: ranks {lower} .. {upper}")
    return FlatSandwich(lower, upper)


def _rate(args: Tuple[Spectrum, Fraction, int]) -> AepRate:
    base, e, n = args
    power = tensor_power(base, n)
    sandwich = flat_sandwich(power, e)
    return AepRate(
        n,
        s_minus(power, e, ADIABATIC) / n,
        s_plus(power, e, ADIABATIC) / n,
        sandwich.lam_minus / n,
        sandwich.lam_plus / n,
    )


def aep_rates(
    base: Spectrum, eps: Eps, ns: Sequence[int], workers: Optional[int] = None
) -> List[AepRate]:
    """
    Smooth-entropy and flat-sandwich rates of base^⊗n for each n.

    Args:
        base: Single-copy spectrum
        eps: Smoothing parameter in (0, 1)
        ns: Copy counts (positive)
        workers: Process count (defaults to settings.THREADS)

    Raises:
        SmoothingError: If ε or a copy count is out of range
    """
    e = as_eps(eps, allow_one=False)
    if any(n < 1 for n in ns):
        raise SmoothingError(f"Copy counts must be positive: {list(ns)}")
    workers = settings.THREADS if workers is None else workers
    jobs = [(base, e, n) for n in ns]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rates = list(pool.map(_rate, jobs))
    else:
        rates = [_rate(job) for job in jobs]
    logger.info(
        f"AEP rates of {base} at ε={e} (H={base.shannon_entropy():.6f}): "
        + "; ".join(r.line() for r in rates)
    )
    return rates


def prob_equilibrium_gap(p: Value, n: int, eps: Eps) -> EquilibriumGap:
    """
    Necessary conditions for sandwiching (p, 1−p)^⊗n between flat states
    with probabilistic operations at error ε. p is the larger eigenvalue.

    A flat state below needs λ₋ ≤ n·log2(1/p) − log2(1−ε); one above needs
    λ₊ ≥ n, the log-rank of the power.
    """
    e = as_eps(eps, allow_one=False)
    top = Fraction(p) if not isinstance(p, float) else p
    if not (Fraction(1, 2) <= top <= 1):
        raise SmoothingError(f"Top eigenvalue {p} is outside [1/2, 1]")
    rank_bits = n if top < 1 else 0
    lam_minus = -n * math.log2(float(top)) - math.log2(float(1 - e))
    return EquilibriumGap(lam_minus, float(rank_bits))


def work_error_tradeoff(lam1: float, lam2: float, eps: Eps) -> bool:
    """Whether a meter at λ1 may reach λ2 at error ε: λ1 ≤ λ2 − log2(1−ε)."""
    e = as_eps(eps, allow_one=False)
    return lam1 <= lam2 - math.log2(float(1 - e)) + 1e-12


def flat_transform_possible(m1: int, m2: int, eps: Eps) -> bool:
    """flat(m1) ≺^ε flat(m2), decided on the spectra."""
    return eps_majorizes(Spectrum.flat(m1), Spectrum.flat(m2), eps)
