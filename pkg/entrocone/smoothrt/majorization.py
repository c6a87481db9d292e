#!/usr/bin/env python3
"""
Smooth Majorization

a ≺^ε b holds when the integrated step function of a stays above that of b
up to ε everywhere:

    ∫₀ˣ f_a ≥ ∫₀ˣ f_b − ε   for all x ≥ 0

Both integrals are piecewise linear with kinks at the run boundaries, so the
condition is checked at the merged breakpoints only. ε = 0 is ordinary
majorization (a can be turned into b adiabatically).
"""

import math
from fractions import Fraction
from typing import Iterator, List, Tuple, Union

from loguru import logger
from smoothrt.spectrum import Spectrum, Value, is_exact, leq

Eps = Union[Fraction, float, int, str]


class SmoothingError(Exception):
    """Exception raised when a smoothing parameter or precondition is violated."""

    pass


def as_eps(eps: Eps, allow_one: bool = True) -> Value:
    """
    Validate a smoothing parameter.

    Floats are read through their decimal representation, so 0.1 becomes 1/10.

    Raises:
        SmoothingError: If eps lies outside [0, 1] (or [0, 1) with allow_one off)
    """
    if isinstance(eps, float):
        if math.isnan(eps):
            raise SmoothingError("ε is NaN")
        eps = repr(eps)
    try:
        value = Fraction(eps)
    except (ValueError, TypeError, ZeroDivisionError):
        raise SmoothingError(f"Invalid ε '{eps}'")
    if value < 0 or value > 1 or (value == 1 and not allow_one):
        bound = "[0, 1]" if allow_one else "[0, 1)"
        raise SmoothingError(f"ε={value} is outside {bound}")
    return value


def merged_breakpoints(a: Spectrum, b: Spectrum) -> List[int]:
    return sorted(set(a.breakpoints()) | set(b.breakpoints()))


def majorization_gap(a: Spectrum, b: Spectrum) -> Value:
    """Largest shortfall max_x (∫₀ˣ f_b − ∫₀ˣ f_a), never below 0."""
    points = merged_breakpoints(a, b)
    gap: Value = Fraction(0)
    for fa, fb in zip(a.cumulative(points), b.cumulative(points)):
        if fb - fa > gap:
            gap = fb - fa
    return gap


def majorizes(a: Spectrum, b: Spectrum) -> bool:
    """a ≺ b: every top-k mass of a is at least that of b."""
    return leq(majorization_gap(a, b), 0)


def eps_majorizes(a: Spectrum, b: Spectrum, eps: Eps) -> bool:
    """
    a ≺^ε b for normalized spectra.

    Raises:
        SmoothingError: If ε is outside [0, 1]
        SpectrumError: If either spectrum is not normalized
    """
    value = as_eps(eps)
    a.require_normalized("source spectrum")
    b.require_normalized("target spectrum")
    return leq(majorization_gap(a, b), value)


def _drain(runs: List[Tuple[Value, int]], amount: Value) -> List[Tuple[Value, int]]:
    """Remove mass from the smallest eigenvalues, never touching runs[0]."""
    kept = list(runs)
    remaining = amount
    while len(kept) > 1 and not leq(remaining, 0):
        value, mult = kept.pop()
        if leq(value * mult, remaining):
            remaining -= value * mult
            continue
        ratio = remaining / value
        full = math.floor(ratio) if is_exact(ratio) else math.floor(ratio + 1e-12)
        partial = remaining - full * value
        kept.append((value, mult - full - 1))
        if leq(partial, 0):
            kept.append((value, 1))
        else:
            kept.append((value - partial, 1))
        break
    return kept


def smoothing_witness(a: Spectrum, b: Spectrum, eps: Eps) -> Spectrum:
    """
    A spectrum a′ within generalized trace distance ε of a that majorizes b.

    The top eigenvalue is raised by the majorization gap δ, not by ε: δ ≤ ε
    is the least shift that works, so the witness sits at distance δ from a.
    The same mass is drained from the bottom of the spectrum, which lifts
    every integrated value to min(∫f_a + δ, 1). a′ = a when a ≺ b already.

    Raises:
        SmoothingError: If a ≺^ε b does not hold
    """
    if not eps_majorizes(a, b, eps):
        raise SmoothingError(f"{a} does not ε-majorize {b} at ε={as_eps(eps)}")
    delta = majorization_gap(a, b)
    if leq(delta, 0):
        return a
    (top, mult), rest = a.entries[0], list(a.entries[1:])
    runs = [(top + delta, 1), (top, mult - 1)] + rest
    smoothed = Spectrum.from_runs(_drain(runs, delta))
    if not majorizes(smoothed, b):
        raise SmoothingError(f"Smoothed spectrum {smoothed} fails to majorize {b}")
    logger.debug(f"Smoothing witness for {a} ≺ {b}: shift {delta}")
    return smoothed


def _segments(a: Spectrum, b: Spectrum) -> Iterator[Tuple[int, Value, Value]]:
    """Index-aligned (length, a value, b value) pieces, zero-padded."""
    ra = [list(e) for e in a.entries]
    rb = [list(e) for e in b.entries]
    i = j = 0
    while i < len(ra) or j < len(rb):
        va = ra[i][0] if i < len(ra) else 0
        vb = rb[j][0] if j < len(rb) else 0
        if i < len(ra) and j < len(rb):
            length = min(ra[i][1], rb[j][1])
        else:
            length = ra[i][1] if i < len(ra) else rb[j][1]
        yield length, va, vb
        if i < len(ra):
            ra[i][1] -= length
            if ra[i][1] == 0:
                i += 1
        if j < len(rb):
            rb[j][1] -= length
            if rb[j][1] == 0:
                j += 1


def gen_trace_distance(a: Spectrum, b: Spectrum) -> Value:
    """½‖a − b‖₁ + ½|tr a − tr b| on index-aligned eigenvalues."""
    total: Value = Fraction(0)
    for length, va, vb in _segments(a, b):
        total += length * abs(va - vb)
    return (total + abs(a.mass - b.mass)) / 2

