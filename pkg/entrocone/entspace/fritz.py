#!/usr/bin/env python3
"""
Quantum Triangle Distributions

A singlet shared between X and Y is measured with projectors
Π_θ = |θ⟩⟨θ|, |θ⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩, the measurement basis chosen by
a uniform bit from the other classical source. The resulting conditional
distribution maximally violates CHSH. Two observed variants:

- pair: X = (X̃, B), Y = (Ỹ, A), Z = (A, B)
- and:  X = (X̃, B), Y = (Ỹ, A), Z = AND(A, B)
"""

import math
from itertools import product
from typing import Dict, Tuple

import numpy as np
from entspace.coords import EntropySpaceError
from entspace.distribution import JointDistribution, Outcome

# Angle pairs (outcome 0, outcome 1) for the two settings at each side.
_X_SETTINGS = ((0.0, math.pi), (math.pi / 2, 3 * math.pi / 2))
_Y_SETTINGS = ((math.pi / 4, 5 * math.pi / 4), (3 * math.pi / 4, 7 * math.pi / 4))

VARIANTS = ("pair", "and")


def _ket(theta: float) -> np.ndarray:
    return np.array([math.cos(theta / 2), math.sin(theta / 2)])


def singlet() -> np.ndarray:
    """(|01⟩ − |10⟩)/√2 as a length-4 state vector."""
    return np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2)


def fritz_conditional() -> Dict[Tuple[int, int], np.ndarray]:
    """
    P(x̃, ỹ | a, b) from the singlet measurements.

    X̃ measures with the setting selected by b and Ỹ with the one selected by
    a. The X̃ outcome and the b setting are relabelled locally so that
    x̃ ⊕ ỹ = a·b holds with probability cos²(π/8).
    """
    state = singlet()
    table: Dict[Tuple[int, int], np.ndarray] = {}
    for a, b in product((0, 1), repeat=2):
        probs = np.zeros((2, 2))
        for outcome_x, outcome_y in product((0, 1), repeat=2):
            bra = np.kron(
                _ket(_X_SETTINGS[1 - b][outcome_x]), _ket(_Y_SETTINGS[a][outcome_y])
            )
            probs[1 - outcome_x, outcome_y] = float(abs(bra @ state) ** 2)
        table[(a, b)] = probs
    return table


def fritz_distribution(variant: str = "pair") -> JointDistribution:
    """
    Observed triangle distribution of the CHSH construction.

    Args:
        variant: "pair" (Z reveals both settings) or "and" (Z = AND of settings)

    Raises:
        EntropySpaceError: For an unknown variant
    """
    if variant not in VARIANTS:
        raise EntropySpaceError(
            f"Unknown variant '{variant}', expected one of {VARIANTS}"
        )
    conditional = fritz_conditional()
    pmf: Dict[Outcome, float] = {}
    for a, b in product((0, 1), repeat=2):
        z = (a, b) if variant == "pair" else a & b
        for x, y in product((0, 1), repeat=2):
            p = 0.25 * conditional[(a, b)][x, y]
            if p > 0:
                outcome = ((x, b), (y, a), z)
                pmf[outcome] = pmf.get(outcome, 0.0) + p
    return JointDistribution(("X", "Y", "Z"), pmf)
