"""Smooth majorization, smooth entropies and meter states on spectra."""

from smoothrt.aep import (
    AepRate,
    EquilibriumGap,
    FlatSandwich,
    aep_rates,
    flat_sandwich,
    flat_transform_possible,
    prob_equilibrium_gap,
    work_error_tradeoff,
)
from smoothrt.entropies import (
    ADIABATIC,
    PROBABILISTIC,
    SmoothEntropyReport,
    h_hyp_eps,
    h_hyp_eps_lp,
    h_min,
    h_min_eps,
    h_zero,
    h_zero_eps,
    s_minus,
    s_plus,
)
from smoothrt.majorization import (
    SmoothingError,
    eps_majorizes,
    gen_trace_distance,
    majorizes,
    smoothing_witness,
)
from smoothrt.spectrum import MeterState, Spectrum, SpectrumError, tensor, tensor_power
from smoothrt.transforms import (
    TransformResult,
    embezzling_spectrum,
    prob_transform_possible,
)

__all__ = [
    "ADIABATIC",
    "AepRate",
    "EquilibriumGap",
    "FlatSandwich",
    "MeterState",
    "PROBABILISTIC",
    "SmoothEntropyReport",
    "SmoothingError",
    "Spectrum",
    "SpectrumError",
    "TransformResult",
    "aep_rates",
    "embezzling_spectrum",
    "eps_majorizes",
    "flat_sandwich",
    "flat_transform_possible",
    "gen_trace_distance",
    "h_hyp_eps",
    "h_hyp_eps_lp",
    "h_min",
    "h_min_eps",
    "h_zero",
    "h_zero_eps",
    "majorizes",
    "prob_equilibrium_gap",
    "prob_transform_possible",
    "s_minus",
    "s_plus",
    "smoothing_witness",
    "tensor",
    "tensor_power",
    "work_error_tradeoff",
]
