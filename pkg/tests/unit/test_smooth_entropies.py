#!/usr/bin/env python3
"""
Unit tests for smooth entropies and the resource-theory monotones.

Known values on flat and qubit spectra, ε = 0 limits, agreement of the
greedy hypothesis-testing value with its linear program, and the ordering
relations between the quantities.
"""

import math
import os
import sys
from fractions import Fraction

import numpy as np
import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '../../entrocone'))

from smoothrt.entropies import (
    ADIABATIC,
    PROBABILISTIC,
    LP_MAX_DIM,
    h_hyp_eps,
    h_hyp_eps_lp,
    h_min,
    h_min_eps,
    h_zero,
    h_zero_eps,
    s_minus,
    s_plus,
)
from smoothrt.majorization import SmoothingError, majorizes
from smoothrt.spectrum import Spectrum, SpectrumError, tensor


def random_spectrum(rng, rank):
    """Exact spectrum with random integer weights."""
    weights = [int(w) for w in rng.integers(1, 20, size=rank)]
    total = sum(weights)
    return Spectrum.from_values(Fraction(w, total) for w in weights)


class TestUnsmoothed:
    """Test cases for min- and max-entropy."""

    def test_qubit(self):
        qubit = Spectrum.parse("3/4,1/4")
        assert h_min(qubit).value == pytest.approx(math.log2(4 / 3))
        assert h_min(qubit).witness["top"] == Fraction(3, 4)
        assert h_zero(qubit).value == pytest.approx(1.0)

    @pytest.mark.parametrize("m", [1, 2, 5, 8])
    def test_flat(self, m):
        flat = Spectrum.flat(m)
        assert h_min(flat).value == pytest.approx(math.log2(m))
        assert h_zero(flat).value == pytest.approx(math.log2(m))

    def test_min_entropy_additive(self):
        a, b = Spectrum.parse("3/4,1/4"), Spectrum.parse("1/2,1/3,1/6")
        assert h_min(tensor(a, b)).value == pytest.approx(
            h_min(a).value + h_min(b).value
        )

    def test_requires_normalized(self):
        with pytest.raises(SpectrumError):
            h_min(Spectrum.parse("1/2"))

    def test_report_line(self):
        line = h_zero(Spectrum.flat(4)).line()
        assert line == "2 bits witness=rank=4"


class TestSmoothed:
    """Test cases for smoothed entropies."""

    def test_min_entropy_of_qubit_at_quarter(self):
        """Cutting 3/4 down to 1/2 removes mass 1/4 and gives one bit."""
        report = h_min_eps(Spectrum.parse("3/4,1/4"), "1/4")
        assert report.value == pytest.approx(1.0)
        assert report.witness["cut_level"] == Fraction(1, 2)
        assert report.smoothed == Spectrum.parse("1/2,1/4")

    def test_water_level_spans_runs(self):
        """A large ε levels several runs at once."""
        report = h_min_eps(Spectrum.parse("1/2,1/4,1/8x2"), "1/2")
        assert report.witness["cut_level"] == Fraction(1, 8)
        assert report.value == pytest.approx(3.0)

    @pytest.mark.parametrize("m,eps", [(2, "1/4"), (4, "1/10"), (16, "1/2")])
    def test_flat_formulas(self, m, eps):
        """On flat(m): H_min^ε = log m − log(1−ε), H_H = log m, H_0^ε = log ⌈m(1−ε)⌉."""
        flat = Spectrum.flat(m)
        e = Fraction(eps)
        assert h_min_eps(flat, eps).value == pytest.approx(
            math.log2(m) - math.log2(1 - e)
        )
        assert h_hyp_eps(flat, eps).value == pytest.approx(math.log2(m))
        assert h_zero_eps(flat, eps).witness["rank"] == math.ceil(m * (1 - e))

    def test_eps_zero_limits(self):
        s = Spectrum.parse("1/2,1/3,1/6")
        assert h_min_eps(s, 0).value == pytest.approx(h_min(s).value)
        assert h_zero_eps(s, 0).value == pytest.approx(h_zero(s).value)
        assert h_hyp_eps(s, 0).value == pytest.approx(h_zero(s).value)

    def test_max_entropy_rank_and_truncation(self):
        report = h_zero_eps(Spectrum.parse("1/2,1/4,1/8x2"), "1/4")
        assert report.witness["rank"] == 2
        assert report.smoothed == Spectrum.parse("1/2,1/4")

    def test_hypothesis_testing_fractional_fill(self):
        """Capturing 5/8 of (1/2, 1/4, 1/4) needs 1.5 entries."""
        report = h_hyp_eps(Spectrum.parse("1/2,1/4x2"), "3/8")
        assert report.witness["filled"] == Fraction(3, 2)
        assert report.value == pytest.approx(math.log2(Fraction(3, 2) / Fraction(5, 8)))

    def test_eps_one_rejected(self):
        with pytest.raises(SmoothingError):
            h_min_eps(Spectrum.flat(2), 1)

    def test_monotone_in_eps(self):
        s = Spectrum.parse("2/5,1/5,1/5,1/10x2")
        eps_values = ["0", "1/20", "1/10", "1/4", "1/2", "3/4"]
        mins = [h_min_eps(s, e).value for e in eps_values]
        maxes = [h_zero_eps(s, e).value for e in eps_values]
        assert mins == sorted(mins)
        assert maxes == sorted(maxes, reverse=True)


class TestHypothesisTestingLP:
    """The greedy fill agrees with the defining linear program."""

    @pytest.fixture
    def rng(self):
        return np.random.default_rng(7)

    def test_random_exact_spectra(self, rng):
        for rank in (2, 3, 5, 7):
            s = random_spectrum(rng, rank)
            for eps in ("1/10", "1/3", "1/2"):
                assert h_hyp_eps_lp(s, eps) == pytest.approx(
                    h_hyp_eps(s, eps).value, abs=1e-9
                )

    def test_float_spectrum_uses_highs(self):
        s = Spectrum.from_values([0.5, 0.3, 0.2])
        expected = h_hyp_eps(s, 0.25).value
        assert h_hyp_eps_lp(s, 0.25) == pytest.approx(expected, abs=1e-7)

    def test_rank_limit(self):
        with pytest.raises(SmoothingError):
            h_hyp_eps_lp(Spectrum.flat(LP_MAX_DIM + 1), "1/10")


class TestMonotones:
    """Test cases for S₋ and S₊ in both theories."""

    @pytest.fixture
    def qubit(self):
        return Spectrum.parse("3/4,1/4")

    def test_adiabatic(self, qubit):
        assert s_minus(qubit, "1/4", ADIABATIC) == pytest.approx(1.0)
        assert s_plus(qubit, "1/4", ADIABATIC) == pytest.approx(
            h_hyp_eps(qubit, "1/4").value + math.log2(0.75)
        )

    def test_probabilistic(self, qubit):
        assert s_minus(qubit, "1/4", PROBABILISTIC) == pytest.approx(
            math.log2(4 / 3) + math.log2(0.75)
        )
        assert s_plus(qubit, "1/4", PROBABILISTIC) == pytest.approx(1.0)

    def test_unknown_theory(self, qubit):
        with pytest.raises(SmoothingError):
            s_minus(qubit, "1/4", "thermal")

    def test_unsmoothed_chain(self):
        """H_min ≤ H ≤ H_0 and smoothing only widens the range."""
        s = Spectrum.parse("1/2,1/5,1/10x3")
        assert h_min(s).value <= s.shannon_entropy() <= h_zero(s).value
        assert h_min_eps(s, "1/10").value >= h_min(s).value
        assert h_zero_eps(s, "1/10").value <= h_zero(s).value

    def test_upper_monotone_below_smooth_max_entropy(self):
        """log2 of the fractional fill never exceeds log2 of the smoothed rank."""
        s = Spectrum.parse("1/2,1/5,1/10x3")
        for eps in ("1/20", "1/5", "1/2"):
            assert s_plus(s, eps) <= h_zero_eps(s, eps).value + 1e-12

    def test_monotones_respect_majorization(self):
        """A purer state has no more entropy in either theory."""
        purer = Spectrum.parse("3/4,1/8x2")
        mixed = Spectrum.parse("1/3x3")
        assert majorizes(purer, mixed)
        for theory in (ADIABATIC, PROBABILISTIC):
            assert s_minus(purer, 0, theory) <= s_minus(mixed, 0, theory)
            assert s_plus(purer, 0, theory) <= s_plus(mixed, 0, theory)
