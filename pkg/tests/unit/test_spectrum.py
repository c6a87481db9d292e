#!/usr/bin/env python3
"""
Unit tests for spectra, meter states and tensor powers.

Covers parsing, run-length canonical form, cumulative masses and the
multinomial tensor power.
"""

import math
import os
import sys
from fractions import Fraction

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '../../entrocone'))

from smoothrt.spectrum import (
    MeterState,
    Spectrum,
    SpectrumError,
    log2,
    tensor,
    tensor_power,
)


class TestSpectrum:
    """Test cases for the Spectrum value type."""

    @pytest.fixture
    def qubit(self):
        """The biased qubit (3/4, 1/4)."""
        return Spectrum.parse("3/4,1/4")

    def test_parse_plain_list(self, qubit):
        """Comma-separated eigenvalues become exact runs."""
        assert qubit.entries == ((Fraction(3, 4), 1), (Fraction(1, 4), 1))
        assert qubit.exact
        assert qubit.is_normalized()

    def test_parse_run_length(self):
        """Run-length terms expand to multiplicities and merge equal values."""
        assert Spectrum.parse("1/8x8") == Spectrum.flat(8)
        assert Spectrum.parse("1/4,1/4,1/2") == Spectrum.parse("1/2,1/4x2")

    def test_unsorted_input_is_canonicalized(self):
        """Runs are sorted in decreasing order and zeros are dropped."""
        spectrum = Spectrum.from_values(["1/4", "0", "1/2", "1/4"])
        assert spectrum.entries == ((Fraction(1, 2), 1), (Fraction(1, 4), 2))
        assert spectrum.rank == 3
        assert len(spectrum) == 2

    def test_str_round_trips_through_parse(self):
        """The printed form uses run-length notation and parses back."""
        spectrum = Spectrum.parse("1/2,1/4,1/8,1/8")
        assert str(spectrum) == "1/2,1/4,1/8x2"
        assert Spectrum.parse(str(spectrum)) == spectrum

    @pytest.mark.parametrize("text", ["", "1/2,x", "1/2x-1,1/2", "3/4,1/2", "abc"])
    def test_invalid_text_rejected(self, text):
        """Malformed or overweight spectra raise SpectrumError."""
        with pytest.raises(SpectrumError):
            Spectrum.parse(text)

    def test_subnormalized_allowed_but_flagged(self):
        """Mass below one is a valid spectrum that is not normalized."""
        spectrum = Spectrum.parse("1/2,1/4")
        assert spectrum.mass == Fraction(3, 4)
        assert not spectrum.is_normalized()
        with pytest.raises(SpectrumError):
            spectrum.require_normalized()

    def test_cumulative_interpolates_inside_runs(self):
        """Top-x masses follow the integrated step function."""
        spectrum = Spectrum.parse("1/2,1/8x4")
        assert spectrum.breakpoints() == [1, 5]
        assert spectrum.cumulative([1, 2, 3, 5, 7]) == [
            Fraction(1, 2),
            Fraction(5, 8),
            Fraction(3, 4),
            Fraction(1),
            Fraction(1),
        ]
        assert spectrum.top_mass(0) == 0

    def test_dense_limit(self):
        """Expansion is refused beyond the limit."""
        assert Spectrum.flat(3).dense() == [Fraction(1, 3)] * 3
        with pytest.raises(SpectrumError):
            Spectrum.flat(10).dense(limit=5)

    def test_shannon_entropy(self, qubit):
        """Entropy of (3/4, 1/4) is about 0.8113 bits; flat(m) has log2 m."""
        assert qubit.shannon_entropy() == pytest.approx(0.811278, abs=1e-6)
        assert Spectrum.flat(16).shannon_entropy() == pytest.approx(4.0)
        assert Spectrum.pure().shannon_entropy() == 0

    def test_float_spectrum(self, qubit):
        """Float eigenvalues are kept as floats and tolerated in normalization."""
        floats = qubit.to_float()
        assert not floats.exact
        assert floats.is_normalized()
        assert floats.top == pytest.approx(0.75)

    def test_log2_of_tiny_fraction(self):
        """Rationals below the float range still have a logarithm."""
        tiny = Fraction(1, 2**2000)
        assert log2(tiny) == pytest.approx(-2000.0)


class TestMeterState:
    """Test cases for flat meter states."""

    def test_lambda_of_rank(self):
        """λ is log2 of the stored rank."""
        assert MeterState(8).lam == pytest.approx(3.0)
        assert MeterState(1).lam == 0

    def test_from_lambda(self):
        """Integer-rank λ values round trip, others are rejected."""
        assert MeterState.from_lambda(3).rank == 8
        assert MeterState.from_lambda(math.log2(6)).rank == 6
        with pytest.raises(SpectrumError):
            MeterState.from_lambda(1.5)

    def test_invalid_rank(self):
        with pytest.raises(SpectrumError):
            MeterState(0)

    def test_to_spectrum(self):
        assert MeterState(4).to_spectrum() == Spectrum.flat(4)


class TestTensor:
    """Test cases for products and tensor powers."""

    @pytest.fixture
    def qubit(self):
        return Spectrum.parse("3/4,1/4")

    def test_flat_product_is_flat(self):
        assert tensor(Spectrum.flat(2), Spectrum.flat(3)) == Spectrum.flat(6)

    def test_square_of_qubit(self, qubit):
        """(3/4, 1/4)^⊗2 is 9/16, 3/16 twice and 1/16."""
        assert tensor_power(qubit, 2).entries == (
            (Fraction(9, 16), 1),
            (Fraction(3, 16), 2),
            (Fraction(1, 16), 1),
        )
        assert tensor_power(qubit, 2) == tensor(qubit, qubit)

    def test_power_matches_repeated_product(self):
        """Compositions over several runs agree with repeated products."""
        base = Spectrum.parse("1/2,1/6x3")
        repeated = base
        for _ in range(3):
            repeated = tensor(repeated, base)
        assert tensor_power(base, 4) == repeated

    def test_zeroth_power_is_pure(self, qubit):
        assert tensor_power(qubit, 0) == Spectrum.pure()

    def test_negative_power_rejected(self, qubit):
        with pytest.raises(SpectrumError):
            tensor_power(qubit, -1)

    def test_large_power_stays_compressed(self, qubit):
        """One run per number of small factors; mass stays exactly one."""
        power = tensor_power(qubit, 1000)
        assert len(power) == 1001
        assert power.rank == 2**1000
        assert power.mass == 1

    def test_entropy_is_additive(self, qubit):
        power = tensor_power(qubit, 20)
        assert power.shannon_entropy() == pytest.approx(20 * qubit.shannon_entropy())
