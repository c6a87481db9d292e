#!/usr/bin/env python3
"""
Unit tests for exact rational helpers and the cone text formats.
"""

import os
import sys
from fractions import Fraction

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '../../entrocone'))

from ratgeo.cone import DimensionMismatchError, GeometryError, HCone, VCone
from ratgeo.cone_io import (
    ConeFormatError,
    format_hrep,
    format_vrep,
    parse_hrep,
    parse_vrep,
    read_vrep,
    write_vrep,
)
from ratgeo.rational import (
    RationalParseError,
    as_row,
    format_rational,
    parse_rational,
    primitive,
    to_fraction,
)


class TestRational:
    """Test cases for rational parsing and normalization."""

    @pytest.mark.parametrize(
        "token,expected",
        [("-3/4", Fraction(-3, 4)), ("2", Fraction(2)), ("0.125", Fraction(1, 8))],
    )
    def test_parse(self, token, expected):
        assert parse_rational(token) == expected

    @pytest.mark.parametrize("token", ["1/0", "abc", ""])
    def test_parse_invalid(self, token):
        with pytest.raises(RationalParseError):
            parse_rational(token)

    def test_format(self):
        assert format_rational(Fraction(3)) == "3"
        assert format_rational(Fraction(-2, 6)) == "-1/3"

    def test_float_conversion_is_exact(self):
        assert to_fraction(0.5) == Fraction(1, 2)
        assert as_row([1, "1/2", 0.25]) == (1, Fraction(1, 2), Fraction(1, 4))

    def test_primitive_keeps_direction(self):
        assert primitive([Fraction(1, 2), Fraction(-1, 3)]) == (3, -2)
        assert primitive([0, -4, 6]) == (0, -2, 3)
        assert primitive([0, 0]) == (0, 0)


class TestCones:
    """Test cases for the cone value types."""

    def test_zero_rows_dropped(self):
        cone = HCone(2, [], [[0, 0], [1, 0]])
        assert cone.n_rows == 1

    def test_row_length_checked(self):
        with pytest.raises(DimensionMismatchError):
            HCone(2, [], [[1, 0, 0]])

    def test_zero_ray_rejected(self):
        with pytest.raises(GeometryError):
            VCone(2, [[0, 0]])

    def test_canonical_scales_and_sorts(self):
        cone = HCone(2, [], [[2, 0], [0, "1/3"], [1, 0]]).canonical()
        assert cone.inequalities == ((0, 1), (1, 0))

    def test_canonical_reduces_modulo_equalities(self):
        """An inequality parallel to an equality disappears."""
        cone = HCone(2, [[1, 0]], [[1, 1], [-2, 0]]).canonical()
        assert cone.equalities == ((1, 0),)
        assert cone.inequalities == ((0, 1),)

    def test_label_does_not_affect_equality(self):
        assert HCone(1, [], [[1]], label="a") == HCone(1, [], [[1]], label="b")


class TestConeFormats:
    """Test cases for the H- and V-representation text formats."""

    @pytest.fixture
    def hrep_text(self):
        return (
            "# cone over X, Y, XY\n"
            "DIM 3\n"
            "COORDS X Y X,Y\n"
            "EQ\n"
            "INEQ\n"
            "1 1 -1\n"
            "0 0 1\n"
        )

    def test_parse_hrep(self, hrep_text):
        cone = parse_hrep(hrep_text)
        assert cone.dim == 3
        assert cone.inequalities == ((1, 1, -1), (0, 0, 1))
        assert cone.label == [("X",), ("Y",), ("X", "Y")]

    def test_label_hook(self, hrep_text):
        cone = parse_hrep(hrep_text, label_hook=lambda labels: len(labels))
        assert cone.label == 3

    def test_format_round_trip(self, hrep_text):
        cone = parse_hrep(hrep_text)
        text = format_hrep(cone)
        assert "COORDS X Y X,Y" in text
        assert parse_hrep(text) == cone

    def test_fractions_printed(self):
        cone = VCone(2, [[Fraction(1, 2), 1]])
        assert format_vrep(cone).splitlines() == ["DIM 2", "RAYS", "1/2 1"]

    @pytest.mark.parametrize(
        "text,line",
        [
            ("DIM 2\nINEQ\n1 2 3\n", 3),
            ("DIM 2\nINEQ\n1 x\n", 3),
            ("1 0\n", 1),
            ("DIM zero\n", 1),
        ],
    )
    def test_malformed_input_reports_line(self, text, line):
        with pytest.raises(ConeFormatError) as excinfo:
            parse_hrep(text)
        assert excinfo.value.line == line

    def test_missing_dim(self):
        with pytest.raises(ConeFormatError):
            parse_vrep("RAYS\n")

    def test_coords_length_checked(self):
        with pytest.raises(ConeFormatError):
            parse_hrep("DIM 2\nCOORDS X\nINEQ\n1 0\n")

    def test_write_and_read_file(self, tmp_path):
        cone = VCone(3, [[1, 0, 0], [1, 1, 2]])
        path = tmp_path / "rays.vrep"
        write_vrep(cone, path, labels=[("X",), ("Y",), ("X", "Y")])
        loaded = read_vrep(path)
        assert loaded == cone
        assert loaded.label == [("X",), ("Y",), ("X", "Y")]
