#!/usr/bin/env python3
"""
Unit tests for the exact simplex solver and point membership.
"""

import os
import sys
from fractions import Fraction

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '../../entrocone'))

from ratgeo.cone import DimensionMismatchError, HCone, VCone, orthant
from ratgeo.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LPError, is_feasible, solve_lp
from ratgeo.membership import contains_point, in_conic_hull, intersect


class TestSolveLP:
    """Test cases for the exact simplex."""

    def test_optimum_is_exact(self):
        """min x + 2y with x + y ≥ 1, x ≤ 1/3."""
        result = solve_lp([1, 2], a_ub=[[-1, -1], [1, 0]], b_ub=[-1, Fraction(1, 3)])
        assert result.status == OPTIMAL
        assert result.x == [Fraction(1, 3), Fraction(2, 3)]
        assert result.objective == Fraction(5, 3)

    def test_equalities_and_free_variables(self):
        """min x subject to x − y = −2 with x free and y ≤ 1."""
        result = solve_lp(
            [1, 0], a_ub=[[0, 1]], b_ub=[1], a_eq=[[1, -1]], b_eq=[-2], free=[True, False]
        )
        assert result.optimal
        assert result.objective == -2

    def test_infeasible(self):
        result = solve_lp([0], a_ub=[[1]], b_ub=[-1])
        assert result.status == INFEASIBLE
        assert not result.feasible

    def test_unbounded(self):
        result = solve_lp([-1, 0], a_ub=[[0, 1]], b_ub=[1])
        assert result.status == UNBOUNDED

    def test_shape_checked(self):
        with pytest.raises(LPError):
            solve_lp([1, 1], a_ub=[[1]], b_ub=[1])
        with pytest.raises(LPError):
            is_feasible()

    def test_feasibility_program(self):
        assert is_feasible(a_eq=[[1, 1]], b_eq=[1]).feasible


class TestMembership:
    """Test cases for point and hull membership."""

    def test_exact_point_inside(self):
        report = contains_point(orthant(2), [0, 3])
        assert report
        assert report.describe() == "inside"

    def test_violations_listed(self):
        report = contains_point(orthant(3), [1, -1, -2])
        assert not report
        assert [v.index for v in report.violations] == [1, 2]
        assert report.describe().startswith("outside: inequality 1 slack=-1")

    def test_float_tolerance(self):
        cone = HCone(2, [[1, -1]], [])
        assert contains_point(cone, [1.0, 1.0 + 1e-12])
        assert not contains_point(cone, [1.0, 1.1], tol=1e-3)

    def test_dimension_checked(self):
        with pytest.raises(DimensionMismatchError):
            contains_point(orthant(2), [1, 2, 3])

    def test_conic_hull_witness(self):
        hull = in_conic_hull(VCone(2, [[1, 0], [1, 1]]), [2, 1])
        assert hull
        assert hull.witness == [Fraction(1), Fraction(1)]

    def test_outside_conic_hull(self):
        assert not in_conic_hull(VCone(2, [[1, 0], [1, 1]]), [0, 1])

    def test_intersect(self):
        cone = intersect(orthant(2), HCone(2, [], [[1, -1]]))
        assert set(cone.inequalities) == {(0, 1), (1, -1)}

    def test_intersect_requires_same_labels(self):
        with pytest.raises(DimensionMismatchError):
            intersect(HCone(1, [], [[1]], label="a"), HCone(1, [], [[1]], label="b"))
