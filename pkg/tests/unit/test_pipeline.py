#!/usr/bin/env python3
"""
Unit tests for marginal families, cone builders, gluing, line-like structures,
triangle searches and ray verification.
"""

import os
import sys

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '../../entrocone'))

from causal.postselect import postselect
from causal.structure import CausalStructure
from entspace.coords import CoordSystem
from entspace.distribution import entropy_vector, interaction_information
from entspace.expressions import H, interaction_info
from entspace.nonshannon import zhang_yeung_expr
from entspace.shannon import shannon_rows
from entspace.strategy import parse_strategy, strategy_eval
from pipeline.builders import (
    classical_cone,
    inner_marginal_classical,
    nonshannon_exprs,
    outer_marginal_classical,
    project,
    relevant_nonshannon_tuples,
)
from pipeline.gluing import ns_glued_cone, shannon_block
from pipeline.lines import (
    pn_coords,
    pn_dij_strategies,
    pn_dij_strategy,
    pn_dij_vector,
    pn_reduced_cone,
    pn_rows,
    pn_structure,
)
from pipeline.marginal import (
    MarginalFamily,
    PipelineError,
    align_hcone,
    column_order,
    coords_of,
    copy_conditions,
)
from pipeline.triangle import (
    and_or_strategy,
    strict_inclusion_witness,
    triangle_structure,
    two_to_one_distribution,
)
from pipeline.verification import (
    FAIL,
    OK,
    PENDING,
    VerificationError,
    match_strategies,
    vector_on_ray,
    verify_rays_achievable,
)
from ratgeo.cone import HCone, VCone
from ratgeo.membership import contains_point

IC_EDGES = [("X", "Z"), ("A", "Z"), ("A", "Y"), ("Z", "Y")]


@pytest.fixture
def instrumental():
    return CausalStructure.build(
        observed=["X", "Z", "Y"], latent=["A"], edges=IC_EDGES, name="IC"
    )


@pytest.fixture
def bell():
    return CausalStructure.build(
        observed=["A", "X", "Y", "B"],
        latent=["C"],
        edges=[("A", "X"), ("C", "X"), ("C", "Y"), ("B", "Y")],
        name="bell",
    )


@pytest.fixture
def pair_coords():
    return CoordSystem.full(["X", "Y"])


class TestMarginalFamily:
    """Test cases for retained variable sets."""

    def test_parse(self):
        family = MarginalFamily.parse("X,Y; Y,Z")
        assert family.variables == ("X", "Y", "Z")
        assert family.subsets == (("X", "Y"), ("Y", "Z"))
        assert str(family) == "X,Y;Y,Z"
        assert family.coords().dim == 5

    def test_parse_keeps_given_variable_order(self):
        family = MarginalFamily.parse("Y,Z", variables=["Z", "Y"])
        assert family.variables == ("Z", "Y")

    def test_empty_family(self):
        with pytest.raises(PipelineError, match="Empty"):
            MarginalFamily.parse(" ; ")
        with pytest.raises(PipelineError, match="at least one"):
            MarginalFamily(("X",), ())
        with pytest.raises(PipelineError, match="nonempty"):
            MarginalFamily(("X",), ((),))

    def test_unknown_variable(self):
        with pytest.raises(PipelineError, match="unknown variables"):
            MarginalFamily(("X",), (("X", "Y"),))

    def test_all_observed(self, instrumental):
        family = MarginalFamily.all_observed(instrumental)
        assert family.variables == ("X", "Z", "Y")
        assert family.subsets == (("X", "Z", "Y"),)
        assert family.coords().dim == 7

    def test_all_observed_needs_observed_nodes(self):
        structure = CausalStructure.build(latent=["A"])
        with pytest.raises(PipelineError, match="no observed nodes"):
            MarginalFamily.all_observed(structure)

    def test_postselected_bell_pairs(self, bell):
        selected = postselect(postselect(bell, "A"), "B")
        family = MarginalFamily.postselected(selected)
        assert family.subsets == (
            ("X|A=0", "Y|B=0"),
            ("X|A=0", "Y|B=1"),
            ("X|A=1", "Y|B=0"),
            ("X|A=1", "Y|B=1"),
        )
        assert family.coords().dim == 8

    def test_postselected_without_copies(self, instrumental):
        family = MarginalFamily.postselected(instrumental)
        assert family == MarginalFamily.all_observed(instrumental)

    def test_validate_rejects_latent(self, instrumental):
        family = MarginalFamily.parse("X,A")
        with pytest.raises(PipelineError, match="not observed"):
            family.validate(instrumental)


class TestCoordinateAlignment:
    """Test cases for copy names and coordinate reordering."""

    def test_copy_conditions(self):
        assert copy_conditions("Y|X=0&W=1") == {"X": "0", "W": "1"}
        assert copy_conditions("Y") == {}

    def test_malformed_copy_condition(self):
        with pytest.raises(PipelineError, match="Malformed"):
            copy_conditions("Y|X")

    def test_column_order(self, pair_coords):
        target = CoordSystem.from_subset_names([("Y", "X"), ("Y",), ("X",)])
        assert column_order(pair_coords, target) == [2, 1, 0]

    def test_column_order_missing(self, pair_coords):
        target = CoordSystem.from_subset_names([("X",), ("Z",), ("X", "Z")])
        with pytest.raises(PipelineError, match="missing"):
            column_order(pair_coords, target)

    def test_align_hcone(self, pair_coords):
        cone = HCone(3, (), [(0, 0, 1)], label=pair_coords)
        target = CoordSystem.from_subset_names([("X", "Y"), ("X",), ("Y",)])
        aligned = align_hcone(cone, pair_coords, target)
        assert aligned.inequalities == ((1, 0, 0),)
        assert aligned.label == target

    def test_align_dimension_mismatch(self, pair_coords):
        cone = HCone(3, (), [(0, 0, 1)])
        with pytest.raises(PipelineError, match="Cannot align"):
            align_hcone(cone, pair_coords, CoordSystem.full(["X"]))

    def test_coords_of(self, pair_coords):
        assert coords_of(HCone(3, label=pair_coords)) is pair_coords
        listed = coords_of(VCone(1, [(1,)], label=[("X",)]))
        assert listed.subset_names() == [("X",)]
        fallback = coords_of(HCone(1), [("Z",)])
        assert fallback.variables == ("Z",)
        with pytest.raises(PipelineError, match="no coordinate labels"):
            coords_of(HCone(1))


class TestBuilders:
    """Test cases for the classical cone builders."""

    def test_dependent_pair_is_shannon(self):
        structure = CausalStructure.build(observed=["X", "Y"], edges=[("X", "Y")])
        cone = outer_marginal_classical(structure)
        assert cone.equalities == ()
        assert len(cone.inequalities) == 3
        assert cone.label.subset_names() == [("X",), ("Y",), ("X", "Y")]

    def test_independent_pair(self):
        structure = CausalStructure.build(observed=["X", "Y"])
        cone = outer_marginal_classical(structure)
        assert len(cone.equalities) == 1
        assert contains_point(cone, [1, 1, 2])
        assert not contains_point(cone, [1, 1, 1])

    def test_classical_cone_rows(self, instrumental):
        cone = classical_cone(instrumental)
        assert cone.dim == 15
        assert len(cone.equalities) == 2
        assert len(cone.inequalities) == len(shannon_rows(cone.label))

    def test_project_missing_coordinates(self, instrumental):
        cone = classical_cone(instrumental)
        target = CoordSystem.full(["X", "W"])
        with pytest.raises(PipelineError, match="not available"):
            project(cone, cone.label, target)

    def test_quantum_structure_rejected(self):
        structure = CausalStructure.build(
            observed=["X", "Z", "Y"], quantum=["A"], edges=IC_EDGES
        )
        with pytest.raises(PipelineError, match="quantum pipeline"):
            outer_marginal_classical(structure)
        with pytest.raises(PipelineError, match="quantum pipeline"):
            relevant_nonshannon_tuples(structure)

    def test_family_outside_observed(self, instrumental):
        with pytest.raises(PipelineError, match="not observed"):
            outer_marginal_classical(instrumental, MarginalFamily.parse("X,A"))

    def test_relevant_tuples_dependence_filter(self, instrumental):
        tuples = relevant_nonshannon_tuples(instrumental, exact=False)
        assert sorted(tuples) == sorted([
            ("Z", "Y", "X", "A"),
            ("Z", "Y", "A", "X"),
            ("Y", "Z", "X", "A"),
            ("Y", "Z", "A", "X"),
        ])

    def test_diamond_exprs(self, instrumental):
        exprs = nonshannon_exprs(instrumental, ["diamond:Z,Y,X,A;Z,Y,X,A"])
        assert exprs == [zhang_yeung_expr(("Z", "Y", "X", "A"))]

    @pytest.mark.parametrize("spec,message", [
        ("ingleton", "Unknown non-Shannon source"),
        ("matus:s=2", "matus:smax"),
        ("diamond:X,Y,Z", "four comma-separated"),
    ])
    def test_bad_nonshannon_specs(self, instrumental, spec, message):
        with pytest.raises(PipelineError, match=message):
            nonshannon_exprs(instrumental, [spec])

    def test_file_exprs(self, instrumental, tmp_path):
        path = tmp_path / "extra.hrep"
        path.write_text("DIM 3\nCOORDS X Z X,Z\nEQ\nINEQ\n1 1 -1\n")
        exprs = nonshannon_exprs(instrumental, [f"file:{path}"])
        assert exprs == [H("X") + H("Z") - H(("X", "Z"))]

    def test_unknown_inner_mode(self, instrumental):
        with pytest.raises(PipelineError, match="Unknown inner mode"):
            inner_marginal_classical(instrumental, mode="hull")


class TestGluing:
    """Test cases for non-signalling glued cones."""

    def test_shannon_block(self):
        coords, cone = shannon_block(["X", "Y"])
        assert coords.dim == 3
        assert len(cone.inequalities) == 3
        assert cone.label == coords

    def test_two_blocks_share_a_variable(self):
        cone = ns_glued_cone([shannon_block(["X", "Y"]), shannon_block(["Y", "Z"])])
        names = cone.label.subset_names()
        assert cone.dim == 5
        assert ("Y",) in names and ("Y", "Z") in names
        assert ("X", "Z") not in names

    def test_identification_adds_equality(self):
        cone = ns_glued_cone(
            [shannon_block(["X"]), shannon_block(["Z"])], identify=[("X", "Z")]
        )
        assert len(cone.equalities) == 1

    def test_errors(self):
        with pytest.raises(PipelineError, match="at least one block"):
            ns_glued_cone([])
        with pytest.raises(PipelineError, match="with itself"):
            ns_glued_cone([shannon_block(["X"])], identify=[("X", "X")])
        with pytest.raises(PipelineError, match="not on the glued coordinates"):
            ns_glued_cone([shannon_block(["X"])], extra=[H(("X", "Y"))])
        coords, _ = shannon_block(["X", "Y"])
        with pytest.raises(PipelineError, match="dimensional cone"):
            ns_glued_cone([(coords, HCone(2))])


class TestLineStructures:
    """Test cases for the line-like structures P_n."""

    def test_structure(self):
        structure = pn_structure(3)
        assert structure.observed_nodes() == ["X1", "X2", "X3"]
        assert structure.latent_nodes() == ["C1", "C2"]
        assert structure.children("C2") == ["X2", "X3"]

    def test_too_small(self):
        with pytest.raises(PipelineError, match="n >= 2"):
            pn_structure(1)

    def test_coords_are_contiguous(self):
        assert pn_coords(3).subset_names() == [
            ("X1",),
            ("X2",),
            ("X3",),
            ("X1", "X2"),
            ("X2", "X3"),
            ("X1", "X2", "X3"),
        ]

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_row_count(self, n):
        assert len(pn_rows(n)) == n + n * (n - 1) // 2
        assert pn_reduced_cone(n).dim == n * (n + 1) // 2

    def test_strategies(self):
        strategies = pn_dij_strategies(3)
        assert len(strategies) == 6
        assert strategies[1].name == "P3-D1,2"
        with pytest.raises(PipelineError):
            pn_dij_strategy(3, 2, 1)

    @pytest.mark.parametrize("n", [3, 4])
    def test_closed_form_matches_evaluation(self, n):
        coords = pn_coords(n)
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                dist = strategy_eval(pn_dij_strategy(n, i, j))
                computed = entropy_vector(dist, coords).values
                assert list(computed) == pytest.approx(pn_dij_vector(n, i, j))

    @pytest.mark.parametrize("n", [3, 4])
    def test_vectors_satisfy_the_rows(self, n):
        cone = pn_reduced_cone(n)
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                assert contains_point(cone, pn_dij_vector(n, i, j))


class TestTriangle:
    """Test cases for triangle strategies and the strict inclusion search."""

    @pytest.fixture
    def shannon_and_inner(self):
        coords = CoordSystem.full(["X", "Y", "Z"])
        outer = HCone(coords.dim, (), shannon_rows(coords), label=coords)
        row = (-interaction_info("X", "Y", "Z")).to_row(coords)
        inner = outer.with_rows(inequalities=[row])
        return inner, outer

    def test_structure(self):
        structure = triangle_structure()
        assert structure.label == "C3"
        assert structure.parents("Z") == ["A", "B"]

    def test_parity_triple(self):
        vector = entropy_vector(two_to_one_distribution(6, 6, 6))
        assert list(vector.values) == pytest.approx([1, 1, 1, 2, 2, 2, 2])
        assert interaction_information(vector) == pytest.approx(-1.0)

    def test_and_or_has_positive_interaction(self):
        vector = entropy_vector(strategy_eval(and_or_strategy()))
        assert 0 < interaction_information(vector) < 0.1

    def test_witness_found(self, shannon_and_inner):
        inner, outer = shannon_and_inner
        found = strict_inclusion_witness(inner, outer)
        assert found is not None
        assert found[0].name == "triangle-and-or"

    def test_no_witness_for_parity(self, shannon_and_inner):
        inner, outer = shannon_and_inner
        parity = parse_strategy(
            "source A bit\nsource B bit\nsource C bit\n"
            "var X = xor(B, C)\nvar Y = xor(A, C)\nvar Z = xor(A, B)\n",
            name="parity",
        )
        assert strict_inclusion_witness(inner, outer, [parity]) is None


class TestVerification:
    """Test cases for matching strategies with extremal rays."""

    @pytest.fixture
    def rays(self, pair_coords):
        return VCone(3, [(1, 0, 1), (0, 1, 1), (1, 1, 1)], label=pair_coords)

    @pytest.fixture
    def only_x(self):
        return parse_strategy("source C bit\nvar X = C\nvar Y = 1\n", name="only-x")

    @pytest.fixture
    def copy(self):
        return parse_strategy("source C bit\nvar X = C\nvar Y = C\n", name="copy")

    def test_vector_on_ray(self):
        assert vector_on_ray([2, 2, 4], [1, 1, 2])[0]
        assert not vector_on_ray([1, 2, 3], [1, 1, 2])[0]
        assert not vector_on_ray([-1, -1, -2], [1, 1, 2])[0]
        assert not vector_on_ray([1, 1, 2], [0, 0, 0])[0]

    def test_report(self, rays, only_x, copy):
        report = verify_rays_achievable(rays, [only_x, None, copy])
        assert [c.status for c in report.checks] == [OK, PENDING, OK]
        assert not report.certified
        assert report.pending == [2]
        assert report.lines()[0] == "RAY 1 OK strategy=only-x"
        assert report.summary() == "2/3 rays verified (achievability pending)"

    def test_wrong_strategy_fails(self, rays, copy):
        report = verify_rays_achievable(rays, [copy, None, None])
        assert report.checks[0].status == FAIL
        assert report.failed == [1]
        assert "residual=" in report.lines()[0]

    def test_count_mismatch(self, rays, copy):
        with pytest.raises(VerificationError, match="3 rays but 1"):
            verify_rays_achievable(rays, [copy])

    def test_match_strategies(self, rays, only_x, copy):
        matched = match_strategies(rays, [copy, only_x])
        assert matched == [only_x, None, copy]

    def test_aliases(self, rays):
        renamed = parse_strategy("source C bit\nvar U = C\nvar Y = 1\n", name="u")
        report = verify_rays_achievable(
            rays, [renamed, None, None], aliases={"U": "X"}
        )
        assert report.checks[0].status == OK
