#!/usr/bin/env python3
"""
Unit tests for causal structures, post-selection, d-separation and the
quantum constraint generators.
"""

import os
import sys

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '../../entrocone'))

from causal.independence import (
    CIStatement,
    ci_rows,
    d_separated,
    dedupe_statements,
    parental_ci,
)
from causal.postselect import copy_name, postselect
from causal.quantum import (
    coexisting_sets,
    dpi_rows,
    member_order,
    quantum_basic_rows,
    quantum_ci_rows,
    quantum_coords,
    quantum_postselect_coex,
)
from causal.structure import (
    LATENT_CLASSICAL,
    LATENT_QUANTUM,
    OBSERVED,
    CausalStructure,
    CausalStructureError,
    PostSelectionError,
    StructureParseError,
    UnsupportedStructureError,
    expanded_graph,
    parse_structure,
    quantum_ancestors,
    read_structure,
)
from entspace.coords import CoordSystem
from entspace.expressions import cond_entropy, mutual_info
from ratgeo.rational import primitive

DATA_DIR = os.path.join(
    os.path.dirname(__file__), '../../entrocone/pipeline/data/structures'
)

IC_EDGES = [("X", "Z"), ("A", "Z"), ("A", "Y"), ("Z", "Y")]
BELL_EDGES = [("A", "X"), ("C", "X"), ("C", "Y"), ("B", "Y")]


@pytest.fixture
def instrumental():
    return CausalStructure.build(
        observed=["X", "Z", "Y"], latent=["A"], edges=IC_EDGES, name="IC"
    )


@pytest.fixture
def quantum_instrumental():
    return CausalStructure.build(
        observed=["X", "Z", "Y"], quantum=["A"], edges=IC_EDGES, name="IC-Q"
    )


@pytest.fixture
def bell():
    return CausalStructure.build(
        observed=["A", "X", "Y", "B"], latent=["C"], edges=BELL_EDGES, name="bell"
    )


class TestCausalStructure:
    """Test cases for the structure model."""

    def test_latent_nodes_declared_first(self, instrumental):
        assert list(instrumental.nodes) == ["A", "X", "Z", "Y"]
        assert instrumental.kind("A") == LATENT_CLASSICAL
        assert instrumental.kind("X") == OBSERVED

    def test_node_queries(self, instrumental):
        assert instrumental.observed_nodes() == ["X", "Z", "Y"]
        assert instrumental.latent_nodes() == ["A"]
        assert instrumental.quantum_nodes() == []
        assert instrumental.is_classical()
        assert instrumental.parents("Y") == ["A", "Z"]
        assert instrumental.children("A") == ["Z", "Y"]
        assert instrumental.ancestors("Y") == ["A", "X", "Z"]
        assert instrumental.descendants("X") == ["Z", "Y"]
        assert instrumental.non_descendants("Z") == ["A", "X"]

    def test_topological_order_prefers_declaration(self, instrumental):
        assert instrumental.topological_order() == ["A", "X", "Z", "Y"]

    def test_label(self, instrumental):
        assert instrumental.label == "IC"
        assert instrumental.with_name("").label == "structure with 4 nodes"

    def test_unknown_kind(self):
        with pytest.raises(CausalStructureError, match="unknown kind"):
            CausalStructure({"X": "hidden"}, ())

    def test_unknown_edge_end(self):
        with pytest.raises(CausalStructureError, match="unknown node 'Q'"):
            CausalStructure.build(observed=["X"], edges=[("X", "Q")])

    def test_self_loop(self):
        with pytest.raises(CausalStructureError, match="Self-loop"):
            CausalStructure.build(observed=["X"], edges=[("X", "X")])

    def test_cycle(self):
        with pytest.raises(CausalStructureError, match="cyclic"):
            CausalStructure.build(
                observed=["X", "Y", "Z"], edges=[("X", "Y"), ("Y", "Z"), ("Z", "X")]
            )

    def test_query_unknown_node(self, instrumental):
        with pytest.raises(CausalStructureError, match="Unknown node"):
            instrumental.parents("W")

    def test_graph_is_a_copy(self, instrumental):
        graph = instrumental.graph
        graph.add_edge("Y", "X")
        assert instrumental.parents("X") == []

    def test_text_round_trip(self, instrumental):
        parsed = parse_structure(instrumental.to_text(), name="IC")
        assert parsed == instrumental


class TestStructureParsing:
    """Test cases for the structure text format."""

    def test_parse_with_aliases_and_comments(self):
        text = """
        # hybrid
        node Q latent-q
        node L latent
        node X obs
        node Y          # observed by default
        edge Q X
        edge L Y
        edge Q Y
        """
        structure = parse_structure(text, name="hybrid")
        assert structure.kind("Q") == LATENT_QUANTUM
        assert structure.kind("L") == LATENT_CLASSICAL
        assert structure.kind("Y") == OBSERVED
        assert structure.quantum_nodes() == ["Q"]
        assert not structure.is_classical()

    @pytest.mark.parametrize("text,line", [
        ("node X\nnode\n", 2),
        ("node X ghost\n", 1),
        ("node X\nnode X\n", 2),
        ("node X\nedge X\n", 2),
        ("node X\nlink X Y\n", 2),
        ("node X\n\nedge X Y\n", 3),
    ])
    def test_malformed_lines(self, text, line):
        with pytest.raises(StructureParseError) as info:
            parse_structure(text)
        assert info.value.line == line
        assert str(info.value).startswith(f"line {line}:")

    def test_cycle_reported_without_line(self):
        with pytest.raises(StructureParseError, match="cyclic") as info:
            parse_structure("node X\nnode Y\nedge X Y\nedge Y X\n")
        assert info.value.line is None

    def test_read_structure_names_by_stem(self):
        structure = read_structure(os.path.join(DATA_DIR, "ic.struct"))
        assert structure.label == "ic"
        assert structure.observed_nodes() == ["X", "Z", "Y"]
        assert set(structure.edges) == set(IC_EDGES)

    def test_shipped_structures_parse(self):
        for name in sorted(os.listdir(DATA_DIR)):
            structure = read_structure(os.path.join(DATA_DIR, name))
            assert structure.observed_nodes()


class TestSubsystems:
    """Test cases for quantum subsystems and the expanded graph."""

    def test_subsystem_names(self, quantum_instrumental):
        names = [s.name for s in quantum_instrumental.subsystems()]
        assert names == ["A_Y", "A_Z"]

    def test_expanded_graph(self, quantum_instrumental):
        graph = expanded_graph(quantum_instrumental)
        assert graph.has_edge("A", "A_Z")
        assert graph.has_edge("A_Z", "Z")
        assert not graph.has_edge("A", "Z")

    def test_quantum_ancestors(self, quantum_instrumental):
        assert quantum_ancestors(quantum_instrumental, "Y") == ["A_Y", "A_Z"]
        assert quantum_ancestors(quantum_instrumental, "Z") == ["A_Z"]
        assert quantum_ancestors(quantum_instrumental, "X") == []

    def test_quantum_ancestors_unknown(self, quantum_instrumental):
        with pytest.raises(CausalStructureError):
            quantum_ancestors(quantum_instrumental, "A_X")

    def test_quantum_node_with_parents(self):
        structure = CausalStructure.build(
            observed=["X", "Y"], quantum=["Q"], edges=[("X", "Q"), ("Q", "Y")]
        )
        with pytest.raises(UnsupportedStructureError, match="has parents"):
            structure.subsystems()


class TestPostSelection:
    """Test cases for conditioning on parentless observed nodes."""

    def test_copy_names(self):
        assert copy_name("Y", "X", 0) == "Y|X=0"
        assert copy_name("Y|X=0", "W", 1) == "Y|X=0&W=1"

    def test_bell_on_one_input(self, bell):
        selected = postselect(bell, "A")
        assert list(selected.nodes) == ["C", "X|A=0", "X|A=1", "Y", "B"]
        assert set(selected.edges) == {
            ("C", "X|A=0"),
            ("C", "X|A=1"),
            ("C", "Y"),
            ("B", "Y"),
        }
        assert selected.origin("X|A=1") == "X"
        assert selected.origin("Y") == "Y"
        assert selected.label == "bell|A"

    def test_bell_on_both_inputs(self, bell):
        selected = postselect(postselect(bell, "A"), "B", k=3)
        assert selected.observed_nodes() == [
            "X|A=0",
            "X|A=1",
            "Y|B=0",
            "Y|B=1",
            "Y|B=2",
        ]
        assert selected.parents("Y|B=2") == ["C"]

    def test_copies_keep_descendant_edges(self, instrumental):
        selected = postselect(instrumental, "X")
        assert ("Z|X=0", "Y|X=0") in selected.edges
        assert ("Z|X=0", "Y|X=1") not in selected.edges
        assert selected.parents("Y|X=1") == ["A", "Z|X=1"]

    def test_unnamed_structure_stays_unnamed(self, bell):
        assert postselect(bell.with_name(""), "A").name == ""

    @pytest.mark.parametrize("node,k,message", [
        ("W", 2, "unknown"),
        ("C", 2, "latent"),
        ("X", 2, "has parents"),
        ("A", 0, "positive"),
    ])
    def test_invalid_requests(self, bell, node, k, message):
        with pytest.raises(PostSelectionError, match=message):
            postselect(bell, node, k)


class TestIndependence:
    """Test cases for d-separation and conditional independence extraction."""

    def test_instrument_is_independent_of_source(self, instrumental):
        assert d_separated(instrumental, "X", "A")
        assert not d_separated(instrumental, "X", "Y")
        assert not d_separated(instrumental, "X", "Y", "Z")
        assert d_separated(instrumental, "X", "Y", ["A", "Z"])

    def test_empty_side_is_separated(self, instrumental):
        assert d_separated(instrumental, [], "Y")

    def test_overlapping_sets(self, instrumental):
        with pytest.raises(CausalStructureError, match="disjoint"):
            d_separated(instrumental, "X", ["X", "Y"])

    def test_unknown_nodes(self, instrumental):
        with pytest.raises(CausalStructureError, match="Unknown nodes"):
            d_separated(instrumental, "X", "W")

    def test_expanded_graph_argument(self, quantum_instrumental):
        graph = expanded_graph(quantum_instrumental)
        assert d_separated(quantum_instrumental, "X", ["A_Y", "A_Z"], graph=graph)

    def test_statement_text_and_key(self):
        statement = CIStatement(("Y",), ("X",), ("A", "Z"))
        assert str(statement) == "I(Y:X|AZ)=0"
        assert statement.key == CIStatement(("X",), ("Y",), ("Z", "A")).key
        assert str(CIStatement(("X1",), ("X2",))) == "I(X1:X2)=0"

    def test_dedupe_keeps_first(self):
        a = CIStatement(("X",), ("Y",))
        b = CIStatement(("Y",), ("X",))
        assert dedupe_statements([a, b]) == [a]

    def test_parental_statements(self, instrumental):
        statements = parental_ci(instrumental)
        assert [str(s) for s in statements] == ["I(A:X)=0", "I(Y:X|AZ)=0"]

    def test_observed_only_drops_collider_paths(self, instrumental):
        assert parental_ci(instrumental, observed_only=True) == []

    def test_observed_only_bell(self, bell):
        statements = parental_ci(bell, observed_only=True)
        assert [s.key for s in statements] == [
            CIStatement(("A",), ("Y", "B")).key,
            CIStatement(("X",), ("B",), ("A",)).key,
            CIStatement(("Y",), ("A",), ("B",)).key,
            CIStatement(("B",), ("A", "X")).key,
        ]

    def test_ci_rows(self, instrumental):
        coords = CoordSystem.full(list(instrumental.nodes))
        rows = ci_rows(parental_ci(instrumental), coords)
        assert len(rows) == 2
        assert rows[0] == mutual_info("A", "X").to_row(coords)


class TestQuantumRows:
    """Test cases for coexisting sets and the quantum inequalities."""

    def test_member_order(self, quantum_instrumental):
        assert member_order(quantum_instrumental) == ["A_Y", "A_Z", "X", "Z", "Y"]

    def test_coexisting_sets(self, quantum_instrumental):
        assert coexisting_sets(quantum_instrumental) == [
            ("A_Y", "A_Z", "X"),
            ("A_Y", "X", "Z"),
            ("X", "Z", "Y"),
        ]

    def test_classical_structure_has_one_set(self, instrumental):
        assert coexisting_sets(instrumental) == [("A", "X", "Z", "Y")]

    def test_quantum_coords(self, quantum_instrumental):
        coords = quantum_coords(quantum_instrumental)
        assert ("A_Y", "A_Z", "X") in coords
        assert ("X", "Z", "Y") in coords
        assert ("A_Z", "Z") not in coords

    def test_instrumental_row_counts(self, quantum_instrumental):
        coords = quantum_coords(quantum_instrumental)
        basic = quantum_basic_rows(quantum_instrumental, coords)
        independence = quantum_ci_rows(quantum_instrumental, coords)
        processing = dpi_rows(quantum_instrumental, coords)
        assert len(basic) == 29
        assert len(independence) == 1
        assert len(processing) == 2
        assert all(r.equality for r in independence)
        assert not any(r.equality for r in basic + processing)

    def test_implied_basic_rows_are_pruned(self, quantum_instrumental):
        coords = quantum_coords(quantum_instrumental)
        basic = quantum_basic_rows(quantum_instrumental, coords)
        rows = {tuple(primitive(r.row)) for r in basic}
        rules = [r.justification.rule for r in basic]
        assert rules.count("cq-conditioning") == 3
        assert rules.count("weak-monotonicity") == 4
        # H(A_Y|X) follows from H(A_Y|XZ) and I(A_Y:Z|X)
        assert tuple(primitive(cond_entropy("A_Y", "X").to_row(coords))) not in rows
        assert tuple(primitive(cond_entropy("A_Y", ["X", "Z"]).to_row(coords))) in rows
        classical_halves = cond_entropy("A_Y", "X") + cond_entropy("A_Y", "Z")
        assert tuple(primitive(classical_halves.to_row(coords))) not in rows

    def test_instrumental_processing_rows(self, quantum_instrumental):
        coords = quantum_coords(quantum_instrumental)
        rows = {
            tuple(primitive(r.row))
            for r in dpi_rows(quantum_instrumental, coords)
        }
        expected = [
            mutual_info(["A_Z", "X"], "A_Y") - mutual_info(["Z", "X"], "A_Y"),
            mutual_info(["A_Y", "Z"], "X") - mutual_info(["Y", "Z"], "X"),
        ]
        assert rows == {tuple(primitive(e.to_row(coords))) for e in expected}

    def test_processing_rows_split_the_remaining_members(self):
        triangle = CausalStructure.build(
            observed=["X", "Y", "Z"],
            quantum=["A", "B", "C"],
            edges=[
                ("A", "Y"), ("A", "Z"), ("B", "X"),
                ("B", "Z"), ("C", "X"), ("C", "Y"),
            ],
            name="C3-Q",
        )
        coords = quantum_coords(triangle)
        rows = {tuple(primitive(r.row)) for r in dpi_rows(triangle, coords)}
        target = ["A_Z", "B_Z", "C_Y"]
        split = mutual_info(["B_X", "C_X", "A_Y"], target) - mutual_info(
            ["X", "A_Y"], target
        )
        whole = mutual_info(["B_X", "C_X"], ["A_Y"] + target) - mutual_info(
            "X", ["A_Y"] + target
        )
        assert tuple(primitive(split.to_row(coords))) in rows
        assert tuple(primitive(whole.to_row(coords))) in rows

    def test_weak_monotonicity_rows_are_justified(self, quantum_instrumental):
        coords = quantum_coords(quantum_instrumental)
        rules = [
            r.justification.rule
            for r in quantum_basic_rows(quantum_instrumental, coords)
        ]
        assert "weak-monotonicity" in rules
        assert "submodularity" in rules

    def test_purification_adds_equalities(self, quantum_instrumental):
        coords = quantum_coords(quantum_instrumental)
        plain = quantum_basic_rows(quantum_instrumental, coords)
        pure = quantum_basic_rows(quantum_instrumental, coords, purify=True)
        added = pure[len(plain):]
        assert added and all(r.equality for r in added)

    def test_postselected_copies_do_not_coexist(self):
        structure = CausalStructure.build(
            observed=["X", "Y"], quantum=["Q"], edges=[("Q", "Y"), ("X", "Y")]
        )
        selected, sets = quantum_postselect_coex(structure, "X")
        assert selected.observed_nodes() == ["Y|X=0", "Y|X=1"]
        assert not any({"Y|X=0", "Y|X=1"} <= set(s) for s in sets)
