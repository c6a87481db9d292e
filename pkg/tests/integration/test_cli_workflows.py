#!/usr/bin/env python3
"""
Integration tests for command line workflows: build a cone, store it, convert
it and check points against it.
"""

import os
import sys

import pytest

sys.path.append(os.path.join(os.path.dirname(__file__), '../../entrocone'))

from cli.main import EXIT_OK, run
from ratgeo.cone_io import read_hrep, read_vrep


@pytest.mark.integration
class TestConeWorkflow:
    """Catalog cone to file, conversion and membership."""

    @pytest.fixture
    def ic_cone(self, tmp_path):
        path = tmp_path / "ic.hrep"
        assert run(["cone", "outer", "--catalog", "IC", "--out", str(path)]) == EXIT_OK
        return path

    def test_outer_cone_file(self, ic_cone):
        cone = read_hrep(ic_cone)
        assert cone.dim == 7
        assert len(cone.inequalities) == 10
        assert cone.label == [
            ("X",), ("Z",), ("Y",), ("X", "Z"), ("X", "Y"), ("Z", "Y"), ("X", "Z", "Y")
        ]

    def test_convert_round_trip(self, ic_cone, tmp_path):
        rays_path = tmp_path / "ic.vrep"
        back_path = tmp_path / "ic_back.hrep"
        argv = ["cone", "convert", "--in", str(ic_cone), "--to", "vrep"]
        assert run(argv + ["--out", str(rays_path)]) == EXIT_OK
        argv = ["cone", "convert", "--in", str(rays_path), "--to", "hrep"]
        assert run(argv + ["--out", str(back_path)]) == EXIT_OK

        assert read_vrep(rays_path).rays
        assert set(read_hrep(back_path).inequalities) == set(
            read_hrep(ic_cone).inequalities
        )

    def test_check_distributions(self, ic_cone, tmp_path, capsys):
        direct = tmp_path / "direct.dist"
        direct.write_text("VARS X Y Z\n0 0 0 1/2\n1 1 0 1/2\n")
        mediated = tmp_path / "mediated.dist"
        mediated.write_text("VARS X Y Z\n0 0 0 1/2\n1 1 1 1/2\n")
        capsys.readouterr()

        argv = ["check", "dist", "--cone", str(ic_cone), "--dist"]
        assert run(argv + [str(direct)]) == 0
        assert capsys.readouterr().out.startswith("outside:")
        assert run(argv + [str(mediated)]) == 0
        assert capsys.readouterr().out.strip() == "inside"

    def test_structure_file_with_postselection(self, tmp_path, capsys):
        path = tmp_path / "bell.struct"
        path.write_text(
            "node C latent\nnode A\nnode X\nnode Y\nnode B\n"
            "edge A X\nedge C X\nedge C Y\nedge B Y\n"
        )
        argv = [
            "cone", "outer", "--structure", str(path),
            "--postselect", "A=2", "--marginal", "postselected", "--format", "text",
        ]
        capsys.readouterr()

        assert run(argv) == EXIT_OK
        assert capsys.readouterr().out.startswith("11 coordinates:")


@pytest.mark.integration
class TestReproduceWorkflow:
    """Golden reproduction from the command line."""

    def test_reproduce_scenario(self, capsys):
        assert run(["reproduce", "pienaar-a"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()

        assert lines[0].startswith("PASS outer:")
        assert lines[-1] == "pienaar-a: 2/2 expectations reproduced"

    @pytest.mark.slow
    def test_reproduce_all_fast_scenarios(self):
        assert run(["reproduce", "all"]) == EXIT_OK
