#!/usr/bin/env python3
"""
Performance Tests for entrocone

Tests the running time of the constraint generators, the elimination and
redundancy passes and the spectrum arithmetic that larger runs rely on.
"""

import os
import statistics
import sys
import time

import pytest

# Add the package root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '../../entrocone'))

from entspace.coords import CoordSystem
from entspace.shannon import shannon_rows
from pipeline.builders import classical_cone, outer_marginal_classical
from pipeline.catalog import catalog
from ratgeo.cone import HCone
from ratgeo.fourier_motzkin import fm_eliminate
from ratgeo.redundancy import remove_redundant
from smoothrt.entropies import h_hyp_eps, h_min_eps
from smoothrt.spectrum import Spectrum, tensor_power


def timed(func, *args, **kwargs):
    start_time = time.time()
    result = func(*args, **kwargs)
    return result, time.time() - start_time


@pytest.mark.performance
class TestConstraintGeneration:
    """Test constraint generation speed"""

    def test_shannon_generator(self):
        """Elemental rows for five variables are generated well under a second"""
        times = []
        for _ in range(5):
            rows, elapsed = timed(shannon_rows, CoordSystem.standard(5))
            times.append(elapsed)

        assert len(rows) == 85
        mean_time = statistics.mean(times)
        assert mean_time < 1.0, f"Shannon rows took {mean_time:.3f}s, expected < 1s"

    def test_classical_cone_assembly(self):
        """Constraints of the instrumental scenario assemble quickly"""
        structure = catalog("IC").structure
        cone, elapsed = timed(classical_cone, structure)

        assert cone.dim == 15
        assert elapsed < 1.0, f"Cone assembly took {elapsed:.3f}s, expected < 1s"


@pytest.mark.performance
class TestEliminationPerformance:
    """Test Fourier-Motzkin and redundancy removal speed"""

    def test_eliminate_one_variable(self):
        """Projecting Shannon(3) onto two variables stays under a second"""
        coords = CoordSystem.standard(3)
        cone = HCone(coords.dim, (), shannon_rows(coords), label=coords)
        drop = coords.positions_outside(["X1", "X2"])

        projected, elapsed = timed(fm_eliminate, cone, drop)

        assert projected.dim == 3
        assert elapsed < 1.0, f"Elimination took {elapsed:.3f}s, expected < 1s"

    def test_redundancy_removal(self):
        """Duplicated Shannon(4) rows are cleaned up quickly"""
        coords = CoordSystem.standard(4)
        rows = shannon_rows(coords)
        cone = HCone(coords.dim, (), rows + [tuple(2 * v for v in r) for r in rows])

        cleaned, elapsed = timed(remove_redundant, cone)

        assert len(cleaned.inequalities) == 28
        assert elapsed < 5.0, f"Redundancy removal took {elapsed:.3f}s, expected < 5s"

    def test_instrumental_pipeline(self):
        """The full instrumental pipeline finishes within five seconds"""
        scenario = catalog("IC")
        cone, elapsed = timed(
            outer_marginal_classical, scenario.structure, scenario.family
        )

        assert len(cone.inequalities) == 10
        assert elapsed < 5.0, f"IC pipeline took {elapsed:.3f}s, expected < 5s"


@pytest.mark.performance
class TestSpectrumPerformance:
    """Test run-length spectrum arithmetic on large powers"""

    def test_tensor_power(self):
        """A thousand copies of a qubit spectrum keep 1001 runs"""
        power, elapsed = timed(tensor_power, Spectrum.parse("3/4,1/4"), 1000)

        assert len(power.entries) == 1001
        assert elapsed < 5.0, f"Tensor power took {elapsed:.3f}s, expected < 5s"

    def test_smooth_entropies_on_large_power(self):
        """Smooth entropies of a 200-fold power are computed from the runs"""
        power = tensor_power(Spectrum.parse("3/4,1/4"), 200)
        times = []
        for func in (h_min_eps, h_hyp_eps):
            _, elapsed = timed(func, power, "1/10")
            times.append(elapsed)

        max_time = max(times)
        assert max_time < 2.0, f"Smooth entropy took {max_time:.3f}s, expected < 2s"
