"""
test_paths.py
=============
Mallas, redondeo Λ_h, caminos càdlàg, ventanas del retículo y extracción
de segmentos.

UBICACIÓN: tests/test_paths.py
"""

import logging
import math

import numpy as np
import pytest

from src.errors import DomainError, InvalidInputError
from src.model.paths import (
    CadlagPath,
    InitialSegment,
    LatticeSegment,
    TimeGrid,
    discretize_initial,
    interpolate_chain,
    round_to_lattice,
    sample_segment,
    segment_at,
    shift_segment,
)


# ============================================================
# TimeGrid
# ============================================================

class TestTimeGrid:

    def test_step_and_spacing(self):
        grid = TimeGrid(r=1.0, M=4)
        assert grid.h == 0.25
        assert grid.spacing == 0.5

    @pytest.mark.parametrize("M", [1, 3, 7, 9, 36])
    def test_invariants(self, M):
        grid = TimeGrid(r=1.0, M=M)
        assert abs(grid.h * M - 1.0) <= math.ulp(1.0)
        assert abs(grid.spacing ** 2 - grid.h) <= 1e-12 * grid.h

    @pytest.mark.parametrize("r, M", [(1.0, 0), (0.0, 4), (-1.0, 2), (1.0, True), (math.inf, 3)])
    def test_invalid_parameters(self, r, M):
        with pytest.raises(InvalidInputError):
            TimeGrid(r=r, M=M)

    def test_step_of(self):
        grid = TimeGrid(r=1.0, M=4)
        assert grid.step_of(0.5) == 2
        with pytest.raises(DomainError):
            grid.step_of(0.3)


# ============================================================
# Λ_h
# ============================================================

class TestRoundToLattice:
    grid = TimeGrid(r=1.0, M=4)

    @pytest.mark.parametrize("x, expected", [(0.26, 1), (0.24, 0), (0.0, 0), (-1.0, -2), (1.3, 3)])
    def test_nearest_point(self, x, expected):
        assert round_to_lattice(x, self.grid) == expected

    def test_ties_go_to_larger_index(self):
        assert round_to_lattice(0.25, self.grid) == 1
        assert round_to_lattice(-0.25, self.grid) == 0
        assert round_to_lattice(-0.25, TimeGrid(r=0.25, M=1)) == 0

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError):
            round_to_lattice(math.nan, self.grid)

    def test_distance_at_most_half_spacing(self):
        rng = np.random.default_rng(3)
        grid = TimeGrid(r=1.0, M=9)
        for x in rng.uniform(-5, 5, size=500):
            k = round_to_lattice(float(x), grid)
            assert abs(x - k * grid.spacing) <= grid.spacing / 2 + 1e-15


# ============================================================
# CadlagPath
# ============================================================

class TestCadlagPath:
    path = CadlagPath((-1.0, -0.5), (1.0, 3.0), end=0.0)

    def test_right_continuous_values(self):
        assert self.path.value_at(-0.75) == 1.0
        assert self.path.value_at(-0.5) == 3.0
        assert self.path.value_at(0.0) == 3.0

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            self.path.value_at(0.1)
        with pytest.raises(DomainError):
            self.path.value_at(-1.5)

    def test_jumps(self):
        assert self.path.jumps() == [(-0.5, 2.0)]
        assert self.path.jumps(lo=-0.5) == []

    def test_integrate_against_weight(self):
        weight = CadlagPath((-1.0,), (1.0,), end=0.0)
        assert self.path.integrate_against(weight, -1.0, 0.0) == pytest.approx(2.0, abs=1e-15)
        assert self.path.integrate_against(weight, 0.0, 0.0) == 0.0

    @pytest.mark.parametrize("times, values", [((0.0, -1.0), (1.0, 2.0)), ((0.0,), (math.nan,)),
                                               ((), ()), ((0.0, 1.0), (1.0,))])
    def test_invalid_construction(self, times, values):
        with pytest.raises(InvalidInputError):
            CadlagPath(times, values)


# ============================================================
# Ventanas y discretización
# ============================================================

class TestLatticeSegment:

    def test_wrong_length(self):
        with pytest.raises(InvalidInputError):
            LatticeSegment(TimeGrid(1.0, 2), (0, 1))

    def test_interpolation(self):
        grid = TimeGrid(1.0, 2)
        window = LatticeSegment(grid, (0, 1, 2))
        path = window.as_path()
        assert path.times == (-1.0, -0.5, 0.0)
        assert window.current_index == 2
        assert window.current_value == pytest.approx(2 * math.sqrt(0.5))
        assert window.value_at_offset(-0.7) == pytest.approx(0.0)
        assert window.value_at_offset(-0.5) == pytest.approx(math.sqrt(0.5))

    def test_shift(self):
        grid = TimeGrid(1.0, 2)
        assert shift_segment(LatticeSegment(grid, (0, 1, 2)), 3).indices == (1, 2, 3)


class TestDiscretization:

    def test_constant_initial(self):
        window = discretize_initial(InitialSegment.constant(0.3), TimeGrid(1.0, 4))
        assert window.indices == (1,) * 5

    def test_affine_initial_rounds_each_grid_point(self):
        window = discretize_initial(InitialSegment.affine(0.0, 1.0), TimeGrid(1.0, 4))
        assert window.indices == (-2, -1, -1, 0, 0)

    def test_unaligned_jump_warns(self, caplog):
        phi = InitialSegment.step(1.0, -0.3, 0.0, 1.0)
        with caplog.at_level(logging.WARNING):
            discretize_initial(phi, TimeGrid(1.0, 4))
        assert any("no está sobre la malla" in r.message for r in caplog.records)

    def test_invalid_step(self):
        with pytest.raises(InvalidInputError):
            InitialSegment.step(1.0, -1.0, 0.0, 1.0)

    def test_sample_segment_keeps_real_values(self):
        phi = InitialSegment.step(1.0, -0.5, 0.0, 0.3)
        assert sample_segment(phi, TimeGrid(1.0, 2)).values == (0.0, 0.3, 0.3)
        assert sample_segment(phi, TimeGrid(1.0, 3)).values == (0.0, 0.0, 0.3, 0.3)


class TestChainInterpolation:
    grid = TimeGrid(1.0, 2)

    def test_interpolate_chain(self):
        path = interpolate_chain([0.0, 1.0, 2.0], self.grid)
        assert path.times == (-1.0, -0.5, 0.0)
        assert path.value_at(0.7) == 2.0
        with pytest.raises(InvalidInputError):
            interpolate_chain([], self.grid)

    def test_segment_at_recovers_window(self):
        values = np.array([0, 1, 2, 1]) * self.grid.spacing
        path = interpolate_chain(values, self.grid)
        assert segment_at(path, 0.5, self.grid).indices == (1, 2, 1)
        assert segment_at(path, 0.0, self.grid).indices == (0, 1, 2)

    def test_segment_at_domain(self):
        path = interpolate_chain([0.0, 0.0, 0.0], self.grid)
        with pytest.raises(DomainError):
            segment_at(path, -0.5, self.grid)
        with pytest.raises(DomainError):
            segment_at(path, 0.3, self.grid)
