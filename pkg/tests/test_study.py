"""
test_study.py
=============
Estudio de convergencia en M, benchmark Browniano contra el oráculo del
paseo y demostración de la difusión patológica.

UBICACIÓN: tests/test_study.py
"""

import math

import pytest

from src.analysis.benchmarks import (
    brownian_pattern_violation,
    continuous_exit_time,
    pathological_demo_degrees,
    run_brownian_benchmark,
    run_pathological_demo,
    symmetric_walk_exit_oracle,
)
from src.analysis.study import StudyReport, StudyRow, run_study
from src.data.config import validate_config
from src.errors import InvalidBenchmarkError, InvalidInputError
from src.solver.dynamic_programming import solve_dp
from tests.problems import brownian_problem


def brownian_config(tmp_path, degrees, **extra):
    raw = {
        'grid': {'delay': 1.0, 'degrees': degrees},
        'cost': {'interval': [-0.5, 0.5], 'horizon': 2.0},
    }
    raw.update(extra)
    return validate_config(raw, base_dir=tmp_path)


def delayed_config(tmp_path, degrees):
    raw = {
        'grid': {'delay': 1.0, 'degrees': degrees},
        'drift': {'lags': [{'time': -1.0, 'gain': 1.0}], 'control_factor': 'payload'},
        'controls': [-1.0, 0.0, 1.0],
        'cost': {'running': {'constant': 0.0, 'state_weight': 1.0}, 'interval': [-5.0, 5.0], 'horizon': 2.0},
    }
    return validate_config(raw, base_dir=tmp_path)


def row(M, difference):
    return StudyRow(M=M, h=1 / M, states=1, value=0.0, difference=difference, oracle=math.nan, wall_time=0.0)


# ============================================================
# ESTUDIO DE CONVERGENCIA
# ============================================================

class TestRunStudy:

    def test_brownian_rows_match_oracle(self, tmp_path):
        report = run_study(brownian_config(tmp_path, [36, 4, 16]))
        assert [r.M for r in report.rows] == [4, 16, 36]
        assert report.rows[0].value == 0.25
        assert math.isnan(report.rows[0].difference)
        for r in report.rows:
            assert r.ok
            assert r.value == pytest.approx(r.oracle, abs=1e-12)
        assert report.rows[1].difference == pytest.approx(abs(report.rows[1].value - 0.25))

    def test_delayed_study_rows(self, tmp_path):
        report = run_study(delayed_config(tmp_path, [2, 3, 4, 5, 6]))
        assert len(report.rows) == 5
        assert not report.failed_rows
        assert all(r.value > 0 and r.states > 0 for r in report.rows)
        assert all(math.isnan(r.oracle) for r in report.rows)
        values = [r.value for r in report.rows]
        assert report.differences == pytest.approx([abs(b - a) for a, b in zip(values, values[1:])])
        assert report.differences[-1] <= report.differences[0]
        assert report.converging

    def test_single_degree_is_rejected(self, tmp_path):
        with pytest.raises(InvalidInputError):
            run_study(brownian_config(tmp_path, [4]))

    def test_failed_row_is_recorded(self, tmp_path):
        report = run_study(brownian_config(tmp_path, [4, 16], state_budget=3))
        first, failed = report.rows
        assert first.ok
        assert failed.status == 'ResourceCapError'
        assert failed.states is None
        assert math.isnan(failed.value)
        assert report.failed_rows == [failed]
        assert not report.converging

    def test_frame_excludes_wall_time(self, tmp_path):
        report = run_study(brownian_config(tmp_path, [4, 9]))
        assert list(report.to_frame().columns) == ['M', 'h', 'states', 'value', 'difference', 'oracle', 'status']
        assert 'wall_time' in report.to_frame(include_wall_time=True).columns


class TestStudyPredicates:

    def test_converging_compares_last_with_first(self):
        report = StudyReport([row(2, math.nan), row(3, 0.2), row(4, 0.3), row(5, 0.1)])
        assert report.differences == [0.2, 0.3, 0.1]
        assert report.converging
        assert not report.monotone

    def test_growing_differences(self):
        report = StudyReport([row(2, math.nan), row(3, 0.1), row(4, 0.2)])
        assert not report.converging

    def test_monotone(self):
        report = StudyReport([row(2, math.nan), row(3, 0.3), row(4, 0.2), row(5, 0.2)])
        assert report.monotone


# ============================================================
# BENCHMARK BROWNIANO
# ============================================================

class TestBrownianBenchmark:

    def test_values_and_oracle(self, tmp_path):
        report = run_brownian_benchmark(brownian_config(tmp_path, [4, 9]))
        first, second = report.rows
        assert first.value == 0.25
        assert first.continuous == 0.25
        assert first.abs_error == 0.0
        assert second.value == pytest.approx((4 - 2 ** -7) / 9, abs=1e-14)
        assert report.max_oracle_error <= 1e-12
        assert list(report.to_frame().columns) == ['M', 'h', 'value', 'oracle', 'continuous',
                                                   'abs_error', 'oracle_error']

    def test_oracle_matches_dp(self):
        for M in (16, 25, 36):
            problem = brownian_problem(M)
            assert symmetric_walk_exit_oracle(problem) == pytest.approx(solve_dp(problem).value, abs=1e-12)
        closed = brownian_problem(9, 'closed-lattice')
        assert symmetric_walk_exit_oracle(closed) == pytest.approx(solve_dp(closed).value, abs=1e-12)

    def test_continuous_exit_time(self):
        assert continuous_exit_time((-0.5, 0.5), 0.0, 1.0) == 0.25
        assert continuous_exit_time((-1.0, 1.0), 0.0, 2.0) == 0.25
        assert continuous_exit_time((-0.5, 0.5), 0.7, 1.0) == 0.0

    def test_rejects_other_models(self, tmp_path):
        config = delayed_config(tmp_path, [2, 3])
        assert 'drift' in brownian_pattern_violation(config)
        with pytest.raises(InvalidBenchmarkError):
            run_brownian_benchmark(config)

    def test_rejects_discount(self, tmp_path):
        config = brownian_config(tmp_path, [4, 9],
                                 cost={'interval': [-0.5, 0.5], 'horizon': 2.0, 'discount': 0.5})
        with pytest.raises(InvalidBenchmarkError):
            run_brownian_benchmark(config)


# ============================================================
# DIFUSIÓN PATOLÓGICA
# ============================================================

class TestPathologicalDemo:

    def test_grid_dependence(self):
        report = run_pathological_demo()
        assert report.sigmas == pytest.approx((0.8, 0.5))
        assert report.constant_sigmas == (0.5, 0.5)
        assert report.difference == pytest.approx(0.3)
        assert report.grid_dependent

    def test_lipschitz_families_are_consistent(self):
        report = run_pathological_demo()
        assert report.drift_errors == pytest.approx((0.3248, 0.1373, 0.0436), abs=1e-4)
        assert report.diffusion_errors == pytest.approx((0.19995, 0.07495, 0.01245), abs=1e-4)
        assert report.grid_consistent
        assert report.passes

    def test_frame(self):
        frame = run_pathological_demo().to_frame()
        assert list(frame.columns) == ['quantity', 'M', 'value']
        assert len(frame) == 10

    @pytest.mark.parametrize("r", [2.0, 0.4])
    def test_jump_follows_the_delay(self, r):
        report = run_pathological_demo(r=r)
        assert report.jump_time == -r / 2
        assert report.degrees == (2, 3)
        assert report.sigmas == pytest.approx((0.8, 0.5))
        assert report.passes

    def test_settings_from_config(self, tmp_path):
        config = validate_config({
            'grid': {'delay': 2.0, 'degrees': [3, 4, 6]},
            'diffusion': {'family': 'pathological', 'floor': 0.25, 'cap': 1.0},
            'bound': 2,
            'cost': {'interval': [-1.0, 1.0], 'horizon': 2.0},
            'initial': {'family': 'step', 'time': -1.0, 'before': 0.1, 'after': 0.5},
        }, base_dir=tmp_path)
        report = run_pathological_demo(config)
        assert report.degrees == (4, 3)
        assert report.floor == 0.25
        assert report.jump_size == pytest.approx(0.4)
        assert report.sigmas == pytest.approx((0.65, 0.25))
        assert report.constant_sigmas == (0.25, 0.25)
        assert report.passes

    def test_degree_pair(self):
        assert pathological_demo_degrees((3, 2), 1.0, -0.5) == (2, 3)
        assert pathological_demo_degrees((4, 8), 1.0, -0.5) == (4, 8)
        with pytest.raises(InvalidInputError):
            pathological_demo_degrees((2,), 1.0, -0.5)
