"""
test_kernel.py
==============
Kernel p^M: identidades de momentos, factibilidad, cota h*, claves de
estado y simulación reproducible.

UBICACIÓN: tests/test_kernel.py
"""

import logging

import numpy as np
import pytest

from src.chain.diagnostics import consistency_suite
from src.chain.kernel import (
    ChainPath,
    TransitionDistribution,
    TransitionKernel,
    path_generator,
    simulate_chain,
    transition_distribution,
    validate_kernel,
)
from src.errors import InvalidInputError, KernelInfeasibleError
from src.model.coefficients import (
    CoefficientSet,
    ConstantDiffusion,
    ControlFactor,
    ControlSet,
    LinearFunctional,
    SaturatedLinearDrift,
)
from src.model.paths import InitialSegment, LatticeSegment, TimeGrid, discretize_initial
from tests.problems import brownian_problem, delayed_problem, random_small_problem


def stiff_drift_coefficients():
    """b ≡ 1, σ ≡ 0.5, K = 1: h* = 0.0625"""
    drift = SaturatedLinearDrift(LinearFunctional(offset=1.0), 1.0, ControlFactor('unit', 1.0))
    return CoefficientSet.from_families(drift, ConstantDiffusion(0.5), ControlSet.from_values([0.0]), delay=1.0)


# ============================================================
# IDENTIDADES DE MOMENTOS
# ============================================================

class TestMomentIdentities:

    def test_delayed_feedback(self):
        kernel = delayed_problem(4).kernel
        report = consistency_suite(kernel, 1000, seed=0)
        assert len(report.entries) == 1000
        assert report.worst_mean_error <= 1e-12
        assert report.worst_variance_error <= 1e-12

    def test_state_dependent_diffusion(self):
        kernel = random_small_problem(np.random.default_rng(11)).kernel
        report = consistency_suite(kernel, 1000, seed=1)
        assert report.worst_mean_error <= 1e-12
        assert report.worst_variance_error <= 1e-12

    def test_probabilities_sum_to_one(self):
        kernel = delayed_problem(4).kernel
        window = LatticeSegment(kernel.grid, (1, 0, -1, 0, 2))
        for control in kernel.coeffs.controls:
            dist = transition_distribution(kernel, window, control)
            assert dist.up + dist.stay + dist.down == pytest.approx(1.0, abs=1e-15)
            assert dist.drift == pytest.approx(control.value * 0.5)


class TestTransitionDistribution:
    dist = TransitionDistribution(up=0.25, stay=0.5, down=0.25, current=3, jump=2, drift=0.0, diffusion=1.0)

    def test_targets(self):
        assert self.dist.up_target == 5
        assert self.dist.down_target == 1
        assert self.dist.outcomes() == ((2, 0.25), (0, 0.5), (-2, 0.25))

    @pytest.mark.parametrize("u, increment", [(0.1, 2), (0.3, -2), (0.9, 0)])
    def test_sample_increment(self, u, increment):
        assert self.dist.sample_increment(u) == increment


# ============================================================
# FACTIBILIDAD
# ============================================================

class TestFeasibility:

    def test_infeasible_step_carries_context(self):
        kernel = TransitionKernel(stiff_drift_coefficients(), TimeGrid(1.0, 1))
        control = kernel.coeffs.controls[0]
        with pytest.raises(KernelInfeasibleError) as excinfo:
            transition_distribution(kernel, LatticeSegment(kernel.grid, (0, 0)), control)
        assert excinfo.value.h == 1.0
        assert excinfo.value.window == (0, 0)
        assert excinfo.value.control == control
        assert excinfo.value.exit_code == 2

    def test_report_recommends_min_degree(self, caplog):
        kernel = TransitionKernel(stiff_drift_coefficients(), TimeGrid(1.0, 1))
        with caplog.at_level(logging.WARNING):
            report = validate_kernel(kernel, sample_count=20, seed=0)
        assert not report.feasible
        assert report.h_star == 0.0625
        assert report.min_degree == 16
        assert report.degree_ok(16)
        assert not report.degree_ok(15)
        assert any("M ≥ 16" in r.message for r in caplog.records)

    def test_boundary_degree_is_feasible(self):
        kernel = TransitionKernel(stiff_drift_coefficients(), TimeGrid(1.0, 16))
        report = validate_kernel(kernel, sample_count=20, seed=0)
        assert report.feasible
        assert report.analytic_ok
        dist = transition_distribution(kernel, LatticeSegment(kernel.grid, (0,) * 17), kernel.coeffs.controls[0])
        assert dist.down == 0.0

    def test_zero_drift_has_no_step_limit(self):
        report = validate_kernel(brownian_problem(1).kernel, sample_count=5)
        assert report.min_degree == 1
        assert report.feasible

    def test_delay_mismatch(self):
        with pytest.raises(InvalidInputError):
            TransitionKernel(stiff_drift_coefficients(), TimeGrid(2.0, 4))


# ============================================================
# CLAVES DE ESTADO
# ============================================================

class TestStateKey:

    def test_markovian_key_keeps_current_value(self):
        kernel = brownian_problem(4).kernel
        assert kernel.depth == 1
        assert kernel.state_key((0, 1, 2, 3, 4)) == (4,)
        assert kernel.window_from_key((3,)).indices == (3, 3, 3, 3, 3)

    def test_full_delay_key_is_whole_window(self):
        kernel = delayed_problem(4).kernel
        assert kernel.depth == 5
        assert kernel.state_key((0, 1, 2, 3, 4)) == (0, 1, 2, 3, 4)


# ============================================================
# SIMULACIÓN
# ============================================================

class TestSimulation:

    def test_same_seed_same_path(self):
        problem = brownian_problem(4)
        sequence = [problem.controls[0]] * 20
        a = simulate_chain(problem.kernel, sequence, problem.initial, 20, seed=5, path_index=3)
        b = simulate_chain(problem.kernel, sequence, problem.initial, 20, seed=5, path_index=3)
        c = simulate_chain(problem.kernel, sequence, problem.initial, 20, seed=5, path_index=4)
        assert a == b
        assert a.indices != c.indices

    def test_path_layout(self):
        problem = delayed_problem(4, initial=InitialSegment.constant(0.5))
        controls = problem.controls
        chain = simulate_chain(problem.kernel, lambda n, window: controls[n % 3], problem.initial, 8, seed=1)
        assert isinstance(chain, ChainPath)
        assert chain.steps == 8
        assert chain.indices[:5] == discretize_initial(problem.initial, problem.grid).indices
        assert [c.label for c in chain.controls] == ['-1', '0', '1', '-1', '0', '1', '-1', '0']
        assert all(abs(b - a) in (0, 1) for a, b in zip(chain.indices[4:], chain.indices[5:]))
        assert chain.window(8).indices == chain.indices[8:]

    def test_short_control_sequence(self):
        problem = brownian_problem(4)
        with pytest.raises(InvalidInputError):
            simulate_chain(problem.kernel, [problem.controls[0]] * 3, problem.initial, 4, seed=0)
        with pytest.raises(InvalidInputError):
            simulate_chain(problem.kernel, [], problem.initial, -1, seed=0)

    def test_path_generator_is_reproducible(self):
        a = path_generator(7, 12).random(5)
        b = path_generator(7, 12).random(5)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, path_generator(7, 13).random(5))
