"""
test_coefficients.py
====================
Controles, familias de drift y difusión, profundidad de memoria, conjunto A
de la difusión patológica, costes y chequeo de hipótesis.

UBICACIÓN: tests/test_coefficients.py
"""

import math
from fractions import Fraction

import pytest

from src.errors import DomainError, InvalidInputError
from src.model.coefficients import (
    CoefficientSet,
    ConstantDiffusion,
    ControlFactor,
    ControlPoint,
    ControlSet,
    CostSpec,
    LinearFunctional,
    LipschitzDiffusion,
    PathologicalDiffusion,
    QuadraticRunningCost,
    QuadraticTerminalCost,
    SaturatedLinearDrift,
    WeightFunction,
    eval_diffusion,
    eval_drift,
    validate_assumptions,
)
from src.model.paths import CadlagPath, LatticeSegment, TimeGrid


def constant_path(value, r=1.0):
    return CadlagPath((-r,), (value,), end=0.0)


# ============================================================
# CONTROLES
# ============================================================

class TestControlSet:

    def test_from_values_labels(self):
        controls = ControlSet.from_values([-1.0, 0.0, 1.0])
        assert [c.label for c in controls] == ['-1', '0', '1']
        assert controls.index_of('1') == 2
        assert len(controls) == 3

    def test_rejects_empty_and_duplicates(self):
        with pytest.raises(InvalidInputError):
            ControlSet(())
        with pytest.raises(InvalidInputError):
            ControlSet((ControlPoint('a', 1.0), ControlPoint('a', 2.0)))

    def test_unknown_label(self):
        with pytest.raises(InvalidInputError):
            ControlSet.from_values([0.0]).index_of('up')

    def test_control_factor(self):
        up = ControlPoint('up', 2.0)
        assert ControlFactor('payload', 0.5)(up) == 1.0
        assert ControlFactor('unit', 0.5)(up) == 0.5
        with pytest.raises(InvalidInputError):
            ControlFactor('square')


# ============================================================
# DRIFT
# ============================================================

class TestSaturatedLinearDrift:
    controls = ControlSet.from_values([-1.0, 1.0])

    def test_clamp_and_control_factor(self):
        drift = SaturatedLinearDrift(LinearFunctional(lags=((-1.0, 2.0),)), 1.0, ControlFactor('payload', 1.0))
        coeffs = CoefficientSet.from_families(drift, ConstantDiffusion(1.0), self.controls, delay=1.0)
        assert eval_drift(coeffs, constant_path(3.0), ControlPoint('x', -0.5)) == -0.5
        assert eval_drift(coeffs, constant_path(0.2), ControlPoint('x', 1.0)) == pytest.approx(0.4)
        assert drift.bound(self.controls) == 1.0
        assert drift.lipschitz(self.controls) == 2.0

    def test_weight_integral(self):
        weight = WeightFunction((-1.0,), (1.0,))
        drift = SaturatedLinearDrift(LinearFunctional(weights=((weight, 1.0),)), 5.0, ControlFactor('unit', 1.0))
        path = CadlagPath((-1.0, -0.5), (1.0, 3.0), end=0.0)
        assert drift(path, ControlPoint('x', 0.0)) == pytest.approx(2.0)

    def test_zero_drift_has_zero_bound(self):
        assert SaturatedLinearDrift().bound(self.controls) == 0.0

    def test_segment_must_cover_delay(self):
        coeffs = CoefficientSet.from_families(SaturatedLinearDrift(), ConstantDiffusion(1.0),
                                              self.controls, delay=1.0)
        short = CadlagPath((-0.5,), (0.0,), end=0.0)
        with pytest.raises(DomainError):
            eval_drift(coeffs, short, self.controls[0])
        with pytest.raises(DomainError):
            eval_diffusion(coeffs, short)

    def test_lag_outside_delay(self):
        drift = SaturatedLinearDrift(LinearFunctional(lags=((-2.0, 1.0),)))
        with pytest.raises(InvalidInputError):
            CoefficientSet.from_families(drift, ConstantDiffusion(1.0), self.controls, delay=1.0)

    def test_negative_saturation(self):
        with pytest.raises(InvalidInputError):
            SaturatedLinearDrift(saturation=-1.0)


class TestMemoryDepth:
    controls = ControlSet.from_values([0.0])

    def coeffs(self, drift):
        return CoefficientSet.from_families(drift, ConstantDiffusion(1.0), self.controls, delay=1.0)

    def test_full_delay_lag(self):
        drift = SaturatedLinearDrift(LinearFunctional(lags=((-1.0, 1.0),)))
        assert self.coeffs(drift).memory_depth(TimeGrid(1.0, 4)) == 5

    def test_markovian_coefficients(self):
        assert self.coeffs(SaturatedLinearDrift()).memory_depth(TimeGrid(1.0, 4)) == 1

    def test_partial_lag(self):
        drift = SaturatedLinearDrift(LinearFunctional(lags=((-0.5, 1.0),)))
        assert self.coeffs(drift).memory_depth(TimeGrid(1.0, 4)) == 3

    def test_pathological_reads_whole_window(self):
        coeffs = CoefficientSet.from_families(SaturatedLinearDrift(), PathologicalDiffusion(0.5, 1.0, 1.0),
                                              self.controls, delay=1.0)
        assert coeffs.memory_depth(TimeGrid(1.0, 3)) == 4


# ============================================================
# DIFUSIÓN
# ============================================================

class TestDiffusion:

    def test_lipschitz_diffusion_range(self):
        sigma = LipschitzDiffusion(floor=0.5, cap=1.0)
        assert sigma(constant_path(0.2)) == pytest.approx(0.7)
        assert sigma(constant_path(-4.0)) == 1.5
        assert sigma.bound == 1.5

    def test_invalid_floor(self):
        with pytest.raises(InvalidInputError):
            LipschitzDiffusion(floor=0.0, cap=1.0)
        with pytest.raises(InvalidInputError):
            ConstantDiffusion(-1.0)


class TestPathologicalDiffusion:
    sigma = PathologicalDiffusion(floor=0.5, cap=1.0, r=1.0)

    @pytest.mark.parametrize("t, expected", [
        (Fraction(-1, 2), True),
        (Fraction(0), True),
        (Fraction(-1, 3), False),
        (Fraction(-2, 3), False),
        (Fraction(-1), False),
        (Fraction(-1, 2) - Fraction(1, 16), True),
    ])
    def test_membership(self, t, expected):
        assert self.sigma.in_A(t) is expected

    def test_lattice_window_jump_in_A(self):
        grid = TimeGrid(1.0, 2)
        value = self.sigma(LatticeSegment(grid, (0, 1, 1)))
        assert value == pytest.approx(0.5 + math.sqrt(0.5))

    def test_jump_outside_A_is_ignored(self):
        grid = TimeGrid(1.0, 3)
        assert self.sigma(LatticeSegment(grid, (0, 1, 1, 1))) == 0.5

    def test_cap(self):
        grid = TimeGrid(1.0, 2)
        assert self.sigma(LatticeSegment(grid, (0, 0, 3))) == 1.5

    def test_real_path_jump(self):
        path = CadlagPath((-1.0, -0.5), (0.0, 0.3), end=0.0)
        assert self.sigma(path) == pytest.approx(0.8)

    def test_decimal_delay_is_read_as_rational(self):
        sigma = PathologicalDiffusion(floor=0.5, cap=1.0, r=0.4)
        assert sigma.r_exact == Fraction(2, 5)
        assert sigma.in_A(Fraction(-1, 5))
        assert not sigma.in_A(Fraction(-2, 15))
        path = CadlagPath((-0.4, -0.2), (0.0, 0.3), end=0.0)
        assert sigma(path) == pytest.approx(0.8)


# ============================================================
# CONSTANTES DECLARADAS
# ============================================================

class TestCoefficientSet:

    def test_natural_bound(self):
        controls = ControlSet.from_values([0.0])
        coeffs = CoefficientSet.from_families(SaturatedLinearDrift(), ConstantDiffusion(2.5), controls, delay=1.0)
        assert coeffs.K == 3
        assert coeffs.K_L == 0.0
        assert coeffs.sigma0 == 2.5
        assert coeffs.drift_bound == 0.0

    @pytest.mark.parametrize("K", [0, 1.5, True])
    def test_invalid_K(self, K):
        with pytest.raises(InvalidInputError):
            CoefficientSet(drift=SaturatedLinearDrift(), diffusion=ConstantDiffusion(1.0),
                           controls=ControlSet.from_values([0.0]), delay=1.0, K=K, K_L=0.0, sigma0=1.0)


# ============================================================
# COSTES
# ============================================================

class TestCostSpec:

    @pytest.mark.parametrize("interval, horizon, discount", [
        ((1.0, 1.0), 1.0, 0.0),
        ((-1.0, 1.0), 0.0, 0.0),
        ((-1.0, 1.0), 1.0, -0.5),
    ])
    def test_invalid(self, interval, horizon, discount):
        with pytest.raises(InvalidInputError):
            CostSpec(QuadraticRunningCost(), QuadraticTerminalCost(), discount, interval, horizon)

    def test_spot_check_sup(self):
        cost = CostSpec(QuadraticRunningCost(0.0, 1.0, 0.0), QuadraticTerminalCost(), 0.0, (-2.0, 2.0), 1.0)
        sup_k, sup_g = cost.spot_check(ControlSet.from_values([0.0]))
        assert sup_k == 4.0
        assert sup_g == 0.0

    def test_spot_check_rejects_negative_cost(self):
        cost = CostSpec(QuadraticRunningCost(-1.0), QuadraticTerminalCost(), 0.0, (-1.0, 1.0), 1.0)
        with pytest.raises(InvalidInputError):
            cost.spot_check(ControlSet.from_values([0.0]))

    def test_scaled(self):
        k = QuadraticRunningCost(1.0, 2.0, 3.0).scaled(2.0)
        assert k(1.0, ControlPoint('u', 1.0)) == 12.0
        assert QuadraticTerminalCost(1.0, 1.0).scaled(3.0)(2.0) == 15.0


# ============================================================
# HIPÓTESIS
# ============================================================

class TestValidateAssumptions:
    drift = SaturatedLinearDrift(LinearFunctional(lags=((-1.0, 1.0),)), 1.0, ControlFactor('payload', 1.0))
    controls = ControlSet.from_values([-1.0, 0.0, 1.0])

    def test_delayed_feedback_passes(self):
        coeffs = CoefficientSet.from_families(self.drift, ConstantDiffusion(1.0), self.controls, delay=1.0)
        report = validate_assumptions(coeffs, 200, seed=0)
        assert report.passed
        assert report.max_abs_drift <= 1.0
        assert report.min_diffusion == 1.0
        assert list(report.to_frame()['ok']) == [True, True, True, True]

    def test_understated_lipschitz_is_reported(self):
        coeffs = CoefficientSet.from_families(self.drift, ConstantDiffusion(1.0), self.controls,
                                              delay=1.0, K_L=0.0)
        report = validate_assumptions(coeffs, 200, seed=0)
        assert not report.passed
        assert any(v.startswith('lipschitz') for v in report.violations)

    def test_sample_count(self):
        coeffs = CoefficientSet.from_families(self.drift, ConstantDiffusion(1.0), self.controls, delay=1.0)
        with pytest.raises(InvalidInputError):
            validate_assumptions(coeffs, 0, seed=0)
