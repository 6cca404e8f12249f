"""
test_monte_carlo.py
===================
Evaluación Monte Carlo de políticas sobre la cadena controlada: acuerdo
con V^M, políticas subóptimas, reproducibilidad entre workers y errores.

UBICACIÓN: tests/test_monte_carlo.py
"""

import pytest

from src.errors import InvalidInputError, MissingStateError
from src.model.coefficients import CostSpec, QuadraticRunningCost, QuadraticTerminalCost
from src.solver.dynamic_programming import TablePolicy, solve_dp
from src.solver.monte_carlo import (
    ConstantPolicy,
    FeedbackPolicy,
    PolicyEstimate,
    evaluate_policy_mc,
    path_cost,
)
from tests.problems import bang_bang_problem, brownian_problem


def push_out(n, x):
    return 2 if x >= 0 else 0


# ============================================================
# ACUERDO CON LA PROGRAMACIÓN DINÁMICA
# ============================================================

class TestAgreementWithDP:

    def test_optimal_policy(self):
        problem = bang_bang_problem(M=6)
        result = solve_dp(problem)
        estimate = evaluate_policy_mc(problem, result.policy, 100_000, seed=17)
        assert estimate.path_count == 100_000
        assert estimate.contains(result.value)

    def test_brownian_walk(self):
        problem = brownian_problem(9)
        estimate = evaluate_policy_mc(problem, ConstantPolicy(0), 20_000, seed=3)
        assert estimate.contains((4 - 2 ** -7) / 9)

    @pytest.mark.parametrize("index", [0, 1, 2])
    def test_constant_policies_are_not_better(self, index):
        problem = bang_bang_problem(M=6)
        optimum = solve_dp(problem).value
        estimate = evaluate_policy_mc(problem, ConstantPolicy(index), 20_000, seed=index)
        assert estimate.mean >= optimum - 3 * estimate.stderr

    def test_zero_cost(self):
        problem = brownian_problem(9)
        cost = CostSpec(QuadraticRunningCost(0.0), QuadraticTerminalCost(0.0), 0.0,
                        problem.cost.interval, problem.cost.horizon)
        estimate = evaluate_policy_mc(problem.with_cost(cost), ConstantPolicy(0), 50, seed=0)
        assert estimate.mean == 0.0
        assert estimate.stderr == 0.0


# ============================================================
# REPRODUCIBILIDAD
# ============================================================

class TestReproducibility:

    def test_workers_do_not_change_estimate(self):
        problem = bang_bang_problem(M=6)
        policy = solve_dp(problem).policy
        single = evaluate_policy_mc(problem, policy, 300, seed=5, workers=1)
        pooled = evaluate_policy_mc(problem, policy, 300, seed=5, workers=3)
        assert single == pooled

    def test_path_cost_depends_only_on_seed_and_index(self):
        problem = bang_bang_problem(M=6)
        policy = FeedbackPolicy(push_out, problem.grid.spacing)
        first = path_cost(problem, policy, 1, 42, {})
        assert path_cost(problem, policy, 1, 42, {}) == first


# ============================================================
# POLÍTICAS Y ERRORES
# ============================================================

class TestPolicies:

    def test_feedback_policy_reads_current_value(self):
        policy = FeedbackPolicy(push_out, 0.5)
        assert policy.choose(0, (3, -1)) == 0
        assert policy.choose(0, (-1, 0)) == 2

    def test_estimate_interval(self):
        estimate = PolicyEstimate(path_count=10, mean=1.0, stderr=0.1)
        assert estimate.contains(1.29)
        assert not estimate.contains(1.31)

    def test_path_count(self):
        with pytest.raises(InvalidInputError):
            evaluate_policy_mc(brownian_problem(4), ConstantPolicy(0), 1, seed=0)

    def test_table_policy_without_decision(self):
        table = solve_dp(brownian_problem(4)).table
        closed = brownian_problem(4, 'closed-lattice')
        with pytest.raises(MissingStateError):
            evaluate_policy_mc(closed, TablePolicy(table), 10, seed=0)
