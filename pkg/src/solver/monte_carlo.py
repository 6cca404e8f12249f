"""
Monte Carlo Policy Evaluation
=============================
Estimación de W^M(φ, u) para una política fija simulando la cadena
controlada hasta el paso de salida N_h.

Cada trayectoria usa su propio flujo (semilla, índice de trayectoria), así
que el estimador no cambia con el número de workers.

UBICACIÓN EN EL PROYECTO:
    src/solver/monte_carlo.py
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np

from src.chain.diagnostics import chunk_indices
from src.chain.kernel import DistributionCache, cached_distribution, path_generator
from src.errors import InvalidInputError
from src.solver.dynamic_programming import (
    DiscreteProblem,
    ExitStatus,
    StateKey,
    exit_test,
    shift_key,
)

logger = logging.getLogger(__name__)


# ============================================================
# POLÍTICAS
# ============================================================

@dataclass(frozen=True)
class ConstantPolicy:
    """Siempre el mismo índice de control"""

    index: int

    def choose(self, n: int, key: StateKey) -> int:
        return self.index


@dataclass(frozen=True)
class FeedbackPolicy:
    """
    Política de realimentación por el valor actual

    ``rule(n, x)`` devuelve un índice de control; debe ser una función de
    módulo para poder enviarse a otros procesos.
    """

    rule: Callable[[int, float], int]
    spacing: float

    def choose(self, n: int, key: StateKey) -> int:
        return self.rule(n, key[-1] * self.spacing)


# ============================================================
# EVALUACIÓN
# ============================================================

@dataclass(frozen=True)
class PolicyEstimate:
    """Media muestral del coste con su error estándar"""

    path_count: int
    mean: float
    stderr: float

    def contains(self, value: float, width: float = 3.0) -> bool:
        return abs(self.mean - value) <= width * self.stderr


def path_cost(problem: DiscreteProblem, policy, seed: int, path_index: int,
              cache: DistributionCache) -> float:
    """Coste de una trayectoria: Σ h·e^{−βnh}·k hasta N_h más g(ξ(N_h))"""
    grid = problem.grid
    h = grid.h
    kernel = problem.kernel
    depth = kernel.depth
    key = problem.initial_key
    uniforms = path_generator(seed, path_index).random(problem.horizon_steps)
    total = 0.0
    n = 0
    while exit_test(problem, key[-1], n) is ExitStatus.CONTINUE:
        control = problem.controls[policy.choose(n, key)]
        total += h * math.exp(-problem.cost.discount * n * h) * problem.cost.running(grid.value(key[-1]), control)
        dist = cached_distribution(kernel, key, control, cache)
        key = shift_key(key, key[-1] + dist.sample_increment(uniforms[n]), depth)
        n += 1
    return total + float(problem.cost.terminal(grid.value(key[-1])))


def _cost_chunk(problem: DiscreteProblem, policy, seed: int, path_indices: Sequence[int]) -> List[float]:
    cache: DistributionCache = {}
    return [path_cost(problem, policy, seed, p, cache) for p in path_indices]


def evaluate_policy_mc(problem: DiscreteProblem, policy, path_count: int, seed: int,
                       workers: int = 1) -> PolicyEstimate:
    """
    Estima W^M(φ, u) con path_count trayectorias independientes

    Args:
        problem: problema discreto
        policy: objeto con choose(n, clave) → índice de control
        path_count: número de trayectorias (≥ 2)
        seed: semilla base
        workers: procesos; los bloques de trayectorias son contiguos

    Returns:
        PolicyEstimate: media y error estándar

    Raises:
        InvalidInputError: si path_count < 2
        MissingStateError: si una política tabular no cubre un estado visitado
    """
    if path_count < 2:
        raise InvalidInputError(f"❌ path_count debe ser ≥ 2, recibido {path_count}")
    chunks = chunk_indices(path_count, workers)
    if len(chunks) == 1:
        costs = _cost_chunk(problem, policy, seed, chunks[0])
    else:
        with ProcessPoolExecutor(max_workers=len(chunks)) as executor:
            parts = executor.map(
                _cost_chunk,
                [problem] * len(chunks),
                [policy] * len(chunks),
                [seed] * len(chunks),
                chunks,
            )
            costs = [c for part in parts for c in part]
    values = np.asarray(costs)
    estimate = PolicyEstimate(
        path_count=path_count,
        mean=float(values.mean()),
        stderr=float(values.std(ddof=1) / math.sqrt(path_count)),
    )
    logger.info(f"📊 W^M(φ, u) ≈ {estimate.mean:.6g} ± {estimate.stderr:.2g} ({path_count:,} trayectorias)")
    return estimate


__all__ = [
    'ConstantPolicy',
    'FeedbackPolicy',
    'PolicyEstimate',
    'path_cost',
    'evaluate_policy_mc',
]
