"""
Benchmarks Module
=================
Casos con respuesta conocida para validar el solver:

    1. Benchmark Browniano: b ≡ 0, σ constante, k ≡ 1, g ≡ 0, β = 0.
       V^M es h·E[N ∧ N̄] para un paseo simétrico absorbente, que se
       calcula exactamente propagando la distribución del paseo. El valor
       continuo es el tiempo medio de salida (x − lo)(hi − x)/σ².

    2. Demostración patológica: la difusión con supremo de saltos sobre el
       conjunto A da resultados distintos según la malla que discretiza el
       segmento, mientras que las familias Lipschitz convergen al refinar.

UBICACIÓN EN EL PROYECTO:
    src/analysis/benchmarks.py
"""

# ============================================================
# SECCIÓN 1: IMPORTACIONES
# ============================================================

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.data.config import ProblemConfig
from src.errors import InvalidBenchmarkError, InvalidInputError
from src.model.coefficients import (
    ConstantDiffusion,
    ControlFactor,
    ControlPoint,
    LinearFunctional,
    LipschitzDiffusion,
    PathologicalDiffusion,
    QuadraticRunningCost,
    QuadraticTerminalCost,
    SaturatedLinearDrift,
    WeightFunction,
)
from src.model.paths import CadlagPath, InitialSegment, TimeGrid, sample_segment
from src.solver.dynamic_programming import DiscreteProblem, ExitStatus, exit_test, solve_dp

logger = logging.getLogger(__name__)


# ============================================================
# BENCHMARK BROWNIANO
# ============================================================

def brownian_pattern_violation(config: ProblemConfig) -> Optional[str]:
    """Motivo por el que la configuración no es el caso Browniano (None si lo es)"""
    coeffs = config.build_coefficients()
    cost = config.build_cost()
    if coeffs.drift_bound != 0:
        return f"el drift no es nulo (sup|b| = {coeffs.drift_bound:g})"
    if not isinstance(coeffs.diffusion, ConstantDiffusion):
        return f"la difusión debe ser constante, es '{config.diffusion.get('family')}'"
    if cost.running != QuadraticRunningCost(1.0, 0.0, 0.0):
        return "el coste corriente debe ser k ≡ 1"
    if cost.terminal != QuadraticTerminalCost(0.0, 0.0):
        return "el coste terminal debe ser g ≡ 0"
    if cost.discount != 0:
        return f"el descuento debe ser 0, es {cost.discount:g}"
    return None


def symmetric_walk_exit_oracle(problem: DiscreteProblem) -> float:
    """
    h·E[N ∧ N̄] del paseo simétrico con saltos ±K y quietud 1 − σ²/K²

    Usa la misma regla de salida que exit_test. La masa viva se propaga
    paso a paso sobre los índices de continuación y la esperanza es
    Σ_{n<N̄} P(vivo en n).

    Raises:
        InvalidBenchmarkError: si el drift no es nulo o la difusión no es constante
    """
    coeffs = problem.coeffs
    if coeffs.drift_bound != 0 or not isinstance(coeffs.diffusion, ConstantDiffusion):
        raise InvalidBenchmarkError("❌ El oráculo del paseo simétrico necesita b ≡ 0 y σ constante")
    start = problem.initial_window.current_index
    if exit_test(problem, start, 0) is ExitStatus.STOPPED:
        return 0.0
    K = coeffs.K
    sigma = coeffs.diffusion.value
    branch = sigma * sigma / (2 * K * K)
    stay = 1.0 - sigma * sigma / (K * K)
    k_min, k_max = problem.index_range
    alive = np.zeros(k_max - k_min + 1)
    alive[start - k_min] = 1.0
    expected = 0.0
    for _ in range(problem.horizon_steps):
        expected += alive.sum()
        following = stay * alive
        if K < alive.size:
            following[K:] += branch * alive[:-K]
            following[:-K] += branch * alive[K:]
        alive = following
    return problem.grid.h * expected


def continuous_exit_time(interval: Tuple[float, float], x: float, sigma: float) -> float:
    """E[τ] = (x − lo)(hi − x)/σ² para σ·W partiendo de x; (hi − lo)²/(4σ²) en el centro"""
    lo, hi = interval
    if not lo < x < hi:
        return 0.0
    return (x - lo) * (hi - x) / (sigma * sigma)


@dataclass(frozen=True)
class BenchmarkRow:
    M: int
    h: float
    value: float
    oracle: float
    continuous: float

    @property
    def abs_error(self) -> float:
        return abs(self.value - self.continuous)

    @property
    def oracle_error(self) -> float:
        return abs(self.value - self.oracle)


@dataclass
class BenchmarkReport:
    rows: List[BenchmarkRow] = field(default_factory=list)

    @property
    def max_oracle_error(self) -> float:
        return max((row.oracle_error for row in self.rows), default=0.0)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(r.M, r.h, r.value, r.oracle, r.continuous, r.abs_error, r.oracle_error) for r in self.rows],
            columns=['M', 'h', 'value', 'oracle', 'continuous', 'abs_error', 'oracle_error'],
        )


def run_brownian_benchmark(config: ProblemConfig,
                           degrees: Optional[Sequence[int]] = None) -> BenchmarkReport:
    """
    Compara V^M con el oráculo del paseo y con el tiempo de salida continuo

    Args:
        config: configuración con el patrón Browniano
        degrees: grados a usar (default: los de la configuración)

    Returns:
        BenchmarkReport: una fila por grado

    Raises:
        InvalidBenchmarkError: si la configuración no es driftless con k ≡ 1, g ≡ 0, β = 0
    """
    reason = brownian_pattern_violation(config)
    if reason is not None:
        raise InvalidBenchmarkError(f"❌ Benchmark Browniano inválido: {reason}")
    cost = config.build_cost()
    sigma = config.build_coefficients().diffusion.value
    x0 = float(config.build_initial()(0.0))
    continuous = continuous_exit_time(cost.interval, x0, sigma)
    report = BenchmarkReport()
    for M in (degrees or config.degrees):
        problem = config.build_problem(M)
        result = solve_dp(problem)
        row = BenchmarkRow(M=M, h=problem.grid.h, value=result.value,
                           oracle=symmetric_walk_exit_oracle(problem), continuous=continuous)
        report.rows.append(row)
        logger.info(
            f"📊 M={M}: V^M={row.value:.10g}, oráculo={row.oracle:.10g}, "
            f"continuo={continuous:.6g}, error={row.abs_error:.3g}"
        )
    return report


# ============================================================
# DEMOSTRACIÓN PATOLÓGICA
# ============================================================

@dataclass
class PathologicalDemoReport:
    """
    ATRIBUTOS:
        degrees: los dos grados comparados
        sigmas: σ del segmento con salto discretizado en cada grado
        constant_sigmas: σ de un segmento sin saltos en cada grado
        drift_errors / diffusion_errors: |f(φ^M) − f(φ^ref)| de familias Lipschitz
    """

    jump_time: float
    jump_size: float
    floor: float
    degrees: Tuple[int, int]
    sigmas: Tuple[float, float]
    constant_sigmas: Tuple[float, float]
    consistency_degrees: Tuple[int, ...]
    drift_errors: Tuple[float, ...]
    diffusion_errors: Tuple[float, ...]

    @property
    def difference(self) -> float:
        return abs(self.sigmas[0] - self.sigmas[1])

    @property
    def grid_dependent(self) -> bool:
        return self.difference >= 0.9 * abs(self.jump_size)

    @property
    def grid_consistent(self) -> bool:
        return all(_strictly_decreasing(errors) for errors in (self.drift_errors, self.diffusion_errors))

    @property
    def passes(self) -> bool:
        return self.grid_dependent and self.grid_consistent

    def to_frame(self) -> pd.DataFrame:
        rows = [('pathological', M, s) for M, s in zip(self.degrees, self.sigmas)]
        rows += [('constant', M, s) for M, s in zip(self.degrees, self.constant_sigmas)]
        rows += [('drift_error', M, e) for M, e in zip(self.consistency_degrees, self.drift_errors)]
        rows += [('diffusion_error', M, e) for M, e in zip(self.consistency_degrees, self.diffusion_errors)]
        return pd.DataFrame(rows, columns=['quantity', 'M', 'value'])


def _strictly_decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def grid_consistency_errors(functional: Callable[[CadlagPath], float], phi: InitialSegment,
                            r: float, degrees: Sequence[int],
                            reference_degree: int = 4096) -> Tuple[float, ...]:
    """
    |f(φ^M) − f(φ^ref)| para cada M, con φ^M la interpolación muestreada de φ

    Para funcionales Lipschitz en la norma del supremo el error tiende a 0.
    """
    reference = functional(sample_segment(phi, TimeGrid(r, reference_degree)))
    return tuple(abs(functional(sample_segment(phi, TimeGrid(r, M))) - reference) for M in degrees)


def pathological_demo_degrees(degrees: Sequence[int], r: float, jump_time: float) -> Tuple[int, int]:
    """
    Par (M en cuya malla cae el salto, M en cuya malla no cae)

    Si la lista no ofrece ambos casos se devuelven los dos primeros grados y
    la demostración reporta el fallo.
    """
    def on_grid(M: int) -> bool:
        position = -jump_time / r * M
        return abs(position - round(position)) < 1e-9

    ordered = sorted(set(int(M) for M in degrees))
    if len(ordered) < 2:
        raise InvalidInputError(f"❌ La demostración necesita dos grados, recibido {list(degrees)}")
    hit = next((M for M in ordered if on_grid(M)), None)
    miss = next((M for M in ordered if not on_grid(M)), None)
    if hit is None or miss is None:
        logger.warning(f"⚠️ Ningún par de {ordered} separa el salto en t={jump_time:g}")
        return ordered[0], ordered[1]
    return hit, miss


def run_pathological_demo(config: Optional[ProblemConfig] = None, *,
                          floor: float = 0.5, cap: float = 1.0, r: float = 1.0,
                          jump_time: Optional[float] = None, before: float = 0.0, jump_size: float = 0.3,
                          degrees: Tuple[int, ...] = (2, 3),
                          consistency_degrees: Tuple[int, ...] = (4, 8, 16)) -> PathologicalDemoReport:
    """
    σ patológica sobre dos discretizaciones de un segmento con un salto

    Por defecto el salto está en −r/2: la malla de grado 2 contiene ese
    instante (que está en A) y devuelve σ0 + salto; la de grado 3 lo mueve a
    −r/3, fuera de A para r ≥ 3/8, y devuelve σ0. Como contraste, un drift de
    la familia lineal saturada y una difusión Lipschitz evaluados sobre
    φ(s) = s/r convergen al refinar la malla.

    Con ``config`` se toman de ella r, los grados, σ0 y el tope (si la
    difusión es patológica) y el salto (si el segmento inicial es 'step').

    Returns:
        PathologicalDemoReport: σ por grado, diferencia y errores de consistencia
    """
    if config is not None:
        r = config.delay
        degrees = config.degrees
        diffusion = config.build_diffusion()
        if isinstance(diffusion, PathologicalDiffusion):
            floor, cap = diffusion.floor, diffusion.cap
        if config.initial.get('family') == 'step':
            jump_time = float(config.initial['time'])
            before = float(config.initial.get('before', 0.0))
            jump_size = float(config.initial['after']) - before
    if jump_time is None:
        jump_time = -r / 2
    pair = pathological_demo_degrees(degrees, r, jump_time)

    sigma = PathologicalDiffusion(floor=floor, cap=cap, r=r)
    jump = InitialSegment.step(r, jump_time, before, before + jump_size)
    flat = InitialSegment.constant(before + jump_size)
    sigmas = tuple(sigma(sample_segment(jump, TimeGrid(r, M))) for M in pair)
    constant_sigmas = tuple(sigma(sample_segment(flat, TimeGrid(r, M))) for M in pair)

    lag = -0.3 * r
    drift = SaturatedLinearDrift(
        linear=LinearFunctional(lags=((lag, 1.0),), weights=((WeightFunction((-r,), (1.0,)), 1.0),)),
        saturation=5.0,
        control_factor=ControlFactor('unit', 1.0),
    )
    diffusion = LipschitzDiffusion(floor=floor, cap=cap, linear=LinearFunctional(lags=((lag, 1.0),)))
    control = ControlPoint('0', 0.0)
    ramp = InitialSegment.affine(0.0, 1.0 / r)
    drift_errors = grid_consistency_errors(lambda p: drift(p, control), ramp, r, consistency_degrees)
    diffusion_errors = grid_consistency_errors(diffusion, ramp, r, consistency_degrees)

    report = PathologicalDemoReport(
        jump_time=jump_time,
        jump_size=jump_size,
        floor=floor,
        degrees=pair,
        sigmas=sigmas,
        constant_sigmas=constant_sigmas,
        consistency_degrees=tuple(consistency_degrees),
        drift_errors=drift_errors,
        diffusion_errors=diffusion_errors,
    )
    logger.info(
        f"📊 σ patológica: M={pair[0]} → {sigmas[0]:.6g}, M={pair[1]} → {sigmas[1]:.6g} "
        f"(diferencia {report.difference:.6g}, salto {jump_size:g} en t={jump_time:g})"
    )
    if report.passes:
        logger.info("✅ La σ patológica depende de la malla; las familias Lipschitz son consistentes")
    else:
        logger.warning("⚠️ La demostración no reprodujo el comportamiento esperado")
    return report


__all__ = [
    'BenchmarkRow',
    'BenchmarkReport',
    'PathologicalDemoReport',
    'brownian_pattern_violation',
    'symmetric_walk_exit_oracle',
    'continuous_exit_time',
    'run_brownian_benchmark',
    'grid_consistency_errors',
    'pathological_demo_degrees',
    'run_pathological_demo',
]
