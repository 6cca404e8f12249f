"""
Chain Diagnostics Module
========================
Diagnósticos de la cadena aproximante:

    1. Consistencia local: media y varianza condicionales del incremento
       contra h·b y h·σ² − h²·b².
    2. Ruido reconstruido W^M y su variación cuadrática previsible ⟨W^M⟩.
    3. Chequeo de martingala de L^M por Monte Carlo.
    4. Estadística de W^M(N̄) sobre muchas trayectorias (en paralelo).

Los reportes se convierten a DataFrames para emit_reports.

UBICACIÓN EN EL PROYECTO:
    src/chain/diagnostics.py
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.chain.kernel import (
    ChainPath,
    Controller,
    DistributionCache,
    TransitionKernel,
    cached_distribution,
    path_generator,
    random_window_sampler,
    simulate_chain,
    transition_distribution,
)
from src.errors import InvalidInputError
from src.model.coefficients import ControlPoint
from src.model.paths import InitialSegment, LatticeSegment, TimeGrid

logger = logging.getLogger(__name__)


# ============================================================
# CONSISTENCIA LOCAL
# ============================================================

@dataclass(frozen=True)
class ConsistencyEntry:
    """Momentos de un paso en (ventana, γ) y sus errores relativos"""

    sample_id: int
    mean: float
    mean_target: float
    variance: float
    variance_target: float
    mean_error: float
    variance_error: float


@dataclass
class ConsistencyReport:
    entries: List[ConsistencyEntry] = field(default_factory=list)

    @property
    def worst_mean_error(self) -> float:
        return max((e.mean_error for e in self.entries), default=0.0)

    @property
    def worst_variance_error(self) -> float:
        return max((e.variance_error for e in self.entries), default=0.0)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(e.sample_id, e.mean_error, e.variance_error) for e in self.entries],
            columns=['sample_id', 'mean_error', 'variance_error'],
        )


def _relative_error(value: float, target: float, scale: float) -> float:
    # escala mínima h para que objetivos casi nulos no inflen el error
    return abs(value - target) / max(abs(target), scale)


def local_consistency_check(kernel: TransitionKernel, window: LatticeSegment,
                            control: ControlPoint, sample_id: int = 0) -> ConsistencyEntry:
    """
    Media m y varianza v del incremento bajo p^M contra h·b y h·σ² − h²·b²

    Los errores son relativos a max(|objetivo|, h).

    Raises:
        KernelInfeasibleError: si el kernel es infactible en (ventana, γ)
    """
    dist = transition_distribution(kernel, window, control)
    jump = kernel.jump_size
    h = kernel.grid.h
    mean = jump * dist.up - jump * dist.down
    second = jump * jump * (dist.up + dist.down)
    variance = second - mean * mean
    b = dist.drift
    mean_target = h * b
    variance_target = h * dist.diffusion ** 2 - h * h * b * b
    return ConsistencyEntry(
        sample_id=sample_id,
        mean=mean,
        mean_target=mean_target,
        variance=variance,
        variance_target=variance_target,
        mean_error=_relative_error(mean, mean_target, h),
        variance_error=_relative_error(variance, variance_target, h),
    )


def consistency_suite(kernel: TransitionKernel, sample_count: int, seed: int,
                      sampler: Optional[Callable[[np.random.Generator], LatticeSegment]] = None
                      ) -> ConsistencyReport:
    """local_consistency_check sobre ventanas y controles aleatorios"""
    sampler = sampler or random_window_sampler(kernel.grid)
    rng = np.random.default_rng(seed)
    controls = kernel.coeffs.controls
    report = ConsistencyReport()
    for i in range(sample_count):
        window = sampler(rng)
        control = controls[int(rng.integers(len(controls)))]
        report.entries.append(local_consistency_check(kernel, window, control, sample_id=i))
    logger.info(
        f"📊 Consistencia local en {sample_count} muestras: "
        f"error media ≤ {report.worst_mean_error:.3g}, error varianza ≤ {report.worst_variance_error:.3g}"
    )
    return report


# ============================================================
# RUIDO RECONSTRUIDO
# ============================================================

@dataclass(frozen=True)
class NoisePath:
    """
    W^M(n), L^M(n) y ⟨W^M⟩_n para n = 0..N

    ATRIBUTOS:
        grid (TimeGrid): malla
        martingale (tuple): L^M(n)
        noise (tuple): W^M(n); W^M(0) = 0
        quadratic_variation (tuple): ⟨W^M⟩_n, no decreciente
    """

    grid: TimeGrid
    martingale: Tuple[float, ...]
    noise: Tuple[float, ...]
    quadratic_variation: Tuple[float, ...]

    def qv_frame(self, bound_constant: float) -> pd.DataFrame:
        """Filas (n, qv, bound) con bound = n·h²·K²/σ0²"""
        h = self.grid.h
        n = np.arange(len(self.quadratic_variation))
        return pd.DataFrame({
            'n': n,
            'qv': np.asarray(self.quadratic_variation),
            'bound': n * h * h * bound_constant,
        })


def qv_bound_constant(kernel: TransitionKernel) -> float:
    """K²/σ0² en la cota |⟨W^M⟩_n − n·h| ≤ n·h²·K²/σ0²"""
    return kernel.coeffs.K ** 2 / kernel.coeffs.sigma0 ** 2


def reconstruct_noise(chain: ChainPath, kernel: TransitionKernel,
                      cache: Optional[DistributionCache] = None) -> NoisePath:
    """
    L^M(n) = ξ(n) − ξ(0) − Σ_{i<n} h·b_i
    W^M(n) = Σ_{i<n} (L^M(i+1) − L^M(i)) / σ_i
    ⟨W^M⟩_n = Σ_{i<n} (h − h²·b_i²/σ_i²)

    b_i y σ_i se recalculan desde las ventanas de la cadena.

    Raises:
        InvalidInputError: si el número de controles no coincide con los pasos
    """
    grid = chain.grid
    steps = chain.steps
    if steps < 0 or len(chain.controls) != steps:
        raise InvalidInputError(
            f"❌ La cadena tiene {max(steps, 0)} pasos y {len(chain.controls)} controles"
        )
    h = grid.h
    values = chain.values()
    M = grid.M
    L = [0.0]
    W = [0.0]
    qv = [0.0]
    start = values[M]
    drift_sum = 0.0
    for i in range(steps):
        dist = cached_distribution(kernel, chain.indices[i:i + M + 1], chain.controls[i], cache)
        b = dist.drift
        sigma = dist.diffusion
        drift_sum += h * b
        L.append(values[M + i + 1] - start - drift_sum)
        W.append(W[-1] + (L[-1] - L[-2]) / sigma)
        qv.append(qv[-1] + (h - h * h * b * b / (sigma * sigma)))
    return NoisePath(grid, tuple(L), tuple(W), tuple(qv))


# ============================================================
# MARTINGALA
# ============================================================

@dataclass(frozen=True)
class MartingaleReport:
    """Media empírica de incrementos de L^M (y de ξ) en un paso"""

    path_count: int
    mean: float
    stderr: float
    state_increment_mean: float
    expected_state_increment: float

    @property
    def flagged(self) -> bool:
        return abs(self.mean) > 3 * self.stderr


def martingale_check(kernel: TransitionKernel, window: LatticeSegment, control: ControlPoint,
                     path_count: int, seed: int) -> MartingaleReport:
    """
    Muestrea path_count incrementos de un paso y prueba E[ΔL] = 0 a 3 errores estándar
    """
    if path_count < 2:
        raise InvalidInputError(f"❌ path_count debe ser ≥ 2, recibido {path_count}")
    dist = transition_distribution(kernel, window, control)
    u = path_generator(seed, 0).random(path_count)
    jump = kernel.jump_size
    increments = np.where(u < dist.up, jump, np.where(u < dist.up + dist.down, -jump, 0.0))
    expected = kernel.grid.h * dist.drift
    l_increments = increments - expected
    report = MartingaleReport(
        path_count=path_count,
        mean=float(l_increments.mean()),
        stderr=float(l_increments.std(ddof=1) / math.sqrt(path_count)),
        state_increment_mean=float(increments.mean()),
        expected_state_increment=expected,
    )
    if report.flagged:
        logger.warning(f"⚠️ Media de ΔL = {report.mean:.3g} supera 3 errores estándar ({report.stderr:.3g})")
    return report


# ============================================================
# ESTADÍSTICA DE W^M(N̄) SOBRE MUCHAS TRAYECTORIAS
# ============================================================

@dataclass(frozen=True)
class NoiseStatistics:
    path_count: int
    mean: float
    stderr: float
    max_qv_excess: float

    @property
    def within_three_stderr(self) -> bool:
        return abs(self.mean) <= 3 * self.stderr

    @property
    def qv_bound_holds(self) -> bool:
        return self.max_qv_excess <= 1e-12


def _noise_chunk(kernel: TransitionKernel, controller: Controller, phi: InitialSegment,
                 steps: int, seed: int, path_indices: Sequence[int]) -> Tuple[List[float], float]:
    cache: DistributionCache = {}
    h = kernel.grid.h
    bound = qv_bound_constant(kernel) * h * h
    terminal = []
    excess = -math.inf
    for p in path_indices:
        chain = simulate_chain(kernel, controller, phi, steps, seed, path_index=p, cache=cache)
        noise = reconstruct_noise(chain, kernel, cache)
        terminal.append(noise.noise[-1])
        for n, q in enumerate(noise.quadratic_variation):
            excess = max(excess, abs(q - n * h) - n * bound)
    return terminal, excess


def chunk_indices(count: int, workers: int) -> List[range]:
    """Bloques contiguos de índices, uno por worker"""
    workers = max(1, min(int(workers), count))
    size = math.ceil(count / workers)
    return [range(i, min(i + size, count)) for i in range(0, count, size)]


def terminal_noise_statistics(kernel: TransitionKernel, controller: Controller,
                              phi: InitialSegment, steps: int, path_count: int,
                              seed: int, workers: int = 1) -> NoiseStatistics:
    """
    Media y error estándar de W^M(N̄) y peor exceso de la cota de ⟨W^M⟩

    Con workers > 1 las trayectorias se reparten en bloques entre procesos;
    el controlador debe ser serializable.
    """
    if path_count < 2:
        raise InvalidInputError(f"❌ path_count debe ser ≥ 2, recibido {path_count}")
    chunks = chunk_indices(path_count, workers)
    if len(chunks) == 1:
        results = [_noise_chunk(kernel, controller, phi, steps, seed, chunks[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(chunks)) as executor:
            results = list(executor.map(
                _noise_chunk,
                [kernel] * len(chunks),
                [controller] * len(chunks),
                [phi] * len(chunks),
                [steps] * len(chunks),
                [seed] * len(chunks),
                chunks,
            ))
    terminal = np.array([w for chunk, _ in results for w in chunk])
    excess = max(e for _, e in results)
    stats = NoiseStatistics(
        path_count=path_count,
        mean=float(terminal.mean()),
        stderr=float(terminal.std(ddof=1) / math.sqrt(path_count)),
        max_qv_excess=float(excess),
    )
    logger.info(f"📊 W^M(N̄): media={stats.mean:.4g} ± {stats.stderr:.2g} ({path_count:,} trayectorias)")
    return stats


__all__ = [
    'ConsistencyEntry',
    'ConsistencyReport',
    'NoisePath',
    'MartingaleReport',
    'NoiseStatistics',
    'local_consistency_check',
    'consistency_suite',
    'qv_bound_constant',
    'reconstruct_noise',
    'martingale_check',
    'chunk_indices',
    'terminal_noise_statistics',
]
