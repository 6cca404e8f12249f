"""
Transition Kernel Module
========================
Función de transición extendida p^M de grado M y simulación de la cadena.

DEFINICIÓN (ventana Z, control γ, Z̄ su interpolación constante a trozos):
    p(Z(0) + K·√h) = σ²(Z̄)/(2K²) + √h·b(Z̄,γ)/(2K)
    p(Z(0) − K·√h) = σ²(Z̄)/(2K²) − √h·b(Z̄,γ)/(2K)
    p(Z(0))        = 1 − σ²(Z̄)/K²

    Con esta elección la media condicional del incremento es h·b y la
    varianza h·σ² − h²·b², exactamente.

UBICACIÓN EN EL PROYECTO:
    src/chain/kernel.py
"""

# ============================================================
# SECCIÓN 1: IMPORTACIONES
# ============================================================

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import InvalidInputError, KernelInfeasibleError
from src.model.coefficients import (
    CoefficientSet,
    ControlPoint,
    PathologicalDiffusion,
)
from src.model.paths import (
    InitialSegment,
    LatticeSegment,
    TimeGrid,
    discretize_initial,
)

logger = logging.getLogger(__name__)


# ============================================================
# RNG por trayectoria
# ============================================================

def path_generator(seed: int, path_index: int) -> np.random.Generator:
    """
    Flujo Philox (basado en contador) derivado de (semilla, índice de trayectoria)

    El resultado de cada trayectoria no depende del orden de ejecución ni
    del número de workers.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(path_index)])))


# ============================================================
# TIPOS
# ============================================================

@dataclass(frozen=True)
class TransitionDistribution:
    """
    Distribución de 3 puntos del siguiente valor de la cadena

    ATRIBUTOS:
        up, stay, down (float): probabilidades
        current (int): índice actual Z(0)
        jump (int): salto en índices (K)
        drift, diffusion (float): b(Z̄,γ) y σ(Z̄) usados
    """

    up: float
    stay: float
    down: float
    current: int
    jump: int
    drift: float
    diffusion: float

    @property
    def up_target(self) -> int:
        return self.current + self.jump

    @property
    def down_target(self) -> int:
        return self.current - self.jump

    def outcomes(self) -> Tuple[Tuple[int, float], ...]:
        """(incremento en índices, probabilidad) en orden fijo: subida, quieto, bajada"""
        return ((self.jump, self.up), (0, self.stay), (-self.jump, self.down))

    def sample_increment(self, u: float) -> int:
        """Incremento en índices a partir de un uniforme u ∈ [0, 1)"""
        if u < self.up:
            return self.jump
        if u < self.up + self.down:
            return -self.jump
        return 0


@dataclass(frozen=True)
class TransitionKernel:
    """
    Kernel p^M para unos coeficientes y una malla

    ATRIBUTOS:
        coeffs (CoefficientSet): b, σ y K
        grid (TimeGrid): malla de grado M (grid.r debe coincidir con el retardo)
        depth (int): entradas finales de la ventana que determinan p^M
    """

    coeffs: CoefficientSet
    grid: TimeGrid
    depth: int = field(init=False)

    def __post_init__(self):
        if abs(self.grid.r - self.coeffs.delay) > 1e-12 * max(1.0, self.coeffs.delay):
            raise InvalidInputError(
                f"❌ La malla usa r={self.grid.r} pero los coeficientes r={self.coeffs.delay}"
            )
        object.__setattr__(self, 'depth', self.coeffs.memory_depth(self.grid))

    @property
    def jump(self) -> int:
        return self.coeffs.K

    @property
    def jump_size(self) -> float:
        return self.coeffs.K * self.grid.spacing

    def state_key(self, indices: Sequence[int]) -> Tuple[int, ...]:
        """Parte de la ventana que determina las transiciones futuras"""
        return tuple(indices[-self.depth:])

    def window_from_key(self, key: Sequence[int]) -> LatticeSegment:
        """Ventana completa representante de una clave (relleno con el primer valor)"""
        pad = self.grid.M + 1 - len(key)
        return LatticeSegment(self.grid, (key[0],) * pad + tuple(key))

    def distribution(self, window: LatticeSegment, control: ControlPoint) -> TransitionDistribution:
        return transition_distribution(self, window, control)


DistributionCache = Dict[Tuple[Tuple[int, ...], str], TransitionDistribution]


def cached_distribution(kernel: TransitionKernel, indices: Sequence[int],
                        control: ControlPoint, cache: Optional[DistributionCache]) -> TransitionDistribution:
    """transition_distribution memoizada por (clave de estado, control)"""
    key = kernel.state_key(indices)
    if cache is None:
        return transition_distribution(kernel, kernel.window_from_key(key), control)
    entry = cache.get((key, control.label))
    if entry is None:
        entry = transition_distribution(kernel, kernel.window_from_key(key), control)
        cache[(key, control.label)] = entry
    return entry


# ============================================================
# OPERACIONES
# ============================================================

def transition_distribution(kernel: TransitionKernel, window: LatticeSegment,
                            control: ControlPoint) -> TransitionDistribution:
    """
    p^M en (ventana, γ)

    Raises:
        KernelInfeasibleError: si alguna rama es negativa; lleva ventana, control y h
    """
    coeffs = kernel.coeffs
    path = window.as_path()
    b = float(coeffs.drift(path, control))
    if isinstance(coeffs.diffusion, PathologicalDiffusion):
        sigma = float(coeffs.diffusion(window))
    else:
        sigma = float(coeffs.diffusion(path))
    K = coeffs.K
    h = kernel.grid.h
    half_var = sigma * sigma / (2 * K * K)
    tilt = kernel.grid.spacing * b / (2 * K)
    up = half_var + tilt
    down = half_var - tilt
    stay = 1.0 - sigma * sigma / (K * K)
    if up < 0 or down < 0 or stay < 0:
        raise KernelInfeasibleError(
            f"❌ p^M infactible en ventana {window.indices} con control '{control.label}' y h={h}: "
            f"subida={up:.6g}, quieto={stay:.6g}, bajada={down:.6g}",
            window=window.indices, control=control, h=h,
        )
    return TransitionDistribution(up=up, stay=stay, down=down, current=window.current_index,
                                  jump=K, drift=b, diffusion=sigma)


@dataclass
class KernelFeasibilityReport:
    """
    Márgenes de factibilidad de p^M

    ATRIBUTOS:
        stay_margin: mínimo de 1 − σ²/K² sobre las muestras
        branch_margin: mínimo de σ²/(2K²) − √h·|b|/(2K)
        h_star: cota suficiente (σ0²/(K·sup|b|))²
        h: paso de la malla del kernel
    """

    sample_count: int
    stay_margin: float
    branch_margin: float
    h_star: float
    h: float
    r: float

    @property
    def feasible(self) -> bool:
        return self.stay_margin >= 0 and self.branch_margin >= 0

    @property
    def analytic_ok(self) -> bool:
        return self.h <= self.h_star

    @property
    def min_degree(self) -> int:
        """Menor M con r/M ≤ h*"""
        if math.isinf(self.h_star):
            return 1
        return max(1, math.ceil(self.r / self.h_star - 1e-12))

    def degree_ok(self, M: int) -> bool:
        return self.r / M <= self.h_star


def analytic_h_star(coeffs: CoefficientSet) -> float:
    """h* = (σ0²/(K·sup|b|))², +∞ si el drift es nulo"""
    if coeffs.drift_bound == 0:
        return math.inf
    return (coeffs.sigma0 ** 2 / (coeffs.K * coeffs.drift_bound)) ** 2


def random_window_sampler(grid: TimeGrid, span: int = 6) -> Callable[[np.random.Generator], LatticeSegment]:
    """Ventanas aleatorias con índices en [−span, span]"""
    def sample(rng: np.random.Generator) -> LatticeSegment:
        return LatticeSegment(grid, tuple(int(i) for i in rng.integers(-span, span + 1, size=grid.M + 1)))
    return sample


def validate_kernel(kernel: TransitionKernel,
                    sampler: Optional[Callable[[np.random.Generator], LatticeSegment]] = None,
                    sample_count: int = 200, seed: int = 0) -> KernelFeasibilityReport:
    """
    Revisa la no negatividad de p^M sobre ventanas muestreadas

    No lanza errores: los márgenes negativos quedan en el reporte.
    """
    if sample_count < 1:
        raise InvalidInputError(f"❌ sample_count debe ser ≥ 1, recibido {sample_count}")
    sampler = sampler or random_window_sampler(kernel.grid)
    rng = np.random.default_rng(seed)
    coeffs = kernel.coeffs
    K = coeffs.K
    root_h = kernel.grid.spacing
    stay_margin = math.inf
    branch_margin = math.inf
    for _ in range(sample_count):
        window = sampler(rng)
        path = window.as_path()
        if isinstance(coeffs.diffusion, PathologicalDiffusion):
            sigma = coeffs.diffusion(window)
        else:
            sigma = coeffs.diffusion(path)
        stay_margin = min(stay_margin, 1.0 - sigma * sigma / (K * K))
        for control in coeffs.controls:
            b = coeffs.drift(path, control)
            branch_margin = min(branch_margin,
                                sigma * sigma / (2 * K * K) - root_h * abs(b) / (2 * K))
    report = KernelFeasibilityReport(sample_count, stay_margin, branch_margin,
                                     analytic_h_star(coeffs), kernel.grid.h, kernel.grid.r)
    if not report.analytic_ok:
        logger.warning(
            f"⚠️ h={report.h:.6g} supera la cota suficiente h*={report.h_star:.6g}; "
            f"se recomienda M ≥ {report.min_degree}"
        )
    if not report.feasible:
        logger.warning(
            f"⚠️ Kernel infactible en muestras: margen quieto={stay_margin:.3g}, "
            f"margen ramas={branch_margin:.3g}"
        )
    return report


# ============================================================
# SIMULACIÓN
# ============================================================

Controller = Union[Sequence[ControlPoint], Callable[[int, LatticeSegment], ControlPoint]]


@dataclass(frozen=True)
class ChainPath:
    """
    Trayectoria simulada ξ(n), n = −M..N̄, con los controles u(n), n = 0..N̄−1
    """

    grid: TimeGrid
    indices: Tuple[int, ...]
    controls: Tuple[ControlPoint, ...]

    @property
    def steps(self) -> int:
        return len(self.indices) - self.grid.M - 1

    def values(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=float) * self.grid.spacing

    def window(self, n: int) -> LatticeSegment:
        """Ventana (ξ(n−M), …, ξ(n))"""
        return LatticeSegment(self.grid, self.indices[n:n + self.grid.M + 1])


def _resolve_control(controller: Controller, n: int, window: LatticeSegment) -> ControlPoint:
    if callable(controller):
        return controller(n, window)
    return controller[n]


def simulate_chain(kernel: TransitionKernel, controller: Controller, phi: InitialSegment,
                   steps: int, seed: int, path_index: int = 0,
                   cache: Optional[DistributionCache] = None) -> ChainPath:
    """
    Simula la cadena de grado M con condición inicial Λ_h(φ(n·h))

    Args:
        kernel: kernel p^M
        controller: secuencia de controles (largo ≥ steps) o función (n, ventana) → control
        phi: segmento inicial
        steps: N̄ pasos
        seed, path_index: identifican el flujo aleatorio de la trayectoria
        cache: memo opcional de distribuciones compartida entre trayectorias

    Raises:
        KernelInfeasibleError: si el kernel es infactible en un estado visitado
    """
    if steps < 0:
        raise InvalidInputError(f"❌ steps debe ser ≥ 0, recibido {steps}")
    if not callable(controller) and len(controller) < steps:
        raise InvalidInputError(
            f"❌ La secuencia tiene {len(controller)} controles y se necesitan {steps}"
        )
    M = kernel.grid.M
    indices: List[int] = list(discretize_initial(phi, kernel.grid).indices)
    controls: List[ControlPoint] = []
    uniforms = path_generator(seed, path_index).random(steps)
    for n in range(steps):
        window = LatticeSegment(kernel.grid, tuple(indices[n:n + M + 1]))
        control = _resolve_control(controller, n, window)
        dist = cached_distribution(kernel, window.indices, control, cache)
        indices.append(indices[-1] + dist.sample_increment(uniforms[n]))
        controls.append(control)
    return ChainPath(kernel.grid, tuple(indices), tuple(controls))


__all__ = [
    'TransitionDistribution',
    'TransitionKernel',
    'KernelFeasibilityReport',
    'ChainPath',
    'path_generator',
    'cached_distribution',
    'transition_distribution',
    'analytic_h_star',
    'random_window_sampler',
    'validate_kernel',
    'simulate_chain',
]
