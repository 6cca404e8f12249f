"""
Dynamic Programming Module
==========================
Problema discreto de grado M: paso de salida N_h, enumeración de estados
alcanzables, inducción hacia atrás para V^M y extracción de la política.

FLUJO:
    1. enumerate_reachable: cierre hacia adelante desde la ventana inicial
       bajo el soporte de p^M (solo transiciones con probabilidad > 0).
    2. solve_dp: barrido hacia atrás por capas,
       V_n(z) = min_γ [ h·e^{−βnh}·k(z(0), γ) + Σ_x p^M(z, γ, x)·V_{n+1}(shift(z, x)) ]
       con V = g(z(0)) en estados detenidos (g sin descuento).
    3. brute_force_value: oráculo por recursión completa, sin memoización.

CLAVE DE ESTADO:
    Las últimas ``depth`` entradas de la ventana, donde depth son las
    entradas que leen b y σ (ver CoefficientSet.memory_depth). Dos
    ventanas con la misma clave tienen el mismo futuro, así que la
    reducción es exacta; con retardos que llegan a −r la clave es la
    ventana completa.

UBICACIÓN EN EL PROYECTO:
    src/solver/dynamic_programming.py
"""

# ============================================================
# SECCIÓN 1: IMPORTACIONES
# ============================================================

import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import pandas as pd

from src.chain.kernel import (
    DistributionCache,
    TransitionDistribution,
    TransitionKernel,
    cached_distribution,
    transition_distribution,
)
from src.errors import InvalidInputError, MissingStateError, ResourceCapError, SizeGuardError
from src.model.coefficients import CoefficientSet, ControlSet, CostSpec
from src.model.paths import InitialSegment, LatticeSegment, TimeGrid, discretize_initial

logger = logging.getLogger(__name__)

DEFAULT_STATE_BUDGET = 50_000_000
BOUNDARY_MODES = ('interior', 'closed-lattice')

StateKey = Tuple[int, ...]


# ============================================================
# TIPOS
# ============================================================

class ExitStatus(Enum):
    CONTINUE = 'continue'
    STOPPED = 'stopped'


@dataclass(frozen=True)
class DiscreteProblem:
    """
    Problema de control discreto de grado M

    ATRIBUTOS:
        coeffs (CoefficientSet): b, σ, Γ y constantes
        cost (CostSpec): k, g, β, I, T̄
        grid (TimeGrid): malla de grado M
        initial (InitialSegment): φ
        boundary_mode (str): 'interior' (sale de int(I)) o 'closed-lattice' (sale de I_h)
        state_budget (int): máximo de transiciones expandidas
    """

    coeffs: CoefficientSet
    cost: CostSpec
    grid: TimeGrid
    initial: InitialSegment
    boundary_mode: str = 'interior'
    state_budget: int = DEFAULT_STATE_BUDGET
    kernel: TransitionKernel = field(init=False, repr=False)
    horizon_steps: int = field(init=False)
    index_range: Tuple[int, int] = field(init=False)

    def __post_init__(self):
        if self.boundary_mode not in BOUNDARY_MODES:
            raise InvalidInputError(
                f"❌ Modo de frontera desconocido '{self.boundary_mode}'. Disponibles: {BOUNDARY_MODES}"
            )
        steps = math.floor(self.cost.horizon / self.grid.h + 1e-9)
        if steps < 1:
            raise InvalidInputError(
                f"❌ ⌊T̄/h⌋ = {steps}: el horizonte {self.cost.horizon} es menor que h = {self.grid.h}"
            )
        object.__setattr__(self, 'kernel', TransitionKernel(self.coeffs, self.grid))
        object.__setattr__(self, 'horizon_steps', steps)
        object.__setattr__(self, 'index_range', _continuation_range(self))

    @property
    def controls(self) -> ControlSet:
        return self.coeffs.controls

    @property
    def initial_window(self) -> LatticeSegment:
        return discretize_initial(self.initial, self.grid)

    @property
    def initial_key(self) -> StateKey:
        return self.kernel.state_key(self.initial_window.indices)

    def with_cost(self, cost: CostSpec) -> 'DiscreteProblem':
        return DiscreteProblem(self.coeffs, cost, self.grid, self.initial,
                               self.boundary_mode, self.state_budget)


def _continuation_range(problem: DiscreteProblem) -> Tuple[int, int]:
    """Índices [k_min, k_max] en los que la cadena sigue activa"""
    lo, hi = problem.cost.interval
    step = problem.grid.spacing
    eps = 1e-9 * step
    if problem.boundary_mode == 'interior':
        inside = lambda k: lo + eps < k * step < hi - eps
    else:
        inside = lambda k: lo - eps <= k * step <= hi + eps
    k_min = math.floor(lo / step) - 2
    while not inside(k_min) and k_min * step < hi + step:
        k_min += 1
    k_max = math.ceil(hi / step) + 2
    while not inside(k_max) and k_max * step > lo - step:
        k_max -= 1
    return k_min, k_max


def exit_test(problem: DiscreteProblem, index: int, n: int) -> ExitStatus:
    """
    Detención en el paso n con valor actual index·√h

    Se detiene si n = N̄ o si el valor sale de (lo, hi) en modo interior,
    o de [lo, hi] en modo closed-lattice.
    """
    if n >= problem.horizon_steps:
        return ExitStatus.STOPPED
    k_min, k_max = problem.index_range
    if k_min <= index <= k_max:
        return ExitStatus.CONTINUE
    return ExitStatus.STOPPED


def shift_key(key: StateKey, next_index: int, depth: int) -> StateKey:
    """Avance de la clave de estado (ventana truncada)"""
    return (key + (next_index,))[-depth:]


# ============================================================
# ENUMERACIÓN DE ESTADOS ALCANZABLES
# ============================================================

@dataclass
class ReachableStates:
    """
    Capas n = 0..N̄: clave → distribuciones por control (None si detenido)
    """

    layers: List[Dict[StateKey, Optional[Tuple[TransitionDistribution, ...]]]]
    expanded_transitions: int

    @property
    def layer_counts(self) -> List[int]:
        return [len(layer) for layer in self.layers]


def enumerate_reachable(problem: DiscreteProblem,
                        cache: Optional[DistributionCache] = None) -> ReachableStates:
    """
    Cierre hacia adelante desde la ventana inicial discretizada

    Raises:
        ResourceCapError: si las transiciones expandidas superan state_budget
        KernelInfeasibleError: si p^M es infactible en un estado alcanzado
    """
    kernel = problem.kernel
    depth = kernel.depth
    controls = problem.controls
    cache = {} if cache is None else cache
    layers = [{problem.initial_key: None}]
    expanded = 0
    for n in range(problem.horizon_steps + 1):
        current = layers[n]
        following: Dict[StateKey, None] = {}
        for key in current:
            if exit_test(problem, key[-1], n) is ExitStatus.STOPPED:
                continue
            dists = tuple(cached_distribution(kernel, key, c, cache) for c in controls)
            current[key] = dists
            for dist in dists:
                for increment, p in dist.outcomes():
                    if p > 0:
                        expanded += 1
                        following.setdefault(shift_key(key, key[-1] + increment, depth), None)
            if expanded > problem.state_budget:
                raise ResourceCapError(
                    f"❌ Presupuesto de {problem.state_budget:,} transiciones excedido en la capa {n} "
                    f"({expanded:,} expandidas)",
                    layer=n, count=expanded,
                )
        if n < problem.horizon_steps:
            layers.append(following)
        logger.debug(f"📊 Capa {n}: {len(current):,} estados")
    return ReachableStates(layers, expanded)


# ============================================================
# TABLA DE VALOR Y POLÍTICA
# ============================================================

@dataclass
class ValueTable:
    """
    V^M por capa y control minimizante (índice en Γ) para estados activos
    """

    values: List[Dict[StateKey, float]]
    policy: List[Dict[StateKey, int]]
    controls: ControlSet

    def value(self, n: int, key: StateKey) -> float:
        try:
            return self.values[n][key]
        except (IndexError, KeyError):
            raise MissingStateError(f"❌ Estado {key} no está en la capa {n} de la tabla",
                                    layer=n, state=key) from None

    def control_index(self, n: int, key: StateKey) -> int:
        try:
            return self.policy[n][key]
        except (IndexError, KeyError):
            raise MissingStateError(f"❌ La política no tiene decisión para {key} en la capa {n}",
                                    layer=n, state=key) from None

    def to_frame(self) -> pd.DataFrame:
        """
        Filas (layer, state, value, control); estados detenidos con control vacío

        ``state`` es la clave del kernel (últimos ``depth`` índices), no la
        ventana completa.
        """
        rows = []
        for n, (layer, decisions) in enumerate(zip(self.values, self.policy)):
            for key, v in layer.items():
                choice = decisions.get(key)
                label = self.controls[choice].label if choice is not None else ''
                rows.append((n, ':'.join(str(i) for i in key), v, label))
        return pd.DataFrame(rows, columns=['layer', 'state', 'value', 'control'])


@dataclass(frozen=True)
class TablePolicy:
    """Política extraída de una ValueTable"""

    table: ValueTable

    def choose(self, n: int, key: StateKey) -> int:
        return self.table.control_index(n, key)


@dataclass
class SolveResult:
    M: int
    value: float
    table: ValueTable
    layer_counts: List[int]
    expanded_transitions: int
    wall_time: float

    @property
    def policy(self) -> TablePolicy:
        return TablePolicy(self.table)

    @property
    def state_total(self) -> int:
        return sum(self.layer_counts)


# ============================================================
# INDUCCIÓN HACIA ATRÁS
# ============================================================

def _q_value(problem: DiscreteProblem, n: int, key: StateKey, dist: TransitionDistribution,
             control_index: int, next_values: Dict[StateKey, float]) -> float:
    h = problem.grid.h
    x = problem.grid.value(key[-1])
    control = problem.controls[control_index]
    total = h * math.exp(-problem.cost.discount * n * h) * problem.cost.running(x, control)
    depth = problem.kernel.depth
    for increment, p in dist.outcomes():
        if p > 0:
            total += p * next_values[shift_key(key, key[-1] + increment, depth)]
    return total


def _backward_layer(problem: DiscreteProblem, n: int,
                    layer: Dict[StateKey, Optional[Tuple[TransitionDistribution, ...]]],
                    next_values: Dict[StateKey, float]) -> Tuple[Dict[StateKey, float], Dict[StateKey, int]]:
    values: Dict[StateKey, float] = {}
    decisions: Dict[StateKey, int] = {}
    for key, dists in layer.items():
        if dists is None:
            values[key] = float(problem.cost.terminal(problem.grid.value(key[-1])))
            continue
        best = math.inf
        best_index = 0
        for i, dist in enumerate(dists):
            q = _q_value(problem, n, key, dist, i, next_values)
            # '<' estricto: en empates gana el índice más bajo
            if q < best:
                best, best_index = q, i
        values[key] = best
        decisions[key] = best_index
    return values, decisions


def solve_dp(problem: DiscreteProblem) -> SolveResult:
    """
    V^M(φ) por programación dinámica sobre los estados alcanzables

    Returns:
        SolveResult: valor en φ, tabla de valor/política, conteos por capa y tiempo

    Raises:
        KernelInfeasibleError, ResourceCapError: propagados de la enumeración
    """
    started = time.perf_counter()
    reachable = enumerate_reachable(problem)
    N = problem.horizon_steps
    values: List[Dict[StateKey, float]] = [{} for _ in range(N + 1)]
    policy: List[Dict[StateKey, int]] = [{} for _ in range(N + 1)]
    next_values: Dict[StateKey, float] = {}
    for n in range(N, -1, -1):
        values[n], policy[n] = _backward_layer(problem, n, reachable.layers[n], next_values)
        next_values = values[n]
    table = ValueTable(values, policy, problem.controls)
    result = SolveResult(
        M=problem.grid.M,
        value=values[0][problem.initial_key],
        table=table,
        layer_counts=reachable.layer_counts,
        expanded_transitions=reachable.expanded_transitions,
        wall_time=time.perf_counter() - started,
    )
    logger.info(
        f"✅ V^M con M={problem.grid.M}: {result.value:.10g} "
        f"({result.state_total:,} estados, {result.wall_time:.2f} s)"
    )
    return result


def bellman_residual(problem: DiscreteProblem, table: ValueTable) -> float:
    """Máxima diferencia entre la tabla y la minimización recalculada en un paso"""
    cache: DistributionCache = {}
    worst = 0.0
    N = problem.horizon_steps
    for n in range(N + 1):
        for key, stored in table.values[n].items():
            if exit_test(problem, key[-1], n) is ExitStatus.STOPPED:
                expected = float(problem.cost.terminal(problem.grid.value(key[-1])))
            else:
                expected = min(
                    _q_value(problem, n, key,
                             cached_distribution(problem.kernel, key, c, cache), i, table.values[n + 1])
                    for i, c in enumerate(problem.controls)
                )
            worst = max(worst, abs(stored - expected))
    return worst


# ============================================================
# ORÁCULO DE FUERZA BRUTA
# ============================================================

MAX_BRUTE_FORCE_STEPS = 12
MAX_BRUTE_FORCE_CONTROLS = 3


def brute_force_value(problem: DiscreteProblem) -> float:
    """
    V^M(φ) por recursión directa sobre el árbol (estado, control, resultado)

    Trabaja con ventanas completas y sin memoización, independiente de
    enumerate_reachable y de la clave truncada.

    Raises:
        SizeGuardError: si N̄ > 12 o |Γ| > 3
    """
    N = problem.horizon_steps
    controls = problem.controls
    if N > MAX_BRUTE_FORCE_STEPS or len(controls) > MAX_BRUTE_FORCE_CONTROLS:
        raise SizeGuardError(
            f"❌ Fuerza bruta limitada a N̄ ≤ {MAX_BRUTE_FORCE_STEPS} y |Γ| ≤ {MAX_BRUTE_FORCE_CONTROLS} "
            f"(recibido N̄={N}, |Γ|={len(controls)})"
        )
    grid = problem.grid
    h = grid.h
    kernel = problem.kernel

    def recurse(n: int, window: Tuple[int, ...]) -> float:
        x = grid.value(window[-1])
        if exit_test(problem, window[-1], n) is ExitStatus.STOPPED:
            return float(problem.cost.terminal(x))
        best = math.inf
        for control in controls:
            dist = transition_distribution(kernel, LatticeSegment(grid, window), control)
            total = h * math.exp(-problem.cost.discount * n * h) * problem.cost.running(x, control)
            for increment, p in dist.outcomes():
                if p > 0:
                    total += p * recurse(n + 1, window[1:] + (window[-1] + increment,))
            best = min(best, total)
        return best

    return recurse(0, problem.initial_window.indices)


__all__ = [
    'DEFAULT_STATE_BUDGET',
    'BOUNDARY_MODES',
    'ExitStatus',
    'DiscreteProblem',
    'ReachableStates',
    'ValueTable',
    'TablePolicy',
    'SolveResult',
    'exit_test',
    'shift_key',
    'enumerate_reachable',
    'solve_dp',
    'bellman_residual',
    'brute_force_value',
]
