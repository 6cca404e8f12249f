"""
Paths Module
============
Mallas de tiempo y estado, redondeo al retículo, segmentos e interpolación
càdlàg constante a trozos.

PROPÓSITO:
    Proveer los objetos básicos sobre los que trabajan el modelo, la cadena y
    el solver: la malla de grado M, las ventanas de M+1 valores de la cadena
    (el estado de Markov extendido) y los caminos càdlàg.

CONVENCIONES:
    - h = r/M es el paso temporal y √h el paso del retículo S_h = √h·Z.
    - Las ventanas guardan índices enteros del retículo, nunca reales, para
      que la identidad de estados sea exacta y hashable.
    - Todos los tipos son inmutables después de construirse.

UBICACIÓN EN EL PROYECTO:
    src/model/paths.py
"""

# ============================================================
# SECCIÓN 1: IMPORTACIONES
# ============================================================

import bisect
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import DomainError, InvalidInputError

logger = logging.getLogger(__name__)

# Holgura absoluta al comparar tiempos calculados por caminos distintos
TIME_TOLERANCE = 1e-12


# ============================================================
# CLASE: TimeGrid
# ============================================================

@dataclass(frozen=True)
class TimeGrid:
    """
    Malla equidistante de grado M sobre el retardo r

    ATRIBUTOS:
        r (float): longitud del retardo (> 0)
        M (int): grado de discretización (entero positivo)
        h (float): paso temporal r/M
        spacing (float): paso del retículo √h

    EJEMPLO DE USO:
        >>> grid = TimeGrid(r=1.0, M=4)
        >>> grid.h, grid.spacing
        (0.25, 0.5)
    """

    r: float
    M: int
    h: float = field(init=False)
    spacing: float = field(init=False)

    def __post_init__(self):
        if not (isinstance(self.r, (int, float)) and math.isfinite(self.r) and self.r > 0):
            raise InvalidInputError(f"❌ El retardo r debe ser finito y positivo, recibido: {self.r}")
        if isinstance(self.M, bool) or not isinstance(self.M, (int, np.integer)) or self.M < 1:
            raise InvalidInputError(f"❌ El grado M debe ser un entero positivo, recibido: {self.M}")
        h = float(self.r) / int(self.M)
        object.__setattr__(self, 'M', int(self.M))
        object.__setattr__(self, 'r', float(self.r))
        object.__setattr__(self, 'h', h)
        object.__setattr__(self, 'spacing', math.sqrt(h))

    def time(self, n: int) -> float:
        """Tiempo n·h del índice n (misma fórmula en todo el proyecto)"""
        return n * self.h

    def value(self, index: int) -> float:
        """Valor real del índice de retículo"""
        return index * self.spacing

    def step_of(self, t: float) -> int:
        """
        Índice n con n·h = t

        Raises:
            DomainError: si t no cae sobre la malla
        """
        n = int(round(t / self.h))
        if abs(n * self.h - t) > 1e-9 * max(1.0, abs(t)):
            raise DomainError(f"❌ El tiempo {t} no está sobre la malla de paso h={self.h}")
        return n


# ============================================================
# CLASE: CadlagPath
# ============================================================

@dataclass(frozen=True)
class CadlagPath:
    """
    Camino constante a trozos y continuo por la derecha

    El valor en t es el del último punto de quiebre ≤ t. El dominio es
    [start, end]; ``end`` es +∞ si no se declara.

    ATRIBUTOS:
        times (tuple): puntos de quiebre estrictamente crecientes; times[0] = start
        values (tuple): un valor por punto de quiebre
        end (float): extremo derecho del dominio
    """

    times: Tuple[float, ...]
    values: Tuple[float, ...]
    end: float = math.inf

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        values = tuple(float(v) for v in self.values)
        if not times:
            raise InvalidInputError("❌ Un camino càdlàg necesita al menos un punto de quiebre")
        if len(times) != len(values):
            raise InvalidInputError(
                f"❌ Longitudes distintas: {len(times)} tiempos y {len(values)} valores"
            )
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidInputError("❌ Los puntos de quiebre deben ser estrictamente crecientes")
        if not all(math.isfinite(v) for v in values):
            raise InvalidInputError("❌ Los valores del camino deben ser finitos")
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'values', values)

    @property
    def start(self) -> float:
        return self.times[0]

    def __call__(self, t: float) -> float:
        return self.value_at(t)

    def value_at(self, t: float) -> float:
        """
        Evalúa el camino en t

        Raises:
            DomainError: si t está fuera de [start, end]
        """
        if t < self.start - TIME_TOLERANCE or t > self.end + TIME_TOLERANCE:
            raise DomainError(
                f"❌ t={t} fuera del dominio [{self.start}, {self.end}] del camino"
            )
        idx = bisect.bisect_right(self.times, t + TIME_TOLERANCE) - 1
        return self.values[max(idx, 0)]

    def jumps(self, lo: float = -math.inf, hi: float = math.inf):
        """Lista de (tiempo, tamaño) de los saltos en (lo, hi]"""
        return [
            (t, v - prev)
            for t, v, prev in zip(self.times[1:], self.values[1:], self.values[:-1])
            if v != prev and lo < t <= hi
        ]

    def integrate_against(self, weight: 'CadlagPath', lo: float, hi: float) -> float:
        """
        Integral exacta de camino·peso sobre [lo, hi]

        Ambos factores son constantes a trozos, así que la integral es una
        suma finita sobre la unión de los puntos de quiebre.
        """
        if hi <= lo:
            return 0.0
        cuts = sorted({lo, hi, *(t for t in self.times if lo < t < hi),
                       *(t for t in weight.times if lo < t < hi)})
        total = 0.0
        for a, b in zip(cuts, cuts[1:]):
            total += self.value_at(a) * weight.value_at(a) * (b - a)
        return total


# ============================================================
# CLASE: LatticeSegment
# ============================================================

@dataclass(frozen=True)
class LatticeSegment:
    """
    Ventana de M+1 valores de la cadena sobre el retículo √h·Z

    indices[j] codifica el valor indices[j]·√h en el tiempo relativo (j−M)·h.
    El valor actual (offset 0) es indices[M].
    """

    grid: TimeGrid
    indices: Tuple[int, ...]

    def __post_init__(self):
        indices = tuple(int(i) for i in self.indices)
        if len(indices) != self.grid.M + 1:
            raise InvalidInputError(
                f"❌ Una ventana de grado {self.grid.M} necesita {self.grid.M + 1} índices, "
                f"recibidos {len(indices)}"
            )
        object.__setattr__(self, 'indices', indices)

    @property
    def current_index(self) -> int:
        return self.indices[-1]

    @property
    def current_value(self) -> float:
        return self.grid.value(self.indices[-1])

    def values(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=float) * self.grid.spacing

    def value_at_offset(self, s: float) -> float:
        """Valor de la interpolación Z̄ en el tiempo relativo s ∈ [−r, 0]"""
        return self.as_path().value_at(s)

    def as_path(self) -> CadlagPath:
        """Interpolación constante a trozos Z̄ sobre [−r, 0]"""
        M = self.grid.M
        times = [self.grid.time(j - M) for j in range(M + 1)]
        times[-1] = 0.0
        return CadlagPath(tuple(times), tuple(self.values()), end=0.0)


# Un segmento puede llegar como ventana del retículo o como camino muestreado
Segment = Union[LatticeSegment, CadlagPath]


def as_segment_path(segment: Segment) -> CadlagPath:
    """Normaliza cualquier segmento a un CadlagPath definido sobre [−r, 0]"""
    if isinstance(segment, LatticeSegment):
        return segment.as_path()
    return segment


# ============================================================
# CLASE: InitialSegment
# ============================================================

@dataclass(frozen=True)
class InitialSegment:
    """
    Condición inicial determinista φ sobre [−r, 0]

    Se construye con un evaluador cerrado o con un CadlagPath muestreado.
    ``jump_times`` declara las posiciones de los saltos (si los hay) para
    poder advertir cuando la malla no las refina.
    """

    evaluator: Callable[[float], float]
    jump_times: Tuple[float, ...] = ()

    @classmethod
    def from_path(cls, path: CadlagPath) -> 'InitialSegment':
        return cls(evaluator=path.value_at, jump_times=tuple(t for t, _ in path.jumps()))

    @classmethod
    def constant(cls, value: float) -> 'InitialSegment':
        return cls(evaluator=_Affine(float(value), 0.0))

    @classmethod
    def affine(cls, intercept: float, slope: float) -> 'InitialSegment':
        """φ(s) = intercept + slope·s (continua)"""
        return cls(evaluator=_Affine(float(intercept), float(slope)))

    @classmethod
    def step(cls, r: float, time: float, before: float, after: float) -> 'InitialSegment':
        """
        Un único salto de ``before`` a ``after`` en ``time`` ∈ (−r, 0]

        Raises:
            InvalidInputError: si el tiempo del salto no está en (−r, 0]
        """
        if not -r < time <= 0:
            raise InvalidInputError(f"❌ El salto debe estar en (−{r}, 0], recibido t={time}")
        return cls.from_path(CadlagPath((-float(r), float(time)), (float(before), float(after)), end=0.0))

    def __call__(self, s: float) -> float:
        return self.evaluator(s)


@dataclass(frozen=True)
class _Affine:
    intercept: float
    slope: float

    def __call__(self, s: float) -> float:
        return self.intercept + self.slope * s


# ============================================================
# OPERACIONES
# ============================================================

def round_to_lattice(x: float, grid: TimeGrid) -> int:
    """
    Función de redondeo Λ_h: índice k que minimiza |x − k·√h|

    En empates exactos gana el k mayor (redondeo hacia +∞).

    Raises:
        InvalidInputError: si x no es finito

    Ejemplo:
        >>> round_to_lattice(-0.25, TimeGrid(r=0.25, M=1))
        0
    """
    if not math.isfinite(x):
        raise InvalidInputError(f"❌ No se puede redondear un valor no finito: {x}")
    step = grid.spacing
    k = math.floor(x / step + 0.5)
    best = k
    best_dist = abs(x - k * step)
    for candidate in (k - 1, k + 1):
        dist = abs(x - candidate * step)
        if dist < best_dist or (dist == best_dist and candidate > best):
            best, best_dist = candidate, dist
    return int(best)


def discretize_initial(phi: InitialSegment, grid: TimeGrid) -> LatticeSegment:
    """
    Condición inicial discreta ξ(n) = Λ_h(φ(n·h)), n = −M..0

    Raises:
        InvalidInputError: si φ no se puede evaluar en algún punto de la malla
    """
    M = grid.M
    _warn_unaligned_jumps(phi, grid)
    indices = []
    for j in range(M + 1):
        t = grid.time(j - M)
        try:
            value = float(phi(t))
        except Exception as e:
            raise InvalidInputError(f"❌ No se pudo evaluar φ en t={t}: {e}") from e
        indices.append(round_to_lattice(value, grid))
    return LatticeSegment(grid, tuple(indices))


def sample_segment(phi: InitialSegment, grid: TimeGrid) -> CadlagPath:
    """
    Interpolación constante a trozos de φ muestreada en la malla, sin
    redondeo espacial (φ^M con valores reales)
    """
    M = grid.M
    _warn_unaligned_jumps(phi, grid)
    times = [grid.time(j - M) for j in range(M + 1)]
    times[-1] = 0.0
    try:
        values = [float(phi(t)) for t in times]
    except Exception as e:
        raise InvalidInputError(f"❌ No se pudo evaluar φ sobre la malla: {e}") from e
    return CadlagPath(tuple(times), tuple(values), end=0.0)


def shift_segment(segment: LatticeSegment, next_index: int) -> LatticeSegment:
    """Avanza la ventana: descarta indices[0] y agrega next_index"""
    return LatticeSegment(segment.grid, segment.indices[1:] + (int(next_index),))


def interpolate_chain(values: Sequence[float], grid: TimeGrid,
                      first_step: Optional[int] = None) -> CadlagPath:
    """
    Interpolación càdlàg de la cadena, constante en [n·h, (n+1)·h)

    Args:
        values: valores de la cadena en los tiempos n·h
        grid: malla de grado M
        first_step: índice n del primer valor (por defecto −M)

    Raises:
        InvalidInputError: si no hay valores
    """
    values = list(values)
    if not values:
        raise InvalidInputError("❌ No se puede interpolar una cadena vacía")
    n0 = -grid.M if first_step is None else int(first_step)
    times = tuple(grid.time(n0 + i) for i in range(len(values)))
    return CadlagPath(times, tuple(values))


def segment_at(path: CadlagPath, t: float, grid: TimeGrid) -> LatticeSegment:
    """
    Segmento ψ_t(s) = ψ(t+s) en los offsets de la malla, como ventana del retículo

    Raises:
        DomainError: si t < 0, t no está en la malla o el camino no cubre [t−r, t]
    """
    if t < 0:
        raise DomainError(f"❌ El segmento solo está definido para t ≥ 0, recibido t={t}")
    n = grid.step_of(t)
    M = grid.M
    first = grid.time(n - M)
    if first < path.start - TIME_TOLERANCE or t > path.end + TIME_TOLERANCE:
        raise DomainError(
            f"❌ El camino no cubre [{first}, {t}] (dominio [{path.start}, {path.end}])"
        )
    indices = tuple(
        round_to_lattice(path.value_at(grid.time(n - M + j)), grid) for j in range(M + 1)
    )
    return LatticeSegment(grid, indices)


def _warn_unaligned_jumps(phi: InitialSegment, grid: TimeGrid) -> None:
    for t in phi.jump_times:
        ratio = t / grid.h
        if abs(ratio - round(ratio)) > 1e-9:
            logger.warning(
                f"⚠️ φ salta en t={t}, que no está sobre la malla de grado M={grid.M}; "
                f"la discretización desplaza el salto"
            )


__all__ = [
    'TimeGrid',
    'CadlagPath',
    'LatticeSegment',
    'InitialSegment',
    'Segment',
    'as_segment_path',
    'round_to_lattice',
    'discretize_initial',
    'sample_segment',
    'shift_segment',
    'interpolate_chain',
    'segment_at',
]
