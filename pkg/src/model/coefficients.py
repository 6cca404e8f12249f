"""
Coefficients Module
===================
Funcionales de drift b y difusión σ sobre segmentos, conjunto de controles,
datos de coste y chequeo empírico de las hipótesis de acotación, Lipschitz
y elipticidad.

FAMILIAS INCLUIDAS:
    - SaturatedLinearDrift: b(φ,γ) = clamp(c0 + Σ a_i·φ(r_i) + Σ c_j·∫φ·w_j, −B, B)·g(γ)
    - ConstantDiffusion:    σ ≡ c
    - LipschitzDiffusion:   σ(φ) = σ0 + clamp(|c0 + Σ a_i·φ(r_i) + Σ c_j·∫φ·w_j|, 0, cap)
    - PathologicalDiffusion: σ(φ) = σ0 + cap ∧ sup{|φ(t) − φ(t−)| : t ∈ A}

    Solo el drift depende del control; la difusión no se controla.

UBICACIÓN EN EL PROYECTO:
    src/model/coefficients.py
"""

# ============================================================
# SECCIÓN 1: IMPORTACIONES
# ============================================================

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.errors import DomainError, InvalidInputError
from src.model.paths import (
    TIME_TOLERANCE,
    CadlagPath,
    LatticeSegment,
    Segment,
    TimeGrid,
    as_segment_path,
)

logger = logging.getLogger(__name__)


# ============================================================
# CONTROLES
# ============================================================

@dataclass(frozen=True)
class ControlPoint:
    """Acción de control: etiqueta legible y carga numérica"""

    label: str
    value: float


@dataclass(frozen=True)
class ControlSet:
    """
    Conjunto finito y ordenado de acciones Γ

    El orden define el índice de control, que decide los empates de la
    minimización (gana el índice más bajo).
    """

    points: Tuple[ControlPoint, ...]

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise InvalidInputError("❌ El conjunto de controles no puede estar vacío")
        labels = [p.label for p in points]
        if len(set(labels)) != len(labels):
            raise InvalidInputError(f"❌ Etiquetas de control duplicadas: {labels}")
        object.__setattr__(self, 'points', points)

    @classmethod
    def from_values(cls, values: Sequence[float]) -> 'ControlSet':
        return cls(tuple(ControlPoint(label=f"{float(v):g}", value=float(v)) for v in values))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, index: int) -> ControlPoint:
        return self.points[index]

    def index_of(self, label: str) -> int:
        for i, p in enumerate(self.points):
            if p.label == label:
                return i
        raise InvalidInputError(f"❌ Control '{label}' no existe en Γ")


@dataclass(frozen=True)
class ControlFactor:
    """
    Factor de control g(γ) del drift

    kind='payload' usa scale·γ.value; kind='unit' devuelve scale.
    """

    kind: str = 'payload'
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ('payload', 'unit'):
            raise InvalidInputError(f"❌ Factor de control desconocido: {self.kind}")

    def __call__(self, control: ControlPoint) -> float:
        if self.kind == 'unit':
            return self.scale
        return self.scale * control.value

    def bound(self, controls: ControlSet) -> float:
        return max(abs(self(c)) for c in controls)


# ============================================================
# PIEZAS LINEALES COMUNES (retardos y pesos)
# ============================================================

@dataclass(frozen=True)
class WeightFunction:
    """Peso w constante a trozos sobre [−r, 0]; times[0] = −r"""

    times: Tuple[float, ...]
    values: Tuple[float, ...]

    def as_path(self) -> CadlagPath:
        return CadlagPath(self.times, self.values, end=0.0)

    def l1_norm(self) -> float:
        ends = tuple(self.times[1:]) + (0.0,)
        return sum(abs(v) * (b - a) for a, b, v in zip(self.times, ends, self.values))

    def support_start(self) -> float:
        for t, v in zip(self.times, self.values):
            if v != 0.0:
                return t
        return 0.0


@dataclass(frozen=True)
class LinearFunctional:
    """
    Combinación lineal c0 + Σ a_i·φ(r_i) + Σ c_j·∫_{−r}^0 φ(s)·w_j(s) ds

    ATRIBUTOS:
        offset (float): término constante c0
        lags (tuple): pares (r_i, a_i) con r_i ∈ [−r, 0]
        weights (tuple): pares (w_j, c_j)
    """

    offset: float = 0.0
    lags: Tuple[Tuple[float, float], ...] = ()
    weights: Tuple[Tuple[WeightFunction, float], ...] = ()

    def __call__(self, path: CadlagPath) -> float:
        total = self.offset
        for s, gain in self.lags:
            total += gain * path.value_at(s)
        for weight, gain in self.weights:
            w = weight.as_path()
            total += gain * path.integrate_against(w, w.start, 0.0)
        return total

    def lipschitz(self) -> float:
        return (sum(abs(a) for _, a in self.lags)
                + sum(abs(c) * w.l1_norm() for w, c in self.weights))

    def earliest_time(self) -> float:
        times = [s for s, a in self.lags if a != 0.0]
        times += [w.support_start() for w, c in self.weights if c != 0.0]
        return min(times) if times else 0.0

    def check_delay(self, r: float) -> None:
        for s, _ in self.lags:
            if s < -r - TIME_TOLERANCE or s > TIME_TOLERANCE:
                raise InvalidInputError(f"❌ Retardo {s} fuera de [−{r}, 0]")
        for w, _ in self.weights:
            if abs(w.times[0] + r) > 1e-9:
                raise InvalidInputError(f"❌ El peso debe empezar en −r={-r}, empieza en {w.times[0]}")


def _depth_from_time(t: float, grid: TimeGrid) -> int:
    """Cuántas entradas finales de la ventana hacen falta para leer Z̄ desde t"""
    j = math.floor(t / grid.h + 1e-9) + grid.M
    j = min(max(j, 0), grid.M)
    return grid.M + 1 - j


# ============================================================
# FAMILIAS DE DRIFT
# ============================================================

@dataclass(frozen=True)
class SaturatedLinearDrift:
    """
    Drift b(φ,γ) = clamp(L(φ), −B, B)·g(γ) con L lineal en φ

    Cubre el drift cero (offset 0 sin términos), el drift constante, el
    drift lineal en el control y el feedback retardado γ·clamp(φ(−r), −1, 1).
    """

    linear: LinearFunctional = field(default_factory=LinearFunctional)
    saturation: float = 1.0
    control_factor: ControlFactor = field(default_factory=ControlFactor)

    def __post_init__(self):
        if not self.saturation >= 0:
            raise InvalidInputError(f"❌ La saturación debe ser ≥ 0, recibida {self.saturation}")

    def __call__(self, path: CadlagPath, control: ControlPoint) -> float:
        inner = self.linear(path)
        f = min(max(inner, -self.saturation), self.saturation)
        return f * self.control_factor(control)

    def bound(self, controls: ControlSet) -> float:
        inner = self.saturation
        if not self.linear.lags and not self.linear.weights:
            # L constante
            inner = min(inner, abs(self.linear.offset))
        return inner * self.control_factor.bound(controls)

    def lipschitz(self, controls: ControlSet) -> float:
        return self.control_factor.bound(controls) * self.linear.lipschitz()

    def memory_depth(self, grid: TimeGrid) -> int:
        return _depth_from_time(self.linear.earliest_time(), grid)


# ============================================================
# FAMILIAS DE DIFUSIÓN
# ============================================================

@dataclass(frozen=True)
class ConstantDiffusion:
    value: float = 1.0

    def __post_init__(self):
        if not self.value > 0:
            raise InvalidInputError(f"❌ La difusión constante debe ser > 0, recibida {self.value}")

    def __call__(self, path: CadlagPath) -> float:
        return self.value

    @property
    def floor(self) -> float:
        return self.value

    @property
    def bound(self) -> float:
        return self.value

    def lipschitz(self) -> float:
        return 0.0

    def memory_depth(self, grid: TimeGrid) -> int:
        return 1


@dataclass(frozen=True)
class LipschitzDiffusion:
    """σ(φ) = σ0 + clamp(|L(φ)|, 0, cap); siempre en [σ0, σ0 + cap]"""

    floor: float
    cap: float
    linear: LinearFunctional = field(default_factory=lambda: LinearFunctional(lags=((0.0, 1.0),)))

    def __post_init__(self):
        if not self.floor > 0:
            raise InvalidInputError(f"❌ σ0 debe ser > 0, recibido {self.floor}")
        if not self.cap >= 0:
            raise InvalidInputError(f"❌ El tope debe ser ≥ 0, recibido {self.cap}")

    def __call__(self, path: CadlagPath) -> float:
        return self.floor + min(max(abs(self.linear(path)), 0.0), self.cap)

    @property
    def bound(self) -> float:
        return self.floor + self.cap

    def lipschitz(self) -> float:
        return self.linear.lipschitz()

    def memory_depth(self, grid: TimeGrid) -> int:
        return _depth_from_time(self.linear.earliest_time(), grid)


@dataclass(frozen=True)
class PathologicalDiffusion:
    """
    σ(φ) = σ0 + cap ∧ sup{|φ(t) − φ(t−)| : t ∈ A}

    A es la unión de los conjuntos A_m = ∪_n (g − 2^{−3m}, g] con
    g = r(n/2^m − 1), n = 1..2^m. La pertenencia se decide con aritmética
    racional exacta para m ≤ max_level. Los tiempos de una ventana del
    retículo son exactos (r·(j−M)/M); los de un camino real se ajustan al
    racional más cercano con denominador ≤ max_denominator.
    """

    floor: float
    cap: float
    r: float
    max_level: int = 60
    max_denominator: int = 10 ** 9

    def __post_init__(self):
        if not self.floor > 0:
            raise InvalidInputError(f"❌ σ0 debe ser > 0, recibido {self.floor}")
        if not self.cap >= 0:
            raise InvalidInputError(f"❌ El tope debe ser ≥ 0, recibido {self.cap}")

    def __call__(self, segment: Segment) -> float:
        return eval_pathological_diffusion(self, segment)

    @property
    def bound(self) -> float:
        return self.floor + self.cap

    def lipschitz(self) -> float:
        return 2.0

    def memory_depth(self, grid: TimeGrid) -> int:
        return grid.M + 1

    @property
    def r_exact(self) -> Fraction:
        """r como racional; 0.4 se lee como 2/5 y no como su binario"""
        return Fraction(self.r).limit_denominator(self.max_denominator)

    def in_A(self, t: Fraction) -> bool:
        """Pertenencia exacta de un tiempo racional al conjunto A"""
        r = self.r_exact
        for m in range(1, self.max_level + 1):
            scale = 2 ** m
            n = math.ceil((t / r + 1) * scale)
            n = max(n, 1)
            if n > scale:
                continue
            g = r * (Fraction(n, scale) - 1)
            gap = g - t
            if 0 <= gap < Fraction(1, 2 ** (3 * m)):
                return True
        return False


# ============================================================
# CLASE: CoefficientSet
# ============================================================

@dataclass(frozen=True)
class CoefficientSet:
    """
    Coeficientes b, σ con sus constantes declaradas

    ATRIBUTOS:
        drift: funcional (CadlagPath sobre [−r,0], ControlPoint) → float
        diffusion: funcional (CadlagPath o LatticeSegment) → float
        controls (ControlSet): acciones Γ
        delay (float): retardo r
        K (int): cota global de |b| y |σ|, número natural
        K_L (float): constante de Lipschitz
        sigma0 (float): piso de elipticidad
        drift_bound (float): cota de |b| usada para h* (≤ K)
    """

    drift: Callable[..., float]
    diffusion: Callable[..., float]
    controls: ControlSet
    delay: float
    K: int
    K_L: float
    sigma0: float
    drift_bound: Optional[float] = None

    def __post_init__(self):
        if isinstance(self.K, bool) or not float(self.K).is_integer() or self.K < 1:
            raise InvalidInputError(f"❌ K debe ser un número natural, recibido {self.K}")
        object.__setattr__(self, 'K', int(self.K))
        if not self.sigma0 > 0:
            raise InvalidInputError(f"❌ σ0 debe ser > 0, recibido {self.sigma0}")
        if self.K_L < 0:
            raise InvalidInputError(f"❌ K_L debe ser ≥ 0, recibido {self.K_L}")
        if self.drift_bound is None:
            object.__setattr__(self, 'drift_bound', float(self.K))

    @classmethod
    def from_families(cls, drift, diffusion, controls: ControlSet, delay: float,
                      K: Optional[int] = None, K_L: Optional[float] = None) -> 'CoefficientSet':
        """
        Construye el conjunto calculando K, K_L y σ0 desde las familias

        K es el menor natural que acota |b| y |σ|, salvo que se declare.
        """
        for part in (getattr(drift, 'linear', None), getattr(diffusion, 'linear', None)):
            if part is not None:
                part.check_delay(delay)
        drift_bound = drift.bound(controls)
        natural = max(1, math.ceil(max(drift_bound, diffusion.bound) - 1e-12))
        if K is None:
            K = natural
        elif K < natural:
            logger.warning(f"⚠️ K={K} declarado es menor que la cota de las familias ({natural})")
        if K_L is None:
            K_L = drift.lipschitz(controls) + diffusion.lipschitz()
        return cls(drift=drift, diffusion=diffusion, controls=controls, delay=float(delay),
                   K=K, K_L=K_L, sigma0=diffusion.floor, drift_bound=drift_bound)

    def memory_depth(self, grid: TimeGrid) -> int:
        """
        Entradas finales de la ventana que leen b y σ (al menos 1)

        Funcionales sin método memory_depth se tratan como dependientes de
        la ventana completa.
        """
        depths = [1]
        for part in (self.drift, self.diffusion):
            depth_of = getattr(part, 'memory_depth', None)
            depths.append(depth_of(grid) if depth_of is not None else grid.M + 1)
        return min(max(depths), grid.M + 1)


# ============================================================
# OPERACIONES DE EVALUACIÓN
# ============================================================

def _covering_path(coeffs: CoefficientSet, segment: Segment) -> CadlagPath:
    path = as_segment_path(segment)
    if path.start > -coeffs.delay + 1e-9 or path.end < -TIME_TOLERANCE:
        raise DomainError(
            f"❌ El segmento cubre [{path.start}, {path.end}] y se necesita [−{coeffs.delay}, 0]"
        )
    return path


def eval_drift(coeffs: CoefficientSet, segment: Segment, control: ControlPoint) -> float:
    """
    b(segmento, γ)

    Raises:
        DomainError: si el segmento no cubre [−r, 0]
    """
    return float(coeffs.drift(_covering_path(coeffs, segment), control))


def eval_diffusion(coeffs: CoefficientSet, segment: Segment) -> float:
    """
    σ(segmento)

    Raises:
        DomainError: si el segmento no cubre [−r, 0]
    """
    if isinstance(coeffs.diffusion, PathologicalDiffusion):
        _covering_path(coeffs, segment)
        return float(coeffs.diffusion(segment))
    return float(coeffs.diffusion(_covering_path(coeffs, segment)))


def eval_pathological_diffusion(diffusion: PathologicalDiffusion, segment: Segment) -> float:
    """
    σ0 más el supremo (topado) de los saltos en tiempos de A

    Los saltos fuera de A se ignoran.
    """
    if isinstance(segment, LatticeSegment):
        M = segment.grid.M
        r = diffusion.r_exact
        jumps = [
            (r * Fraction(j - M, M), (b - a) * segment.grid.spacing)
            for j, (a, b) in enumerate(zip(segment.indices, segment.indices[1:]), start=1)
            if a != b
        ]
    else:
        jumps = [
            (Fraction(t).limit_denominator(diffusion.max_denominator), size)
            for t, size in segment.jumps()
        ]
    sizes = [abs(size) for t, size in jumps if diffusion.in_A(t)]
    return diffusion.floor + min(diffusion.cap, max(sizes, default=0.0))


# ============================================================
# COSTES
# ============================================================

@dataclass(frozen=True)
class QuadraticRunningCost:
    """k(x, γ) = c + a·x² + q·γ²"""

    constant: float = 1.0
    state_weight: float = 0.0
    control_weight: float = 0.0

    def __call__(self, x: float, control: ControlPoint) -> float:
        return self.constant + self.state_weight * x * x + self.control_weight * control.value ** 2

    def scaled(self, factor: float) -> 'QuadraticRunningCost':
        return QuadraticRunningCost(self.constant * factor, self.state_weight * factor,
                                    self.control_weight * factor)


@dataclass(frozen=True)
class QuadraticTerminalCost:
    """g(x) = c + a·x²"""

    constant: float = 0.0
    state_weight: float = 0.0

    def __call__(self, x: float) -> float:
        return self.constant + self.state_weight * x * x

    def scaled(self, factor: float) -> 'QuadraticTerminalCost':
        return QuadraticTerminalCost(self.constant * factor, self.state_weight * factor)


@dataclass(frozen=True)
class CostSpec:
    """
    Datos del funcional de coste

    ATRIBUTOS:
        running: k(x, γ) ≥ 0
        terminal: g(x) ≥ 0, aplicado sin descuento en el paso de salida
        discount (float): β ≥ 0
        interval (tuple): I = [lo, hi] con lo < hi
        horizon (float): T̄ > 0
    """

    running: Callable[[float, ControlPoint], float]
    terminal: Callable[[float], float]
    discount: float
    interval: Tuple[float, float]
    horizon: float

    def __post_init__(self):
        lo, hi = (float(x) for x in self.interval)
        if not lo < hi:
            raise InvalidInputError(f"❌ El intervalo I necesita lo < hi, recibido [{lo}, {hi}]")
        if not self.horizon > 0:
            raise InvalidInputError(f"❌ El horizonte T̄ debe ser > 0, recibido {self.horizon}")
        if not self.discount >= 0:
            raise InvalidInputError(f"❌ El descuento β debe ser ≥ 0, recibido {self.discount}")
        object.__setattr__(self, 'interval', (lo, hi))

    def spot_check(self, controls: ControlSet, margin: float = 0.0,
                   samples: int = 101) -> Tuple[float, float]:
        """
        Evalúa k y g sobre una malla de I ensanchado por ``margin``

        Returns:
            tuple: (sup k, sup g) observados

        Raises:
            InvalidInputError: si k o g son negativos o no finitos
        """
        lo, hi = self.interval
        xs = np.linspace(lo - margin, hi + margin, samples)
        sup_k = 0.0
        sup_g = 0.0
        for x in xs:
            gx = float(self.terminal(float(x)))
            if not (math.isfinite(gx) and gx >= 0):
                raise InvalidInputError(f"❌ El coste terminal g({x:.4g}) = {gx} no es finito y ≥ 0")
            sup_g = max(sup_g, gx)
            for c in controls:
                kx = float(self.running(float(x), c))
                if not (math.isfinite(kx) and kx >= 0):
                    raise InvalidInputError(
                        f"❌ El coste corriente k({x:.4g}, {c.label}) = {kx} no es finito y ≥ 0"
                    )
                sup_k = max(sup_k, kx)
        return sup_k, sup_g


# ============================================================
# VALIDACIÓN EMPÍRICA DE HIPÓTESIS
# ============================================================

@dataclass
class AssumptionReport:
    """Resultado de validate_assumptions; las violaciones son entradas, no errores"""

    sample_count: int
    max_abs_drift: float
    max_abs_diffusion: float
    min_diffusion: float
    max_lipschitz_quotient: float
    declared: Dict[str, float]
    violations: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_frame(self) -> pd.DataFrame:
        rows = [
            ('bound_drift', self.max_abs_drift, self.declared['K'],
             self.max_abs_drift <= self.declared['K'] + 1e-12),
            ('bound_diffusion', self.max_abs_diffusion, self.declared['K'],
             self.max_abs_diffusion <= self.declared['K'] + 1e-12),
            ('lipschitz', self.max_lipschitz_quotient, self.declared['K_L'],
             self.max_lipschitz_quotient <= self.declared['K_L'] + 1e-9),
            ('ellipticity', self.min_diffusion, self.declared['sigma0'],
             self.min_diffusion >= self.declared['sigma0'] - 1e-12),
        ]
        return pd.DataFrame(rows, columns=['check', 'empirical', 'declared', 'ok'])


def random_segment(rng: np.random.Generator, r: float, amplitude: float = 2.0,
                   max_pieces: int = 8) -> CadlagPath:
    """Segmento aleatorio constante a trozos sobre [−r, 0]"""
    pieces = int(rng.integers(1, max_pieces + 1))
    cuts = np.sort(rng.uniform(-r, 0.0, size=pieces - 1))
    times = (-r,) + tuple(float(t) for t in cuts if -r < t < 0.0)
    times = tuple(sorted(set(times)))
    values = tuple(float(v) for v in rng.uniform(-amplitude, amplitude, size=len(times)))
    return CadlagPath(times, values, end=0.0)


def validate_assumptions(coeffs: CoefficientSet, sample_count: int, seed: int,
                         amplitude: float = 2.0) -> AssumptionReport:
    """
    Chequeo por muestreo de acotación (K), Lipschitz (K_L) y elipticidad (σ0)

    Cada muestra es un par (φ, φ̃) de segmentos con los mismos puntos de
    quiebre; el cociente de Lipschitz usa sup|φ − φ̃|.

    Args:
        coeffs: coeficientes a revisar
        sample_count: número de pares (≥ 1)
        seed: semilla del generador
        amplitude: rango de valores de los segmentos aleatorios

    Returns:
        AssumptionReport: máximos empíricos y lista de violaciones
    """
    if sample_count < 1:
        raise InvalidInputError(f"❌ sample_count debe ser ≥ 1, recibido {sample_count}")
    rng = np.random.default_rng(seed)
    r = coeffs.delay
    max_b = 0.0
    max_s = 0.0
    min_s = math.inf
    max_q = 0.0
    for _ in range(sample_count):
        phi = random_segment(rng, r, amplitude)
        delta = rng.uniform(-0.1, 0.1, size=len(phi.times))
        if not np.any(delta):
            delta[0] = 0.05
        phi_t = CadlagPath(phi.times, tuple(np.add(phi.values, delta)), end=0.0)
        sup_dist = float(np.max(np.abs(delta)))

        s1 = eval_diffusion(coeffs, phi)
        s2 = eval_diffusion(coeffs, phi_t)
        max_s = max(max_s, abs(s1), abs(s2))
        min_s = min(min_s, s1, s2)
        for c in coeffs.controls:
            b1 = eval_drift(coeffs, phi, c)
            b2 = eval_drift(coeffs, phi_t, c)
            max_b = max(max_b, abs(b1), abs(b2))
            max_q = max(max_q, (abs(b1 - b2) + abs(s1 - s2)) / sup_dist)

    declared = {'K': float(coeffs.K), 'K_L': float(coeffs.K_L), 'sigma0': float(coeffs.sigma0)}
    report = AssumptionReport(sample_count, max_b, max_s, min_s, max_q, declared)
    if max_b > coeffs.K + 1e-12:
        report.violations.append(f"bound: max|b| = {max_b:.6g} > K = {coeffs.K}")
    if max_s > coeffs.K + 1e-12:
        report.violations.append(f"bound: max|σ| = {max_s:.6g} > K = {coeffs.K}")
    if max_q > coeffs.K_L + 1e-9:
        report.violations.append(f"lipschitz: cociente {max_q:.6g} > K_L = {coeffs.K_L:.6g}")
    if min_s < coeffs.sigma0 - 1e-12:
        report.violations.append(f"ellipticity: min σ = {min_s:.6g} < σ0 = {coeffs.sigma0:.6g}")

    for line in report.violations:
        logger.warning(f"⚠️ Hipótesis violada: {line}")
    if report.passed:
        logger.info(f"✅ Hipótesis verificadas en {sample_count} muestras")
    return report


__all__ = [
    'ControlPoint',
    'ControlSet',
    'ControlFactor',
    'WeightFunction',
    'LinearFunctional',
    'SaturatedLinearDrift',
    'ConstantDiffusion',
    'LipschitzDiffusion',
    'PathologicalDiffusion',
    'CoefficientSet',
    'QuadraticRunningCost',
    'QuadraticTerminalCost',
    'CostSpec',
    'AssumptionReport',
    'eval_drift',
    'eval_diffusion',
    'eval_pathological_diffusion',
    'random_segment',
    'validate_assumptions',
]
