"""
Relaxed Controls Module
=======================
Representación de controles constantes a trozos como medidas relajadas
ρ(dγ, dt) = δ_{u(t)}(dγ)·dt, el emparejamiento (g, ρ)(t) y el coste
corriente relajado, usados solo como diagnóstico.

PROPIEDAD CENTRAL:
    ρ(Γ × [0, t]) = t para todo t ∈ [0, T]; la marginal temporal es Lebesgue.

UBICACIÓN EN EL PROYECTO:
    src/model/relaxed.py
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate

from src.errors import DomainError, InvalidInputError
from src.model.coefficients import ControlPoint
from src.model.paths import CadlagPath, TimeGrid

logger = logging.getLogger(__name__)

# Tolerancia para decidir que dos intervalos son contiguos
JOIN_TOLERANCE = 1e-12


@dataclass(frozen=True)
class RelaxedControlMeasure:
    """
    Medida relajada constante a trozos

    ATRIBUTOS:
        pieces (tuple): triples (inicio, fin, control) sobre intervalos
                        semiabiertos [inicio, fin) que cubren [0, T) sin solapes
    """

    pieces: Tuple[Tuple[float, float, ControlPoint], ...]

    @property
    def horizon(self) -> float:
        return self.pieces[-1][1]

    def mass(self, t: float) -> float:
        """ρ(Γ × [0, t])"""
        return sum(max(0.0, min(b, t) - a) for a, b, _ in self.pieces)

    def occupation(self, control: ControlPoint, t: float) -> float:
        """Tiempo de ocupación de un control en [0, t]"""
        return sum(max(0.0, min(b, t) - a) for a, b, c in self.pieces if c == control)

    def control_at(self, t: float) -> ControlPoint:
        """Sección temporal: el Dirac de ρ en t está en este control"""
        for a, b, c in self.pieces:
            if a <= t < b:
                return c
        if math.isclose(t, self.horizon):
            return self.pieces[-1][2]
        raise DomainError(f"❌ t={t} fuera de [0, {self.horizon}]")


def control_to_relaxed(pieces: Sequence[Tuple[float, float, ControlPoint]]) -> RelaxedControlMeasure:
    """
    Control ordinario constante a trozos → medida relajada

    Args:
        pieces: (inicio, fin, control) ordenados que cubren [0, T]

    Returns:
        RelaxedControlMeasure: tramos contiguos con el mismo control se fusionan

    Raises:
        InvalidInputError: si hay huecos, solapes o tramos vacíos
    """
    pieces = list(pieces)
    if not pieces:
        raise InvalidInputError("❌ El control necesita al menos un tramo")
    if abs(pieces[0][0]) > JOIN_TOLERANCE:
        raise InvalidInputError(f"❌ El control debe empezar en 0, empieza en {pieces[0][0]}")
    merged = []
    cursor = 0.0
    for a, b, c in pieces:
        if not b > a:
            raise InvalidInputError(f"❌ Tramo vacío o invertido: [{a}, {b})")
        if a > cursor + JOIN_TOLERANCE:
            raise InvalidInputError(f"❌ Hueco en el control entre {cursor} y {a}")
        if a < cursor - JOIN_TOLERANCE:
            raise InvalidInputError(f"❌ Solape en el control: tramo [{a}, {b}) empieza antes de {cursor}")
        if merged and merged[-1][2] == c:
            merged[-1] = (merged[-1][0], float(b), c)
        else:
            merged.append((cursor if merged else 0.0, float(b), c))
        cursor = float(b)
    return RelaxedControlMeasure(tuple(merged))


def controls_to_relaxed(controls: Sequence[ControlPoint], grid: TimeGrid) -> RelaxedControlMeasure:
    """Control discreto u(n) interpolado ū(t) = u(⌊t/h⌋) → medida relajada"""
    if not controls:
        raise InvalidInputError("❌ La secuencia de controles está vacía")
    return control_to_relaxed(
        [(grid.time(n), grid.time(n + 1), c) for n, c in enumerate(controls)]
    )


@dataclass(frozen=True)
class PolynomialIntegrand:
    """
    Integrando g(γ, s) polinómico en s

    ``coefficients(γ)`` devuelve los coeficientes en potencias crecientes de s.
    """

    coefficients: Callable[[ControlPoint], Sequence[float]]

    def __call__(self, control: ControlPoint, s: float) -> float:
        return float(Polynomial(self.coefficients(control))(s))


Integrand = Union[PolynomialIntegrand, Callable[[ControlPoint, float], float]]


def relaxed_pairing(g: Integrand, measure: RelaxedControlMeasure, t: float) -> float:
    """
    (g, ρ)(t) = ∫_{Γ×[0,t]} g(γ, s) dρ(γ, s)

    Exacto para integrandos PolynomialIntegrand (antiderivada cerrada por
    tramo); en otro caso, cuadratura adaptativa con tolerancia absoluta 1e−10.

    Raises:
        DomainError: si t ∉ [0, T]

    Ejemplo:
        >>> relaxed_pairing(lambda c, s: 1.0, rho, 0.7)
        0.7
    """
    T = measure.horizon
    if t < -JOIN_TOLERANCE or t > T + JOIN_TOLERANCE:
        raise DomainError(f"❌ t={t} fuera de [0, {T}]")
    total = 0.0
    for a, b, c in measure.pieces:
        hi = min(b, t)
        if hi <= a:
            break
        if isinstance(g, PolynomialIntegrand):
            antiderivative = Polynomial(g.coefficients(c)).integ()
            total += float(antiderivative(hi) - antiderivative(a))
        else:
            value, _ = integrate.quad(lambda s: g(c, s), a, hi, epsabs=1e-10, limit=200)
            total += value
    return total


def relaxed_cost(path: CadlagPath, measure: RelaxedControlMeasure,
                 running: Callable[[float, ControlPoint], float],
                 discount: float, t: float) -> float:
    """
    Coste corriente relajado ∫ e^{−βs}·k(x(s), γ) dρ(γ, s) sobre [0, t]

    Para caminos constantes a trozos se integra exactamente en cada tramo
    donde camino y control son constantes.
    """
    cuts = {0.0, t}
    cuts.update(tm for tm in path.times if 0.0 < tm < t)
    cuts.update(a for a, _, _ in measure.pieces if 0.0 < a < t)
    cuts = sorted(cuts)
    total = 0.0
    for a, b in zip(cuts, cuts[1:]):
        k = running(path.value_at(a), measure.control_at(a))
        if discount == 0:
            total += k * (b - a)
        else:
            total += k * (np.exp(-discount * a) - np.exp(-discount * b)) / discount
    return float(total)


__all__ = [
    'RelaxedControlMeasure',
    'PolynomialIntegrand',
    'control_to_relaxed',
    'controls_to_relaxed',
    'relaxed_pairing',
    'relaxed_cost',
]
