"""
Convergence Study Module
========================
Resuelve el problema discreto para varios grados M y reporta V^M(φ) con
las diferencias sucesivas |V^M − V^{M anterior}|.

El límite continuo V(φ) no se puede calcular en general, así que el
estudio es de tipo Cauchy: se espera que las diferencias decrezcan. Si la
configuración es el caso Browniano se agrega el oráculo exacto del paseo.

UBICACIÓN EN EL PROYECTO:
    src/analysis/study.py
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import List, Optional

import pandas as pd

from src.analysis.benchmarks import brownian_pattern_violation, symmetric_walk_exit_oracle
from src.data.config import ProblemConfig
from src.errors import DomainError, InvalidInputError, KernelInfeasibleError, ResourceCapError
from src.solver.dynamic_programming import solve_dp

logger = logging.getLogger(__name__)

# Errores que invalidan una fila sin detener el estudio
ROW_FAILURES = (KernelInfeasibleError, ResourceCapError, InvalidInputError, DomainError)


@dataclass(frozen=True)
class StudyRow:
    M: int
    h: float
    states: Optional[int]
    value: float
    difference: float
    oracle: float
    wall_time: float
    status: str = 'ok'

    @property
    def ok(self) -> bool:
        return self.status == 'ok'


@dataclass
class StudyReport:
    """
    Filas ordenadas por M creciente

    ``converging`` es el predicado que decide el código de salida del
    estudio: la última diferencia disponible no supera a la primera.
    """

    rows: List[StudyRow] = field(default_factory=list)

    @property
    def differences(self) -> List[float]:
        return [row.difference for row in self.rows if not math.isnan(row.difference)]

    @property
    def converging(self) -> bool:
        diffs = self.differences
        return bool(diffs) and diffs[-1] <= diffs[0]

    @property
    def monotone(self) -> bool:
        diffs = self.differences
        return bool(diffs) and all(b <= a for a, b in zip(diffs, diffs[1:]))

    @property
    def failed_rows(self) -> List[StudyRow]:
        return [row for row in self.rows if not row.ok]

    def to_frame(self, include_wall_time: bool = False) -> pd.DataFrame:
        columns = ['M', 'h', 'states', 'value', 'difference', 'oracle', 'status']
        if include_wall_time:
            columns.insert(-1, 'wall_time')
        return pd.DataFrame(
            [{c: getattr(row, c) for c in columns} for row in self.rows],
            columns=columns,
        )


def run_study(config: ProblemConfig) -> StudyReport:
    """
    Estudio de convergencia sobre config.degrees

    Cada grado se resuelve de forma independiente; un fallo (kernel
    infactible, presupuesto excedido) queda registrado en su fila y el
    estudio sigue con los demás grados.

    Args:
        config: configuración validada con al menos dos grados

    Returns:
        StudyReport: filas por M creciente

    Raises:
        InvalidInputError: si hay menos de dos grados
    """
    degrees = sorted(config.degrees)
    if len(degrees) < 2:
        raise InvalidInputError(f"❌ El estudio necesita al menos dos valores de M, recibido {degrees}")

    with_oracle = brownian_pattern_violation(config) is None
    report = StudyReport()
    previous = math.nan
    for M in degrees:
        started = time.perf_counter()
        h = config.delay / M
        try:
            problem = config.build_problem(M)
            result = solve_dp(problem)
        except ROW_FAILURES as e:
            logger.warning(f"⚠️ M={M} falló ({type(e).__name__}): {e}")
            report.rows.append(StudyRow(M=M, h=h, states=None, value=math.nan, difference=math.nan,
                                        oracle=math.nan, wall_time=time.perf_counter() - started,
                                        status=type(e).__name__))
            previous = math.nan
            continue
        oracle = symmetric_walk_exit_oracle(problem) if with_oracle else math.nan
        row = StudyRow(
            M=M,
            h=h,
            states=result.state_total,
            value=result.value,
            difference=abs(result.value - previous),
            oracle=oracle,
            wall_time=time.perf_counter() - started,
        )
        report.rows.append(row)
        previous = result.value
        logger.info(f"📊 M={M}: V^M={row.value:.10g}, |ΔV|={row.difference:.3g}, {row.wall_time:.2f} s")

    if report.converging:
        logger.info(f"✅ Diferencias finales ≤ iniciales: {report.differences}")
    else:
        logger.warning(f"⚠️ Las diferencias no decrecen de la primera a la última: {report.differences}")
    return report


__all__ = [
    'ROW_FAILURES',
    'StudyRow',
    'StudyReport',
    'run_study',
]
