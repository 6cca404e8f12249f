"""
Report Writer Module
====================
Escritura determinista de los reportes CSV del proyecto.

ARCHIVOS Y COLUMNAS (orden fijo):
    study.csv        M, h, states, value, difference, oracle, status
    consistency.csv  sample_id, mean_error, variance_error
    qv.csv           n, qv, bound
    policy.csv       layer, state, value, control
                     state = últimos `depth` índices de la ventana, unidos por ':'
    benchmark.csv    M, h, value, oracle, continuous, abs_error, oracle_error

FORMATO:
    - Decimales con 17 dígitos significativos ('%.17g'), separador ',' y
      fin de línea '\\n', para que dos ejecuciones con la misma semilla
      produzcan archivos idénticos byte a byte.
    - Resultados ausentes o vacíos → archivo solo con encabezados.
    - Los tiempos de pared no se escriben (no son reproducibles); quedan en el log.

UBICACIÓN EN EL PROYECTO:
    src/data/report_writer.py
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import pandas as pd

from src.errors import ReportIOError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'

REPORT_COLUMNS: Dict[str, tuple] = {
    'study': ('M', 'h', 'states', 'value', 'difference', 'oracle', 'status'),
    'consistency': ('sample_id', 'mean_error', 'variance_error'),
    'qv': ('n', 'qv', 'bound'),
    'policy': ('layer', 'state', 'value', 'control'),
    'benchmark': ('M', 'h', 'value', 'oracle', 'continuous', 'abs_error', 'oracle_error'),
}


@dataclass
class ReportBundle:
    """Tablas a escribir; None equivale a una tabla vacía"""

    study: Optional[pd.DataFrame] = None
    consistency: Optional[pd.DataFrame] = None
    qv: Optional[pd.DataFrame] = None
    policy: Optional[pd.DataFrame] = None
    benchmark: Optional[pd.DataFrame] = None


# ============================================================
# CLASE: ReportWriter
# ============================================================

class ReportWriter:
    """
    Escritor de reportes CSV en un directorio de salida

    ATRIBUTOS:
        output_dir (Path): carpeta destino (se crea si no existe)
        verbose (bool): mensajes de progreso en el log
    """

    def __init__(self, output_dir: Union[str, Path], verbose: bool = True):
        self.output_dir = Path(output_dir)
        self.verbose = verbose

    def _log(self, message: str, level=logging.INFO):
        if self.verbose:
            logger.log(level, message)

    def ensure_directory(self) -> Path:
        """
        Raises:
            ReportIOError: si la carpeta no se puede crear
        """
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ReportIOError(f"❌ No se pudo crear {self.output_dir}: {e}") from e
        return self.output_dir

    def write(self, name: str, frame: Optional[pd.DataFrame]) -> Path:
        """
        Escribe ``<name>.csv`` con las columnas documentadas en su orden fijo

        Args:
            name: uno de REPORT_COLUMNS
            frame: tabla a escribir (columnas extra se descartan)

        Returns:
            Path: ruta del archivo escrito

        Raises:
            KeyError: si el nombre de reporte no existe
            ReportIOError: si falla la escritura
        """
        columns = list(REPORT_COLUMNS[name])
        if frame is None:
            frame = pd.DataFrame(columns=columns)
        else:
            frame = frame.reindex(columns=columns)
        output_path = self.output_dir / f"{name}.csv"
        self._log(f"💾 Guardando {output_path.name} ({len(frame):,} filas)")
        try:
            frame.to_csv(output_path, index=False, float_format=FLOAT_FORMAT,
                         encoding='utf-8', lineterminator='\n')
        except OSError as e:
            raise ReportIOError(f"❌ No se pudo escribir {output_path}: {e}") from e
        return output_path


def emit_reports(results: ReportBundle, out_dir: Union[str, Path],
                 names: Optional[Sequence[str]] = None, verbose: bool = True) -> Dict[str, Path]:
    """
    Escribe los reportes CSV (los cinco por defecto)

    Args:
        results: tablas disponibles
        out_dir: carpeta de salida
        names: subconjunto de REPORT_COLUMNS a escribir

    Returns:
        dict: nombre de reporte → ruta

    Raises:
        ReportIOError: ante cualquier fallo de E/S (código de salida 4)

    Ejemplo:
        >>> emit_reports(ReportBundle(), 'reports')
        {'study': PosixPath('reports/study.csv'), ...}
    """
    writer = ReportWriter(out_dir, verbose=verbose)
    writer.ensure_directory()
    written = {name: writer.write(name, getattr(results, name)) for name in (names or REPORT_COLUMNS)}
    logger.info(f"✅ Reportes escritos en {writer.output_dir}")
    return written


__all__ = [
    'FLOAT_FORMAT',
    'REPORT_COLUMNS',
    'ReportBundle',
    'ReportWriter',
    'emit_reports',
]
