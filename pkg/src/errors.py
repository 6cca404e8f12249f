"""
Errores del proyecto
====================
Jerarquía única de excepciones. Cada clase lleva el ``exit_code`` que la CLI
(main.py) devuelve al sistema operativo.

CÓDIGOS DE SALIDA:
    0 - éxito
    1 - configuración o entrada inválida
    2 - kernel infactible (alguna rama de p^M negativa)
    3 - límite de recursos (presupuesto de estados, guardas de tamaño)
    4 - error de entrada/salida al escribir reportes
"""

from typing import Any, Optional


class DelayMcaError(Exception):
    """Base de todos los errores del proyecto"""

    exit_code = 1


# ============================================================
# Entradas y dominio
# ============================================================

class InvalidInputError(DelayMcaError, ValueError):
    """Entrada mal formada: valores no finitos, huecos, longitudes distintas"""


class DomainError(DelayMcaError, ValueError):
    """Consulta fuera del dominio de un camino o segmento"""


# ============================================================
# Configuración
# ============================================================

class ConfigError(DelayMcaError, ValueError):
    """Error genérico de configuración"""


class ConfigParseError(ConfigError):
    """El archivo JSON no se puede leer o parsear"""


class ConfigSchemaError(ConfigError):
    """El JSON es válido pero no cumple el esquema"""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class InvalidBenchmarkError(ConfigError):
    """La configuración no cumple el patrón del benchmark Browniano"""


# ============================================================
# Kernel y recursos
# ============================================================

class KernelInfeasibleError(DelayMcaError, ArithmeticError):
    """Alguna probabilidad de p^M es negativa en (ventana, control)"""

    exit_code = 2

    def __init__(self, message: str, window: Any = None,
                 control: Any = None, h: Optional[float] = None):
        super().__init__(message)
        self.window = window
        self.control = control
        self.h = h


class ResourceCapError(DelayMcaError, RuntimeError):
    """Se superó el presupuesto de transiciones expandidas"""

    exit_code = 3

    def __init__(self, message: str, layer: Optional[int] = None,
                 count: Optional[int] = None):
        super().__init__(message)
        self.layer = layer
        self.count = count


class SizeGuardError(ResourceCapError):
    """El oráculo de fuerza bruta rechaza instancias grandes"""


class MissingStateError(DelayMcaError, KeyError):
    """Una política no tiene decisión para un estado alcanzado"""

    exit_code = 3

    def __init__(self, message: str, layer: Optional[int] = None,
                 state: Any = None):
        super().__init__(message)
        self.layer = layer
        self.state = state

    def __str__(self) -> str:
        # KeyError pone comillas alrededor del mensaje
        return str(self.args[0])


# ============================================================
# Entrada / salida
# ============================================================

class ReportIOError(DelayMcaError, OSError):
    """Fallo al escribir reportes CSV"""

    exit_code = 4


__all__ = [
    'DelayMcaError',
    'InvalidInputError',
    'DomainError',
    'ConfigError',
    'ConfigParseError',
    'ConfigSchemaError',
    'InvalidBenchmarkError',
    'KernelInfeasibleError',
    'ResourceCapError',
    'SizeGuardError',
    'MissingStateError',
    'ReportIOError',
]
