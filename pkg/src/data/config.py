"""
Configuration Module
====================
Raíz del proyecto, lectura del JSON de configuración y validación del
esquema hacia un ProblemConfig inmutable.

PROPÓSITO:
    Un único punto donde se decide qué problema se resuelve: coeficientes,
    costes, malla, controles, semillas y presupuestos. El resto del proyecto
    recibe objetos ya validados (CoefficientSet, CostSpec, DiscreteProblem)
    construidos desde aquí.

REGLAS:
    - schema_version debe ser 1.
    - Las claves desconocidas se rechazan en todos los niveles.
    - Semilla: --seed > variable DELAYMCA_SEED > campo "seed" del archivo.

UBICACIÓN EN EL PROYECTO:
    src/data/config.py
"""

# ============================================================
# SECCIÓN 1: IMPORTACIONES
# ============================================================

import json
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import chardet

from src.chain.kernel import analytic_h_star
from src.errors import ConfigParseError, ConfigSchemaError, InvalidInputError
from src.model.coefficients import (
    CoefficientSet,
    ConstantDiffusion,
    ControlFactor,
    ControlPoint,
    ControlSet,
    CostSpec,
    LinearFunctional,
    LipschitzDiffusion,
    PathologicalDiffusion,
    QuadraticRunningCost,
    QuadraticTerminalCost,
    SaturatedLinearDrift,
    WeightFunction,
)
from src.model.paths import InitialSegment, TimeGrid
from src.solver.dynamic_programming import BOUNDARY_MODES, DEFAULT_STATE_BUDGET, DiscreteProblem

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SEED_ENVIRONMENT_VARIABLE = 'DELAYMCA_SEED'


# ============================================================
# Detección automática de la raíz del proyecto
# ============================================================

def find_project_root(start_path: Optional[Path] = None) -> Path:
    """
    Encuentra la raíz del proyecto buscando hacia arriba

    La raíz se identifica por tener alguno de estos archivos/carpetas:
    - .git/
    - requirements.txt
    - setup.py
    - README.md

    Args:
        start_path: Punto de inicio (default: ubicación de este archivo)

    Returns:
        Path: Ruta de la raíz del proyecto
    """
    if start_path is None:
        # Este archivo está en: proyecto/src/data/config.py
        start_path = Path(__file__).resolve().parent

    current = start_path
    root_markers = ['.git', 'requirements.txt', 'setup.py', 'README.md']

    # Sube un máximo de 5 niveles
    for _ in range(5):
        for marker in root_markers:
            if (current / marker).exists():
                logger.debug(f"✅ Raíz del proyecto detectada: {current} (marcador {marker})")
                return current
        parent = current.parent
        if parent == current:
            break
        current = parent

    fallback = Path(__file__).resolve().parent.parent.parent
    logger.warning(f"⚠️ No se encontró marcador de raíz. Usando: {fallback}")
    return fallback


PROJECT_ROOT_FOLDER = find_project_root()
CONFIG_DIRECTORY = PROJECT_ROOT_FOLDER / 'config'
DEFAULT_CONFIG_PATH = CONFIG_DIRECTORY / 'project_config.json'


# ============================================================
# Carga del JSON
# ============================================================

def _detect_encoding(config_path: Path) -> str:
    """Encoding del archivo con chardet; utf-8 si la detección no es concluyente"""
    raw = config_path.read_bytes()
    result = chardet.detect(raw)
    encoding = result.get('encoding') or 'utf-8'
    # ascii es subconjunto de utf-8
    if encoding.lower() == 'ascii':
        encoding = 'utf-8'
    logger.debug(f"🔤 Encoding detectado: {encoding} ({(result.get('confidence') or 0):.1%} confianza)")
    return encoding


def load_config_json(config_path: Optional[Path] = None) -> Dict[str, Any]:
    """
    Carga la configuración desde el archivo JSON

    Args:
        config_path: Ruta al JSON (default: config/project_config.json)

    Returns:
        dict: Configuración cargada sin validar

    Raises:
        ConfigParseError: si el archivo no existe, no se puede leer o no es JSON
    """
    config_path = Path(config_path) if config_path is not None else DEFAULT_CONFIG_PATH

    if not config_path.exists():
        raise ConfigParseError(
            f"\n{'=' * 70}\n"
            f"❌ NO SE ENCONTRÓ EL ARCHIVO DE CONFIGURACIÓN\n"
            f"{'=' * 70}\n\n"
            f"📍 Se esperaba en: {config_path}\n\n"
            f"🔧 SOLUCIÓN:\n"
            f"1. Pasa la ruta con --config\n"
            f"2. O copia config/project_config.json y ajústalo\n\n"
            f"💡 Ver esquema en: config/README.md\n"
            f"{'=' * 70}\n"
        )

    try:
        encoding = _detect_encoding(config_path)
        with open(config_path, 'r', encoding=encoding) as f:
            config = json.load(f)
    except (OSError, UnicodeDecodeError, LookupError) as e:
        raise ConfigParseError(f"❌ No se pudo leer {config_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigParseError(
            f"\n{'=' * 70}\n"
            f"❌ ERROR EN EL ARCHIVO JSON\n"
            f"{'=' * 70}\n\n"
            f"📍 Archivo: {config_path}\n"
            f"❌ Error: {e}\n\n"
            f"🔧 SOLUCIÓN:\n"
            f"1. Verifica que el JSON tenga formato correcto\n"
            f"2. Verifica comas, comillas y llaves\n\n"
            f"{'=' * 70}\n"
        ) from e

    if not isinstance(config, dict):
        raise ConfigParseError(f"❌ {config_path} debe contener un objeto JSON, no {type(config).__name__}")
    logger.info(f"✅ Configuración cargada desde: {config_path.name}")
    return config


# ============================================================
# Helpers de validación
# ============================================================

def _schema_error(field_name: str, problem: str) -> ConfigSchemaError:
    return ConfigSchemaError(
        f"\n{'=' * 70}\n"
        f"❌ CONFIGURACIÓN INVÁLIDA: '{field_name}'\n"
        f"{'=' * 70}\n\n"
        f"❌ {problem}\n\n"
        f"🔧 SOLUCIÓN:\n"
        f"Revisa el campo '{field_name}' en el JSON; el esquema está en config/README.md\n"
        f"{'=' * 70}\n",
        field=field_name,
    )


def _section(raw: Mapping[str, Any], key: str, where: str, allowed: Sequence[str],
             required: Sequence[str] = (), default: Optional[dict] = None) -> Dict[str, Any]:
    name = f"{where}.{key}" if where else key
    return _object(raw.get(key, default if default is not None else {}), name, allowed, required)


def _object(value: Any, name: str, allowed: Sequence[str],
            required: Sequence[str] = ()) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise _schema_error(name, f"se esperaba un objeto, recibido {type(value).__name__}")
    for k in value:
        if k not in allowed:
            raise _schema_error(f"{name}.{k}", f"clave desconocida (permitidas: {', '.join(allowed)})")
    for k in required:
        if k not in value:
            raise _schema_error(f"{name}.{k}", "campo requerido ausente")
    return value


def _number(value: Any, field_name: str, minimum: Optional[float] = None,
            strict: bool = False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise _schema_error(field_name, f"se esperaba un número finito, recibido {value!r}")
    if minimum is not None and (value <= minimum if strict else value < minimum):
        relation = '>' if strict else '≥'
        raise _schema_error(field_name, f"debe ser {relation} {minimum}, recibido {value}")
    return float(value)


def _integer(value: Any, field_name: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise _schema_error(field_name, f"se esperaba un entero, recibido {value!r}")
    if value < minimum:
        raise _schema_error(field_name, f"debe ser ≥ {minimum}, recibido {value}")
    return value


def _family(section: Dict[str, Any], field_name: str, families: Sequence[str], default: str) -> str:
    family = section.get('family', default)
    if family not in families:
        raise _schema_error(f"{field_name}.family",
                            f"familia desconocida '{family}' (disponibles: {', '.join(families)})")
    return family


def _family_keys(section: Dict[str, Any], field_name: str, family: str, allowed: Sequence[str]) -> None:
    for key in section:
        if key not in allowed:
            raise _schema_error(f"{field_name}.{key}",
                                f"no aplica a la familia '{family}' (permitidas: {', '.join(allowed)})")


def _linear_functional(section: Dict[str, Any], field_name: str) -> LinearFunctional:
    lags = []
    for i, item in enumerate(section.get('lags', [])):
        item = _object(item, f"{field_name}.lags[{i}]", ('time', 'gain'), ('time', 'gain'))
        lags.append((_number(item['time'], f"{field_name}.lags[{i}].time"),
                     _number(item['gain'], f"{field_name}.lags[{i}].gain")))
    weights = []
    for i, item in enumerate(section.get('weights', [])):
        item = _object(item, f"{field_name}.weights[{i}]", ('times', 'values', 'gain'), ('times', 'values'))
        times = tuple(_number(t, f"{field_name}.weights[{i}].times") for t in item['times'])
        values = tuple(_number(v, f"{field_name}.weights[{i}].values") for v in item['values'])
        if not times or len(times) != len(values):
            raise _schema_error(f"{field_name}.weights[{i}]", "times y values deben tener el mismo largo (≥ 1)")
        gain = _number(item.get('gain', 1.0), f"{field_name}.weights[{i}].gain")
        weights.append((WeightFunction(times, values), gain))
    offset = _number(section.get('offset', 0.0), f"{field_name}.offset")
    return LinearFunctional(offset=offset, lags=tuple(lags), weights=tuple(weights))


# ============================================================
# CLASE: ProblemConfig
# ============================================================

DRIFT_KEYS = ('family', 'offset', 'lags', 'weights', 'saturation', 'control_factor', 'control_scale')
DIFFUSION_KEYS = ('family', 'value', 'floor', 'cap', 'offset', 'lags', 'weights')
DIFFUSION_FAMILY_KEYS = {
    'constant': ('family', 'value'),
    'lipschitz': ('family', 'floor', 'cap', 'offset', 'lags', 'weights'),
    'pathological': ('family', 'floor', 'cap'),
}
COST_KEYS = ('running', 'terminal', 'discount', 'interval', 'horizon')
INITIAL_KEYS = ('family', 'value', 'intercept', 'slope', 'time', 'before', 'after')
INITIAL_FAMILY_KEYS = {
    'constant': ('family', 'value'),
    'linear': ('family', 'intercept', 'slope'),
    'step': ('family', 'time', 'before', 'after'),
}
TOP_LEVEL_KEYS = (
    'schema_version', 'grid', 'drift', 'diffusion', 'bound', 'lipschitz', 'controls',
    'cost', 'initial', 'boundary_mode', 'seed', 'workers', 'paths', 'state_budget',
    'output_dir', 'assumption_samples',
)


@dataclass(frozen=True)
class ProblemConfig:
    """
    Configuración validada con valores por defecto aplicados

    Las secciones de familias se guardan como diccionarios ya revisados y
    se convierten a objetos del modelo con los métodos build_*.
    """

    delay: float
    degrees: Tuple[int, ...]
    drift: Dict[str, Any]
    diffusion: Dict[str, Any]
    cost: Dict[str, Any]
    initial: Dict[str, Any]
    controls: Tuple[Tuple[str, float], ...] = (('0', 0.0),)
    bound: Optional[int] = None
    lipschitz: Optional[float] = None
    boundary_mode: str = 'interior'
    seed: int = 0
    workers: int = 1
    paths: int = 10_000
    state_budget: int = DEFAULT_STATE_BUDGET
    output_dir: Path = Path('reports')
    assumption_samples: int = 200
    schema_version: int = SCHEMA_VERSION
    source: Optional[Path] = field(default=None, compare=False)

    # --------------------------------------------------------
    # Constructores de objetos del modelo
    # --------------------------------------------------------

    def build_controls(self) -> ControlSet:
        return ControlSet(tuple(ControlPoint(label, value) for label, value in self.controls))

    def build_drift(self) -> SaturatedLinearDrift:
        d = self.drift
        return SaturatedLinearDrift(
            linear=_linear_functional(d, 'drift'),
            saturation=float(d.get('saturation', 1.0)),
            control_factor=ControlFactor(d.get('control_factor', 'unit'), float(d.get('control_scale', 1.0))),
        )

    def build_diffusion(self):
        d = self.diffusion
        family = d.get('family', 'constant')
        if family == 'constant':
            return ConstantDiffusion(float(d.get('value', 1.0)))
        if family == 'lipschitz':
            linear = _linear_functional(d, 'diffusion')
            if not linear.lags and not linear.weights:
                linear = LinearFunctional(offset=linear.offset, lags=((0.0, 1.0),))
            return LipschitzDiffusion(floor=float(d['floor']), cap=float(d['cap']), linear=linear)
        return PathologicalDiffusion(floor=float(d['floor']), cap=float(d['cap']), r=self.delay)

    def build_coefficients(self) -> CoefficientSet:
        return CoefficientSet.from_families(
            self.build_drift(), self.build_diffusion(), self.build_controls(),
            self.delay, K=self.bound, K_L=self.lipschitz,
        )

    def build_cost(self) -> CostSpec:
        c = self.cost
        running = c['running']
        terminal = c['terminal']
        return CostSpec(
            running=QuadraticRunningCost(float(running.get('constant', 1.0)),
                                         float(running.get('state_weight', 0.0)),
                                         float(running.get('control_weight', 0.0))),
            terminal=QuadraticTerminalCost(float(terminal.get('constant', 0.0)),
                                           float(terminal.get('state_weight', 0.0))),
            discount=float(c.get('discount', 0.0)),
            interval=tuple(c['interval']),
            horizon=float(c['horizon']),
        )

    def build_initial(self) -> InitialSegment:
        i = self.initial
        family = i.get('family', 'constant')
        if family == 'constant':
            return InitialSegment.constant(float(i.get('value', 0.0)))
        if family == 'linear':
            return InitialSegment.affine(float(i.get('intercept', 0.0)), float(i.get('slope', 0.0)))
        return InitialSegment.step(self.delay, float(i['time']), float(i.get('before', 0.0)),
                                   float(i['after']))

    def build_grid(self, M: int) -> TimeGrid:
        return TimeGrid(self.delay, M)

    def build_problem(self, M: int) -> DiscreteProblem:
        """Problema discreto de grado M con todos los datos de la configuración"""
        return DiscreteProblem(
            coeffs=self.build_coefficients(),
            cost=self.build_cost(),
            grid=self.build_grid(M),
            initial=self.build_initial(),
            boundary_mode=self.boundary_mode,
            state_budget=self.state_budget,
        )

    def with_overrides(self, **changes) -> 'ProblemConfig':
        values = {f: getattr(self, f) for f in self.__dataclass_fields__}
        values.update(changes)
        return ProblemConfig(**values)


# ============================================================
# Validación del esquema
# ============================================================

def _parse_controls(raw: Any) -> Tuple[Tuple[str, float], ...]:
    if raw is None:
        return (('0', 0.0),)
    if not isinstance(raw, list) or not raw:
        raise _schema_error('controls', "se esperaba una lista no vacía")
    parsed = []
    for i, item in enumerate(raw):
        if isinstance(item, dict):
            item = _object(item, f"controls[{i}]", ('label', 'value'), ('value',))
            value = _number(item['value'], f"controls[{i}].value")
            label = str(item.get('label', f"{value:g}"))
        else:
            value = _number(item, f"controls[{i}]")
            label = f"{value:g}"
        parsed.append((label, value))
    labels = [label for label, _ in parsed]
    if len(set(labels)) != len(labels):
        raise _schema_error('controls', f"etiquetas duplicadas: {labels}")
    return tuple(parsed)


def _validate_drift(raw: Dict[str, Any]) -> Dict[str, Any]:
    drift = _section(raw, 'drift', '', DRIFT_KEYS, default={'family': 'saturated_linear'})
    _family(drift, 'drift', ('saturated_linear',), 'saturated_linear')
    _linear_functional(drift, 'drift')
    _number(drift.get('saturation', 1.0), 'drift.saturation', minimum=0.0)
    _number(drift.get('control_scale', 1.0), 'drift.control_scale')
    if drift.get('control_factor', 'unit') not in ('unit', 'payload'):
        raise _schema_error('drift.control_factor', "debe ser 'unit' o 'payload'")
    return drift


def _validate_diffusion(raw: Dict[str, Any]) -> Dict[str, Any]:
    diffusion = _section(raw, 'diffusion', '', DIFFUSION_KEYS, default={'family': 'constant'})
    family = _family(diffusion, 'diffusion', ('constant', 'lipschitz', 'pathological'), 'constant')
    _family_keys(diffusion, 'diffusion', family, DIFFUSION_FAMILY_KEYS[family])
    if family == 'constant':
        _number(diffusion.get('value', 1.0), 'diffusion.value', minimum=0.0, strict=True)
    else:
        for key in ('floor', 'cap'):
            if key not in diffusion:
                raise _schema_error(f"diffusion.{key}", f"requerido por la familia '{family}'")
        _number(diffusion['floor'], 'diffusion.floor', minimum=0.0, strict=True)
        _number(diffusion['cap'], 'diffusion.cap', minimum=0.0)
        if family == 'lipschitz':
            _linear_functional(diffusion, 'diffusion')
    return diffusion


def _validate_cost(raw: Dict[str, Any]) -> Dict[str, Any]:
    cost = _section(raw, 'cost', '', COST_KEYS, required=('interval', 'horizon'))
    interval = cost['interval']
    if not (isinstance(interval, list) and len(interval) == 2):
        raise _schema_error('cost.interval', "se esperaba [lo, hi]")
    lo = _number(interval[0], 'cost.interval[0]')
    hi = _number(interval[1], 'cost.interval[1]')
    if not lo < hi:
        raise _schema_error('cost.interval', f"se necesita lo < hi, recibido [{lo}, {hi}]")
    _number(cost['horizon'], 'cost.horizon', minimum=0.0, strict=True)
    _number(cost.get('discount', 0.0), 'cost.discount', minimum=0.0)
    running = _section(cost, 'running', 'cost', ('family', 'constant', 'state_weight', 'control_weight'),
                       default={'family': 'quadratic'})
    terminal = _section(cost, 'terminal', 'cost', ('family', 'constant', 'state_weight'),
                        default={'family': 'quadratic'})
    for name, section in (('cost.running', running), ('cost.terminal', terminal)):
        _family(section, name, ('quadratic',), 'quadratic')
        for key, value in section.items():
            if key != 'family':
                _number(value, f"{name}.{key}", minimum=0.0)
    return {**cost, 'running': running, 'terminal': terminal}


def _validate_initial(raw: Dict[str, Any], delay: float) -> Dict[str, Any]:
    initial = _section(raw, 'initial', '', INITIAL_KEYS, default={'family': 'constant'})
    family = _family(initial, 'initial', ('constant', 'linear', 'step'), 'constant')
    _family_keys(initial, 'initial', family, INITIAL_FAMILY_KEYS[family])
    for key, value in initial.items():
        if key != 'family':
            _number(value, f"initial.{key}")
    if family == 'step':
        for key in ('time', 'after'):
            if key not in initial:
                raise _schema_error(f"initial.{key}", "requerido por la familia 'step'")
        if not -delay < initial['time'] <= 0:
            raise _schema_error('initial.time', f"el salto debe estar en (−{delay}, 0]")
    return initial


def _resolve_output_dir(value: Any, base: Path) -> Path:
    if not isinstance(value, str) or not value:
        raise _schema_error('output_dir', f"se esperaba una ruta no vacía, recibido {value!r}")
    path = Path(value)
    return path if path.is_absolute() else base / path


def validate_config(raw: Mapping[str, Any], base_dir: Optional[Path] = None) -> ProblemConfig:
    """
    Valida un diccionario crudo y aplica los valores por defecto

    Args:
        raw: contenido del JSON
        base_dir: directorio para resolver output_dir relativo (default: raíz del proyecto)

    Returns:
        ProblemConfig: configuración validada

    Raises:
        ConfigSchemaError: clave desconocida, campo ausente o valor fuera de rango;
                           el atributo ``field`` nombra el campo
    """
    base_dir = base_dir or PROJECT_ROOT_FOLDER
    for key in raw:
        if key not in TOP_LEVEL_KEYS:
            raise _schema_error(key, f"clave desconocida (permitidas: {', '.join(TOP_LEVEL_KEYS)})")

    version = raw.get('schema_version', SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise _schema_error('schema_version', f"versión {version!r} no soportada (se espera {SCHEMA_VERSION})")

    grid = _section(raw, 'grid', '', ('delay', 'degrees'), required=('delay', 'degrees'))
    delay = _number(grid['delay'], 'grid.delay', minimum=0.0, strict=True)
    degrees = grid['degrees']
    if not isinstance(degrees, list) or not degrees:
        raise _schema_error('grid.degrees', "se esperaba una lista no vacía de enteros positivos")
    degrees = tuple(sorted({_integer(M, 'grid.degrees', minimum=1) for M in degrees}))

    boundary_mode = raw.get('boundary_mode', 'interior')
    if boundary_mode not in BOUNDARY_MODES:
        raise _schema_error('boundary_mode', f"'{boundary_mode}' no es uno de {BOUNDARY_MODES}")

    bound = raw.get('bound')
    if bound is not None:
        bound = _integer(bound, 'bound', minimum=1)
    lipschitz = raw.get('lipschitz')
    if lipschitz is not None:
        lipschitz = _number(lipschitz, 'lipschitz', minimum=0.0)

    config = ProblemConfig(
        delay=delay,
        degrees=degrees,
        drift=_validate_drift(raw),
        diffusion=_validate_diffusion(raw),
        cost=_validate_cost(raw),
        initial=_validate_initial(raw, delay),
        controls=_parse_controls(raw.get('controls')),
        bound=bound,
        lipschitz=lipschitz,
        boundary_mode=boundary_mode,
        seed=_integer(raw.get('seed', 0), 'seed'),
        workers=_integer(raw.get('workers', 1), 'workers', minimum=1),
        paths=_integer(raw.get('paths', 10_000), 'paths', minimum=2),
        state_budget=_integer(raw.get('state_budget', DEFAULT_STATE_BUDGET), 'state_budget', minimum=1),
        output_dir=_resolve_output_dir(raw.get('output_dir', 'reports'), base_dir),
        assumption_samples=_integer(raw.get('assumption_samples', 200), 'assumption_samples', minimum=1),
        schema_version=SCHEMA_VERSION,
    )
    try:
        config.build_coefficients()
        config.build_cost()
    except InvalidInputError as e:
        raise ConfigSchemaError(str(e)) from e
    return config


def warn_infeasible_degrees(config: ProblemConfig) -> Tuple[int, ...]:
    """
    Grados M con r/M > h*, la cota suficiente que revisa validate_kernel

    Returns:
        tuple: grados en riesgo (también se registran como advertencia)
    """
    h_star = analytic_h_star(config.build_coefficients())
    risky = tuple(M for M in config.degrees if config.delay / M > h_star)
    for M in risky:
        logger.warning(
            f"⚠️ M={M}: h={config.delay / M:.6g} > h*={h_star:.6g}; "
            f"p^M puede ser infactible (ejecuta 'check' para validate_kernel)"
        )
    return risky


def load_config(config_path: Optional[Path] = None) -> ProblemConfig:
    """
    Carga y valida la configuración

    Args:
        config_path: Ruta al JSON (default: config/project_config.json)

    Returns:
        ProblemConfig: configuración con valores por defecto aplicados

    Raises:
        ConfigParseError: archivo ausente o JSON inválido
        ConfigSchemaError: violación del esquema

    Ejemplo:
        >>> config = load_config(Path('config/project_config.json'))
        >>> config.boundary_mode
        'interior'
    """
    config_path = Path(config_path) if config_path is not None else DEFAULT_CONFIG_PATH
    raw = load_config_json(config_path)
    config = validate_config(raw, base_dir=PROJECT_ROOT_FOLDER)
    config = config.with_overrides(source=config_path)
    warn_infeasible_degrees(config)
    return config


def resolve_seed(cli_seed: Optional[int], config_seed: int,
                 environ: Optional[Mapping[str, str]] = None) -> int:
    """
    Semilla efectiva: flag de la CLI, luego DELAYMCA_SEED, luego el archivo

    Raises:
        ConfigSchemaError: si DELAYMCA_SEED no es un entero
    """
    if cli_seed is not None:
        return int(cli_seed)
    environ = os.environ if environ is None else environ
    value = environ.get(SEED_ENVIRONMENT_VARIABLE)
    if value is not None and value.strip():
        try:
            return int(value)
        except ValueError:
            raise _schema_error(SEED_ENVIRONMENT_VARIABLE, f"no es un entero: {value!r}") from None
    return int(config_seed)


# ============================================================
# EXPORTAR
# ============================================================

__all__ = [
    'PROJECT_ROOT_FOLDER',
    'CONFIG_DIRECTORY',
    'DEFAULT_CONFIG_PATH',
    'SCHEMA_VERSION',
    'SEED_ENVIRONMENT_VARIABLE',
    'ProblemConfig',
    'find_project_root',
    'load_config_json',
    'validate_config',
    'warn_infeasible_degrees',
    'load_config',
    'resolve_seed',
]
