"""
Конфигурация одного запуска в формате TOML.

Таблицы файла:
- [run]: имя, длина интервала L, обрезка l_trunc, seed, jobs
- [params] (p, q, r) или [original] (r1, q1, r2, q2) — ровно одна из двух
- [weights.*]: u, delta, v, w для [params]; w1, w2, delta1, delta2 для [original]
- [grid]: n, inner_n, mode, esup_tol, quad_tol
- [covering]: a
- [oracle]: restarts, iterations, pieces
- [output]: report, curves

Пример использования:
    >>> cfg = parse_config(TEMPLATE)
    >>> params, ws = cfg.problem()
    >>> params.p
    1.0
"""
import logging
import math
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

import tomli_w

from app import DEFAULTS
from app.errors import ConfigError, InadmissibleSpec
from app.functionals import OriginalParams, ParamTriple, reduce_parameters
from app.grids import GRID_MODES, MIN_POINTS, Grid, build_grid
from app.weights import Domain, WeightSet, make_weight

logger = logging.getLogger(__name__)

REDUCED_WEIGHTS = ('u', 'delta', 'v', 'w')
ORIGINAL_WEIGHTS = ('w1', 'w2', 'delta1', 'delta2')

TABLES = ('run', 'params', 'original', 'weights', 'grid', 'covering', 'oracle', 'output')

TEMPLATE = """\
# Конфигурация запуска. Все значения ниже совпадают со значениями по умолчанию
# из config.py, кроме показателей и весов.

[run]
name = "unit"
L = 1.0                 # длина интервала (0, L); inf для бесконечного
l_trunc = 1e6           # обрезка при L = inf
seed = 20240501
jobs = 1

# Приведённые показатели. Вместо [params] можно задать [original]
# с полями r1, q1, r2, q2 и весами w1, w2, delta1, delta2.
[params]
p = 1.0
q = 1.0
r = 1.0

# kind: power (alpha), powerlog (alpha, beta), piecewise (breakpoints, values),
# table (points, values); необязательный множитель scale
[weights.u]
kind = "power"
alpha = 0.0

[weights.delta]
kind = "power"
alpha = 0.0

[weights.v]
kind = "power"
alpha = 0.0

[weights.w]
kind = "power"
alpha = 0.0

[grid]
n = 2048                # точек внешней сетки, не меньше 8
inner_n = 512           # точек внутренней сетки для вложенных супремумов
mode = "logarithmic"    # logarithmic | linear | hybrid
esup_tol = 1e-6
quad_tol = 1e-9

[covering]
a = 109.0               # параметр покрывающей последовательности, a > 1

[oracle]
restarts = 48
iterations = 400
pieces = 64

[output]
report = "report.json"
curves = "curves.csv"
"""


@dataclass
class RunConfig:
    name: str
    L: float
    weights: Dict[str, Dict[str, Any]]
    params: Optional[Dict[str, float]] = None
    original: Optional[Dict[str, float]] = None
    l_trunc: float = field(default_factory=lambda: float(DEFAULTS['L_TRUNC']))
    seed: int = field(default_factory=lambda: int(DEFAULTS['SEED']))
    jobs: int = field(default_factory=lambda: int(DEFAULTS['JOBS']))
    grid: Dict[str, Any] = field(default_factory=dict)
    a: float = field(default_factory=lambda: float(DEFAULTS['COVERING_A']))
    oracle: Dict[str, int] = field(default_factory=dict)
    output: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.grid = {
            'n': int(DEFAULTS['GRID_N']),
            'inner_n': int(DEFAULTS['INNER_GRID_N']),
            'mode': DEFAULTS['GRID_MODE'],
            'esup_tol': float(DEFAULTS['ESUP_TOL']),
            'quad_tol': float(DEFAULTS['QUAD_TOL']),
            **self.grid,
        }
        self.oracle = {
            'restarts': int(DEFAULTS['ORACLE_RESTARTS']),
            'iterations': int(DEFAULTS['ORACLE_SWEEPS']),
            'pieces': int(DEFAULTS['ORACLE_PIECES']),
            **self.oracle,
        }
        self.output = {'report': 'report.json', 'curves': 'curves.csv', **self.output}

    @property
    def domain(self) -> Domain:
        return Domain(self.L, self.l_trunc)

    def problem(self) -> Tuple[ParamTriple, WeightSet]:
        """Показатели и веса приведённого неравенства."""
        domain = self.domain
        weights = {name: make_weight(spec, domain) for name, spec in self.weights.items()}
        if self.params is not None:
            return ParamTriple(**self.params), WeightSet(**weights)
        return reduce_parameters(OriginalParams(**self.original, **weights))

    def build_grids(self) -> Tuple[Grid, Grid]:
        domain = self.domain
        return (build_grid(domain, self.grid['n'], self.grid['mode']),
                build_grid(domain, self.grid['inner_n'], self.grid['mode']))

    def budget(self):
        from app.oracle import OracleBudget
        return OracleBudget(**self.oracle)

    def settings(self) -> Dict[str, Any]:
        """Переопределения настроек для settings_scope()."""
        return {
            'ESUP_TOL': self.grid['esup_tol'],
            'QUAD_TOL': self.grid['quad_tol'],
            'L_TRUNC': self.l_trunc,
            'COVERING_A': self.a,
        }

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'run': {'name': self.name, 'L': self.L, 'l_trunc': self.l_trunc,
                    'seed': self.seed, 'jobs': self.jobs},
        }
        if self.params is not None:
            data['params'] = dict(self.params)
        else:
            data['original'] = dict(self.original)
        data['weights'] = {name: dict(spec) for name, spec in self.weights.items()}
        data['grid'] = dict(self.grid)
        data['covering'] = {'a': self.a}
        data['oracle'] = dict(self.oracle)
        data['output'] = dict(self.output)
        return data


def _line_of(text: str, table: str, key: Optional[str] = None) -> Optional[int]:
    """Номер строки ключа key в таблице table (или заголовка таблицы)."""
    current = None
    header = re.compile(r'^\s*\[\s*([\w.]+)\s*\]')
    for number, line in enumerate(text.splitlines(), start=1):
        match = header.match(line)
        if match:
            current = match.group(1)
            if key is None and current == table:
                return number
            continue
        if key is not None and current == table and re.match(rf'^\s*{re.escape(key)}\s*=', line):
            return number
    return None


class _Reader:
    """Проверка значений с привязкой ошибок к полю и строке исходного текста."""

    def __init__(self, text: str, data: Dict[str, Any]):
        self.text = text
        self.data = data

    def fail(self, message: str, table: str, key: Optional[str] = None):
        name = f"{table}.{key}" if key else table
        return ConfigError(message, field=name, line=_line_of(self.text, table, key))

    def table(self, name: str, required: bool = False) -> Optional[Dict[str, Any]]:
        value = self.data.get(name)
        if value is None:
            if required:
                raise self.fail("Отсутствует обязательная таблица", name)
            return None
        if not isinstance(value, dict):
            raise self.fail("Ожидается таблица", name)
        return value

    def number(self, table: str, key: str, value: Any, low: float = 0.0, strict: bool = True,
               allow_inf: bool = False) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.fail(f"Ожидается число, получено {value!r}", table, key)
        value = float(value)
        if math.isnan(value) or (math.isinf(value) and not allow_inf):
            raise self.fail(f"Значение должно быть конечным: {value}", table, key)
        if value < low or (strict and value == low):
            sign = '>' if strict else '≥'
            raise self.fail(f"Значение должно быть {sign} {low:g}: {value}", table, key)
        return value

    def integer(self, table: str, key: str, value: Any, low: int) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.fail(f"Ожидается целое число, получено {value!r}", table, key)
        if value < low:
            raise self.fail(f"Значение должно быть не меньше {low}: {value}", table, key)
        return value

    def known(self, table: str, values: Dict[str, Any], allowed) -> None:
        for key in values:
            if key not in allowed:
                raise self.fail("Неизвестный ключ", table, key)


def parse_config(text: str) -> RunConfig:
    """Разбор и проверка конфигурации запуска.

    Raises:
        ConfigError: синтаксическая ошибка TOML или недопустимое значение;
            в исключении указаны поле и строка
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = re.search(r'line (\d+)', str(exc))
        raise ConfigError(f"Синтаксическая ошибка TOML: {exc}",
                          line=int(match.group(1)) if match else None) from exc

    reader = _Reader(text, data)
    for key in data:
        if key not in TABLES:
            raise reader.fail("Неизвестная таблица", key)

    run = reader.table('run', required=True)
    reader.known('run', run, ('name', 'L', 'l_trunc', 'seed', 'jobs'))
    name = str(run.get('name', 'run'))
    L = reader.number('run', 'L', run.get('L', 1.0), allow_inf=True)
    l_trunc = reader.number('run', 'l_trunc', run.get('l_trunc', DEFAULTS['L_TRUNC']))
    seed = reader.integer('run', 'seed', run.get('seed', DEFAULTS['SEED']), 0)
    jobs = reader.integer('run', 'jobs', run.get('jobs', DEFAULTS['JOBS']), 1)

    reduced = reader.table('params')
    original = reader.table('original')
    if (reduced is None) == (original is None):
        raise ConfigError("Нужна ровно одна из таблиц [params] и [original]",
                          field='params', line=_line_of(text, 'original') or _line_of(text, 'params'))
    if reduced is not None:
        table, keys, weight_names = 'params', ('p', 'q', 'r'), REDUCED_WEIGHTS
        block = reduced
    else:
        table, keys, weight_names = 'original', ('r1', 'q1', 'r2', 'q2'), ORIGINAL_WEIGHTS
        block = original
    reader.known(table, block, keys)
    exponents = {}
    for key in keys:
        if key not in block:
            raise reader.fail("Отсутствует показатель", table, key)
        exponents[key] = reader.number(table, key, block[key])

    domain = Domain(L, l_trunc)
    weights_table = reader.table('weights', required=True)
    weights: Dict[str, Dict[str, Any]] = {}
    for weight_name in weight_names:
        spec = weights_table.get(weight_name)
        where = f'weights.{weight_name}'
        if not isinstance(spec, dict):
            raise ConfigError("Отсутствует описание веса", field=where, line=_line_of(text, 'weights'))
        try:
            make_weight(spec, domain)
        except InadmissibleSpec as exc:
            raise ConfigError(str(exc), field=where, line=_line_of(text, where)) from exc
        weights[weight_name] = dict(spec)
    extra = set(weights_table) - set(weight_names)
    if extra:
        raise reader.fail(f"Лишние веса: {', '.join(sorted(extra))}", 'weights')

    grid_table = reader.table('grid') or {}
    reader.known('grid', grid_table, ('n', 'inner_n', 'mode', 'esup_tol', 'quad_tol'))
    grid: Dict[str, Any] = {}
    for key in ('n', 'inner_n'):
        if key in grid_table:
            grid[key] = reader.integer('grid', key, grid_table[key], MIN_POINTS)
    if 'mode' in grid_table:
        if grid_table['mode'] not in GRID_MODES:
            raise reader.fail(f"Режим сетки должен быть одним из {', '.join(GRID_MODES)}", 'grid', 'mode')
        grid['mode'] = grid_table['mode']
    for key in ('esup_tol', 'quad_tol'):
        if key in grid_table:
            grid[key] = reader.number('grid', key, grid_table[key])

    covering = reader.table('covering') or {}
    reader.known('covering', covering, ('a',))
    a = reader.number('covering', 'a', covering.get('a', DEFAULTS['COVERING_A']), low=1.0)

    oracle_table = reader.table('oracle') or {}
    reader.known('oracle', oracle_table, ('restarts', 'iterations', 'pieces'))
    oracle = {}
    for key, low in (('restarts', 0), ('iterations', 0), ('pieces', 1)):
        if key in oracle_table:
            oracle[key] = reader.integer('oracle', key, oracle_table[key], low)

    output_table = reader.table('output') or {}
    reader.known('output', output_table, ('report', 'curves'))
    output = {key: str(value) for key, value in output_table.items()}

    cfg = RunConfig(
        name=name, L=L, weights=weights,
        params=exponents if reduced is not None else None,
        original=exponents if original is not None else None,
        l_trunc=l_trunc, seed=seed, jobs=jobs, grid=grid, a=a, oracle=oracle, output=output,
    )
    logger.info(f"Конфигурация '{name}' разобрана: {table} = {exponents}")
    return cfg


def read_config(path: str) -> RunConfig:
    try:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError(f"Не удалось прочитать конфигурацию {path}: {exc}") from exc
    return parse_config(text)


def dump_config(cfg: RunConfig) -> str:
    """TOML-представление, которое parse_config() разбирает обратно в равный RunConfig."""
    return tomli_w.dumps(cfg.to_dict())


def with_overrides(cfg: RunConfig, **flags) -> RunConfig:
    """Применение флагов командной строки поверх файла; None означает «не задано»."""
    grid_keys = {'grid_n': 'n', 'grid_mode': 'mode', 'esup_tol': 'esup_tol', 'quad_tol': 'quad_tol'}
    grid = dict(cfg.grid)
    for flag, key in grid_keys.items():
        if flags.get(flag) is not None:
            grid[key] = flags[flag]
    changes: Dict[str, Any] = {'grid': grid}
    if flags.get('a') is not None:
        changes['a'] = float(flags['a'])
    if flags.get('seed') is not None:
        changes['seed'] = int(flags['seed'])
    if flags.get('jobs') is not None:
        changes['jobs'] = int(flags['jobs'])
    return replace(cfg, **changes)
