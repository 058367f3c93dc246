"""
Модуль запусков и отчётов.

Связывает конфигурацию запуска с вычислительными модулями и сохраняет
результаты: JSON-отчёт одного запуска, сводную CSV-таблицу пакета
запусков, CSV с кривыми U, Δ, V, W, φ, σ и таблицу покрывающей
последовательности.

Основные функции:
- run_embed_check(): полный расчёт для одной конфигурации
- run_suite(): пакет конфигураций, одна строка на запуск
- export_curves(): значения вспомогательных функций на сетке
- covering_table(): точки x_k, зоны Z1/Z2 и значения φ, U^p
- discrete_summary(): D, перебор и их отношение для последовательностей из CSV

Пример использования:
    >>> cfg = parse_config(TEMPLATE)
    >>> report = run_embed_check(cfg)
    >>> report.case.tag
    'i'
"""
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from app import map_in_scope, settings_scope
from app.covering import CoveringSequence
from app.discrete import discrete_hardy_report
from app.errors import EmbeddingError, EmptyBatch, IoError
from app.functionals import EmbeddingReport, ParamTriple, Profile, embedding_constant_bounds
from app.grids import Grid
from app.run_config import RunConfig, read_config
from app.weights import WeightSet

logger = logging.getLogger(__name__)

B_COLUMNS = [f'B{i}' for i in range(1, 9)]
SUITE_COLUMNS = ['name', 'case', *B_COLUMNS, 'b_sum', 'c_estimate', 'ratio', 'flags', 'error']
CURVE_COLUMNS = ['t', 'U', 'Delta', 'V', 'W', 'phi', 'sigma']


def jsonable(value: Any) -> Any:
    """Замена inf/nan и numpy-типов на значения, допустимые в JSON."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in value]
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    return value


def write_json(data: Dict[str, Any], path: str) -> str:
    """Запись отчёта с сортировкой ключей; одинаковые данные дают одинаковые байты."""
    text = json.dumps(jsonable(data), sort_keys=True, ensure_ascii=False, indent=2)
    try:
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text + '\n')
    except OSError as e:
        raise IoError(f"Не удалось записать отчёт {path}: {e}") from e
    logger.info(f'Отчёт сохранён: {path}')
    return path


def write_csv(df: pd.DataFrame, path: str) -> None:
    try:
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        df.to_csv(path, index=False, na_rep='')
    except OSError as e:
        raise IoError(f"Не удалось записать CSV {path}: {e}") from e
    logger.info(f'Таблица сохранена: {path} ({len(df)} строк)')


def run_embed_check(cfg: RunConfig, path: Optional[str] = None) -> EmbeddingReport:
    """Полный расчёт для одной конфигурации: приведение, случай, B, оракул, отчёт.

    Args:
        cfg (RunConfig): Проверенная конфигурация
        path (str): Куда записать JSON-отчёт; None — не записывать

    Returns:
        EmbeddingReport: Отчёт с B, суммой, оценкой C и провенансом

    Raises:
        OutOfScope: p > q
        NonFinitePhi: φ не конечна
    """
    with settings_scope(cfg.settings()):
        params, ws = cfg.problem()
        grid, inner_grid = cfg.build_grids()
        logger.info(f"Запуск '{cfg.name}': p={params.p:g}, q={params.q:g}, r={params.r:g}, L={cfg.L:g}")
        report = embedding_constant_bounds(
            params, ws, grid, cfg.budget(), inner_grid=inner_grid, seed=cfg.seed, jobs=cfg.jobs,
            check_alternates=True,
        )
    report.provenance.update({'name': cfg.name, 'a': cfg.a, 'L': cfg.L, 'original': cfg.original})
    if path is not None:
        write_json(report.to_dict(), path)
    return report


def _suite_row(cfg: RunConfig) -> Dict[str, Any]:
    row: Dict[str, Any] = {'name': cfg.name}
    try:
        report = run_embed_check(cfg)
    except EmbeddingError as e:
        logger.error(f"Запуск '{cfg.name}' завершился ошибкой: {e}")
        row['error'] = f'{type(e).__name__}: {e}'
        return row
    row.update(report.b_values)
    row.update({
        'case': report.case.tag,
        'b_sum': report.b_sum,
        'c_estimate': report.c_estimate,
        'ratio': report.ratio,
        'flags': json.dumps(jsonable(report.diagnostics), sort_keys=True, ensure_ascii=False),
        'error': '',
    })
    return row


def run_suite(configs: Sequence[RunConfig], path: Optional[str] = None, jobs: int = 1) -> pd.DataFrame:
    """Пакет запусков: одна строка на конфигурацию в порядке входа.

    Ошибка одного запуска попадает в колонку error, пакет не прерывается.

    Raises:
        EmptyBatch: пустой список конфигураций
    """
    if not configs:
        raise EmptyBatch("Пакет запусков пуст")
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = map_in_scope(pool, _suite_row, configs)
    else:
        rows = [_suite_row(cfg) for cfg in configs]

    df = pd.DataFrame(rows).reindex(columns=SUITE_COLUMNS)
    failed = int((df['error'].fillna('') != '').sum())
    logger.info(f'Пакет завершён: {len(df)} запусков, ошибок {failed}')
    if path is not None:
        write_csv(df, path)
    return df


def export_curves(params: ParamTriple, ws: WeightSet, grid: Grid, path: Optional[str] = None) -> pd.DataFrame:
    """Значения t, U, Δ, V, W, φ, σ в точках сетки; σ пуста при p ≤ r.

    Raises:
        IoError: не удалось записать файл
    """
    profile = Profile(params, ws, grid)
    t = grid.points
    df = pd.DataFrame({
        't': t,
        'U': profile.U(t),
        'Delta': profile.Delta(t),
        'V': profile.V(t),
        'W': profile.W(t),
        'phi': profile.phi(t),
    })
    if params.r < params.p:
        df['sigma'] = profile.sigma(t)
    else:
        df['sigma'] = np.nan
    if path is not None:
        write_csv(df[CURVE_COLUMNS], path)
    return df[CURVE_COLUMNS]


def covering_table(cs: CoveringSequence, profile: Profile) -> pd.DataFrame:
    """Таблица покрывающей последовательности: k, x_k, зона отрезка [x_{k-1}, x_k], φ(x_k), U^p(x_k)."""
    p = profile.params.p
    ks = np.arange(cs.N, cs.M + 1)
    x = cs.points
    inside = (x > 0) & (x <= cs.length)
    phi = np.full(x.shape, np.nan)
    rho = np.full(x.shape, np.nan)
    phi[inside] = profile.phi(x[inside])
    rho[inside] = profile.U(x[inside]) ** p
    return pd.DataFrame({
        'k': ks,
        'x': x,
        'zone': [cs.zone(int(k)) or '' for k in ks],
        'phi': phi,
        'U_p': rho,
    })


def discrete_summary(a: np.ndarray, b: np.ndarray, params: ParamTriple, trials: Optional[int] = None,
                     seed: Optional[int] = None) -> Dict[str, Any]:
    """D по явной формуле, нижняя оценка перебором и отношение перебор/D."""
    report = discrete_hardy_report(a, b, params, trials=trials, seed=seed)
    return {
        'D': report.rhs,
        'bruteforce': report.lhs,
        'ratio': report.ratio,
        'witness': report.witness.values.tolist(),
        'params': {'p': params.p, 'q': params.q, 'r': params.r},
    }


def collect_configs(paths: List[str]) -> List[RunConfig]:
    """Чтение конфигураций пакета; файлы читаются в переданном порядке."""
    return [read_config(path) for path in paths]
