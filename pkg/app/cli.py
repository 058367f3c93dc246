"""
Командная строка.

Подкоманды: init, embed-check, suite, covering, hardy-discrete, oracle, curves.
Флаги командной строки имеют приоритет над файлом конфигурации, файл —
над значениями из config.py.
"""
import functools
import json
import logging
import os

import click

from app import DEFAULTS, settings_scope, setup_logging
from app.analytics import (
    collect_configs, covering_table, discrete_summary, export_curves, jsonable,
    run_embed_check, run_suite, write_csv, write_json,
)
from app.covering import verify_covering_properties
from app.data_loader import read_sequences
from app.discrete import covering_for
from app.errors import EmbeddingError
from app.functionals import ParamTriple, Profile
from app.grids import GRID_MODES
from app.oracle import estimate_C
from app.run_config import TEMPLATE, RunConfig, read_config, with_overrides

logger = logging.getLogger(__name__)


def common_options(func):
    """Флаги, общие для подкоманд, работающих с конфигурацией."""
    options = [
        click.option('--grid-n', type=click.IntRange(min=8), default=None, help='Точек внешней сетки'),
        click.option('--grid-mode', type=click.Choice(GRID_MODES), default=None, help='Режим сетки'),
        click.option('--esup-tol', type=click.FloatRange(min=0, min_open=True), default=None,
                     help='Допуск уточнения супремумов'),
        click.option('--quad-tol', type=click.FloatRange(min=0, min_open=True), default=None,
                     help='Допуск квадратур'),
        click.option('--a', 'a', type=click.FloatRange(min=1, min_open=True), default=None,
                     help='Параметр покрывающей последовательности'),
        click.option('--seed', type=click.IntRange(min=0), default=None, help='Seed оракула'),
        click.option('--jobs', type=click.IntRange(min=1), default=None, help='Число потоков'),
        click.option('--out', type=click.Path(dir_okay=False), default=None, help='Файл результата'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def domain_errors(func):
    """Ошибки предметной области превращаются в ClickException с ненулевым кодом выхода."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except EmbeddingError as e:
            logger.error(f'{type(e).__name__}: {e}')
            raise click.ClickException(f'{type(e).__name__}: {e}') from e
    return wrapper


def _load(path: str, flags) -> RunConfig:
    cfg = with_overrides(read_config(path), **flags)
    # настройки конфигурации действуют до конца подкоманды
    click.get_current_context().with_resource(settings_scope(cfg.settings()))
    return cfg


def _output(out, cfg: RunConfig, key: str) -> str:
    return out if out else os.path.join(DEFAULTS['OUTPUT_FOLDER'], cfg.output[key])


@click.group()
@click.option('--log-file', default=None, help='Файл журнала (по умолчанию LOG_FILE из config.py)')
@click.option('-v', '--verbose', is_flag=True, help='Подробный журнал')
def cli(log_file, verbose):
    """Характеризация константы вложения обобщённых весовых пространств Лоренца."""
    setup_logging(log_file or DEFAULTS['LOG_FILE'], logging.DEBUG if verbose else logging.INFO)


@cli.command()
@click.argument('path', type=click.Path(dir_okay=False), default='run.toml')
@click.option('--force', is_flag=True, help='Перезаписать существующий файл')
def init(path, force):
    """Создать шаблон конфигурации с комментариями."""
    if os.path.exists(path) and not force:
        raise click.ClickException(f'Файл {path} уже существует (используйте --force)')
    with open(path, 'w', encoding='utf-8') as f:
        f.write(TEMPLATE)
    click.echo(f'Шаблон записан в {path}')


@cli.command('embed-check')
@click.argument('config', type=click.Path(exists=True, dir_okay=False))
@common_options
@domain_errors
def embed_check(config, out, **flags):
    """Сумма B, оценка C оракулом и их отношение для одной конфигурации."""
    cfg = _load(config, flags)
    path = _output(out, cfg, 'report')
    report = run_embed_check(cfg, path)
    click.echo(f'Случай: {report.case.tag}')
    for name, value in report.b_values.items():
        click.echo(f'  {name} = {value:.6g}')
    click.echo(f'Сумма B: {report.b_sum:.6g}')
    click.echo(f'Оценка C: {report.c_estimate:.6g}')
    if report.ratio is not None:
        click.echo(f'Отношение: {report.ratio:.4g}')
    click.echo(f'Отчёт: {path}')


@cli.command()
@click.argument('configs', nargs=-1, type=click.Path(exists=True, dir_okay=False))
@common_options
@domain_errors
def suite(configs, out, **flags):
    """Пакет конфигураций; сводная таблица CSV по строке на запуск."""
    runs = [with_overrides(cfg, **flags) for cfg in collect_configs(list(configs))]
    path = out or os.path.join(DEFAULTS['OUTPUT_FOLDER'], 'suite.csv')
    df = run_suite(runs, path, jobs=flags.get('jobs') or DEFAULTS['JOBS'])
    click.echo(df[['name', 'case', 'b_sum', 'c_estimate', 'ratio', 'error']].to_string(index=False))
    click.echo(f'Таблица: {path}')


@cli.command()
@click.argument('config', type=click.Path(exists=True, dir_okay=False))
@common_options
@domain_errors
def covering(config, out, **flags):
    """Покрывающая последовательность CS(φ, U^p, a) и проверка её свойств."""
    cfg = _load(config, flags)
    params, ws = cfg.problem()
    grid, _ = cfg.build_grids()
    profile = Profile(params, ws, grid)
    cs = covering_for(params, ws, grid, cfg.a, profile)
    status = verify_covering_properties(cs, profile.phi, lambda t: profile.U(t) ** params.p)
    table = covering_table(cs, profile)
    path = out or os.path.join(DEFAULTS['OUTPUT_FOLDER'], f'{cfg.name}_covering.csv')
    write_csv(table, path)
    click.echo(table.to_string(index=False))
    click.echo(f"Свойства: {status['status']} {status.get('message', '')}".rstrip())


@cli.command('hardy-discrete')
@click.argument('csv_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--p', 'p', type=float, required=True)
@click.option('--q', 'q', type=float, required=True)
@click.option('--r', 'r', type=float, required=True)
@click.option('--trials', type=click.IntRange(min=0), default=None, help='Случайных стартов перебора')
@click.option('--seed', type=click.IntRange(min=0), default=None)
@click.option('--out', type=click.Path(dir_okay=False), default=None)
@domain_errors
def hardy_discrete(csv_path, p, q, r, trials, seed, out):
    """D для последовательностей a, b из CSV, перебор и их отношение."""
    result = read_sequences(csv_path)
    if result['status'] != 'success':
        raise click.ClickException(result['message'])
    summary = discrete_summary(result['a'], result['b'], ParamTriple(p, q, r), trials, seed)
    click.echo(f"D = {summary['D']:.6g}")
    click.echo(f"Перебор: {summary['bruteforce']:.6g}")
    click.echo(f"Отношение: {summary['ratio']:.4g}")
    if out:
        write_json(summary, out)


@cli.command()
@click.argument('config', type=click.Path(exists=True, dir_okay=False))
@common_options
@domain_errors
def oracle(config, out, **flags):
    """Только нижняя оценка C перебором ступенчатых функций."""
    cfg = _load(config, flags)
    params, ws = cfg.problem()
    result = estimate_C(params, ws, cfg.budget(), seed=cfg.seed, jobs=cfg.jobs)
    click.echo(f'Оценка C: {result.estimate:.6g}')
    data = {
        'estimate': result.estimate,
        'witness': {'edges': result.witness.edges, 'values': result.witness.values},
        'provenance': result.provenance(),
    }
    if out:
        write_json(data, out)
    else:
        click.echo(json.dumps(jsonable(data['provenance']), sort_keys=True, ensure_ascii=False))


@cli.command()
@click.argument('config', type=click.Path(exists=True, dir_okay=False))
@common_options
@domain_errors
def curves(config, out, **flags):
    """CSV со значениями t, U, Δ, V, W, φ, σ на сетке."""
    cfg = _load(config, flags)
    params, ws = cfg.problem()
    grid, _ = cfg.build_grids()
    path = _output(out, cfg, 'curves')
    df = export_curves(params, ws, grid, path)
    click.echo(f'Записано {len(df)} строк в {path}')
