import math

import pytest

from app import DEFAULTS
from app.errors import ConfigError
from app.functionals import ParamTriple
from app.run_config import TEMPLATE, dump_config, parse_config, read_config, with_overrides

PARAMS_BLOCK = '[params]\np = 1.0\nq = 1.0\nr = 1.0\n'

ORIGINAL_TEXT = """\
[run]
name = "orig"
L = 1.0

[original]
r1 = 2.0
q1 = 4.0
r2 = 2.0
q2 = 6.0

[weights.w1]
kind = "power"
alpha = 0.5

[weights.w2]
kind = "power"
alpha = 0.0

[weights.delta1]
kind = "power"
alpha = 0.0

[weights.delta2]
kind = "power"
alpha = 0.5
"""


def line_of(text, prefix):
    return next(number for number, line in enumerate(text.splitlines(), start=1) if line.startswith(prefix))


def test_template_parses():
    cfg = parse_config(TEMPLATE)
    params, ws = cfg.problem()
    assert params == ParamTriple(1.0, 1.0, 1.0)
    assert ws.domain.L == 1.0
    assert cfg.a == 109.0
    assert cfg.grid['n'] == 2048 and cfg.grid['mode'] == 'logarithmic'
    assert set(cfg.settings()) <= set(DEFAULTS)


def test_dump_and_parse_back():
    cfg = parse_config(TEMPLATE)
    assert parse_config(dump_config(cfg)) == cfg


def test_original_block_is_reduced():
    cfg = parse_config(ORIGINAL_TEXT)
    params, ws = cfg.problem()
    assert params == ParamTriple(2.0, 3.0, 1.0)
    assert ws.v.spec()['alpha'] == 0.5
    assert parse_config(dump_config(cfg)) == cfg


def test_both_or_neither_exponent_tables():
    with pytest.raises(ConfigError) as both:
        parse_config(TEMPLATE + '\n[original]\nr1 = 1.0\nq1 = 1.0\nr2 = 1.0\nq2 = 1.0\n')
    assert both.value.field == 'params'
    with pytest.raises(ConfigError) as neither:
        parse_config(TEMPLATE.replace(PARAMS_BLOCK, ''))
    assert neither.value.field == 'params'


def test_bad_exponent_reports_field_and_line():
    text = TEMPLATE.replace('p = 1.0', 'p = -1.0')
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.field == 'params.p'
    assert exc.value.line == line_of(text, 'p = -1.0')


def test_toml_syntax_error_reports_line():
    text = '[run]\nname = "x"\nL = \n'
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.line == 3


def test_bad_weight_reports_weight_name():
    text = TEMPLATE.replace('[weights.u]\nkind = "power"\nalpha = 0.0', '[weights.u]\nkind = "power"\nalpha = -1.0')
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.field == 'weights.u'
    assert exc.value.line == line_of(text, '[weights.u]')


def test_missing_weight():
    text = TEMPLATE.replace('[weights.w]\nkind = "power"\nalpha = 0.0\n', '')
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.field == 'weights.w'


@pytest.mark.parametrize('old, new, field', [
    ('jobs = 1', 'jobs = 1\nthreads = 4', 'run.threads'),
    ('a = 109.0', 'a = 1.0', 'covering.a'),
    ('n = 2048', 'n = 4', 'grid.n'),
    ('mode = "logarithmic"', 'mode = "random"', 'grid.mode'),
    ('restarts = 48', 'restarts = 1.5', 'oracle.restarts'),
    ('seed = 20240501', 'seed = "abc"', 'run.seed'),
])
def test_invalid_values(old, new, field):
    with pytest.raises(ConfigError) as exc:
        parse_config(TEMPLATE.replace(old, new))
    assert exc.value.field == field


def test_unknown_table():
    with pytest.raises(ConfigError) as exc:
        parse_config(TEMPLATE + '\n[extra]\nx = 1\n')
    assert exc.value.field == 'extra'


def test_infinite_interval():
    cfg = parse_config(TEMPLATE.replace('L = 1.0', 'L = inf'))
    assert math.isinf(cfg.L)
    assert cfg.domain.infinite and cfg.domain.effective_length == cfg.l_trunc


def test_with_overrides():
    cfg = parse_config(TEMPLATE)
    changed = with_overrides(cfg, grid_n=64, a=4.0, seed=None, jobs=2)
    assert changed.grid['n'] == 64 and changed.grid['mode'] == 'logarithmic'
    assert changed.a == 4.0 and changed.jobs == 2
    assert changed.seed == cfg.seed
    assert cfg.grid['n'] == 2048


def test_read_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        read_config(str(tmp_path / 'missing.toml'))


def test_read_config_from_data(data_path):
    cfg = read_config(data_path('unit_case_i.toml'))
    assert cfg.name == 'unit_case_i'
    assert cfg.grid['n'] == 512 and cfg.oracle['restarts'] == 8
