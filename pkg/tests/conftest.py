import os

import pytest

from app import DEFAULTS
from app.functionals import ParamTriple
from app.grids import build_grid
from app.weights import Domain, WeightSet, make_weight

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'data', 'datasets_for_test')


def unit_weights(domain):
    """u = δ = v = w = 1."""
    one = make_weight({'kind': 'power', 'alpha': 0.0}, domain)
    return WeightSet(one, one, one, one)


@pytest.fixture(autouse=True)
def restore_defaults(tmp_path):
    """Каждый тест начинает с исходных DEFAULTS и своей папкой отчётов."""
    saved = dict(DEFAULTS)
    DEFAULTS['OUTPUT_FOLDER'] = str(tmp_path / 'reports')
    yield
    DEFAULTS.clear()
    DEFAULTS.update(saved)


@pytest.fixture
def unit_domain():
    return Domain(1.0)


@pytest.fixture
def unit_ws(unit_domain):
    return unit_weights(unit_domain)


@pytest.fixture
def unit_params():
    return ParamTriple(1.0, 1.0, 1.0)


@pytest.fixture
def unit_grid(unit_domain):
    return build_grid(unit_domain, 256)


@pytest.fixture
def inner_grid(unit_domain):
    return build_grid(unit_domain, 64)


@pytest.fixture
def data_path():
    return lambda name: os.path.join(DATA_DIR, name)
