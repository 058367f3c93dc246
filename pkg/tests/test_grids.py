import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.errors import BadCount, EmptyWindow
from app.grids import (
    Grid, build_grid, esup_on, esup_with_argmax, refine, suffix_max, window_grid,
)
from app.weights import Domain


def test_linear_grid_example():
    grid = build_grid(Domain(1.0), 9, 'linear')
    assert grid.points == pytest.approx(np.arange(1, 10) / 10)


@pytest.mark.parametrize('mode', ['logarithmic', 'linear', 'hybrid'])
def test_grid_is_increasing_inside_domain(mode):
    grid = build_grid(Domain(2.0), 100, mode)
    assert np.all(np.diff(grid.points) > 0)
    assert grid.points[0] > 0 and grid.points[-1] < 2.0
    assert grid.domain == Domain(2.0)


def test_infinite_domain_uses_truncation():
    grid = build_grid(Domain(math.inf, 1e6), 64)
    assert grid.points[-1] < 1e6
    assert grid.points[0] == pytest.approx(1e6 * 1e-8)


def test_too_few_points():
    with pytest.raises(BadCount):
        build_grid(Domain(1.0), 7)


def test_unknown_mode():
    with pytest.raises(ValueError):
        build_grid(Domain(1.0), 16, 'cubic')


def test_grid_rejects_unsorted_points():
    with pytest.raises(ValueError):
        Grid(np.array([0.5, 0.2]), 'linear')
    with pytest.raises(BadCount):
        Grid(np.array([]), 'linear')


def test_window_grid():
    grid = window_grid(0.0, 1.0, 16)
    assert grid.points[0] == pytest.approx(1e-8)
    assert grid.points[-1] < 1.0
    inner = window_grid(1.0, 2.0, 16)
    assert np.all((inner.points > 1.0) & (inner.points < 2.0))
    with pytest.raises(EmptyWindow):
        window_grid(1.0, 1.0)


def test_esup_refines_toward_maximum():
    grid = build_grid(Domain(1.0), 9, 'linear')
    value, where = esup_with_argmax(lambda t: -(t - 0.53) ** 2, (0.0, 1.0), grid, tol=1e-14)
    assert value == pytest.approx(0.0, abs=1e-6)
    assert where == pytest.approx(0.53, abs=1e-3)


def test_esup_on_empty_window():
    grid = build_grid(Domain(1.0), 9, 'linear')
    with pytest.raises(EmptyWindow):
        esup_on(lambda t: t, (0.91, 0.95), grid)


def test_esup_nan_treated_as_minus_infinity():
    grid = build_grid(Domain(1.0), 9, 'linear')
    f = lambda t: np.where(t < 0.5, np.nan, 1.0 - t)
    assert esup_on(f, (0.0, 1.0), grid) == pytest.approx(0.5, abs=1e-6)


@settings(max_examples=25, deadline=None)
@given(shift=st.floats(0.05, 0.95))
def test_esup_not_below_grid_maximum(shift):
    grid = build_grid(Domain(1.0), 32, 'linear')
    f = lambda t: np.exp(-np.abs(t - shift))
    assert esup_on(f, (0.0, 1.0), grid) >= np.max(f(grid.points))


def test_refine_adds_points_on_both_sides():
    grid = build_grid(Domain(1.0), 9, 'linear')
    finer = refine(grid, 0.5, 4)
    assert len(finer) == len(grid) + 8
    assert np.sum((finer.points > 0.4) & (finer.points < 0.6)) == 9


def test_suffix_max():
    assert suffix_max(np.array([1.0, 3.0, 2.0, 0.5])).tolist() == [3.0, 3.0, 2.0, 0.5]
