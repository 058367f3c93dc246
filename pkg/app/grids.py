"""
Сетки на (0, L) и сеточные приближения существенных супремумов.

Основные функции:
- build_grid(): логарифмическая, линейная или гибридная сетка
- window_grid(): локальная геометрическая сетка внутри окна (a, b)
- esup_on(): максимум на сетке с уточнением вокруг максимизатора
- refine(): вставка точек вокруг заданной точки

Пример использования:
    >>> grid = build_grid(Domain(1.0), 9, 'linear')
    >>> grid.points
    array([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from app import DEFAULTS
from app.errors import BadCount, EmptyWindow
from app.weights import Domain

logger = logging.getLogger(__name__)

GRID_MODES = ('logarithmic', 'linear', 'hybrid')
MIN_POINTS = 8


@dataclass(frozen=True, eq=False)
class Grid:
    points: np.ndarray
    mode: str
    domain: Optional[Domain] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size == 0:
            raise BadCount("Сетка должна быть непустым одномерным массивом")
        if np.any(np.diff(pts) <= 0) or pts[0] <= 0:
            raise ValueError("Точки сетки должны строго возрастать и быть положительными")
        pts.setflags(write=False)
        object.__setattr__(self, 'points', pts)

    def __len__(self) -> int:
        return self.points.size

    def inside(self, a: float, b: float) -> np.ndarray:
        return self.points[(self.points > a) & (self.points < b)]


def build_grid(domain: Domain, n: Optional[int] = None, mode: Optional[str] = None,
               span: Optional[float] = None) -> Grid:
    """Построение сетки из n точек в (0, L_eff).

    Args:
        domain (Domain): Интервал
        n (int): Число точек, не меньше 8
        mode (str): 'logarithmic' | 'linear' | 'hybrid'
        span (float): Относительный отступ от концов для логарифмической сетки

    Returns:
        Grid: Строго возрастающая сетка

    Raises:
        BadCount: n < 8
    """
    n = DEFAULTS['GRID_N'] if n is None else int(n)
    mode = DEFAULTS['GRID_MODE'] if mode is None else mode
    span = DEFAULTS['GRID_SPAN'] if span is None else span
    if n < MIN_POINTS:
        raise BadCount(f"Слишком мало точек сетки: {n} < {MIN_POINTS}")
    if mode not in GRID_MODES:
        raise ValueError(f"Неизвестный режим сетки: {mode}")

    length = domain.effective_length
    lo, hi = length * span, length * (1.0 - span)
    if mode == 'linear':
        points = length * np.arange(1, n + 1) / (n + 1)
    elif mode == 'logarithmic':
        points = np.geomspace(lo, hi, n)
    else:
        half = n // 2
        points = np.unique(np.concatenate([
            np.geomspace(lo, 0.5 * length, half, endpoint=False),
            np.linspace(0.5 * length, hi, n - half),
        ]))
    return Grid(points, mode, domain)


def window_grid(a: float, b: float, n: int = 64, span: Optional[float] = None) -> Grid:
    """Геометрическая сетка строго внутри (a, b); при a = 0 начинается с b·span."""
    span = DEFAULTS['GRID_SPAN'] if span is None else span
    if not b > a:
        raise EmptyWindow(f"Пустое окно ({a}, {b})")
    if a > 0:
        points = np.geomspace(a, b, n + 2)[1:-1]
    else:
        points = np.geomspace(b * span, b, n + 1)[:-1]
    points = np.unique(points[(points > a) & (points < b)])
    if points.size == 0:
        points = np.array([0.5 * (a + b)])
    return Grid(points, 'logarithmic')


def _midpoint(x: float, y: float) -> float:
    if x > 0 and y > 0 and math.isfinite(x) and math.isfinite(y):
        return math.sqrt(x * y)
    return 0.5 * (x + y)


def _evaluate(f: Callable, points: np.ndarray) -> np.ndarray:
    with np.errstate(all='ignore'):
        values = np.asarray(f(points), dtype=float)
    return np.where(np.isnan(values), -np.inf, values)


def esup_with_argmax(f: Callable, interval: Tuple[float, float], grid: Grid,
                     tol: Optional[float] = None) -> Tuple[float, float]:
    """Максимум f по точкам сетки в (a, b) и точка максимума.

    После первичного прохода вокруг текущего максимизатора вставляются
    середины (геометрические, если обе точки положительны), пока
    относительный прирост не станет меньше tol. Значение не убывает
    при уточнении.
    """
    tol = DEFAULTS['ESUP_TOL'] if tol is None else tol
    a, b = interval
    pts = grid.inside(a, b)
    if pts.size == 0:
        raise EmptyWindow(f"В окне ({a:.6g}, {b:.6g}) нет точек сетки")
    vals = _evaluate(f, pts)
    i = int(np.argmax(vals))
    best, where = float(vals[i]), float(pts[i])
    if not math.isfinite(best):
        return best, where

    pts = list(pts)
    vals = list(vals)
    for _ in range(DEFAULTS['ESUP_MAX_ITER']):
        left = pts[i - 1] if i > 0 else a
        right = pts[i + 1] if i < len(pts) - 1 else b
        candidates = [c for c in (_midpoint(left, where), _midpoint(where, right))
                      if a < c < b and c != where and c not in (left, right)]
        if not candidates:
            break
        new_vals = _evaluate(f, np.array(candidates))
        for c, v in zip(candidates, new_vals):
            k = int(np.searchsorted(pts, c))
            pts.insert(k, c)
            vals.insert(k, float(v))
        i = int(np.argmax(vals))
        previous, best, where = best, float(vals[i]), float(pts[i])
        if not math.isfinite(best):
            break
        if best - previous <= tol * abs(best):
            break
    else:
        logger.warning(f"Уточнение супремума в окне ({a:.3g}, {b:.3g}) исчерпало бюджет итераций")
    return best, where


def esup_on(f: Callable, interval: Tuple[float, float], grid: Grid,
            tol: Optional[float] = None) -> float:
    """Сеточная оценка esup_{t∈(a,b)} f(t)."""
    return esup_with_argmax(f, interval, grid, tol)[0]


def refine(grid: Grid, around: float, depth: int) -> Grid:
    """Вставка 2·depth точек геометрически вокруг around (по depth с каждой стороны)."""
    pts = grid.points
    lower = pts[pts < around]
    upper = pts[pts > around]
    left = lower[-1] if lower.size else 0.5 * around
    right = upper[0] if upper.size else 1.5 * around
    fractions = np.arange(1, depth + 1) / (depth + 1)
    new = np.concatenate([
        around * (left / around) ** fractions,
        around * (right / around) ** fractions,
    ])
    return Grid(np.unique(np.concatenate([pts, new])), grid.mode, grid.domain)


def suffix_max(values: np.ndarray) -> np.ndarray:
    """m_i = max(values[i:])."""
    return np.maximum.accumulate(np.asarray(values, dtype=float)[::-1])[::-1]
