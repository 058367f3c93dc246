"""
Квазивогнутые функции и покрывающие последовательности CS(h, ϱ, a).

Функция h называется ϱ-квазивогнутой, если h не убывает, а h/ϱ не
возрастает. Покрывающая последовательность {x_k}, N ≤ k ≤ M, строится так,
что на каждом отрезке [x_{k-1}, x_k] либо h (зона Z1), либо ϱ/h (зона Z2)
меняется не более чем в a раз, а на внутренних индексах обе функции
растут не менее чем в a раз.

Основные функции:
- is_quasiconcave(): сеточная проверка квазивогнутости
- build_covering_sequence(): двусторонний жадный проход от опорной точки
- classify_Z(): разбиение индексов на зоны Z1 и Z2
- verify_covering_properties(): проверка шести свойств последовательности
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from app import DEFAULTS
from app.errors import ClassificationFailure, DegenerateRatio, NotQuasiconcave
from app.grids import Grid, window_grid

logger = logging.getLogger(__name__)

Closure = Callable[[np.ndarray], np.ndarray]

# Убывание к концу сетки быстрее степени 0.1 на декаду считаем стремлением к пределу
_DECADE_RATE = 10 ** 0.1
_BISECT_STEPS = 80
_SAMPLES = 32


@dataclass(frozen=True, eq=False)
class CoveringSequence:
    """Точки x_N..x_M; усечённые бесконечные концы помечены флагами."""
    points: np.ndarray
    N: int
    M: int
    a: float
    L: float
    length: float
    left_truncated: bool = False
    right_truncated: bool = False
    z1: FrozenSet[int] = field(default_factory=frozenset)
    z2: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.size != self.M - self.N + 1:
            raise ValueError(f"Ожидалось {self.M - self.N + 1} точек, получено {pts.size}")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("Точки покрывающей последовательности должны возрастать")
        object.__setattr__(self, 'points', pts)

    def x(self, k: int) -> float:
        return float(self.points[k - self.N])

    def indices(self) -> range:
        """Индексы отрезков N+1..M."""
        return range(self.N + 1, self.M + 1)

    def interior(self) -> range:
        """Индексы N+1..M-1 (точки x_k строго внутри (0, L))."""
        return range(self.N + 1, self.M)

    def interval(self, k: int) -> Tuple[float, float]:
        """Отрезок [x_{k-1}, x_k], правый конец обрезан по L_eff."""
        return self.x(k - 1), min(self.x(k), self.length)

    @property
    def left_finite(self) -> bool:
        return not self.left_truncated

    @property
    def right_finite(self) -> bool:
        return not self.right_truncated

    def zone(self, k: int) -> Optional[str]:
        if k in self.z1:
            return 'Z1'
        if k in self.z2:
            return 'Z2'
        return None


def _scalar(f: Closure, t: float) -> float:
    with np.errstate(all='ignore'):
        return float(np.asarray(f(np.array([t])), dtype=float)[0])


def _ratio_closure(h: Closure, rho: Closure) -> Closure:
    return lambda t: np.asarray(rho(t), dtype=float) / np.asarray(h(t), dtype=float)


def is_quasiconcave(h: Closure, rho: Closure, grid: Grid, tol: Optional[float] = None) -> Dict[str, Any]:
    """Проверка: h не убывает и h/ϱ не возрастает на соседних точках сетки."""
    tol = DEFAULTS['MONO_TOL'] if tol is None else tol
    pts = grid.points
    with np.errstate(all='ignore'):
        hv = np.asarray(h(pts), dtype=float)
        ratio = hv / np.asarray(rho(pts), dtype=float)
    violations: List[Tuple[float, str]] = []

    for i in np.flatnonzero(~(np.isfinite(hv) & (hv > 0))):
        violations.append((float(pts[i]), 'h неположительна или не конечна'))
    for i in np.flatnonzero(np.diff(hv) < -tol * np.abs(hv[:-1])):
        violations.append((float(pts[i + 1]), 'h убывает'))
    for i in np.flatnonzero(np.diff(ratio) > tol * np.abs(ratio[:-1])):
        violations.append((float(pts[i + 1]), 'h/rho возрастает'))

    if violations:
        return {
            'status': 'error',
            'message': f'Функция не квазивогнута: {len(violations)} нарушений',
            'violations': violations,
        }
    return {'status': 'success', 'message': 'Функция квазивогнута', 'violations': []}


def _cross_up(f: Closure, pts: np.ndarray, vals: np.ndarray, start: float, target: float) -> Optional[float]:
    """Наименьшее t > start с f(t) ≥ target (f не убывает)."""
    candidates = np.flatnonzero((pts > start) & (vals >= target))
    if candidates.size == 0:
        return None
    j = candidates[0]
    lo = max(start, pts[j - 1]) if j > 0 else start
    hi = float(pts[j])
    for _ in range(_BISECT_STEPS):
        mid = math.sqrt(lo * hi) if lo > 0 else 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if _scalar(f, mid) >= target:
            hi = mid
        else:
            lo = mid
    return hi


def _cross_down(f: Closure, pts: np.ndarray, vals: np.ndarray, start: float, target: float) -> Optional[float]:
    """Наибольшее t < start с f(t) ≤ target (f не убывает)."""
    candidates = np.flatnonzero((pts < start) & (vals <= target))
    if candidates.size == 0:
        return None
    j = candidates[-1]
    lo = float(pts[j])
    hi = min(start, pts[j + 1]) if j + 1 < pts.size else start
    for _ in range(_BISECT_STEPS):
        mid = math.sqrt(lo * hi)
        if not lo < mid < hi:
            break
        if _scalar(f, mid) <= target:
            lo = mid
        else:
            hi = mid
    return lo


def _decays_at(values: np.ndarray, pts: np.ndarray, side: str) -> bool:
    """Степенное стремление к 0 (side='left') или к ∞ (side='right') на крайней декаде сетки."""
    if pts[-1] / pts[0] < 10:
        return False
    if side == 'left':
        j = int(np.searchsorted(pts, 10 * pts[0]))
        return bool(values[j] >= _DECADE_RATE * values[0])
    j = int(np.searchsorted(pts, pts[-1] / 10)) - 1
    return bool(values[-1] >= _DECADE_RATE * values[max(j, 0)])


def build_covering_sequence(h: Closure, rho: Closure, a: Optional[float] = None,
                            grid: Optional[Grid] = None) -> CoveringSequence:
    """Построение покрывающей последовательности CS(h, ϱ, a).

    От опорной точки t0 (середина сетки в логарифмической шкале) идём
    вправо: следующая точка x_k = max(τ1, τ2), где τ1 (τ2) — первая точка,
    в которой h (соответственно ϱ/h) выросла ровно в a раз относительно
    x_{k-1}. Так обе функции растут не менее чем в a раз, а одна из них
    меняется на отрезке ровно в a раз. Влево — симметрично. Проход
    останавливается, когда одна из функций уже не может измениться в a раз
    на оставшейся части сетки; тогда конец конечен (x_N = 0 или x_M = L).
    Бесконечный конец отмечается, если у края сетки обе функции стремятся
    к пределу (0 слева, ∞ справа) со степенной скоростью.

    Args:
        h (Callable): Квазивогнутая функция
        rho (Callable): Функция ϱ
        a (float): Параметр a > 1, по умолчанию COVERING_A
        grid (Grid): Сетка с привязанным интервалом

    Returns:
        CoveringSequence: Последовательность с разбиением на Z1/Z2

    Raises:
        DegenerateRatio: a ≤ 1
        NotQuasiconcave: h не ϱ-квазивогнута на сетке
    """
    a = DEFAULTS['COVERING_A'] if a is None else float(a)
    if not a > 1:
        raise DegenerateRatio(f"Параметр покрытия должен быть больше 1: a={a}")
    if grid is None or grid.domain is None:
        raise ValueError("Нужна сетка, построенная по интервалу (build_grid)")

    report = is_quasiconcave(h, rho, grid)
    if report['status'] != 'success':
        raise NotQuasiconcave(report['message'])

    f2 = _ratio_closure(h, rho)
    pts = grid.points
    v1 = np.asarray(h(pts), dtype=float)
    v2 = np.asarray(f2(pts), dtype=float)

    seed = float(pts[int(np.argmin(np.abs(np.log(pts) - np.log(pts).mean())))])

    right: List[float] = []
    current = seed
    while True:
        t1 = _cross_up(h, pts, v1, current, a * _scalar(h, current))
        t2 = _cross_up(f2, pts, v2, current, a * _scalar(f2, current))
        if t1 is None or t2 is None:
            break
        current = max(t1, t2)
        right.append(current)

    left: List[float] = []
    current = seed
    while True:
        s1 = _cross_down(h, pts, v1, current, _scalar(h, current) / a)
        s2 = _cross_down(f2, pts, v2, current, _scalar(f2, current) / a)
        if s1 is None or s2 is None:
            break
        current = min(s1, s2)
        left.append(current)

    domain = grid.domain
    left_truncated = _decays_at(v1, pts, 'left') and _decays_at(v2, pts, 'left')
    right_truncated = domain.infinite and _decays_at(v1, pts, 'right') and _decays_at(v2, pts, 'right')

    points = [*reversed(left), seed, *right]
    N = -len(left)
    M = len(right)
    if not left_truncated:
        points.insert(0, 0.0)
        N -= 1
    if not right_truncated:
        points.append(domain.L)
        M += 1

    cs = CoveringSequence(
        points=np.array(points), N=N, M=M, a=a, L=domain.L, length=domain.effective_length,
        left_truncated=left_truncated, right_truncated=right_truncated,
    )
    logger.info(f"Покрывающая последовательность: N={N}, M={M}, a={a:g}, точек {len(points)}")
    return classify_Z(cs, h, rho)


def _interval_samples(cs: CoveringSequence, k: int) -> np.ndarray:
    lo, hi = cs.interval(k)
    inner = window_grid(lo, hi, _SAMPLES).points
    ends = [lo] if lo > 0 else []
    if hi < cs.L and hi <= cs.length:
        ends.append(hi)
    return np.unique(np.concatenate([inner, np.array(ends, dtype=float)]))


def _variation(values: np.ndarray) -> float:
    return float(np.max(values) / np.min(values))


def classify_Z(cs: CoveringSequence, h: Closure, rho: Closure, tol: Optional[float] = None) -> CoveringSequence:
    """Разбиение индексов N+1..M на зоны Z1 и Z2; при равенстве выбирается Z2."""
    tol = DEFAULTS['COVER_TOL'] if tol is None else tol
    f2 = _ratio_closure(h, rho)
    z1, z2 = set(), set()
    for k in cs.indices():
        t = _interval_samples(cs, k)
        with np.errstate(all='ignore'):
            var1 = _variation(np.asarray(h(t), dtype=float))
            var2 = _variation(np.asarray(f2(t), dtype=float))
        if var2 <= cs.a * (1 + tol):
            z2.add(k)
        elif var1 <= cs.a * (1 + tol):
            z1.add(k)
        else:
            raise ClassificationFailure(
                f"Отрезок k={k} не попадает ни в Z1, ни в Z2: вариации {var1:.4g} и {var2:.4g} при a={cs.a:g}"
            )
    return replace(cs, z1=frozenset(z1), z2=frozenset(z2))


def end_limits(cs: CoveringSequence, h: Closure, rho: Closure) -> Dict[str, bool]:
    """Пределы у концов: h → 0 и ϱ/h → 0 в 0+, h → ∞ и ϱ/h → ∞ в L− (только при L = ∞)."""
    pts = window_grid(0.0, cs.length, 4 * _SAMPLES).points
    with np.errstate(all='ignore'):
        v1 = np.asarray(h(pts), dtype=float)
        v2 = np.asarray(_ratio_closure(h, rho)(pts), dtype=float)
    return {
        'h_to_zero': _decays_at(v1, pts, 'left'),
        'ratio_to_zero': _decays_at(v2, pts, 'left'),
        'h_to_inf': math.isinf(cs.L) and _decays_at(v1, pts, 'right'),
        'ratio_to_inf': math.isinf(cs.L) and _decays_at(v2, pts, 'right'),
    }


def verify_covering_properties(cs: CoveringSequence, h: Closure, rho: Closure,
                               a: Optional[float] = None, tol: Optional[float] = None) -> Dict[str, Any]:
    """Проверка шести свойств покрывающей последовательности с запасами.

    Свойства: left_end, right_end, growth, local_variation,
    last_interval, first_interval.
    """
    a = cs.a if a is None else a
    tol = DEFAULTS['COVER_TOL'] if tol is None else tol
    f2 = _ratio_closure(h, rho)
    props: Dict[str, Dict[str, Any]] = {}

    # N = -∞ тогда и только тогда, когда h и ϱ/h стремятся к 0 в нуле; для M — к ∞ на правом конце
    limits = end_limits(cs, h, rho)
    left_infinite = limits['h_to_zero'] and limits['ratio_to_zero']
    right_infinite = limits['h_to_inf'] and limits['ratio_to_inf']
    props['left_end'] = {
        'passed': (cs.x(cs.N) == 0.0) == cs.left_finite and left_infinite == cs.left_truncated,
        'margin': None,
        'limits': {key: limits[key] for key in ('h_to_zero', 'ratio_to_zero')},
    }
    props['right_end'] = {
        'passed': (cs.x(cs.M) == cs.L) == cs.right_finite and right_infinite == cs.right_truncated,
        'margin': None,
        'limits': {key: limits[key] for key in ('h_to_inf', 'ratio_to_inf')},
    }

    growth = []
    for k in range(cs.N + 2, cs.M):
        x_prev, x_k = cs.x(k - 1), cs.x(k)
        growth.append(min(_scalar(h, x_k) / (a * _scalar(h, x_prev)),
                          _scalar(f2, x_k) / (a * _scalar(f2, x_prev))))
    margin = min(growth) if growth else None
    props['growth'] = {'passed': margin is None or margin >= 1 - tol, 'margin': margin}

    def within(f: Closure, t: np.ndarray, low: float, high: float) -> float:
        values = np.asarray(f(t), dtype=float)
        return min(float(np.min(values)) / low, high / float(np.max(values)))

    local = []
    for k in range(cs.N + 2, cs.M):
        t = _interval_samples(cs, k)
        x_k = cs.x(k)
        local.append(max(within(h, t, _scalar(h, x_k) / a, _scalar(h, x_k)),
                         within(f2, t, _scalar(f2, x_k) / a, _scalar(f2, x_k))))
    margin = min(local) if local else None
    props['local_variation'] = {'passed': margin is None or margin >= 1 - tol, 'margin': margin}

    margin = None
    if cs.right_finite and cs.M - 1 >= cs.N:
        t = _interval_samples(cs, cs.M)
        x_prev = cs.x(cs.M - 1)
        if x_prev > 0:
            margin = max(within(h, t, _scalar(h, x_prev), a * _scalar(h, x_prev)),
                         within(f2, t, _scalar(f2, x_prev), a * _scalar(f2, x_prev)))
    props['last_interval'] = {'passed': margin is None or margin >= 1 - tol, 'margin': margin}

    margin = None
    if cs.left_finite and cs.N + 1 <= cs.M:
        t = _interval_samples(cs, cs.N + 1)
        x_next = cs.x(cs.N + 1)
        if x_next < cs.length:
            margin = max(within(h, t, _scalar(h, x_next) / a, _scalar(h, x_next)),
                         within(f2, t, _scalar(f2, x_next) / a, _scalar(f2, x_next)))
    props['first_interval'] = {'passed': margin is None or margin >= 1 - tol, 'margin': margin}

    failures = [name for name, item in props.items() if not item['passed']]
    if failures:
        logger.warning(f"Нарушены свойства покрывающей последовательности: {', '.join(failures)}")
        return {'status': 'error', 'message': 'Свойства нарушены', 'properties': props, 'failures': failures}
    return {'status': 'success', 'message': 'Все свойства выполнены', 'properties': props, 'failures': []}
