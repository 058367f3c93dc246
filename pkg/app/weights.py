"""
Модуль весов на интервале (0, L) и квадратур.

Поддерживаемые семейства весов (ключ kind в описании):
- power: t^alpha, alpha > -1
- powerlog: t^alpha * (1 + |log t|)^beta
- piecewise: кусочно-постоянный вес на заданных точках разбиения
- table: табличные значения с кусочно-линейной интерполяцией

Основные функции:
- make_weight(): построение веса по описанию с проверкой допустимости
- primitive(): первообразная веса ∫_0^t
- integrate(): квадратура scipy.integrate.quad с лог-заменой у нуля
- cell_integrals(): векторизованные интегралы по набору ячеек
- check_admissible(): отчёт о допустимости набора весов на сетке

Пример использования:
    >>> domain = Domain(1.0)
    >>> w = make_weight({'kind': 'power', 'alpha': 1.0}, domain)
    >>> float(primitive(w, 0.5))
    0.125
"""
import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache
from typing import Any, Callable, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import legendre
from scipy.integrate import quad

from app import DEFAULTS
from app.errors import InadmissibleSpec, NonFiniteIntegrand, QuadratureFailure

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

WEIGHT_KINDS = ('power', 'powerlog', 'piecewise', 'table')

# Нижняя граница лог-замены: s = b * exp(-y) не опускается ниже неё
_TINY = 1e-300
# Порог |γ|·ℓ, ниже которого хвост у нуля считается чисто логарифмическим
_FLAT_TAIL = 1e-6
_TAIL_EPSREL = 1e-10
_MIN_EPSREL = 50 * np.finfo(float).eps
# Отказ QUADPACK терпим, если оценка ошибки не хуже допуска в столько раз
_WARN_SLACK = 1e3


@dataclass(frozen=True)
class Domain:
    """Интервал (0, L); при L = inf вычисления обрезаются на l_trunc."""
    L: float
    l_trunc: float = field(default_factory=lambda: float(DEFAULTS['L_TRUNC']))

    def __post_init__(self):
        if not self.L > 0:
            raise InadmissibleSpec(f"Длина интервала должна быть положительной: L={self.L}")
        if not self.l_trunc > 0 or math.isinf(self.l_trunc):
            raise InadmissibleSpec(f"Некорректная граница обрезки: {self.l_trunc}")

    @property
    def infinite(self) -> bool:
        return math.isinf(self.L)

    @property
    def effective_length(self) -> float:
        return min(self.L, self.l_trunc)


# ---------------------------------------------------------------------------
# Квадратуры
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def gauss_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Узлы и веса Гаусса-Лежандра на [-1, 1]."""
    return legendre.leggauss(order)


def _gauss_many(g: Integrand, lo: np.ndarray, hi: np.ndarray, order: int,
                strict: bool = True) -> np.ndarray:
    """Интегралы g по ячейкам [lo_i, hi_i] одним вызовом g.

    При strict=False ячейки с неконечными значениями получают nan.
    """
    x, w = gauss_rule(order)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    with np.errstate(all='ignore'):
        values = np.asarray(g(nodes.ravel()), dtype=float).reshape(nodes.shape)
    finite = np.isfinite(values).all(axis=1)
    if strict and not finite.all():
        raise NonFiniteIntegrand(
            f"Подынтегральная функция не конечна на [{lo.min():.3g}, {hi.max():.3g}]"
        )
    with np.errstate(all='ignore'):
        out = (values * w[None, :]).sum(axis=1) * half
    return np.where(finite, out, np.nan)


def _scalar(f: Integrand) -> Callable[[float], float]:
    """Обёртка векторной функции для scipy: скаляр на входе и на выходе."""
    def call(x: float) -> float:
        with np.errstate(all='ignore'):
            value = float(np.asarray(f(np.array([x], dtype=float)), dtype=float).reshape(-1)[0])
        if not math.isfinite(value):
            raise NonFiniteIntegrand(f"Подынтегральная функция не конечна в точке {x:.6g}")
        return value
    return call


def _quad(f: Integrand, lo: float, hi: float, tol: float, limit: int,
          points: Sequence[float] = ()) -> float:
    """scipy.integrate.quad; отказ QUADPACK (ier > 0) превращается в QuadratureFailure.

    При full_output=1 QUADPACK сообщает об отказе строкой, а не IntegrationWarning.
    """
    epsrel = max(tol, _MIN_EPSREL)
    result = quad(_scalar(f), lo, hi, full_output=1, epsabs=0.0, epsrel=epsrel, limit=limit,
                  points=list(points) or None)
    value, abserr = result[0], result[1]
    if len(result) > 3:
        message = str(result[3]).splitlines()[0]
        if abserr > _WARN_SLACK * epsrel * abs(value):
            raise QuadratureFailure(
                f"Квадратура на [{lo:.3g}, {hi:.3g}] не сошлась: {message} "
                f"(ошибка {abserr:.3g} при значении {value:.3g})"
            )
        logger.debug(f"Квадратура на [{lo:.3g}, {hi:.3g}]: {message}; ошибка {abserr:.3g} приемлема")
    return value


def integrate(f: Integrand, a: float, b: float, tol: Optional[float] = None,
              singular_points: Iterable[float] = (), max_panels: Optional[int] = None) -> float:
    """Квадратура ∫_a^b f на scipy.integrate.quad.

    Объявленные особые точки передаются в quad как points. Кусок от нуля
    до первой особой точки интегрируется после замены s = b·e^{-y} до
    глубины s = 1e-300, а хвост за ней оценивается по локальной модели
    e^{-γy}(1 + |log s|)^{-k}; если модель не убывает достаточно быстро,
    интеграл считается расходящимся.

    Args:
        f (Callable): Векторизованная функция numpy-массива
        a (float): Левый конец, 0 ≤ a
        b (float): Правый конец, b > a
        tol (float): Относительная точность, по умолчанию QUAD_TOL
        singular_points (Iterable[float]): Точки разрыва или излома
        max_panels (int): Предел числа подынтервалов quad

    Returns:
        float: Значение интеграла

    Raises:
        QuadratureFailure: Нет сходимости или интеграл расходится в нуле
        NonFiniteIntegrand: f вернула inf/nan вне объявленных особенностей

    Example:
        >>> integrate(lambda s: s ** -0.5, 0.0, 1.0)
        2.0000000000...
    """
    tol = DEFAULTS['QUAD_TOL'] if tol is None else tol
    limit = DEFAULTS['QUAD_MAX_PANELS'] if max_panels is None else max_panels
    if not 0 <= a <= b:
        raise ValueError(f"Ожидается 0 ≤ a ≤ b, получено a={a}, b={b}")
    if a == b:
        return 0.0

    cuts = sorted({float(s) for s in singular_points if a < s < b})
    if a > 0:
        return _quad(f, a, b, tol, limit, cuts)
    first = cuts[0] if cuts else b
    total = _integrate_from_zero(f, first, tol, limit)
    if cuts:
        total += _quad(f, first, b, tol, limit, cuts[1:])
    return total


def _integrate_from_zero(f: Integrand, hi: float, tol: float, limit: int) -> float:
    depth = math.log(hi) - math.log(_TINY)

    def g(y):
        s = hi * np.exp(-np.asarray(y, dtype=float))
        return f(s) * s

    try:
        body = _quad(g, 0.0, depth, tol, limit)
        tail = _log_tail(g, hi, depth, tol * abs(body))
    except NonFiniteIntegrand as exc:
        raise QuadratureFailure(f"Интеграл на (0, {hi:.3g}) расходится в нуле: {exc}") from exc
    return body + tail


def _log_tail(g: Integrand, hi: float, depth: float, negligible: float) -> float:
    """∫_depth^∞ g(y) dy по модели g ≈ C·e^{-γy}·ℓ^{-k}, где ℓ = 1 + |log s|.

    γ и k решают два уравнения для приращений log g на единичных шагах
    у глубины depth/2 и у самой глубины.
    """
    ys = np.array([0.5 * depth - 1.0, 0.5 * depth, depth - 1.0, depth])
    with np.errstate(all='ignore'):
        values = np.asarray(g(ys), dtype=float)
    if not np.all(np.isfinite(values)):
        raise NonFiniteIntegrand(f"g не конечна на глубине s ~ {_TINY:g}")
    last = float(values[-1])
    if last == 0.0:
        return 0.0
    sign = math.copysign(1.0, last)
    if np.any(values * sign <= 0):
        if abs(last) * depth <= negligible:
            return 0.0
        raise QuadratureFailure("Знакопеременный хвост у нуля: оценить остаток не удаётся")

    ells = 1.0 + np.abs(math.log(hi) - ys)
    drops = -np.diff(np.log(values * sign))[[0, 2]]
    log_steps = np.diff(np.log(ells))[[0, 2]]
    k = (drops[0] - drops[1]) / (log_steps[0] - log_steps[1])
    gamma = drops[1] - k * log_steps[1]
    ell = float(ells[-1])
    scaled = gamma * ell

    if scaled > _FLAT_TAIL:
        rest = _quad(lambda x: np.exp(-gamma * x) * (1.0 + x / ell) ** (-k), 0.0, math.inf,
                     _TAIL_EPSREL, 200)
        return last * rest
    if scaled >= -_FLAT_TAIL and k > 1.0 + _FLAT_TAIL:
        return last * ell / (k - 1.0)
    raise QuadratureFailure(
        f"Интеграл на (0, {hi:.3g}) расходится в нуле: хвост убывает как "
        f"e^(-{gamma:.3g}y)·ℓ^(-{k:.3g})"
    )


def cell_integrals(f: Integrand, lo: np.ndarray, hi: np.ndarray,
                   tol: Optional[float] = None) -> np.ndarray:
    """Интегралы по ячейкам: сначала один векторный проход, затем адаптивно по отказам."""
    tol = DEFAULTS['QUAD_TOL'] if tol is None else tol
    order = DEFAULTS['QUAD_ORDER']
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    out = np.zeros(lo.shape)
    active = (hi > lo) & (lo > 0)
    if np.any(active):
        a, b = lo[active], hi[active]
        m = 0.5 * (a + b)
        whole = _gauss_many(f, a, b, order, strict=False)
        halves = _gauss_many(f, np.concatenate([a, m]), np.concatenate([m, b]), order, strict=False)
        refined = halves[:a.size] + halves[a.size:]
        with np.errstate(invalid='ignore'):
            good = np.abs(whole - refined) <= tol * np.abs(refined)
        idx = np.flatnonzero(active)
        out[idx[good]] = refined[good]
        active[idx[good]] = False
    pending = np.flatnonzero((hi > lo) & (active | (lo == 0)))
    for i in pending:
        out[i] = integrate(f, float(lo[i]), float(hi[i]), tol)
    return out


class CumulativeIntegral:
    """Накопленный интеграл ∫_lower^t f и хвост ∫_t^upper f.

    Значения в опорных точках считаются один раз; запрос в произвольной
    точке добавляет интеграл до ближайшей опорной точки.
    """

    def __init__(self, f: Integrand, anchors: Sequence[float], lower: float, upper: float,
                 tol: Optional[float] = None, singular_points: Iterable[float] = ()):
        self.f = f
        self.lower = float(lower)
        self.upper = float(upper)
        self.tol = DEFAULTS['QUAD_TOL'] if tol is None else tol
        pts = np.concatenate([np.asarray(anchors, dtype=float), np.asarray(list(singular_points), dtype=float)])
        pts = np.unique(pts[(pts > self.lower) & (pts < self.upper)])
        self.anchors = pts
        edges = np.concatenate([[self.lower], pts, [self.upper]])
        cells = cell_integrals(f, edges[:-1], edges[1:], self.tol)
        self._head = np.cumsum(cells)[:-1]
        self._tail = np.cumsum(cells[::-1])[::-1][1:]
        self.total = float(np.sum(cells))

    def head(self, t) -> np.ndarray:
        t = np.clip(np.asarray(t, dtype=float), self.lower, self.upper)
        idx = np.searchsorted(self.anchors, t, side='right') - 1
        has = idx >= 0
        safe = np.where(has, idx, 0)
        base = np.where(has, self._head[safe] if self.anchors.size else 0.0, 0.0)
        start = np.where(has, self.anchors[safe] if self.anchors.size else self.lower, self.lower)
        return base + cell_integrals(self.f, np.atleast_1d(start), np.atleast_1d(t), self.tol).reshape(t.shape)

    def tail(self, t) -> np.ndarray:
        t = np.clip(np.asarray(t, dtype=float), 0.0, self.upper)
        n = self.anchors.size
        idx = np.searchsorted(self.anchors, t, side='left')
        has = idx < n
        safe = np.where(has, idx, 0)
        base = np.where(has, self._tail[safe] if n else 0.0, 0.0)
        end = np.where(has, self.anchors[safe] if n else self.upper, self.upper)
        return base + cell_integrals(self.f, np.atleast_1d(t), np.atleast_1d(end), self.tol).reshape(t.shape)


class PanelMesh:
    """Составная сетка Гаусса-Лежандра по заданным краям панелей.

    cumulative() даёт ∫_{edges[0]}^{узел} для значений в узлах через
    спектральную матрицу интегрирования на эталонной панели.
    """

    def __init__(self, edges: Sequence[float], order: Optional[int] = None):
        order = DEFAULTS['MESH_ORDER'] if order is None else order
        edges = np.unique(np.asarray(edges, dtype=float))
        if edges.size < 2:
            raise ValueError("Нужно минимум два края панели")
        x, w = gauss_rule(order)
        self.edges = edges
        self.order = order
        self.half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        self.nodes = (mid[:, None] + self.half[:, None] * x[None, :]).ravel()
        self.weights = (self.half[:, None] * w[None, :]).ravel()
        self._w = w
        coeffs = np.linalg.inv(legendre.legvander(x, order - 1))
        self._S = legendre.legvander(x, order) @ legendre.legint(coeffs, m=1, lbnd=-1, axis=0)

    @property
    def panels(self) -> int:
        return self.half.size

    def integral(self, values: np.ndarray) -> float:
        return float(np.dot(values, self.weights))

    def cumulative(self, values: np.ndarray) -> np.ndarray:
        v = np.asarray(values, dtype=float).reshape(self.panels, self.order)
        within = (v @ self._S.T) * self.half[:, None]
        totals = (v @ self._w) * self.half
        offsets = np.concatenate([[0.0], np.cumsum(totals)[:-1]])
        return (within + offsets[:, None]).ravel()

    def tail(self, values: np.ndarray) -> np.ndarray:
        """∫_{узел}^{edges[-1]} по тем же узлам."""
        cum = self.cumulative(values)
        total = float(np.sum(np.asarray(values, dtype=float) * self.weights))
        return total - cum


def tail_diagnostic(g: Integrand, domain: Domain, tol: Optional[float] = None) -> Dict[str, Any]:
    """Сравнение ∫ g до L_trunc и до L_trunc/10 в опорной точке L_trunc·1e-6."""
    if not domain.infinite:
        return {'truncated': False, 'converged': True, 'relative_change': 0.0}
    tol = DEFAULTS['TAIL_TOL'] if tol is None else tol
    t_ref = domain.l_trunc * 1e-6
    full = integrate(g, t_ref, domain.l_trunc)
    short = integrate(g, t_ref, domain.l_trunc / 10.0)
    change = abs(full - short) / abs(full) if full != 0 else 0.0
    converged = change <= tol
    if not converged:
        logger.warning(f"Хвост интеграла не сошёлся при обрезке L={domain.l_trunc:g}: изменение {change:.3g}")
    return {'truncated': True, 'converged': converged, 'relative_change': change}


# ---------------------------------------------------------------------------
# Веса
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """Положительный вес на (0, L) из одного из четырёх семейств."""
    kind: str
    domain: Domain
    alpha: float = 0.0
    beta: float = 0.0
    breakpoints: Tuple[float, ...] = ()
    values: Tuple[float, ...] = ()
    scale: float = 1.0

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        with np.errstate(all='ignore'):
            if self.kind == 'power':
                out = t ** self.alpha
            elif self.kind == 'powerlog':
                out = t ** self.alpha * (1.0 + np.abs(np.log(t))) ** self.beta
            elif self.kind == 'piecewise':
                out = np.asarray(self.values)[np.searchsorted(self.breakpoints, t, side='right')]
            else:
                out = np.interp(t, self.breakpoints, self.values)
        return self.scale * out

    @property
    def singular_points(self) -> Tuple[float, ...]:
        if self.kind == 'powerlog':
            return (1.0,)
        return tuple(self.breakpoints)

    def log_primitive(self, t) -> np.ndarray:
        """log ∫_0^t w; для степенного веса считается без потери порядка у нуля."""
        t = np.asarray(t, dtype=float)
        if self.kind == 'power' and self.alpha > -1:
            with np.errstate(divide='ignore'):
                return math.log(self.scale) + (self.alpha + 1.0) * np.log(t) - math.log(self.alpha + 1.0)
        with np.errstate(divide='ignore'):
            return np.log(self.primitive(t))

    def primitive(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == 'power':
            if self.alpha <= -1:
                return np.full(t.shape, np.inf)
            return self.scale * t ** (self.alpha + 1.0) / (self.alpha + 1.0)
        if self.kind == 'piecewise':
            return self.scale * self._piecewise_primitive(t)
        if self.kind == 'table':
            return self.scale * self._table_primitive(t)
        return self._quadrature_primitive(t)

    def _piecewise_primitive(self, t: np.ndarray) -> np.ndarray:
        b = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=float)
        left = np.concatenate([[0.0], b])
        cum = np.concatenate([[0.0], np.cumsum(v[:-1] * np.diff(left))])
        idx = np.searchsorted(b, t, side='right')
        return cum[idx] + v[idx] * (t - left[idx])

    def _table_primitive(self, t: np.ndarray) -> np.ndarray:
        s = np.asarray(self.breakpoints, dtype=float)
        y = np.asarray(self.values, dtype=float)
        cum = np.concatenate([[y[0] * s[0]], y[0] * s[0] + np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(s))])
        slope = np.concatenate([np.diff(y) / np.diff(s), [0.0]])
        idx = np.searchsorted(s, t, side='right') - 1
        before = idx < 0
        safe = np.clip(idx, 0, s.size - 1)
        dt = t - s[safe]
        inside = cum[safe] + y[safe] * dt + 0.5 * slope[safe] * dt ** 2
        return np.where(before, y[0] * t, inside)

    def _quadrature_primitive(self, t: np.ndarray) -> np.ndarray:
        if self.alpha < -1 or (self.alpha == -1 and self.beta >= -1):
            return np.full(t.shape, np.inf)
        flat = t.ravel()
        points = np.unique(flat[flat > 0])
        if points.size == 0:
            return np.zeros(t.shape)
        acc = CumulativeIntegral(self, points, 0.0, float(points[-1]), singular_points=self.singular_points)
        table = np.concatenate([acc._head, [acc.total]])
        anchors = np.concatenate([acc.anchors, [points[-1]]])
        values = table[np.searchsorted(anchors, points)]
        out = np.zeros(flat.shape)
        positive = flat > 0
        out[positive] = values[np.searchsorted(points, flat[positive])]
        return out.reshape(t.shape)

    def scaled(self, factor: float) -> 'Weight':
        return replace(self, scale=self.scale * factor)

    def spec(self) -> Dict[str, Any]:
        """Описание веса в грамматике конфигурационного файла."""
        out: Dict[str, Any] = {'kind': self.kind}
        if self.kind in ('power', 'powerlog'):
            out['alpha'] = self.alpha
        if self.kind == 'powerlog':
            out['beta'] = self.beta
        if self.kind == 'piecewise':
            out['breakpoints'] = list(self.breakpoints)
            out['values'] = list(self.values)
        if self.kind == 'table':
            out['points'] = list(self.breakpoints)
            out['values'] = list(self.values)
        if self.scale != 1.0:
            out['scale'] = self.scale
        return out


def make_weight(spec: Dict[str, Any], domain: Domain, validate: bool = True) -> Weight:
    """Построение веса по описанию.

    Args:
        spec (dict): Описание веса, например {'kind': 'power', 'alpha': 0.5}
        domain (Domain): Интервал определения
        validate (bool): Проверять допустимость параметров

    Returns:
        Weight: Неизменяемый объект веса

    Raises:
        InadmissibleSpec: Первообразная расходится в нуле или значения неположительны
    """
    kind = spec.get('kind')
    if kind not in WEIGHT_KINDS:
        raise InadmissibleSpec(f"Неизвестный тип веса: {kind!r}")
    scale = float(spec.get('scale', 1.0))
    if validate and not scale > 0:
        raise InadmissibleSpec(f"Множитель веса должен быть положительным: {scale}")

    if kind in ('power', 'powerlog'):
        alpha = float(spec.get('alpha', 0.0))
        beta = float(spec.get('beta', 0.0)) if kind == 'powerlog' else 0.0
        if validate:
            integrable = alpha > -1 or (kind == 'powerlog' and alpha == -1 and beta < -1)
            if not integrable:
                raise InadmissibleSpec(f"Вес t^{alpha} не интегрируем в нуле (нужно alpha > -1)")
        return Weight(kind, domain, alpha=alpha, beta=beta, scale=scale)

    key = 'breakpoints' if kind == 'piecewise' else 'points'
    points = tuple(float(x) for x in spec.get(key, ()))
    values = tuple(float(x) for x in spec.get('values', ()))
    if validate:
        expected = len(points) + 1 if kind == 'piecewise' else len(points)
        if len(values) != expected or not values:
            raise InadmissibleSpec(f"Для веса {kind} ожидается {expected} значений, получено {len(values)}")
        if any(b <= a for a, b in zip(points, points[1:])):
            raise InadmissibleSpec("Точки разбиения должны строго возрастать")
        if any(p <= 0 or p >= domain.L for p in points):
            raise InadmissibleSpec(f"Точки разбиения должны лежать в (0, {domain.L})")
        if any(not v > 0 for v in values):
            raise InadmissibleSpec(f"Значения веса {kind} должны быть положительными")
    return Weight(kind, domain, breakpoints=points, values=values, scale=scale)


def primitive(w: Weight, t) -> Any:
    """∫_0^t w; для скаляра возвращает float."""
    out = w.primitive(t)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class WeightSet:
    """Четыре веса u, δ, v, w на общем интервале."""
    u: Weight
    delta: Weight
    v: Weight
    w: Weight

    def __post_init__(self):
        domains = {self.u.domain, self.delta.domain, self.v.domain, self.w.domain}
        if len(domains) != 1:
            raise InadmissibleSpec("Все четыре веса должны быть заданы на одном интервале")

    @property
    def domain(self) -> Domain:
        return self.u.domain

    @cached_property
    def singular_points(self) -> Tuple[float, ...]:
        pts = set()
        for weight in (self.u, self.delta, self.v, self.w):
            pts.update(weight.singular_points)
        return tuple(sorted(p for p in pts if 0 < p < self.domain.effective_length))

    def replace(self, **changes) -> 'WeightSet':
        return replace(self, **changes)

    def items(self):
        return (('u', self.u), ('delta', self.delta), ('v', self.v), ('w', self.w))


def check_admissible(ws: WeightSet, grid) -> Dict[str, Any]:
    """Проверка положительности весов и конечности первообразных на сетке."""
    points = np.asarray(grid.points, dtype=float)
    failures = []
    for name, weight in ws.items():
        values = weight(points)
        bad = int(np.sum(~(np.isfinite(values) & (values > 0))))
        if bad:
            failures.append(f"{name}: вес неположителен или не конечен в {bad} точках (positivity)")
        prim = weight.primitive(points)
        bad = int(np.sum(~(np.isfinite(prim) & (prim > 0))))
        if bad:
            failures.append(f"{name}: первообразная не конечна в {bad} точках (primitive)")

    if failures:
        for message in failures:
            logger.warning(message)
        return {'status': 'error', 'message': 'Набор весов недопустим', 'failures': failures}
    return {'status': 'success', 'message': 'Набор весов допустим', 'failures': []}
