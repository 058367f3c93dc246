"""
Функционалы характеризации константы вложения.

Для приведённого неравенства с показателями (p, q, r) и весами u, δ, v, w
модуль вычисляет вспомогательные функции φ и σ, определяет один из семи
случаев соотношения показателей и считает величины B1..B8, сумма которых
по нужному набору эквивалентна оптимальной константе C.

Основные функции:
- classify_case(): случай i..vii и список нужных B
- phi(), sigma(), phi_min_kernel(): вспомогательные функции
- compute_B(): одна из величин B1..B8 на сетке
- embedding_constant_bounds(): сумма B, оценка C оракулом, отношение
- reduce_parameters(): переход от исходного вложения к приведённому виду

Пример использования:
    >>> params = ParamTriple(1.0, 1.0, 1.0)
    >>> classify_case(params).tag
    'i'
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import cached_property
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from app import DEFAULTS, map_in_scope
from app.errors import (
    ExponentDegenerate, InadmissibleSpec, NonFinite, NonFiniteIntegrand, NonFinitePhi,
    OutOfScope, QuadratureFailure,
)
from app.grids import Grid, build_grid, esup_with_argmax, refine, suffix_max
from app.weights import CumulativeIntegral, PanelMesh, Weight, WeightSet, gauss_rule, integrate, tail_diagnostic

logger = logging.getLogger(__name__)

REQUIRED_B: Dict[str, Tuple[int, ...]] = {
    'i': (1, 2),
    'ii': (1, 2, 3),
    'iii': (1, 2, 4),
    'iv': (1, 2, 3, 5),
    'v': (1, 2, 6, 7),
    'vi': (1, 2, 3, 7, 8),
    'vii': (1, 2, 3, 5, 7, 8),
}
CASE_ORDER = ('i', 'ii', 'iii', 'iv', 'v', 'vi', 'vii')
NESTED_B = (3, 4, 5, 6, 8)

_BOUNDARY_SHIFT = 1e-2


@dataclass(frozen=True)
class ParamTriple:
    p: float
    q: float
    r: float

    def __post_init__(self):
        for name in ('p', 'q', 'r'):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InadmissibleSpec(f"Показатель {name} должен быть положительным: {value}")


@dataclass(frozen=True)
class CaseId:
    tag: str
    required_B: Tuple[int, ...]
    alternates: Tuple[str, ...] = ()


@dataclass(frozen=True)
class OriginalParams:
    r1: float
    q1: float
    r2: float
    q2: float
    w1: Weight
    w2: Weight
    delta1: Weight
    delta2: Weight

    def __post_init__(self):
        for name in ('r1', 'q1', 'r2', 'q2'):
            value = getattr(self, name)
            if not value > 0:
                raise InadmissibleSpec(f"Показатель {name} должен быть положительным: {value}")


@dataclass
class EmbeddingReport:
    case: CaseId
    b_values: Dict[str, float]
    b_sum: float
    c_estimate: float
    ratio: Optional[float]
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        def clean(value):
            if isinstance(value, float) and not math.isfinite(value):
                return 'inf' if value > 0 else str(value)
            if isinstance(value, dict):
                return {k: clean(v) for k, v in value.items()}
            if isinstance(value, (list, tuple)):
                return [clean(v) for v in value]
            return value

        return clean({
            'case': self.case.tag,
            'alternates': list(self.case.alternates),
            'B': self.b_values,
            'b_sum': self.b_sum,
            'c_estimate': self.c_estimate,
            'ratio': self.ratio,
            'flags': self.diagnostics,
            'provenance': self.provenance,
        })


# ---------------------------------------------------------------------------
# Случаи
# ---------------------------------------------------------------------------

def _tag(p: float, q: float, r: float) -> str:
    if q >= 1:
        if r >= 1:
            return 'i' if p <= r else 'iii'
        return 'ii' if p <= r else 'iv'
    if r >= 1:
        return 'v'
    return 'vi' if p <= r else 'vii'


def _guard(params: ParamTriple) -> None:
    guard = DEFAULTS['Q_GUARD']
    if params.q < 1 and 1 - params.q < guard:
        raise ExponentDegenerate(f"q={params.q} слишком близко к 1 для случаев v-vii")
    if params.r < 1 and 1 - params.r < guard:
        raise ExponentDegenerate(f"r={params.r} слишком близко к 1")


def classify_case(params: ParamTriple) -> CaseId:
    """Определение случая i..vii.

    Границы (p = r, q = 1, r = 1) относятся к случаю с меньшим номером,
    а соседние по другую сторону границы случаи записываются в alternates.

    Raises:
        OutOfScope: p > q (невыпуклый случай не рассматривается)
        ExponentDegenerate: q или r слишком близки к 1 снизу
    """
    p, q, r = params.p, params.q, params.r
    if p > q:
        raise OutOfScope(f"Нарушено условие выпуклости p ≤ q: p={p}, q={q}")
    _guard(params)
    tag = _tag(p, q, r)

    alternates = []
    shifted = []
    if p == r:
        shifted.append((p, q, r * (1 - _BOUNDARY_SHIFT)))
    if q == 1 and p < q * (1 - _BOUNDARY_SHIFT):
        shifted.append((p, q * (1 - _BOUNDARY_SHIFT), r))
    if r == 1:
        shifted.append((p, q, r * (1 - _BOUNDARY_SHIFT)))
    for triple in shifted:
        alt = _tag(*triple)
        if alt != tag and alt not in alternates:
            alternates.append(alt)
    return CaseId(tag, REQUIRED_B[tag], tuple(alternates))


def alternate_params(params: ParamTriple, alternate: str) -> Optional[ParamTriple]:
    """Тройка показателей, сдвинутая через границу в указанный соседний случай."""
    p, q, r = params.p, params.q, params.r
    for triple in ((p, q, r * (1 - _BOUNDARY_SHIFT)), (p, q * (1 - _BOUNDARY_SHIFT), r)):
        if triple[0] <= triple[1] and _tag(*triple) == alternate:
            return ParamTriple(*triple)
    return None


# ---------------------------------------------------------------------------
# Профиль: первообразные, φ, σ и хвостовые интегралы
# ---------------------------------------------------------------------------

class Profile:
    """Все поточечные величины одной задачи (params, ws) на опорной сетке.

    Накопленные интегралы строятся лениво и переиспользуются всеми B,
    C_{i,j} и проверками лемм.
    """

    def __init__(self, params: ParamTriple, ws: WeightSet, grid: Optional[Grid] = None):
        self.params = params
        self.ws = ws
        self.domain = ws.domain
        self.length = self.domain.effective_length
        self.grid = grid if grid is not None else build_grid(ws.domain, 64)
        self.diagnostics: Dict[str, Any] = {}

    # первообразные
    def _primitive(self, weight: Weight) -> Callable:
        if weight.kind != 'powerlog':
            return weight.primitive
        acc = CumulativeIntegral(weight, self.grid.points, 0.0, self.length,
                                 singular_points=weight.singular_points)
        return acc.head

    @cached_property
    def _U(self):
        return self._primitive(self.ws.u)

    @cached_property
    def _Delta(self):
        return self._primitive(self.ws.delta)

    @cached_property
    def _V(self):
        return self._primitive(self.ws.v)

    @cached_property
    def _W(self):
        return self._primitive(self.ws.w)

    def U(self, t):
        return self._U(np.asarray(t, dtype=float))

    def Delta(self, t):
        return self._Delta(np.asarray(t, dtype=float))

    def V(self, t):
        return self._V(np.asarray(t, dtype=float))

    def W(self, t):
        return self._W(np.asarray(t, dtype=float))

    # хвостовые интегралы
    def _tail_integral(self, g: Callable, name: str) -> CumulativeIntegral:
        def fail(message: str, window: Tuple[float, float]):
            return NonFinitePhi(message) if name == 'phi' else NonFinite(message, window)

        try:
            diag = tail_diagnostic(g, self.domain)
        except (QuadratureFailure, NonFiniteIntegrand) as exc:
            raise fail(f"Интеграл {name} не конечен: {exc}", (0.0, self.length)) from exc
        self.diagnostics[f'tail_{name}'] = diag
        if not diag['converged']:
            raise fail(f"Хвост интеграла {name} на бесконечности не сходится",
                       (self.length / 10, self.length))
        try:
            return CumulativeIntegral(g, self.grid.points, self.grid.points[0], self.length,
                                      singular_points=self.ws.singular_points)
        except (QuadratureFailure, NonFiniteIntegrand) as exc:
            raise fail(f"Интеграл {name} не конечен: {exc}", (0.0, self.length)) from exc

    @cached_property
    def _phi_tail(self) -> CumulativeIntegral:
        p = self.params.p
        return self._tail_integral(lambda s: self.U(s) ** (-p) * self.ws.v(s), 'phi')

    @cached_property
    def _A(self) -> CumulativeIntegral:
        q, r = self.params.q, self.params.r
        return self._tail_integral(lambda s: self.Delta(s) ** (-q / r) * self.ws.w(s), 'A')

    @cached_property
    def _T7(self) -> CumulativeIntegral:
        q = self.params.q
        e = q / (1 - q)
        return self._tail_integral(lambda s: self.W(s) ** e * self.ws.w(s) * self.U(s) ** (-e), 'B7')

    def _log_primitive(self, weight: Weight, values: Callable, s) -> np.ndarray:
        if weight.kind == 'power':
            return weight.log_primitive(s)
        with np.errstate(divide='ignore'):
            return np.log(values(s))

    @cached_property
    def _G(self) -> CumulativeIntegral:
        r = self.params.r
        c = r / (1 - r)

        def g(s):
            # Δ и U у нуля уходят в машинный ноль раньше своего отношения
            log_ratio = (self._log_primitive(self.ws.delta, self.Delta, s)
                         - self._log_primitive(self.ws.u, self.U, s))
            with np.errstate(all='ignore'):
                return np.exp(c * log_ratio) * self.ws.delta(s)

        try:
            return CumulativeIntegral(g, self.grid.points, 0.0, self.length,
                                      singular_points=self.ws.singular_points)
        except (QuadratureFailure, NonFiniteIntegrand) as exc:
            raise NonFinite(f"Интеграл Δ^(r/(1-r)) δ U^(-r/(1-r)) расходится: {exc}",
                            (0.0, float(self.grid.points[0]))) from exc

    def phi_tail(self, t):
        """∫_t^L U^{-p} v."""
        return self._phi_tail.tail(t)

    def A(self, t):
        """∫_t^L Δ^{-q/r} w."""
        return self._A.tail(t)

    def G(self, t):
        """∫_0^t Δ^{r/(1-r)} δ U^{-r/(1-r)}."""
        return self._G.head(t)

    def T7(self, t):
        return self._T7.tail(t)

    def phi(self, t):
        t = np.asarray(t, dtype=float)
        return self.V(t) + self.U(t) ** self.params.p * self.phi_tail(t)

    def sigma(self, t):
        p, r = self.params.p, self.params.r
        if p == r:
            raise ExponentDegenerate("σ не определена при p = r")
        if r > p:
            raise OutOfScope(f"σ используется только при r < p: p={p}, r={r}")
        t = np.asarray(t, dtype=float)
        return (self.phi(t) ** (-r / (p - r) - 2) * self.V(t) * self.phi_tail(t)
                * self.U(t) ** (p - 1) * self.ws.u(t))


def _as_output(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def phi(params: ParamTriple, ws: WeightSet, t, grid: Optional[Grid] = None):
    """φ(t) = V(t) + U(t)^p ∫_t^L U^{-p} v.

    Raises:
        NonFinitePhi: хвостовой интеграл расходится
    """
    return _as_output(Profile(params, ws, grid).phi(t))


def sigma(params: ParamTriple, ws: WeightSet, t, grid: Optional[Grid] = None):
    """σ(t) = φ^{-r/(p-r)-2} V ∫_t^L U^{-p} v U^{p-1} u."""
    return _as_output(Profile(params, ws, grid).sigma(t))


def phi_min_kernel(params: ParamTriple, ws: WeightSet, t: float) -> float:
    """φ(t) = ∫_0^L min{U(t)^p, U(s)^p} v(s)/U(s)^p ds прямой квадратурой."""
    p = params.p
    u_t = float(ws.u.primitive(t)) ** p

    def kernel(s):
        us = ws.u.primitive(s) ** p
        return np.minimum(u_t, us) * ws.v(s) / us

    return integrate(kernel, 0.0, ws.domain.effective_length,
                     singular_points=(t, *ws.singular_points))


# ---------------------------------------------------------------------------
# Величины B1..B8
# ---------------------------------------------------------------------------

def _check_index(index: int, params: ParamTriple) -> None:
    p, q, r = params.p, params.q, params.r
    if index not in range(1, 9):
        raise ValueError(f"Номер B должен быть от 1 до 8: {index}")
    needs = {3: r < 1, 4: r < p, 5: r < p and r < 1, 6: q < 1, 7: q < 1, 8: q < 1 and r < 1}
    if not needs.get(index, True):
        raise OutOfScope(f"B{index} не определена при p={p}, q={q}, r={r}")
    _guard(params)


def _nodes(profile: Profile, points: np.ndarray, names: Tuple[str, ...]) -> Dict[str, np.ndarray]:
    return {name: np.asarray(getattr(profile, name)(points), dtype=float) for name in names}


class InnerMesh:
    """Составная сетка Гаусса на панелях внутренней сетки для ∫_0^t и ∫_t^L.

    К нулю панели сгущаются геометрически на HEAD_DECADES декад ниже
    первой точки сетки. Для заданных t полные панели берутся из общей
    сетки, а панель, в которую попало t, заменяется укороченной.
    """
    HEAD_DECADES = 6

    def __init__(self, inner: Grid, length: float):
        first = float(inner.points[0])
        head = first * 10.0 ** -np.arange(self.HEAD_DECADES, 0, -1, dtype=float)
        self.mesh = PanelMesh(np.concatenate([[0.0], head, inner.points, [length]]))
        self.nodes = self.mesh.nodes
        self.weights = self.mesh.weights
        self._x, self._w = gauss_rule(self.mesh.order)

    def _short(self, start: np.ndarray, end: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        half = 0.5 * (end - start)
        mid = 0.5 * (end + start)
        return mid[:, None] + half[:, None] * self._x[None, :], half[:, None] * self._w[None, :]

    def head_parts(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Число общих узлов левее t, узлы и веса укороченной панели [e_k, t]."""
        edges = self.mesh.edges
        k = np.clip(np.searchsorted(edges, t, side='right') - 1, 0, self.mesh.panels)
        start = edges[k]
        end = np.clip(t, start, edges[-1])
        nodes, weights = self._short(start, end)
        return k * self.mesh.order, nodes, weights

    def tail_parts(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Номер первого общего узла правее t, узлы и веса укороченной панели [t, e_j]."""
        edges = self.mesh.edges
        j = np.clip(np.searchsorted(edges, t, side='left'), 0, self.mesh.panels)
        end = edges[j]
        start = np.clip(t, edges[0], end)
        nodes, weights = self._short(start, end)
        return j * self.mesh.order, nodes, weights


def _at(func: Callable, nodes: np.ndarray) -> np.ndarray:
    return np.asarray(func(nodes.ravel()), dtype=float).reshape(nodes.shape)


def _closure_B(index: int, profile: Profile, inner: Grid) -> Callable:
    """Поточечная функция t -> ..., супремум которой по внешней сетке равен B_index."""
    p, q, r = profile.params.p, profile.params.q, profile.params.r
    P = profile

    if index == 1:
        return lambda t: P.W(t) ** (1 / q) * P.phi(t) ** (-1 / p)

    if index == 2:
        return lambda t: P.Delta(t) ** (1 / r) * P.phi(t) ** (-1 / p) * P.A(t) ** (1 / q)

    if index == 7:
        return lambda t: P.U(t) * P.phi(t) ** (-1 / p) * P.T7(t) ** ((1 - q) / q)

    if index == 3:
        S = inner.points
        n = _nodes(P, S, ('U', 'phi', 'G'))
        left = n['U'] * n['phi'] ** (-1 / p)

        def b3(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            diff = P.G(t)[:, None] - n['G'][None, :]
            mask = S[None, :] < t[:, None]
            with np.errstate(all='ignore'):
                vals = np.where(mask, left[None, :] * np.clip(diff, 0, None) ** ((1 - r) / r), 0.0)
            return P.A(t) ** (1 / q) * vals.max(axis=1)
        return b3

    mesh = InnerMesh(inner, P.length)
    X = mesh.nodes

    if index == 4:
        e = p * r / (p - r)

        def psi_of(s):
            return P.Delta(s) ** (p / (p - r)) * P.U(s) ** (-e)

        def base_of(s):
            return P.sigma(s) * P.U(s) ** e

        psi, base = psi_of(X), base_of(X)

        def b4(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            full, nodes, weights = mesh.head_parts(t)
            psi_y, base_y, psi_t = _at(psi_of, nodes), _at(base_of, nodes), psi_of(t)
            out = np.empty(t.size)
            for j, m in enumerate(full):
                # sup ψ по [s, t] берётся по узлам правее s и по самой точке t
                running = np.maximum(suffix_max(np.append(psi[:m], psi_y[j])), psi_t[j])
                values = np.append(base[:m], base_y[j]) * running
                out[j] = np.dot(values, np.append(mesh.weights[:m], weights[j]))
            return P.A(t) ** (1 / q) * out ** ((p - r) / (p * r))
        return b4

    if index == 5:
        c = r / (1 - r)
        power = p * (1 - r) / (p - r)
        n = _nodes(P, X, ('U', 'Delta', 'sigma', 'G'))

        def b5(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            full, nodes, weights = mesh.head_parts(t)
            part = {name: _at(getattr(P, name), nodes) for name in ('U', 'Delta', 'sigma', 'G')}
            G_t = P.G(t)
            out = np.empty(t.size)
            for j, m in enumerate(full):
                Delta_s = np.append(n['Delta'][:m], part['Delta'][j])
                U_s = np.append(n['U'][:m], part['U'][j])
                G_s = np.append(n['G'][:m], part['G'][j])
                sigma_s = np.append(n['sigma'][:m], part['sigma'][j])
                kernel = (1 - r) * Delta_s ** (1 / (1 - r)) + U_s ** c * np.clip(G_t[j] - G_s, 0, None)
                values = sigma_s * kernel ** power
                out[j] = np.dot(values, np.append(mesh.weights[:m], weights[j]))
            return P.A(t) ** (1 / q) * out ** ((p - r) / (p * r))
        return b5

    if index in (6, 8):
        expo = q * (1 - r) / (r * (1 - q))

        def weight_of(s):
            return P.A(s) ** (q / (1 - q)) * P.Delta(s) ** (-q / r) * P.ws.w(s)

        def chi_of(s):
            return P.Delta(s) ** (q / (r * (1 - q))) * P.U(s) ** (-q / (1 - q))

        weight = weight_of(X)
        chi = chi_of(X) if index == 6 else None
        G_X = P.G(X) if index == 8 else None

        def b68(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            start, nodes, weights = mesh.tail_parts(t)
            weight_y = _at(weight_of, nodes)
            if index == 6:
                chi_y, chi_t = _at(chi_of, nodes), chi_of(t)
            else:
                G_y, G_t = _at(P.G, nodes), P.G(t)
            out = np.empty(t.size)
            for j, m in enumerate(start):
                w_s = np.append(weight_y[j], weight[m:])
                if index == 6:
                    # sup χ по [t, s]: точка t и узлы левее s
                    factor = np.maximum(np.maximum.accumulate(np.append(chi_y[j], chi[m:])), chi_t[j])
                else:
                    diff = np.append(G_y[j], G_X[m:]) - G_t[j]
                    factor = np.clip(diff, 0, None) ** expo
                out[j] = np.dot(w_s * factor, np.append(weights[j], mesh.weights[m:]))
            return P.U(t) * P.phi(t) ** (-1 / p) * out ** ((1 - q) / q)
        return b68

    raise ValueError(f"Неизвестный номер B: {index}")


def compute_B(index: int, params: ParamTriple, ws: WeightSet, grid: Optional[Grid] = None,
              inner_grid: Optional[Grid] = None, profile: Optional[Profile] = None) -> float:
    """Вычисление B_index: внешний esup по сетке grid, внутренние интегралы
    квадратурой Гаусса на панелях внутренней сетки, внутренний esup по её точкам.

    Для вложенных величин (B3-B6, B8) внутренняя сетка после первого прохода
    уточняется вокруг найденного максимизатора (2·INNER_REFINE_DEPTH точек),
    и берётся больший из двух результатов.

    Args:
        index (int): Номер величины 1..8
        params (ParamTriple): Показатели
        ws (WeightSet): Веса
        grid (Grid): Внешняя сетка (по умолчанию GRID_N точек)
        inner_grid (Grid): Внутренняя сетка (по умолчанию INNER_GRID_N точек)
        profile (Profile): Готовый профиль для переиспользования интегралов

    Returns:
        float: Значение B_index

    Raises:
        OutOfScope: Величина не определена при данных показателях
        NonFinite: Расходится один из вложенных фрагментов
    """
    _check_index(index, params)
    grid = grid if grid is not None else build_grid(ws.domain)
    profile = profile if profile is not None else Profile(params, ws, grid)
    inner = inner_grid if inner_grid is not None else build_grid(ws.domain, DEFAULTS['INNER_GRID_N'], grid.mode)
    window = (0.0, profile.length)

    try:
        value, where = esup_with_argmax(_closure_B(index, profile, inner), window, grid)
        if index in NESTED_B and math.isfinite(value):
            finer = refine(inner, where, DEFAULTS['INNER_REFINE_DEPTH'])
            again, _ = esup_with_argmax(_closure_B(index, profile, finer), window, grid)
            value = max(value, again)
    except (QuadratureFailure, NonFiniteIntegrand) as exc:
        raise NonFinite(f"B{index}: {exc}", window) from exc

    if not math.isfinite(value):
        raise NonFinite(f"B{index} бесконечна около t={where:.4g}", (where, where))
    logger.info(f"B{index} = {value:.6g} (p={params.p:g}, q={params.q:g}, r={params.r:g})")
    return value


def b_values_for(case: CaseId, params: ParamTriple, ws: WeightSet, grid: Grid,
                 inner_grid: Optional[Grid] = None, jobs: int = 1,
                 flags: Optional[Dict[str, Any]] = None) -> Dict[str, float]:
    """Все B, нужные для случая; расходящиеся записываются как inf с окном в flags."""
    profile = Profile(params, ws, grid)
    profile.phi(grid.points[:1])
    flags = flags if flags is not None else {}

    def run(index: int) -> float:
        try:
            return compute_B(index, params, ws, grid, inner_grid, profile)
        except NonFinite as exc:
            logger.warning(f"B{index} бесконечна: {exc}")
            flags.setdefault('nonfinite', {})[f'B{index}'] = list(exc.window) if exc.window else None
            return math.inf

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            values = map_in_scope(pool, run, case.required_B)
    else:
        values = [run(index) for index in case.required_B]
    flags.update({key: value for key, value in profile.diagnostics.items()})
    return {f'B{index}': value for index, value in zip(case.required_B, values)}


def embedding_constant_bounds(params: ParamTriple, ws: WeightSet, grid: Optional[Grid] = None,
                              oracle_budget=None, *, inner_grid: Optional[Grid] = None,
                              seed: Optional[int] = None, jobs: Optional[int] = None,
                              check_alternates: bool = False) -> EmbeddingReport:
    """Сумма нужных B, оценка C оракулом и их отношение.

    Raises:
        OutOfScope: p > q
        NonFinitePhi: φ не конечна
    """
    from app.oracle import OracleBudget, escalate_estimate, estimate_C

    case = classify_case(params)
    logger.info(f"Случай {case.tag}: нужны {', '.join(f'B{i}' for i in case.required_B)}")
    grid = grid if grid is not None else build_grid(ws.domain)
    jobs = DEFAULTS['JOBS'] if jobs is None else jobs
    budget = oracle_budget if oracle_budget is not None else OracleBudget()
    seed = DEFAULTS['SEED'] if seed is None else seed

    flags: Dict[str, Any] = {}
    b_values = b_values_for(case, params, ws, grid, inner_grid, jobs, flags)
    b_sum = math.fsum(b_values.values())

    result = estimate_C(params, ws, budget, seed=seed, jobs=jobs)
    c_estimate = result.estimate
    if math.isinf(b_sum):
        flags['unbounded_consistent'] = escalate_estimate(params, ws, budget, seed=seed)
        ratio = None
    else:
        ratio = b_sum / c_estimate if c_estimate > 0 else None

    if check_alternates:
        flags['alternates'] = _check_alternates(case, params, ws, grid, inner_grid, b_sum)

    provenance = {
        'grid_n': len(grid),
        'grid_mode': grid.mode,
        'inner_grid_n': len(inner_grid) if inner_grid is not None else DEFAULTS['INNER_GRID_N'],
        'quad_tol': DEFAULTS['QUAD_TOL'],
        'esup_tol': DEFAULTS['ESUP_TOL'],
        'l_trunc': ws.domain.l_trunc,
        'seed': seed,
        'budget': asdict(budget),
        'params': asdict(params),
    }
    logger.info(f"Сумма B = {b_sum:.6g}, оценка C = {c_estimate:.6g}")
    return EmbeddingReport(case, b_values, b_sum, c_estimate, ratio, flags, provenance)


def _check_alternates(case: CaseId, params: ParamTriple, ws: WeightSet, grid: Grid,
                      inner_grid: Optional[Grid], b_sum: float) -> Dict[str, Any]:
    out = {}
    for alt in case.alternates:
        shifted = alternate_params(params, alt)
        if shifted is None:
            continue
        try:
            alt_case = classify_case(shifted)
            alt_sum = math.fsum(b_values_for(alt_case, shifted, ws, grid, inner_grid).values())
        except (ExponentDegenerate, OutOfScope) as exc:
            out[alt] = {'skipped': str(exc)}
            continue
        factor = DEFAULTS['ALTERNATE_FACTOR']
        agree = math.isfinite(alt_sum) and b_sum / factor <= alt_sum <= b_sum * factor
        if not agree:
            logger.warning(f"Случай {alt} у границы расходится с {case.tag}: {alt_sum:.4g} против {b_sum:.4g}")
        out[alt] = {'b_sum': alt_sum, 'agree': agree}
    return out


def reduce_parameters(orig: OriginalParams) -> Tuple[ParamTriple, WeightSet]:
    """Приведение: r = r2/r1, q = q2/r1, p = q1/r1, u = δ1, δ = δ2, v = w1, w = w2."""
    params = ParamTriple(p=orig.q1 / orig.r1, q=orig.q2 / orig.r1, r=orig.r2 / orig.r1)
    ws = WeightSet(u=orig.delta1, delta=orig.delta2, v=orig.w1, w=orig.w2)
    return params, ws
