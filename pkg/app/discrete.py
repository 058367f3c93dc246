"""
Дискретный слой: сильно монотонные последовательности, дискретное
неравенство Харди, локальные константы и константы C_{i,j} по
покрывающей последовательности CS(φ, U^p, a).

Основные функции:
- is_strongly_monotone(), strong_monotone_equivalence()
- discrete_hardy_D(), discrete_hardy_bruteforce(), discrete_hardy_report()
- local_B(), local_B_bruteforce(), local_A_bruteforce()
- compute_Cij(): одна из констант C11..C41
- discretized_forms(): левые части неравенств M1..M4 и общая правая часть
- discretized_constants(), discretization_report()
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from app import DEFAULTS
from app.covering import CoveringSequence, build_covering_sequence
from app.errors import EmptyCovering, NonFinite, NonPositive, OutOfScope, WrongMonotonicity
from app.functionals import ParamTriple, Profile, b_values_for, classify_case
from app.grids import Grid, build_grid, esup_on, window_grid
from app.oracle import TestFunction, best_of, overlap_matrix, random_starts, run_restarts
from app.weights import PanelMesh, WeightSet, integrate

logger = logging.getLogger(__name__)

C_LABELS = ('C11', 'C12', 'C13', 'C14', 'C15', 'C16', 'C21', 'C22',
            'C31', 'C32', 'C33', 'C34', 'C41')

REQUIRED_C: Dict[str, Tuple[str, ...]] = {
    'i': ('C11', 'C12', 'C31', 'C41'),
    'ii': ('C12', 'C13', 'C32', 'C41'),
    'iii': ('C11', 'C12', 'C33', 'C41'),
    'iv': ('C12', 'C13', 'C34', 'C41'),
    'v': ('C14', 'C15', 'C31', 'C41'),
    'vi': ('C15', 'C16', 'C32', 'C41'),
    'vii': ('C15', 'C16', 'C34', 'C41'),
}

MONOTONE_FORMS = ('increasing_sum_sum', 'increasing_sum_sup', 'increasing_sup_sum',
                  'decreasing_sum_sum', 'decreasing_sup_sum')

# Панелей на отрезок покрытия
_INTERVAL_PANELS = 32


@dataclass(frozen=True, eq=False)
class RealSeq:
    """Последовательность с индексами N..N+len-1."""
    values: np.ndarray
    N: int = 0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or not np.all(np.isfinite(values)):
            raise ValueError("Последовательность должна быть конечным одномерным массивом")
        object.__setattr__(self, 'values', values)

    @property
    def M(self) -> int:
        return self.N + self.values.size - 1

    def __len__(self) -> int:
        return self.values.size


@dataclass
class DiscreteReport:
    lhs: float
    rhs: float
    ratio: float
    witness: Optional[RealSeq] = None


def _seq(x) -> np.ndarray:
    return x.values if isinstance(x, RealSeq) else np.asarray(x, dtype=float)


# ---------------------------------------------------------------------------
# Сильно монотонные последовательности
# ---------------------------------------------------------------------------

def is_strongly_monotone(seq) -> Dict[str, Any]:
    """{'kind': 'increasing'|'decreasing'|'neither', 'rho': крайнее отношение соседей}.

    Raises:
        NonPositive: есть неположительные элементы
    """
    values = _seq(seq)
    if np.any(values <= 0):
        raise NonPositive("Элементы последовательности должны быть положительными")
    if values.size < 2:
        return {'kind': 'neither', 'rho': 1.0}
    ratios = values[1:] / values[:-1]
    if ratios.min() > 1:
        return {'kind': 'increasing', 'rho': float(ratios.min())}
    if ratios.max() < 1:
        return {'kind': 'decreasing', 'rho': float(ratios.max())}
    return {'kind': 'neither', 'rho': float(ratios.min())}


def strong_monotone_equivalence(seq, a, p: float, which: str) -> DiscreteReport:
    """Обе части одной из пяти эквивалентностей для сильно монотонной ϱ.

    Левая часть всегда не меньше правой; при нулевой a отношение равно 1.

    Raises:
        WrongMonotonicity: ϱ не монотонна в нужную для формы сторону
    """
    if which not in MONOTONE_FORMS:
        raise ValueError(f"Неизвестная форма: {which}")
    rho = _seq(seq)
    a = _seq(a)
    if a.size != rho.size:
        raise ValueError("Последовательности должны иметь одинаковую длину")
    direction = which.split('_')[0]
    if is_strongly_monotone(rho)['kind'] != direction:
        raise WrongMonotonicity(f"Форма {which} требует сильно {direction} последовательность")

    if direction == 'increasing':
        running = np.maximum.accumulate(a[::-1])[::-1] if which.endswith('sup') else np.cumsum(a[::-1])[::-1]
    else:
        running = np.cumsum(a)
    reduce = np.max if '_sup_' in which else np.sum
    lhs = float(reduce(rho * running ** p))
    rhs = float(reduce(rho * a ** p))
    ratio = lhs / rhs if rhs > 0 else 1.0
    return DiscreteReport(lhs, rhs, ratio)


# ---------------------------------------------------------------------------
# Дискретное неравенство Харди
# ---------------------------------------------------------------------------

def discrete_hardy_D(a, b, params: ParamTriple) -> float:
    """Выражение, эквивалентное оптимальной константе дискретного неравенства Харди.

    Raises:
        OutOfScope: p > q, или p > r при нарушении обоих условий
    """
    p, q, r = params.p, params.q, params.r
    a, b = _seq(a), _seq(b)
    if a.size != b.size:
        raise ValueError("Последовательности a и b должны иметь одинаковую длину")
    tails = np.cumsum(a[::-1])[::-1] ** (1 / q)
    if p <= min(q, r):
        return float(np.max(tails * b ** (1 / r)))
    if r < p <= q:
        heads = np.cumsum(b ** (p / (p - r))) ** ((p - r) / (p * r))
        return float(np.max(tails * heads))
    raise OutOfScope(f"Формула не применима при p={p}, q={q}, r={r}")


def _hardy_ratio(a: np.ndarray, b: np.ndarray, params: ParamTriple) -> Callable:
    p, q, r = params.p, params.q, params.r

    def ratio(x: np.ndarray) -> float:
        rhs = np.sum(x ** p) ** (1 / p)
        if not rhs > 0:
            return math.nan
        lhs = np.sum(np.cumsum(x ** r * b) ** (q / r) * a) ** (1 / q)
        return float(lhs / rhs)
    return ratio


def _hardy_search(a, b, params: ParamTriple, trials: Optional[int], seed: Optional[int],
                  jobs: int) -> Tuple[float, np.ndarray]:
    a, b = _seq(a), _seq(b)
    trials = DEFAULTS['BRUTE_RESTARTS'] if trials is None else trials
    seed = DEFAULTS['SEED'] if seed is None else seed
    objective = _hardy_ratio(a, b, params)
    n = a.size
    # единичные векторы плюс случайные старты
    starts = [np.eye(n)[k] for k in range(n)]
    starts += random_starts(seed, trials, n) if trials else []
    results = run_restarts(objective, starts, DEFAULTS['ORACLE_SWEEPS'], jobs)
    value, x = results[best_of(results)]
    return (value if value > -math.inf else 0.0), x


def discrete_hardy_bruteforce(a, b, params: ParamTriple, trials: Optional[int] = None,
                              seed: Optional[int] = None, jobs: int = 1) -> float:
    """Нижняя оценка sup по неотрицательным x отношения частей дискретного неравенства Харди."""
    return _hardy_search(a, b, params, trials, seed, jobs)[0]


def discrete_hardy_report(a, b, params: ParamTriple, trials: Optional[int] = None,
                          seed: Optional[int] = None) -> DiscreteReport:
    """D, перебор и их отношение; свидетель — лучшая найденная последовательность x."""
    formula = discrete_hardy_D(a, b, params)
    found, x = _hardy_search(a, b, params, trials, seed, 1)
    ratio = found / formula if formula > 0 else 1.0
    return DiscreteReport(lhs=found, rhs=formula, ratio=ratio, witness=RealSeq(x))


# ---------------------------------------------------------------------------
# Локальные константы
# ---------------------------------------------------------------------------

def _profile(params: ParamTriple, ws: WeightSet, grid: Optional[Grid], profile: Optional[Profile]) -> Profile:
    if profile is not None:
        return profile
    return Profile(params, ws, grid if grid is not None else build_grid(ws.domain, 256))


def local_B(interval: Tuple[float, float], params: ParamTriple, ws: WeightSet,
            grid: Optional[Grid] = None, profile: Optional[Profile] = None) -> float:
    """Выражение для константы неравенства Харди на отрезке [x_{k-1}, x_k].

    r ≥ 1: esup_t (∫_{x_{k-1}}^t δ)^{1/r} φ(t)^{-1/p};
    r < 1: (∫ (∫_{x_{k-1}}^t δ)^{r/(1-r)} δ(t) φ(t)^{-r/(p(1-r))} dt)^{(1-r)/r}.
    """
    lo, hi = interval
    if not hi > lo:
        return 0.0
    p, r = params.p, params.r
    P = _profile(params, ws, grid, profile)
    d_lo = float(P.Delta(np.array([lo]))[0]) if lo > 0 else 0.0

    if r >= 1:
        f = lambda t: np.clip(P.Delta(t) - d_lo, 0, None) ** (1 / r) * P.phi(t) ** (-1 / p)
        value = esup_on(f, (lo, hi), window_grid(lo, hi))
    else:
        g = lambda t: (np.clip(P.Delta(t) - d_lo, 0, None) ** (r / (1 - r)) * ws.delta(t)
                       * P.phi(t) ** (-r / (p * (1 - r))))
        value = integrate(g, lo, hi, singular_points=ws.singular_points) ** ((1 - r) / r)
    if not math.isfinite(value):
        raise NonFinite(f"Локальная константа B бесконечна на ({lo:.4g}, {hi:.4g})", (lo, hi))
    return value


class _LocalMesh:
    """Составная сетка на отрезке и ступенчатые h на его кусках."""

    def __init__(self, lo: float, hi: float, pieces: int, profile: Profile):
        if lo > 0:
            edges = np.geomspace(lo, hi, pieces + 1)
        else:
            edges = np.concatenate([[0.0], np.geomspace(hi * 1e-6, hi, pieces)])
        self.edges = edges
        panels = np.unique(np.concatenate([edges, window_grid(lo, hi, 4 * pieces).points]))
        self.mesh = PanelMesh(panels)
        t = self.mesh.nodes
        self.lo, self.hi = lo, hi
        # ∫_s^{hi} h для h, заданной на кусках edges
        self.O = overlap_matrix(edges, t)
        self.phi_mass = np.array([
            np.sum((profile.phi(t) ** (1 / profile.params.p) * self.mesh.weights)[(t > a) & (t < b)])
            for a, b in zip(edges[:-1], edges[1:])
        ])
        self.t = t


def _local_bruteforce(objective_factory: Callable[[_LocalMesh, Profile], Callable], interval,
                      params: ParamTriple, ws: WeightSet, trials: int, pieces: int, seed: Optional[int],
                      profile: Optional[Profile]) -> float:
    lo, hi = interval
    if trials <= 0 or not hi > lo:
        return 0.0
    P = _profile(params, ws, None, profile)
    local = _LocalMesh(lo, hi, pieces, P)
    objective = objective_factory(local, P)
    seed = DEFAULTS['SEED'] if seed is None else seed
    results = run_restarts(objective, random_starts(seed, trials, pieces), DEFAULTS['ORACLE_SWEEPS'])
    value = results[best_of(results)][0]
    return value if value > -math.inf else 0.0


def local_B_bruteforce(interval: Tuple[float, float], params: ParamTriple, ws: WeightSet,
                       trials: Optional[int] = None, pieces: int = 16, seed: Optional[int] = None,
                       profile: Optional[Profile] = None) -> float:
    """Нижняя оценка sup_h (∫ (∫_s^{x_k} h)^r δ)^{1/r} / ∫ h φ^{1/p} по ступенчатым h."""
    r = params.r
    trials = DEFAULTS['BRUTE_RESTARTS'] if trials is None else trials

    def factory(local: _LocalMesh, P: Profile):
        delta = ws.delta(local.t)

        def ratio(c):
            denominator = float(local.phi_mass @ c)
            if not denominator > 0:
                return math.nan
            F = local.O @ c
            return local.mesh.integral(F ** r * delta) ** (1 / r) / denominator
        return ratio

    return _local_bruteforce(factory, interval, params, ws, trials, pieces, seed, profile)


def local_A_bruteforce(interval: Tuple[float, float], params: ParamTriple, ws: WeightSet,
                       trials: Optional[int] = None, pieces: int = 16, seed: Optional[int] = None,
                       profile: Optional[Profile] = None) -> float:
    """Нижняя оценка локальной константы A(x_{k-1}, x_k) по ступенчатым h."""
    q, r = params.q, params.r
    trials = DEFAULTS['BRUTE_RESTARTS'] if trials is None else trials

    def factory(local: _LocalMesh, P: Profile):
        delta, w = ws.delta(local.t), ws.w(local.t)
        Delta = P.Delta(local.t)

        def ratio(c):
            denominator = float(local.phi_mass @ c)
            if not denominator > 0:
                return math.nan
            F = local.O @ c
            with np.errstate(all='ignore'):
                inner = np.clip(local.mesh.cumulative(F ** r * delta), 0, None) / Delta
                return local.mesh.integral(inner ** (q / r) * w) ** (1 / q) / denominator
        return ratio

    return _local_bruteforce(factory, interval, params, ws, trials, pieces, seed, profile)


# ---------------------------------------------------------------------------
# Константы C_{i,j}
# ---------------------------------------------------------------------------

def discretized_constants(case: str) -> Tuple[str, ...]:
    """Нужные C_{i,j} для случая и упрощённая замена C21 (p ≤ r) или C22 (r < p)."""
    tag = getattr(case, 'tag', case)
    extra = 'C22' if tag in ('iii', 'iv', 'vii') else 'C21'
    return REQUIRED_C[tag] + (extra,)


def _check_label(which: str, params: ParamTriple) -> None:
    p, q, r = params.p, params.q, params.r
    if which not in C_LABELS:
        raise ValueError(f"Неизвестная константа: {which}")
    needs = {
        'C13': (r < 1, "r < 1"),
        'C14': (q < 1, "q < 1"),
        'C15': (q < 1, "q < 1"),
        'C16': (q < 1 and r < 1, "q < 1 и r < 1"),
        'C21': (p <= min(q, r), "p ≤ min(q, r)"),
        'C22': (r < p <= q, "r < p ≤ q"),
        'C32': (r < 1, "r < 1"),
        'C33': (r < p, "r < p"),
        'C34': (r < p and r < 1, "r < p и r < 1"),
    }
    ok, condition = needs.get(which, (True, ''))
    if not ok:
        raise OutOfScope(f"{which} определена только при {condition}: p={p}, q={q}, r={r}")


class _Interval:
    """Значения всех нужных функций в узлах сетки на [x_{k-1}, x_k]."""

    def __init__(self, lo: float, hi: float, P: Profile):
        self.lo, self.hi = lo, hi
        edges = np.unique(np.concatenate([[lo, hi], window_grid(lo, hi, _INTERVAL_PANELS).points]))
        self.mesh = PanelMesh(edges)
        t = self.mesh.nodes
        ws = P.ws
        p, q, r = P.params.p, P.params.q, P.params.r
        self.t = t
        self.phi = P.phi(t)
        self.Delta = P.Delta(t)
        self.delta = ws.delta(t)
        self.w = ws.w(t)
        delta_lo = float(P.Delta(np.array([lo]))[0]) if lo > 0 else 0.0
        self.D = np.clip(self.Delta - delta_lo, 0, None)
        # правый конец отрезка не входит в узлы Гаусса
        self.phi_hi = float(P.phi(np.array([hi]))[0])
        self.D_hi = max(float(P.Delta(np.array([hi]))[0]) - delta_lo, 0.0)
        a_hi = float(P.A(np.array([hi]))[0])
        self.Aw = np.clip(P.A(t) - a_hi, 0, None)
        with np.errstate(all='ignore'):
            self.dw = self.Delta ** (-q / r) * self.w
            if r < 1:
                self.hardy = self.mesh.cumulative(self.D ** (r / (1 - r)) * self.delta
                                                  * self.phi ** (-r / (p * (1 - r))))

    def cumulative(self, values: np.ndarray) -> np.ndarray:
        return np.clip(self.mesh.cumulative(values), 0, None)

    def integral(self, values: np.ndarray) -> float:
        return self.mesh.integral(values)

    def esup(self, a: float, b: float) -> float:
        """esup D^a φ^b по узлам и правому концу."""
        return float(max(np.max(self.D ** a * self.phi ** b), self.D_hi ** a * self.phi_hi ** b))


class _Discretizer:
    """Вычисление C_{i,j} по покрывающей последовательности с кэшем отрезков."""

    def __init__(self, cs: CoveringSequence, P: Profile):
        self.cs = cs
        self.P = P
        self.p, self.q, self.r = P.params.p, P.params.q, P.params.r
        self._cache: Dict[int, _Interval] = {}
        self.flags: Dict[str, Any] = {}

    def interval(self, k: int) -> _Interval:
        if k not in self._cache:
            lo, hi = self.cs.interval(k)
            self._cache[k] = _Interval(lo, hi, self.P)
        return self._cache[k]

    def x(self, k: int) -> float:
        return min(self.cs.x(k), self.cs.length)

    def at(self, func: Callable, t: float) -> float:
        if t <= 0:
            return 0.0
        return float(np.asarray(func(np.array([t])), dtype=float)[0])

    def A_at(self, k: int) -> float:
        return self.at(self.P.A, self.x(k))

    def hardy_total(self, k: int) -> float:
        iv = self.interval(k)
        inner = iv.D ** (self.r / (1 - self.r)) * iv.delta * iv.phi ** (-self.r / (self.p * (1 - self.r)))
        return iv.integral(inner)

    def _sum_converged(self, label: str, terms: List[float]) -> None:
        if self.cs.left_truncated and len(terms) >= 3:
            total = math.fsum(terms)
            share = math.fsum(terms[:3]) / total if total > 0 else 0.0
            if share > 0.01:
                self.flags.setdefault('sum_not_converged', []).append(label)
                logger.warning(f"{label}: первые три слагаемых у усечённого конца дают {share:.2%} суммы")

    def value(self, which: str) -> float:
        p, q, r = self.p, self.q, self.r
        cs = self.cs
        with np.errstate(all='ignore'):
            if which.startswith('C1'):
                return max((self._c1(which, self.interval(k)) for k in cs.indices()
                            if self.x(k) > self.x(k - 1)), default=0.0)
            interior = list(cs.interior())
            if not interior:
                raise EmptyCovering(f"У покрытия нет внутренних индексов для {which}")
            if which == 'C41':
                return max(
                    (self.at(self.P.W, self.x(k)) - self.at(self.P.W, self.x(k - 1))) ** (1 / q)
                    * self.at(self.P.phi, self.x(k)) ** (-1 / p)
                    for k in interior
                )
            if which == 'C21':
                return max(
                    self.A_at(k) ** (1 / q)
                    * (self.at(self.P.Delta, self.x(k)) - self.at(self.P.Delta, self.x(k - 1))) ** (1 / r)
                    * self.at(self.P.phi, self.x(k)) ** (-1 / p)
                    for k in interior
                )
            if which == 'C31':
                return max(self.A_at(k) ** (1 / q) * self._esup_B(k) for k in interior)
            if which == 'C32':
                return max(self.A_at(k) ** (1 / q) * self.hardy_total(k) ** ((1 - r) / r) for k in interior)

            # суммы с показателем (p-r)/(pr)
            if which == 'C22':
                terms = [
                    (self.at(self.P.Delta, self.x(i)) - self.at(self.P.Delta, self.x(i - 1))) ** (p / (p - r))
                    * self.at(self.P.phi, self.x(i)) ** (-r / (p - r))
                    for i in interior
                ]
            elif which == 'C33':
                terms = [
                    self.interval(i).esup(p / (p - r), -r / (p - r))
                    for i in interior
                ]
            else:
                terms = [self.hardy_total(i) ** (p * (1 - r) / (p - r)) for i in interior]
            self._sum_converged(which, terms)
            partial = np.cumsum(terms)
            return max(self.A_at(k) ** (1 / q) * partial[j] ** ((p - r) / (p * r))
                       for j, k in enumerate(interior))

    def _esup_B(self, k: int) -> float:
        return self.interval(k).esup(1 / self.r, -1 / self.p)

    def _c1(self, which: str, iv: _Interval) -> float:
        p, q, r = self.p, self.q, self.r
        if which == 'C11':
            running = np.maximum.accumulate(iv.D ** (1 / r) * iv.phi ** (-1 / p))
            return float(np.max(iv.Aw ** (1 / q) * running))
        if which == 'C12':
            return float(np.max(iv.cumulative(iv.dw * iv.D ** (q / r)) ** (1 / q) * iv.phi ** (-1 / p)))
        if which == 'C13':
            return float(np.max(iv.Aw ** (1 / q) * np.clip(iv.hardy, 0, None) ** ((1 - r) / r)))

        e = q / (1 - q)
        if which == 'C14':
            running = np.maximum.accumulate(iv.D ** (q / (r * (1 - q))) * iv.phi ** (-q / (p * (1 - q))))
            total = iv.integral(iv.Aw ** e * iv.dw * running)
        elif which == 'C15':
            base = iv.dw * iv.D ** (q / r)
            total = iv.integral(iv.cumulative(base) ** e * base * iv.phi ** (-q / (p * (1 - q))))
        else:
            total = iv.integral(iv.Aw ** e * iv.dw
                                * np.clip(iv.hardy, 0, None) ** (q * (1 - r) / (r * (1 - q))))
        return float(total ** ((1 - q) / q))


def compute_Cij(cs: CoveringSequence, params: ParamTriple, ws: WeightSet, which: str,
                grid: Optional[Grid] = None, profile: Optional[Profile] = None) -> float:
    """Константа C_{i,j} по отрезкам покрывающей последовательности.

    Супремумы по k берутся по отрезкам N+1..M (C1*) или по внутренним
    индексам N+1..M-1 (остальные); внутренние esup и интегралы считаются
    в узлах сетки Гаусса-Лежандра на каждом отрезке.

    Raises:
        OutOfScope: константа не определена при данных показателях
        EmptyCovering: нет внутренних индексов
        NonFinite: значение бесконечно
    """
    _check_label(which, params)
    value = _Discretizer(cs, _profile(params, ws, grid, profile)).value(which)
    if not math.isfinite(value):
        raise NonFinite(f"{which} бесконечна", (0.0, cs.length))
    return float(value)


def covering_for(params: ParamTriple, ws: WeightSet, grid: Optional[Grid] = None,
                 a: Optional[float] = None, profile: Optional[Profile] = None) -> CoveringSequence:
    """Покрывающая последовательность CS(φ, U^p, a) на сетке."""
    grid = grid if grid is not None else build_grid(ws.domain, 256)
    P = _profile(params, ws, grid, profile)
    p = params.p
    return build_covering_sequence(P.phi, lambda t: P.U(t) ** p, a, grid)


# ---------------------------------------------------------------------------
# Дискретизованные неравенства
# ---------------------------------------------------------------------------

def discretized_forms(h: TestFunction, cs: CoveringSequence, params: ParamTriple, ws: WeightSet,
                      profile: Optional[Profile] = None) -> Dict[str, float]:
    """Левые части M1..M4 и общая правая часть (Σ_k (∫_{I_k} φ^{1/p} h)^p)^{1/p}."""
    p, q, r = params.p, params.q, params.r
    P = _profile(params, ws, None, profile)
    length = cs.length

    def X(k: int) -> float:
        return min(cs.x(k), length)

    def at(func, t):
        return float(np.asarray(func(np.array([t])), dtype=float)[0]) if t > 0 else 0.0

    T = lambda s: float(h.tail(np.array([s]))[0])
    ks = list(cs.indices())
    interior = list(cs.interior())

    m1 = 0.0
    J: Dict[int, float] = {}
    mass: Dict[int, float] = {}
    with np.errstate(all='ignore'):
        for k in ks:
            lo, hi = X(k - 1), X(k)
            if not hi > lo:
                J[k] = mass[k] = 0.0
                continue
            edges = np.unique(np.concatenate([[lo, hi], window_grid(lo, hi, _INTERVAL_PANELS).points,
                                              h.edges[(h.edges > lo) & (h.edges < hi)]]))
            mesh = PanelMesh(edges)
            t = mesh.nodes
            F = np.clip(h.tail(t) - T(hi), 0, None)
            cum = np.clip(mesh.cumulative(F ** r * ws.delta(t)), 0, None)
            m1 += mesh.integral((cum / P.Delta(t)) ** (q / r) * ws.w(t))
            J[k] = mesh.integral(F ** r * ws.delta(t))
            mass[k] = mesh.integral(P.phi(t) ** (1 / p) * h(t))

        A = {k: at(P.A, X(k)) for k in ks}
        m2 = m3 = m4 = 0.0
        for k in interior:
            band = A[k] - A[k + 1]
            m2 += math.fsum(J[i] for i in range(cs.N + 1, k + 1)) ** (q / r) * band
            inner = math.fsum(
                max(T(X(i)) - T(X(k + 1)), 0.0) ** r * (at(P.Delta, X(i)) - at(P.Delta, X(i - 1)))
                for i in range(cs.N + 1, k + 1)
            )
            m3 += inner ** (q / r) * band
            m4 += T(X(k)) ** q * (at(P.W, X(k)) - at(P.W, X(k - 1)))
        rhs = math.fsum(mass[k] ** p for k in ks) ** (1 / p)

    values = {'M1': m1 ** (1 / q), 'M2': m2 ** (1 / q), 'M3': m3 ** (1 / q), 'M4': m4 ** (1 / q), 'rhs': rhs}
    for name, value in values.items():
        if not math.isfinite(value):
            raise NonFinite(f"{name} не конечна", (0.0, length))
    return values


def discretization_report(params: ParamTriple, ws: WeightSet, grid: Optional[Grid] = None,
                          a: Optional[float] = None, inner_grid: Optional[Grid] = None) -> Dict[str, Any]:
    """Все нужные C_{i,j} для случая, сумма B и проверки цепочек.

    Цепочки: C21 ≤ C31 ≲ C32 и C22 ≤ C33 ≲ C34 (≲ с константой K_CHECK);
    оценки из доказательства: C11 ≤ B2, C12 ≤ B1, C31 ≤ B2, C41 ≤ B1.
    """
    case = classify_case(params)
    grid = grid if grid is not None else build_grid(ws.domain, 256)
    P = Profile(params, ws, grid)
    cs = covering_for(params, ws, grid, a, P)
    disc = _Discretizer(cs, P)

    labels = set(discretized_constants(case.tag))
    labels.update({'C11', 'C12', 'C31', 'C41'})
    if params.r < 1:
        labels.add('C32')
    if params.r < params.p:
        labels.update({'C22', 'C33'})
        if params.r < 1:
            labels.add('C34')
    if params.p <= params.r:
        labels.add('C21')

    values: Dict[str, float] = {}
    for label in sorted(labels):
        try:
            _check_label(label, params)
            values[label] = float(disc.value(label))
        except (OutOfScope, EmptyCovering) as exc:
            logger.info(f"{label} пропущена: {exc}")

    flags: Dict[str, Any] = dict(disc.flags)
    b_values = b_values_for(case, params, ws, grid, inner_grid, flags=flags)

    k_check = DEFAULTS['K_CHECK']
    slack = 1 + 1e-2

    def leq(x, y, factor=slack):
        if x is None or y is None:
            return None
        return bool(x <= factor * y)

    get = values.get
    chains = {
        'C21<=C31': leq(get('C21'), get('C31')),
        'C31<~C32': leq(get('C31'), get('C32'), k_check),
        'C22<=C33': leq(get('C22'), get('C33')),
        'C33<~C34': leq(get('C33'), get('C34'), k_check),
    }
    bounds = {
        'C11<=B2': leq(get('C11'), b_values.get('B2')),
        'C12<=B1': leq(get('C12'), b_values.get('B1')),
        'C31<=B2': leq(get('C31'), b_values.get('B2')),
        'C41<=B1': leq(get('C41'), b_values.get('B1')),
    }
    required = discretized_constants(case.tag)
    c_sum = math.fsum(values[label] for label in required[:-1] if label in values)
    b_sum = math.fsum(b_values.values())
    logger.info(f"Дискретизация, случай {case.tag}: сумма C = {c_sum:.6g}, сумма B = {b_sum:.6g}")
    return {
        'case': case.tag,
        'covering': {'N': cs.N, 'M': cs.M, 'a': cs.a, 'points': cs.points.tolist(),
                     'z1': sorted(cs.z1), 'z2': sorted(cs.z2)},
        'C': values,
        'required': list(required),
        'c_sum': c_sum,
        'B': b_values,
        'b_sum': b_sum,
        'ratio': c_sum / b_sum if b_sum > 0 and math.isfinite(b_sum) else None,
        'chains': chains,
        'bounds': bounds,
        'flags': flags,
    }
