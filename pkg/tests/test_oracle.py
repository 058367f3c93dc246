import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.covering import CoveringSequence
from app.errors import InadmissibleSpec, NotMonotone, OutOfScope
from app.functionals import OriginalParams, ParamTriple
from app.grids import build_grid
from app.oracle import (
    HardyFunctional, OracleBudget, TestFunction, antid_lemma_check, best_of, dis_antidis_check, estimate_C,
    functional_lhs, functional_rhs, min_equiv_diagnostic, multiplicative_ascent, random_starts,
    rearrangement_form,
)
from app.discrete import covering_for
from app.weights import WeightSet, make_weight


def test_indicator_both_sides(unit_ws, unit_params):
    # f* = 1 - s на (0, 1): обе части равны ∫ (1 - s)(-ln s) ds = 3/4
    h = TestFunction.indicator(0.0, 1.0)
    assert functional_lhs(h, unit_params, unit_ws) == pytest.approx(0.75, rel=1e-5)
    assert functional_rhs(h, unit_params, unit_ws) == pytest.approx(0.75, rel=1e-5)


@settings(max_examples=10, deadline=None)
@given(factor=st.floats(0.01, 100.0))
def test_functional_is_homogeneous(factor):
    from app.weights import Domain
    from tests.conftest import unit_weights
    ws = unit_weights(Domain(1.0))
    params = ParamTriple(1.0, 2.0, 1.0)
    h = TestFunction(np.array([0.0, 0.2, 0.7]), np.array([1.0, 3.0]))
    base = functional_lhs(h, params, ws)
    assert functional_lhs(h.scaled(factor), params, ws) == pytest.approx(factor * base, rel=1e-9)


def test_test_function_validation():
    with pytest.raises(InadmissibleSpec):
        TestFunction(np.array([0.5, 0.2]), np.array([1.0]))
    with pytest.raises(InadmissibleSpec):
        TestFunction(np.array([0.0, 1.0]), np.array([-1.0]))
    with pytest.raises(InadmissibleSpec):
        TestFunction(np.array([0.0, 1.0]), np.array([1.0, 2.0]))


def test_test_function_tail():
    h = TestFunction(np.array([0.0, 0.5, 1.0]), np.array([2.0, 1.0]))
    assert h.tail(np.array([0.0, 0.25, 0.75, 2.0])).tolist() == pytest.approx([1.5, 1.0, 0.25, 0.0])
    assert h(np.array([0.1, 0.6, 1.5])).tolist() == [2.0, 1.0, 0.0]
    assert TestFunction.indicator(0.0, 1.0).scaled(0.0).is_zero


def test_multiplicative_ascent_reaches_maximum():
    objective = lambda x: -math.log(x[0]) ** 2
    best, x = multiplicative_ascent(objective, np.array([8.0]), sweeps=50)
    assert best == pytest.approx(0.0, abs=1e-24)
    assert x[0] == pytest.approx(1.0)


def test_multiplicative_ascent_keeps_zero_coordinates():
    objective = lambda x: -np.sum((x - 1.0) ** 2)
    _, x = multiplicative_ascent(objective, np.array([0.0, 4.0]), sweeps=50)
    assert x[0] == 0.0
    assert x[1] == pytest.approx(1.0)


def test_random_starts_are_reproducible():
    first = random_starts(3, 5, 4)
    assert np.array_equal(first[0], np.ones(4))
    again = random_starts(3, 5, 4)
    assert all(np.array_equal(a, b) for a, b in zip(first, again))
    # добавление стартов не меняет уже выданные
    prefix = random_starts(3, 3, 4)
    assert all(np.array_equal(a, b) for a, b in zip(prefix, first[:3]))


def test_best_of_prefers_smaller_index():
    x = np.ones(1)
    assert best_of([(1.0, x), (2.0, x), (2.0, x)]) == 1
    assert best_of([(math.nan, x), (0.5, x)]) == 1


def test_estimate_C_unit_weights(unit_ws, unit_params):
    budget = OracleBudget(restarts=3, iterations=10, pieces=6)
    result = estimate_C(unit_params, unit_ws, budget, seed=11)
    assert result.estimate == pytest.approx(1.0, rel=1e-9)
    assert len(result.restart_values) == 3
    assert result.provenance()['seed'] == 11


def test_estimate_C_is_deterministic(unit_domain):
    from tests.conftest import unit_weights
    ws = unit_weights(unit_domain).replace(w=make_weight({'kind': 'power', 'alpha': 1.0}, unit_domain))
    params = ParamTriple(1.0, 2.0, 1.0)
    budget = OracleBudget(restarts=3, iterations=15, pieces=6)
    first = estimate_C(params, ws, budget, seed=5)
    second = estimate_C(params, ws, budget, seed=5)
    assert first.estimate == second.estimate
    assert np.array_equal(first.witness.values, second.witness.values)


def test_rearrangement_form_agrees(unit_domain):
    one = make_weight({'kind': 'power', 'alpha': 0.0}, unit_domain)
    half = make_weight({'kind': 'power', 'alpha': 0.5}, unit_domain)
    orig = OriginalParams(r1=2.0, q1=4.0, r2=2.0, q2=6.0, w1=half, w2=one, delta1=one, delta2=half)
    fstar = TestFunction(np.array([0.0, 0.3, 0.7, 1.0]), np.array([3.0, 2.0, 1.0]))
    report = rearrangement_form(fstar, orig)
    assert report['agree']
    assert report['original']['lhs'] ** 2 == pytest.approx(report['reduced']['lhs'], rel=1e-8)


def test_rearrangement_requires_nonincreasing(unit_domain):
    one = make_weight({'kind': 'power', 'alpha': 0.0}, unit_domain)
    orig = OriginalParams(r1=1.0, q1=1.0, r2=1.0, q2=1.0, w1=one, w2=one, delta1=one, delta2=one)
    with pytest.raises(NotMonotone):
        rearrangement_form(TestFunction(np.array([0.0, 0.5, 1.0]), np.array([1.0, 2.0])), orig)


def test_min_equiv_diagnostic(unit_ws):
    params = ParamTriple(2.0, 2.0, 1.0)
    h = TestFunction(np.array([0.0, 0.1, 0.6]), np.array([1.0, 0.5]))
    report = min_equiv_diagnostic(h, params, unit_ws)
    assert report['within']
    assert 0.5 * (1 - 1e-6) <= report['ratio'] <= 1 + 1e-6


def test_dis_antidis_forms_are_comparable(unit_ws, unit_params, unit_domain):
    grid = build_grid(unit_domain, 256)
    cs = covering_for(unit_params, unit_ws, grid, a=4.0)
    g = TestFunction(np.array([0.0, 0.2, 0.8]), np.array([1.0, 2.0]))
    report = dis_antidis_check(g, cs, unit_params, unit_ws)
    for name in ('continuous', 'kernel', 'local'):
        assert math.isfinite(report[name]) and report[name] > 0
    assert all(ratio is None or 1e-3 < ratio < 1e3 for ratio in report['ratios'].values())


def test_antid_lemma_requires_r_below_p(unit_ws, unit_params):
    cs = CoveringSequence(points=np.array([0.0, 0.5, 1.0]), N=0, M=2, a=4.0, L=1.0, length=1.0)
    with pytest.raises(OutOfScope):
        antid_lemma_check(cs, unit_params, unit_ws, 'lemma4')


def test_antid_lemma_r3r4_requires_r_below_one(unit_ws):
    cs = CoveringSequence(points=np.array([0.0, 0.5, 1.0]), N=0, M=2, a=4.0, L=1.0, length=1.0)
    with pytest.raises(OutOfScope):
        antid_lemma_check(cs, ParamTriple(2.0, 2.0, 1.0), unit_ws, 'R3R4')
    with pytest.raises(ValueError):
        antid_lemma_check(cs, ParamTriple(2.0, 2.0, 1.0), unit_ws, 'lemma9')


def test_antid_lemma4_unit_weights(unit_ws, unit_domain):
    params = ParamTriple(2.0, 2.0, 1.0)
    grid = build_grid(unit_domain, 256)
    cs = covering_for(params, unit_ws, grid, a=4.0)
    report = antid_lemma_check(cs, params, unit_ws, 'lemma4')
    assert report['which'] == 'lemma4'
    assert report['status'] == 'success'
    assert all(check['lhs'] >= 0 for check in report['checks'])


def test_rhs_from_inner_matches_rhs(unit_ws):
    params = ParamTriple(2.0, 2.0, 1.0)
    h = TestFunction(np.array([0.0, 0.1, 0.6]), np.array([1.0, 0.5]))
    functional = HardyFunctional(params, unit_ws, h.edges)
    mesh = functional.mesh
    assert functional.U_nodes == pytest.approx(mesh.nodes, rel=1e-12)
    T, T0 = functional.fstar(h.values)
    # U(t)^{-1} ∫_0^t f* u при u = 1 и f* = T0 на (0, edges[0])
    average = (T0 * mesh.edges[0] + mesh.cumulative(T)) / functional.U_nodes
    assert functional.rhs_from_inner(average, T0) == pytest.approx(functional.rhs(h.values), rel=1e-10)


@pytest.mark.slow
@pytest.mark.parametrize('which', ['lemma1', 'lemma2', 'lemma3', 'lemma4', 'R1R2', 'R3R4'])
@pytest.mark.parametrize('alpha', [0.0, 1.0])
def test_antid_lemma_battery(which, alpha, unit_domain):
    weight = make_weight({'kind': 'power', 'alpha': alpha}, unit_domain)
    one = make_weight({'kind': 'power', 'alpha': 0.0}, unit_domain)
    ws = WeightSet(u=one, delta=weight, v=one, w=weight)
    params = ParamTriple(2.0, 2.0, 0.5)
    cs = covering_for(params, ws, build_grid(unit_domain, 256), a=4.0)
    report = antid_lemma_check(cs, params, ws, which)
    assert report['which'] == which
    assert report['status'] in ('success', 'error')
    if which in ('lemma4', 'R1R2', 'R3R4'):
        assert report['checks']
    for check in report['checks']:
        assert check['lhs'] >= 0 and check['rhs'] >= 0
        assert math.isfinite(check['ratio'])


@pytest.mark.slow
def test_dis_antidis_stable_under_grid_doubling(unit_ws, unit_params, unit_domain):
    g = TestFunction(np.array([0.0, 0.2, 0.8]), np.array([1.0, 2.0]))
    reports = [
        dis_antidis_check(g, covering_for(unit_params, unit_ws, build_grid(unit_domain, n), a=4.0),
                          unit_params, unit_ws)
        for n in (128, 256)
    ]
    assert reports[1]['continuous'] == pytest.approx(reports[0]['continuous'], rel=1e-3)
    for name in ('kernel', 'local'):
        assert reports[1][name] == pytest.approx(reports[0][name], rel=0.05)
