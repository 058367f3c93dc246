import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.covering import CoveringSequence
from app.discrete import (
    RealSeq, compute_Cij, covering_for, discrete_hardy_D, discrete_hardy_bruteforce,
    discrete_hardy_report, discretization_report, discretized_constants, discretized_forms,
    is_strongly_monotone, local_A_bruteforce, local_B, local_B_bruteforce, strong_monotone_equivalence,
)
from app.errors import EmptyCovering, NonPositive, OutOfScope, WrongMonotonicity
from app.functionals import ParamTriple, Profile
from app.oracle import TestFunction

positive_lists = st.lists(st.floats(0.01, 100.0), min_size=1, max_size=8)


def test_real_seq():
    seq = RealSeq([1.0, 2.0, 3.0], N=-1)
    assert seq.M == 1 and len(seq) == 3
    with pytest.raises(ValueError):
        RealSeq([1.0, math.inf])


def test_is_strongly_monotone():
    assert is_strongly_monotone([1.0, 2.0, 4.0]) == {'kind': 'increasing', 'rho': 2.0}
    assert is_strongly_monotone([4.0, 1.0]) == {'kind': 'decreasing', 'rho': 0.25}
    assert is_strongly_monotone([1.0, 1.0])['kind'] == 'neither'
    assert is_strongly_monotone([3.0])['kind'] == 'neither'
    with pytest.raises(NonPositive):
        is_strongly_monotone([1.0, 0.0])


def test_strong_monotone_example():
    report = strong_monotone_equivalence([1.0, 2.0, 4.0], [1.0, 1.0, 1.0], 1.0, 'increasing_sum_sum')
    assert report.lhs == pytest.approx(11.0)
    assert report.rhs == pytest.approx(7.0)
    assert report.ratio == pytest.approx(11 / 7)


def test_strong_monotone_zero_sequence():
    report = strong_monotone_equivalence([1.0, 2.0, 4.0], [0.0, 0.0, 0.0], 2.0, 'increasing_sup_sum')
    assert report.ratio == 1.0


def test_strong_monotone_wrong_direction():
    with pytest.raises(WrongMonotonicity):
        strong_monotone_equivalence([1.0, 1.0, 1.0], [1.0, 1.0, 1.0], 1.0, 'increasing_sum_sum')
    with pytest.raises(WrongMonotonicity):
        strong_monotone_equivalence([1.0, 2.0], [1.0, 1.0], 1.0, 'decreasing_sum_sum')
    with pytest.raises(ValueError):
        strong_monotone_equivalence([1.0, 2.0], [1.0, 1.0], 1.0, 'sideways')


def test_decreasing_forms():
    rho = [8.0, 2.0, 1.0]
    a = [1.0, 1.0, 1.0]
    # префиксные суммы 1, 2, 3
    report = strong_monotone_equivalence(rho, a, 1.0, 'decreasing_sum_sum')
    assert report.lhs == pytest.approx(8 + 4 + 3)
    sup = strong_monotone_equivalence(rho, a, 1.0, 'decreasing_sup_sum')
    assert sup.lhs == pytest.approx(8.0) and sup.rhs == pytest.approx(8.0)


@settings(max_examples=40, deadline=None)
@given(a=positive_lists, p=st.floats(0.2, 4.0))
def test_strong_monotone_lhs_dominates(a, p):
    rho = [2.0 ** k for k in range(len(a))]
    for which in ('increasing_sum_sum', 'increasing_sum_sup', 'increasing_sup_sum'):
        report = strong_monotone_equivalence(rho, a, p, which)
        assert report.lhs >= report.rhs * (1 - 1e-12)


def test_discrete_hardy_two_terms():
    params = ParamTriple(1.0, 1.0, 1.0)
    assert discrete_hardy_D([1.0, 1.0], [2.0, 1.0], params) == pytest.approx(4.0)
    assert discrete_hardy_bruteforce([1.0, 1.0], [2.0, 1.0], params, trials=4, seed=1) == pytest.approx(4.0)


def test_discrete_hardy_single_term():
    params = ParamTriple(1.0, 2.0, 1.5)
    report = discrete_hardy_report([2.0], [3.0], params, trials=2, seed=1)
    assert report.rhs == pytest.approx(2.0 ** 0.5 * 3.0 ** (1 / 1.5))
    assert report.ratio == pytest.approx(1.0)
    assert isinstance(report.witness, RealSeq)


def test_discrete_hardy_zero_outer_weights():
    assert discrete_hardy_D([0.0, 0.0], [1.0, 2.0], ParamTriple(1.0, 1.0, 1.0)) == 0.0
    report = discrete_hardy_report([0.0, 0.0], [1.0, 2.0], ParamTriple(1.0, 1.0, 1.0), trials=1)
    assert report.lhs == 0.0 and report.ratio == 1.0


def test_discrete_hardy_out_of_scope():
    with pytest.raises(OutOfScope):
        discrete_hardy_D([1.0], [1.0], ParamTriple(2.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        discrete_hardy_D([1.0, 2.0], [1.0], ParamTriple(1.0, 1.0, 1.0))


@settings(max_examples=30, deadline=None)
@given(a=positive_lists, factor=st.floats(0.1, 10.0))
def test_discrete_hardy_homogeneous_in_b(a, factor):
    params = ParamTriple(1.0, 2.0, 1.5)
    b = np.linspace(1.0, 2.0, len(a))
    base = discrete_hardy_D(a, b, params)
    assert discrete_hardy_D(a, factor * b, params) == pytest.approx(factor ** (1 / params.r) * base, rel=1e-9)


@pytest.mark.parametrize('triple', [(1.0, 1.0, 1.0), (1.0, 2.0, 0.5), (0.5, 1.0, 2.0)])
def test_bruteforce_does_not_exceed_formula_by_much(triple):
    params = ParamTriple(*triple)
    a = [1.0, 0.5, 0.25, 2.0]
    b = [0.3, 1.0, 2.0, 0.5]
    found = discrete_hardy_bruteforce(a, b, params, trials=4, seed=3)
    formula = discrete_hardy_D(a, b, params)
    assert 0 < found
    assert found / formula < 10


def test_local_B_unit_interval(unit_ws, unit_params, unit_grid):
    assert local_B((0.0, 1.0), unit_params, unit_ws, unit_grid) == pytest.approx(1.0, abs=1e-5)
    assert local_B((0.5, 0.5), unit_params, unit_ws, unit_grid) == 0.0


def test_local_B_small_r(unit_ws, unit_grid):
    params = ParamTriple(1.0, 1.0, 0.5)
    # r = 1/2: ∫_0^1 Δ δ φ^{-1} = ∫ t / (t(1 - ln t)) dt
    expected = 0.596347362323194
    assert local_B((0.0, 1.0), params, unit_ws, unit_grid) == pytest.approx(expected, rel=1e-6)


def test_local_bruteforce_bounds(unit_ws, unit_params, unit_grid):
    profile = Profile(unit_params, unit_ws, unit_grid)
    found = local_B_bruteforce((0.1, 1.0), unit_params, unit_ws, trials=3, pieces=8, seed=2, profile=profile)
    formula = local_B((0.1, 1.0), unit_params, unit_ws, profile=profile)
    assert 0 < found <= formula * 1.01
    assert local_B_bruteforce((0.1, 1.0), unit_params, unit_ws, trials=0) == 0.0
    assert local_A_bruteforce((0.3, 0.3), unit_params, unit_ws, trials=3) == 0.0


def test_local_A_bruteforce_positive(unit_ws, unit_params, unit_grid):
    profile = Profile(unit_params, unit_ws, unit_grid)
    value = local_A_bruteforce((0.1, 1.0), unit_params, unit_ws, trials=2, pieces=6, seed=2, profile=profile)
    assert math.isfinite(value) and value > 0


def test_discretized_constants():
    assert discretized_constants('i') == ('C11', 'C12', 'C31', 'C41', 'C21')
    assert discretized_constants('vii') == ('C15', 'C16', 'C34', 'C41', 'C22')


def test_c33_out_of_scope(unit_ws, unit_params, unit_grid):
    cs = covering_for(unit_params, unit_ws, unit_grid, a=4.0)
    with pytest.raises(OutOfScope):
        compute_Cij(cs, unit_params, unit_ws, 'C33', unit_grid)
    with pytest.raises(ValueError):
        compute_Cij(cs, unit_params, unit_ws, 'C99', unit_grid)


def test_empty_covering(unit_ws, unit_params, unit_grid):
    cs = CoveringSequence(points=np.array([0.0, 1.0]), N=0, M=1, a=4.0, L=1.0, length=1.0)
    with pytest.raises(EmptyCovering):
        compute_Cij(cs, unit_params, unit_ws, 'C41', unit_grid)


def test_c_constants_against_b(unit_ws, unit_params, unit_grid):
    cs = covering_for(unit_params, unit_ws, unit_grid, a=4.0)
    profile = Profile(unit_params, unit_ws, unit_grid)
    c41 = compute_Cij(cs, unit_params, unit_ws, 'C41', profile=profile)
    c12 = compute_Cij(cs, unit_params, unit_ws, 'C12', profile=profile)
    c21 = compute_Cij(cs, unit_params, unit_ws, 'C21', profile=profile)
    c31 = compute_Cij(cs, unit_params, unit_ws, 'C31', profile=profile)
    # B1 = 1 при единичных весах
    assert 0 < c41 <= 1.01
    assert 0 < c12 <= 1.01
    assert c21 <= c31 * (1 + 1e-9)


def test_discretized_forms_zero_and_scaling(unit_ws, unit_params, unit_grid):
    cs = covering_for(unit_params, unit_ws, unit_grid, a=4.0)
    edges = np.array([0.0, 0.2, 0.9])
    zero = discretized_forms(TestFunction(edges, np.zeros(2)), cs, unit_params, unit_ws)
    assert all(value == 0.0 for value in zero.values())

    h = TestFunction(edges, np.array([1.0, 0.5]))
    base = discretized_forms(h, cs, unit_params, unit_ws)
    scaled = discretized_forms(h.scaled(3.0), cs, unit_params, unit_ws)
    for name, value in base.items():
        assert scaled[name] == pytest.approx(3.0 * value, rel=1e-9)
    assert base['rhs'] > 0


def test_discretization_report_unit_case(unit_ws, unit_params, unit_grid, inner_grid):
    report = discretization_report(unit_params, unit_ws, unit_grid, a=4.0, inner_grid=inner_grid)
    assert report['case'] == 'i'
    assert set(report['required']) == {'C11', 'C12', 'C31', 'C41', 'C21'}
    assert report['chains']['C21<=C31'] is True
    assert report['covering']['N'] < report['covering']['M']
    assert set(report['B']) == {'B1', 'B2'}
