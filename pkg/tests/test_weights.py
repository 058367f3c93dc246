import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.errors import InadmissibleSpec, QuadratureFailure
from app.grids import build_grid
from app.weights import (
    CumulativeIntegral, Domain, PanelMesh, WeightSet, check_admissible, integrate, make_weight,
    primitive, tail_diagnostic,
)


def test_integrate_inverse_sqrt_singularity():
    assert integrate(lambda s: s ** -0.5, 0.0, 1.0) == pytest.approx(2.0, rel=1e-8)


def test_integrate_divergent_at_zero():
    with pytest.raises(QuadratureFailure):
        integrate(lambda s: s ** -1.5, 0.0, 1.0)


def test_integrate_empty_interval_and_bad_order():
    assert integrate(lambda s: s, 0.5, 0.5) == 0.0
    with pytest.raises(ValueError):
        integrate(lambda s: s, 1.0, 0.5)


def test_integrate_splits_at_singular_points():
    step = lambda s: np.where(s < 0.3, 1.0, 5.0)
    assert integrate(step, 0.1, 1.0, singular_points=[0.3]) == pytest.approx(0.2 + 3.5, rel=1e-10)


def test_domain_validation():
    with pytest.raises(InadmissibleSpec):
        Domain(0.0)
    with pytest.raises(InadmissibleSpec):
        Domain(1.0, l_trunc=math.inf)
    assert Domain(math.inf, 1e4).effective_length == 1e4
    assert not Domain(2.0).infinite


def test_power_primitive(unit_domain):
    w = make_weight({'kind': 'power', 'alpha': 1.0}, unit_domain)
    assert primitive(w, 0.5) == pytest.approx(0.125)


def test_non_integrable_power_rejected(unit_domain):
    with pytest.raises(InadmissibleSpec):
        make_weight({'kind': 'power', 'alpha': -1.0}, unit_domain)


def test_unknown_kind_and_bad_scale(unit_domain):
    with pytest.raises(InadmissibleSpec):
        make_weight({'kind': 'gauss'}, unit_domain)
    with pytest.raises(InadmissibleSpec):
        make_weight({'kind': 'power', 'alpha': 0.0, 'scale': 0.0}, unit_domain)


def test_powerlog_primitive_matches_closed_form(unit_domain):
    w = make_weight({'kind': 'powerlog', 'alpha': 0.0, 'beta': 1.0}, unit_domain)
    # ∫_0^t (1 - ln s) ds = 2t - t ln t
    values = w.primitive(np.array([0.5, 1.0]))
    assert values == pytest.approx([1.0 + 0.5 * math.log(2.0), 2.0], rel=1e-8)


def test_powerlog_critical_exponent_is_admissible(unit_domain):
    make_weight({'kind': 'powerlog', 'alpha': -1.0, 'beta': -2.0}, unit_domain)
    with pytest.raises(InadmissibleSpec):
        make_weight({'kind': 'powerlog', 'alpha': -1.0, 'beta': -1.0}, unit_domain)


def test_piecewise_primitive():
    domain = Domain(2.0)
    w = make_weight({'kind': 'piecewise', 'breakpoints': [1.0], 'values': [1.0, 2.0]}, domain)
    assert primitive(w, 0.5) == pytest.approx(0.5)
    assert primitive(w, 1.5) == pytest.approx(2.0)


def test_piecewise_validation():
    domain = Domain(2.0)
    with pytest.raises(InadmissibleSpec):
        make_weight({'kind': 'piecewise', 'breakpoints': [1.0], 'values': [1.0]}, domain)
    with pytest.raises(InadmissibleSpec):
        make_weight({'kind': 'piecewise', 'breakpoints': [3.0], 'values': [1.0, 1.0]}, domain)
    with pytest.raises(InadmissibleSpec):
        make_weight({'kind': 'piecewise', 'breakpoints': [1.0], 'values': [1.0, -1.0]}, domain)


def test_table_primitive_uses_linear_interpolation():
    domain = Domain(2.0)
    w = make_weight({'kind': 'table', 'points': [0.5, 1.0, 1.5], 'values': [1.0, 3.0, 1.0]}, domain)
    assert w(np.array([0.75]))[0] == pytest.approx(2.0)
    assert primitive(w, 0.25) == pytest.approx(0.25)
    assert primitive(w, 1.0) == pytest.approx(1.5)
    assert primitive(w, 1.75) == pytest.approx(2.5 + 0.25)


def test_weight_spec_round_trip(unit_domain):
    spec = {'kind': 'powerlog', 'alpha': 0.5, 'beta': -1.0, 'scale': 3.0}
    w = make_weight(spec, unit_domain)
    assert make_weight(w.spec(), unit_domain) == w


@settings(max_examples=25, deadline=None)
@given(alpha=st.floats(-0.9, 3.0), factor=st.floats(0.01, 100.0), t=st.floats(0.01, 1.0))
def test_primitive_is_homogeneous_in_scale(alpha, factor, t):
    domain = Domain(1.0)
    w = make_weight({'kind': 'power', 'alpha': alpha}, domain)
    assert primitive(w.scaled(factor), t) == pytest.approx(factor * primitive(w, t), rel=1e-12)


def test_weights_must_share_domain(unit_domain):
    one = make_weight({'kind': 'power', 'alpha': 0.0}, unit_domain)
    other = make_weight({'kind': 'power', 'alpha': 0.0}, Domain(2.0))
    with pytest.raises(InadmissibleSpec):
        WeightSet(one, one, one, other)


def test_singular_points_collected():
    domain = Domain(3.0)
    one = make_weight({'kind': 'power', 'alpha': 0.0}, domain)
    step = make_weight({'kind': 'piecewise', 'breakpoints': [2.0], 'values': [1.0, 2.0]}, domain)
    log = make_weight({'kind': 'powerlog', 'alpha': 0.0, 'beta': 1.0}, domain)
    assert WeightSet(one, step, log, one).singular_points == (1.0, 2.0)


def test_check_admissible(unit_ws, unit_domain):
    grid = build_grid(unit_domain, 32)
    assert check_admissible(unit_ws, grid)['status'] == 'success'

    bad = make_weight({'kind': 'power', 'alpha': -1.5}, unit_domain, validate=False)
    report = check_admissible(unit_ws.replace(v=bad), grid)
    assert report['status'] == 'error'
    assert any('primitive' in message for message in report['failures'])


def test_tail_diagnostic():
    domain = Domain(math.inf, 1e6)
    assert tail_diagnostic(lambda s: s ** -2.0, domain)['converged']
    slow = tail_diagnostic(lambda s: s ** -1.0, domain)
    assert slow['truncated'] and not slow['converged']
    assert tail_diagnostic(lambda s: s, Domain(1.0)) == {
        'truncated': False, 'converged': True, 'relative_change': 0.0,
    }


def test_cumulative_integral_head_and_tail():
    acc = CumulativeIntegral(lambda s: np.ones_like(s), [0.25, 0.5, 0.75], 0.0, 1.0)
    t = np.array([0.1, 0.5, 0.9])
    assert acc.head(t) == pytest.approx(t)
    assert acc.tail(t) == pytest.approx(1.0 - t)
    assert acc.total == pytest.approx(1.0)


def test_panel_mesh_cumulative_exact_for_polynomials():
    mesh = PanelMesh(np.linspace(0.0, 1.0, 5))
    t = mesh.nodes
    assert mesh.cumulative(t ** 2) == pytest.approx(t ** 3 / 3, abs=1e-13)
    assert mesh.tail(t ** 2) == pytest.approx((1.0 - t ** 3) / 3, abs=1e-13)
    assert mesh.integral(np.ones_like(t)) == pytest.approx(1.0)


@pytest.mark.parametrize('alpha', [-0.99, -0.97, -0.5])
def test_integrate_slowly_converging_power(alpha):
    # почти вся масса s^alpha при alpha ≈ -1 лежит глубже s = 1e-300
    assert integrate(lambda s: s ** alpha, 0.0, 1.0) == pytest.approx(1.0 / (alpha + 1.0), rel=1e-7)


def test_integrate_logarithmic_divergence():
    with pytest.raises(QuadratureFailure):
        integrate(lambda s: 1.0 / s, 0.0, 0.5)
    with pytest.raises(QuadratureFailure):
        integrate(lambda s: 1.0 / (s * (1.0 - np.log(s))), 0.0, 0.5)


@settings(max_examples=20, deadline=None)
@given(c=st.floats(0.01, 0.99))
def test_integrate_is_additive(c):
    f = lambda s: s ** -0.5 * (1.0 + s)
    whole = integrate(f, 0.0, 1.0)
    assert whole == pytest.approx(2.0 + 2.0 / 3.0, rel=1e-8)
    assert integrate(f, 0.0, c) + integrate(f, c, 1.0) == pytest.approx(whole, rel=1e-8)


def test_powerlog_critical_exponent_primitive(unit_domain):
    w = make_weight({'kind': 'powerlog', 'alpha': -1.0, 'beta': -2.0}, unit_domain)
    # ∫_0^t ds / (s (1 - ln s)^2) = 1 / (1 - ln t)
    assert primitive(w, 0.5) == pytest.approx(1.0 / (1.0 + math.log(2.0)), rel=1e-6)
    assert primitive(w, 0.1) == pytest.approx(1.0 / (1.0 + math.log(10.0)), rel=1e-6)


def test_powerlog_near_critical_alpha_primitive(unit_domain):
    w = make_weight({'kind': 'powerlog', 'alpha': -0.97, 'beta': 0.0}, unit_domain)
    assert primitive(w, 0.5) == pytest.approx(0.5 ** 0.03 / 0.03, rel=1e-7)


def test_log_primitive_survives_underflow(unit_domain):
    w = make_weight({'kind': 'power', 'alpha': 2.0}, unit_domain)
    t = np.array([1e-200, 0.5])
    assert w.log_primitive(t) == pytest.approx(3.0 * np.log(t) - math.log(3.0))
