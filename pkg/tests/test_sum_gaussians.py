import numpy as np
import pytest

from lognls_lab.dynamics import (
    GaussianParams,
    eval_gaussian_solution,
    eval_gausson,
    evolve_matrix_ode,
)
from lognls_lab.inequalities import (
    GaussianTerm,
    eps0,
    log_bound_ladder,
    log_defect,
    min_separation,
    pointwise_majorant_check,
    sum_gaussian_log_bound,
    weighted_log_diff_norm,
    weighted_norm_ladder,
)
from lognls_lab.infra.errors import DomainViolation, SeparationTooSmall


def _pair(distance, lam=1.0):
    return [
        GaussianTerm(lam * np.eye(1), 0.0, [-0.5 * distance]),
        GaussianTerm(lam * np.eye(1), 0.0, [0.5 * distance]),
    ]


@pytest.fixture
def outgoing_pair():
    return [
        GaussianParams.gausson(1.0, v=[1.0]),
        GaussianParams.gausson(1.0, v=[-1.0]),
    ]


def test_single_member_has_no_defect():
    term = GaussianTerm(np.eye(1), 0.3, [1.0])
    x = np.linspace(-5, 5, 11)[:, None]
    assert np.all(log_defect([term], x) == 0)
    assert sum_gaussian_log_bound([term]).lhs == 0.0


def test_defect_matches_direct_evaluation():
    terms = _pair(4.0)
    x = np.linspace(-3.0, 3.0, 13)[:, None]
    g = [t(x) for t in terms]
    total = g[0] + g[1]
    direct = total * np.log(np.abs(total)) - sum(gk * np.log(np.abs(gk)) for gk in g)
    assert np.allclose(log_defect(terms, x), direct, rtol=1e-9, atol=1e-14)


def test_defect_does_not_underflow_far_out():
    terms = _pair(60.0)
    d = log_defect(terms, np.array([[0.0]]))
    assert np.all(np.isfinite(d))


def test_eps0_and_min_separation():
    assert eps0(1.0, 1.0, 0.0, 2, 1) == pytest.approx(np.sqrt(1.0 / 3.0))
    assert min_separation([[0.0], [3.0], [10.0]]) == pytest.approx(3.0)
    assert min_separation([[1.0]]) == np.inf
    with pytest.raises(DomainViolation):
        eps0(0.0, 1.0, 0.0, 2, 1)


def test_close_members_are_rejected():
    with pytest.raises(SeparationTooSmall):
        sum_gaussian_log_bound(_pair(1.0))


def test_log_bound_ladder_decay_rate():
    ladder = log_bound_ladder()
    assert ladder.fit.expected_slope == pytest.approx(-0.25)
    assert ladder.fit.relative_error < 0.15
    assert np.all(np.diff([r.lhs for r in ladder.reports]) < 0)
    assert np.all(ladder.implied_constants > 0)


def test_weighted_ladder_decay_rate(outgoing_pair):
    fit = weighted_norm_ladder(outgoing_pair, [3.0, 4.0, 5.0, 6.0], v_star=2.0)
    assert fit.expected_slope == pytest.approx(-1.0)
    assert fit.relative_error < 0.5


def test_weighted_norm_needs_gaussons(outgoing_pair):
    breather = GaussianParams.breather(1.0, 0.0, 1.0, x0=5.0)
    with pytest.raises(DomainViolation):
        weighted_log_diff_norm([outgoing_pair[0], breather], 4.0)


def test_pointwise_majorant_holds(outgoing_pair):
    report = pointwise_majorant_check(outgoing_pair, 4.0, samples=2000, seed=1)
    assert report.samples == 2 * 2000
    assert report.passed


def test_moving_members_match_the_closed_forms():
    x = np.linspace(-4.0, 6.0, 201)[:, None]
    p = GaussianParams.gausson(1.0, omega=0.2, x0=[-1.0], v=[1.5], theta=0.3)
    term = GaussianTerm.gausson(p, 1.2)
    assert np.allclose(term(x), eval_gausson(0.2, [-1.0], [1.5], 0.3, 1.0, 1.2, x), atol=1e-13)

    b = GaussianParams.breather(0.8, 0.3, 1.0, omega=0.1, x0=0.5, v=-0.7, theta=1.0)
    (_, s) = evolve_matrix_ode(b.a_in, 1.0, [0.0, 1.2])
    term = GaussianTerm.from_state(b, s)
    assert np.allclose(term(x), eval_gaussian_solution(b, s, x), atol=1e-13)
