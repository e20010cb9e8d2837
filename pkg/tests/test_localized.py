import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erf

from lognls_lab.dynamics import GaussianParams
from lognls_lab.inequalities import verified_quad
from lognls_lab.infra.errors import DomainViolation, InsufficientSamples, SupportsOverlap
from lognls_lab.localized import (
    LocalizedReport,
    build_partition,
    gausson_fields,
    gausson_orthogonality_report,
    gausson_outer_norm,
    gausson_tail_report,
    ladder_decreasing,
    localized_quantities,
    partition_derivative_check,
    slow_variation_report,
    smoothstep,
    smoothstep_prime,
)
from lognls_lab.solver import Grid, SolverConfig, norms

T_OFFSET = 11.5


@pytest.fixture
def grid512():
    return Grid(dim=1, extent=40.0, n=512)


def _action_report(t, s):
    one = np.array([s])
    return LocalizedReport(t=t, mass=one * 0, momentum=np.zeros((1, 1)), energy=one, action=one)


def test_smoothstep_endpoints():
    assert smoothstep(-1.0) == 1.0
    assert smoothstep(1.0) == 0.0
    assert smoothstep(0.0) == pytest.approx(0.5)
    assert smoothstep(-7.0) == 1.0 and smoothstep(7.0) == 0.0
    assert smoothstep_prime(0.0) == pytest.approx(-15.0 / 16.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-3.0, max_value=3.0))
def test_smoothstep_bounds(s):
    assert 0.0 <= smoothstep(s) <= 1.0
    assert -15.0 / 16.0 - 1e-15 <= smoothstep_prime(s) <= 0.0


def test_smoothstep_prime_matches_difference_quotient():
    s = np.linspace(-0.9, 0.9, 7)
    h = 1e-6
    fd = (smoothstep(s + h) - smoothstep(s - h)) / (2 * h)
    assert np.allclose(smoothstep_prime(s), fd, atol=1e-8)


def test_partition_closes(crossing_pair, grid512):
    part = build_partition(crossing_pair, 1.0, 2.0, grid512, t_offset=T_OFFSET)
    assert np.allclose(part.psi.sum(axis=0), 1.0, atol=1e-14)
    assert part.psi.min() >= -1e-14
    assert part.time == pytest.approx(12.5)
    assert sorted(part.centers[:, 0]) == pytest.approx([-4.5, 4.5])


def test_overlapping_supports_are_rejected(crossing_pair, grid512):
    with pytest.raises(SupportsOverlap):
        build_partition(crossing_pair, 1.0, 2.0, grid512, t_offset=9.0)


def test_partition_time_derivative_bound(crossing_pair, grid512):
    part = build_partition(crossing_pair, 1.0, 2.0, grid512, t_offset=T_OFFSET)
    report = partition_derivative_check(crossing_pair, part)
    assert report.c0 == pytest.approx(2.0)
    assert report.passed
    assert report.max_gradient <= 15.0 / 16.0 + 1e-12


def test_localized_pieces_add_up(crossing_pair, grid512):
    cfg = SolverConfig(lam=1.0)
    part = build_partition(crossing_pair, 1.0, 2.0, grid512, t_offset=T_OFFSET)
    singles = gausson_fields(crossing_pair, part.time, grid512)
    field = singles[0] + singles[1]
    rep = localized_quantities(field, part, crossing_pair, cfg)
    whole = norms(field, cfg)
    assert rep.total_mass == pytest.approx(whole.mass, rel=1e-12)
    assert rep.total_energy == pytest.approx(whole.energy, rel=1e-9)
    assert np.allclose(rep.momentum.sum(axis=0), whole.momentum, atol=1e-9)
    assert len(rep.row()) == len(LocalizedReport.columns(2, 1))


def test_resting_gausson_action_is_constant(grid512):
    member = [GaussianParams.gausson(1.0)]
    cfg = SolverConfig(lam=1.0)
    times = np.linspace(0.0, 1.0, 11)
    reports = []
    for t in times:
        part = build_partition(member, float(t), 0.0, grid512)
        field = gausson_fields(member, float(t), grid512)[0]
        reports.append(localized_quantities(field, part, member, cfg))
    sv = slow_variation_report(times, reports, rate=1.0, v_star=0.0)
    assert np.max(np.abs(sv.derivative)) < 1e-10
    assert sv.envelope_constant < 1e-8


def test_slow_variation_recovers_gaussian_decay():
    times = np.linspace(0.0, 3.0, 61)
    reports = [_action_report(t, 10.0 + 0.5 * np.sqrt(np.pi) * erf(t)) for t in times]
    sv = slow_variation_report(times, reports, rate=1.0, v_star=2.0)
    assert 0.9 < sv.envelope_constant < 1.3
    assert sv.fit is not None
    assert abs(sv.fit.c + 1.0) < 0.1


def test_slow_variation_needs_three_samples():
    with pytest.raises(InsufficientSamples):
        slow_variation_report([0.0, 1.0], [_action_report(0, 1.0)] * 2, 1.0, 2.0)


@pytest.mark.parametrize("radius", [0.0, 1.0, 3.0])
def test_outer_norm_matches_erfc(radius):
    out = gausson_outer_norm(1.0, 1, 0.2, radius)
    assert out.value == pytest.approx(out.closed_form, rel=1e-8)


def test_outer_norm_has_no_closed_form_above_one_dimension():
    out = gausson_outer_norm(1.0, 3, 0.0, 2.0)
    assert out.closed_form is None
    assert 0.0 < out.value < gausson_outer_norm(1.0, 3, 0.0, 1.0).value


def test_tail_reports_shrink_along_the_ladder():
    member = GaussianParams.gausson(1.0, v=[1.0])
    reports = [gausson_tail_report(member, t, 2.0) for t in (4.0, 6.0, 8.0, 10.0)]
    assert ladder_decreasing(reports)
    assert all(np.isfinite(v) for r in reports for v in r.log_normalized.values())
    assert reports[-1].values["l2"] < 1e-40


def test_tail_report_domain():
    member = GaussianParams.gausson(1.0)
    with pytest.raises(DomainViolation):
        gausson_tail_report(member, 0.0, 2.0)
    with pytest.raises(DomainViolation):
        gausson_tail_report(GaussianParams.breather(1.0, 0.0, 1.0), 1.0, 2.0)


def test_weighted_overlap_closed_form(crossing_pair):
    gj, gk = crossing_pair
    rep = gausson_orthogonality_report(gj, gk, 2.0, 2.0, t_offset=T_OFFSET)
    assert rep.separation == pytest.approx(11.0)
    cj, ck = gj.center(13.5)[0], gk.center(13.5)[0]

    def integrand(x):
        amp = np.exp(1.0 - (x - cj) ** 2 - (x - ck) ** 2)
        return (1.0 + (x - cj) ** 2) * amp

    direct = verified_quad(integrand, -np.inf, np.inf, None)
    assert rep.values["weighted_overlap"] == pytest.approx(direct, rel=1e-8)
    assert rep.log_prefactor["weighted_overlap"] == pytest.approx(
        1.0 + np.log(31.5 * np.sqrt(np.pi / 2.0)), rel=1e-12
    )
