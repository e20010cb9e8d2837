import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lognls_lab.dynamics import GaussianParams
from lognls_lab.infra.errors import ConfigInvalid, InsufficientData, SeparationViolated
from lognls_lab.multisoliton import (
    BuildRun,
    MultiConfig,
    build_approximate_multisoliton,
    fit_gaussian_decay,
    ladder_consistency,
    multigaussian_build,
)
from lognls_lab.solver import SolverConfig


@pytest.fixture
def pair_cfg(crossing_pair):
    return MultiConfig.from_members(crossing_pair, [10.0, 12.0, 14.0, 16.0])


def test_derived_constants(pair_cfg):
    assert pair_cfg.v_star == pytest.approx(2.0)
    assert pair_cfg.rate == pytest.approx(1.0)
    assert pair_cfg.expected_c == pytest.approx(-1.0)
    assert 0.5 < pair_cfg.eps0 < 0.65
    assert pair_cfg.t_sep == pytest.approx(8.87, abs=0.05)
    assert pair_cfg.t_obs == pair_cfg.t_sep
    assert pair_cfg.fit_window == (pair_cfg.t_sep, 15.0)


def test_closest_approach(pair_cfg):
    dist, when = pair_cfg.min_center_distance(0.0, 16.0)
    assert dist == pytest.approx(0.0, abs=1e-12)
    assert when == pytest.approx(8.0)
    dist, when = pair_cfg.min_center_distance(10.0, 16.0)
    assert dist == pytest.approx(4.0) and when == pytest.approx(10.0)


def test_breathers_decay_at_their_width_rate():
    members = [
        GaussianParams.breather(1.0, 0.0, 1.0, x0=-8.0, v=1.0),
        GaussianParams.breather(1.0, 0.0, 1.0, x0=8.0, v=-1.0),
    ]
    cfg = MultiConfig.from_members(members, [10.0])
    assert not cfg.all_gaussons
    assert 0.45 < cfg.rate < 0.55
    assert cfg.lam_plus > 1.0


def test_members_need_distinct_velocities():
    same = [GaussianParams.gausson(1.0, x0=[x], v=[1.0]) for x in (-8.0, 8.0)]
    with pytest.raises(ConfigInvalid):
        MultiConfig.from_members(same, [10.0])


def test_ladder_must_increase(crossing_pair):
    with pytest.raises(ConfigInvalid):
        MultiConfig.from_members(crossing_pair, [12.0, 10.0])
    with pytest.raises(ConfigInvalid):
        MultiConfig.from_members(crossing_pair, [])


def test_fit_recovers_exact_quadratic():
    t = np.linspace(0.0, 4.0, 17)
    fit = fit_gaussian_decay(t, np.exp(1.0 + 0.5 * t - t * t))
    assert fit.c == pytest.approx(-1.0, rel=1e-9)
    assert fit.b == pytest.approx(0.5, rel=1e-8)
    assert fit.r_squared == pytest.approx(1.0)
    assert fit.samples == 17


@settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=-5.0, max_value=5.0),
    st.floats(min_value=-2.0, max_value=2.0),
    st.floats(min_value=-3.0, max_value=-0.1),
)
def test_fit_recovers_random_quadratics(a, b, c):
    t = np.linspace(0.0, 4.0, 21)
    fit = fit_gaussian_decay(t, np.exp(a + b * t + c * t * t))
    assert fit.c == pytest.approx(c, abs=1e-7)


def test_fit_skips_samples_near_the_floor():
    t = np.linspace(0.0, 4.0, 17)
    errors = np.exp(-t * t)
    errors[-4:] = 1e-9
    fit = fit_gaussian_decay(t, errors, floor=1e-9)
    assert fit.samples == 13
    assert fit.c == pytest.approx(-1.0, rel=1e-6)


def test_fit_needs_enough_samples():
    with pytest.raises(InsufficientData):
        fit_gaussian_decay([0.0, 1.0, 2.0, 3.0, 4.0], np.exp(-np.arange(5.0)))
    with pytest.raises(InsufficientData):
        fit_gaussian_decay(np.arange(8.0), np.full(8, 1e-10), floor=1e-10)


def test_backward_run_starts_from_the_exact_sum(crossing_pair):
    cfg = MultiConfig.from_members(crossing_pair, [10.0])
    run = build_approximate_multisoliton(cfg, 10.0, SolverConfig(lam=1.0, dt=1e-2))
    assert run.times[-1] == 10.0 and run.times[0] == pytest.approx(cfg.t_sep)
    assert run.error_at(10.0) < 1e-12
    assert np.all(np.isfinite(run.errors["h1"]))
    cols, rows = run.table()
    assert cols == ["t", "l2", "h1", "fh1"] and rows.shape[0] == run.times.size


def test_window_through_the_crossing_is_rejected(crossing_pair):
    cfg = MultiConfig.from_members(crossing_pair, [10.0], t_obs=0.0)
    with pytest.raises(SeparationViolated):
        build_approximate_multisoliton(cfg, 10.0, SolverConfig(lam=1.0, dt=1e-2))


def _run(t_n, errors):
    times = np.arange(1.0, 1.0 + len(errors))
    return BuildRun(t_n, times, {"l2": np.asarray(errors)})


def test_ladder_consistency_accepts_nested_runs():
    runs = [_run(10.0, [1e-3, 1e-4, 1e-5]), _run(12.0, [1.1e-3, 1.05e-4, 1.2e-5, 1e-6])]
    rep = ladder_consistency(runs)
    assert rep.cauchy_ok and rep.monotone_ok
    assert rep.pairs == [(10.0, 12.0)]
    assert list(rep.times) == [1.0, 2.0, 3.0]


def test_ladder_consistency_flags_growing_errors():
    runs = [_run(12.0, [5e-3, 5e-4, 5e-5, 1e-6]), _run(10.0, [1e-3, 1e-4, 1e-5])]
    rep = ladder_consistency(runs)
    assert not rep.monotone_ok
    assert rep.worst_monotone_ratio == pytest.approx(2.5)


def test_ladder_consistency_ignores_samples_below_the_floor():
    runs = [_run(10.0, [1e-3, 1e-12]), _run(12.0, [1e-3, 5e-12])]
    rep = ladder_consistency(runs, floor=1e-10)
    assert rep.cauchy_ok and rep.monotone_ok
    assert list(rep.times) == [1.0]


def _slow_breather_pair():
    return [
        GaussianParams.breather(1.0, 0.0, 1.0, x0=-4.0, v=0.5),
        GaussianParams.breather(1.0, 0.0, 1.0, x0=4.0, v=-0.5),
    ]


def test_breather_fit_starts_five_widths_apart():
    cfg = MultiConfig.from_members(_slow_breather_pair(), [14.0, 16.0, 18.0, 20.0])
    assert cfg.sigma_minus == pytest.approx(0.5, rel=1e-6)
    assert cfg.expected_c == pytest.approx(-0.125, rel=1e-6)
    assert cfg.t_obs < 13.0
    # centers are t - 8 apart after the crossing; five widths of 1 / sqrt(2 sigma_-)
    assert cfg.fit_start == pytest.approx(13.0, abs=0.01)
    assert cfg.fit_window == (cfg.fit_start, 19.0)


def test_gausson_fit_starts_at_observation(pair_cfg):
    assert pair_cfg.fit_start is None
    assert pair_cfg.fit_window[0] == pair_cfg.t_obs


@pytest.mark.slow
def test_breather_pair_error_decays():
    cfg = MultiConfig.from_members(_slow_breather_pair(), [20.0])
    result = multigaussian_build(cfg, SolverConfig(lam=1.0, dt=1e-3))
    assert result.fit.c < 0
    assert result.fit.window[0] >= cfg.fit_start - 1e-9
