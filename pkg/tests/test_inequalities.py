import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from lognls_lab.inequalities import (
    check_F1_expansion,
    check_log_pair,
    check_zlogz_lipschitz,
    gauss_tail_1d,
    gauss_tail_moments,
    gauss_tail_moments_radial,
    integrate_box,
    moment_constant,
    sphere_area,
    sweep,
    tail_ladder_report,
    verified_quad,
    zlogz,
)
from lognls_lab.inequalities.pointwise import (
    f1_expansion_terms,
    log_pair_terms,
    zlogz_lipschitz_terms,
)
from lognls_lab.infra.errors import DomainViolation

ANGLE = st.floats(min_value=-np.pi, max_value=np.pi)
PLANE_EXP = st.floats(min_value=-6.0, max_value=3.0)
DISK_EXP = st.floats(min_value=-12.0, max_value=0.0)


def _z(exponent: float, angle: float) -> complex:
    return 10.0**exponent * complex(np.cos(angle), np.sin(angle))


def _holds(margin, scale) -> bool:
    return bool(margin >= -1e-13 * scale)


@settings(max_examples=200, deadline=None)
@given(PLANE_EXP, ANGLE, PLANE_EXP, ANGLE)
def test_log_pair_holds_on_the_plane(e1, a1, e2, a2):
    z1, z2 = _z(e1, a1), _z(e2, a2)
    assume(abs(z2 - z1) > 1e-4 * max(abs(z1), abs(z2)))
    assert _holds(*log_pair_terms(z1, z2))


@settings(max_examples=200, deadline=None)
@given(PLANE_EXP, ANGLE, PLANE_EXP, ANGLE)
def test_f1_expansion_holds_on_the_plane(e1, a1, e2, a2):
    assert _holds(*f1_expansion_terms(_z(e1, a1), _z(e2, a2)))


@settings(max_examples=200, deadline=None)
@given(DISK_EXP, ANGLE, DISK_EXP, ANGLE)
def test_zlogz_lipschitz_holds_on_the_disk(e1, a1, e2, a2):
    assert _holds(*zlogz_lipschitz_terms(_z(e1, a1), _z(e2, a2)))


def test_zero_is_handled():
    assert check_log_pair(0.0, 0.0) == 0.0
    assert check_log_pair(0.0, 1.0) == pytest.approx(2.0)
    assert check_F1_expansion(0.0, 0.0) == 0.0
    assert zlogz(0.0) == 0.0


def test_zlogz_lipschitz_domain():
    with pytest.raises(DomainViolation):
        check_zlogz_lipschitz(0.0, 0.5)
    with pytest.raises(DomainViolation):
        check_zlogz_lipschitz(0.5, 2.0)


def test_sweeps_are_seeded_and_clean():
    first = sweep("log_pair", 2000, seed=3)
    again = sweep("log_pair", 2000, seed=3)
    assert first == again
    assert first.samples == 2000 and first.passed
    for name in ("f1_expansion", "zlogz_lipschitz"):
        assert sweep(name, 2000, seed=3).violations == 0


def test_sweep_rejects_unknown_check():
    with pytest.raises(KeyError):
        sweep("nope", 10, seed=0)


def test_one_dimensional_tail_is_strict():
    tb = gauss_tail_1d(2.0, 1.0)
    assert tb.strict
    assert 0.85 < tb.ratio < 1.0


def test_moment_constants():
    assert moment_constant(0) == moment_constant(1) == 0.5
    assert moment_constant(2) == pytest.approx(1.25)
    assert moment_constant(3) == pytest.approx(1.75)


def test_first_moment_bound_is_an_identity():
    assert gauss_tail_moments(1, 2.0, 3.0).ratio == pytest.approx(1.0, rel=1e-8)


def test_moment_bound_needs_large_radius():
    with pytest.raises(DomainViolation):
        gauss_tail_moments(2, 4.0, 0.1)


def test_far_tails_do_not_underflow():
    tb = gauss_tail_moments(4, 1.0, 40.0)
    assert tb.bound == 0.0
    assert tb.log_bound < -1500
    assert 0.0 < tb.ratio < 1.0


def test_radial_tail_scales_by_sphere_area():
    base = gauss_tail_moments(2, 1.0, 2.0)
    radial = gauss_tail_moments_radial(3, 0, 1.0, 2.0)
    assert radial.bound == pytest.approx(4.0 * np.pi * base.bound)
    assert radial.ratio == pytest.approx(base.ratio)


def test_sphere_area():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2.0 * np.pi)
    assert sphere_area(3) == pytest.approx(4.0 * np.pi)


def test_tail_ladder_is_strict_everywhere():
    report = tail_ladder_report()
    assert report.passed
    assert report.worst_margin > 0


def test_verified_quadrature():
    val = verified_quad(lambda x: np.exp(-x * x), -np.inf, np.inf)
    assert val == pytest.approx(np.sqrt(np.pi), rel=1e-10)
    box = integrate_box(lambda p: np.exp(-np.sum(p * p, axis=-1)), [-8, -8], [8, 8], 1.0)
    assert box == pytest.approx(np.pi, rel=1e-9)
