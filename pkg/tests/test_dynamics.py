import numpy as np
import pytest

from lognls_lab.dynamics import (
    GaussianParams,
    breather_a_in,
    breather_alpha,
    breather_asymptotic_check,
    detect_breather_period,
    eval_gaussian_solution,
    eval_gausson,
    evolve_breather,
    evolve_matrix_ode,
    gausson_mass,
    matrix_trajectory_table,
    phase_integral,
    tensor_product_check,
)
from lognls_lab.infra.errors import ConfigInvalid, DomainViolation
from lognls_lab.solver import SolverConfig, norms, sample


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("dim", [1, 2, 3])
def test_gausson_matrix_is_a_fixed_point(lam, dim):
    fixed = 2.0 * lam * np.eye(dim)
    states = evolve_matrix_ode(fixed, lam, np.linspace(0.0, 20.0, 41))
    assert max(np.max(np.abs(s.A - fixed)) for s in states) < 1e-12
    assert all(abs(s.det_ratio - 1.0) < 1e-12 for s in states)


def test_matrix_ode_times_must_start_at_zero():
    with pytest.raises(DomainViolation):
        evolve_matrix_ode(np.eye(1), 1.0, [1.0, 2.0])


def test_params_reject_nonsymmetric_and_nonpositive():
    with pytest.raises(ConfigInvalid):
        GaussianParams(a_in=np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ConfigInvalid):
        GaussianParams(a_in=np.array([[-1.0]]))


def test_breather_shorthand_inverts():
    a = breather_a_in(0.8, 0.3)
    r, rdot = breather_alpha(a)
    assert r == pytest.approx(0.8, rel=1e-14)
    assert rdot == pytest.approx(0.3, rel=1e-14)


def test_breather_matches_one_dimensional_matrix_flow():
    times = np.linspace(0.0, 5.0, 51)
    breather = evolve_breather(1.0, 0.0, 1.0, 5.0, times=times)
    matrix = evolve_matrix_ode(np.array([[breather_a_in(1.0, 0.0)]]), 1.0, times)
    gap = max(abs(b.A - m.A[0, 0]) for b, m in zip(breather, matrix))
    assert gap < 1e-7


def test_breather_first_integral_and_width_range():
    states = evolve_breather(1.0, 0.0, 1.0, 10.0, times=np.linspace(0.0, 10.0, 1001))
    h = np.array([s.first_integral for s in states])
    r = np.array([s.r for s in states])
    assert np.max(np.abs(h - h[0])) < 1e-7
    assert 0.5 < r.min() < 0.56
    assert r.max() <= 1.0 + 1e-8


def test_breather_is_periodic_for_positive_lambda():
    per = detect_breather_period(1.0, 0.0, 1.0)
    assert per.period > 0
    assert max(per.r_error, per.rdot_error) < 1e-6
    assert per.first_integral_drift < 1e-8


def test_period_detection_needs_positive_lambda():
    with pytest.raises(DomainViolation):
        detect_breather_period(1.0, 0.0, -1.0)


def test_diagonal_data_tensorizes():
    dev = tensor_product_check([1.0, 3.0 - 0.5j], 1.0, np.linspace(0.0, 5.0, 51))
    assert dev < 1e-7


def test_phase_quadrature_agrees_with_carried_phase():
    states = evolve_matrix_ode(np.array([[1.0 + 0.2j]]), 1.0, np.linspace(0.0, 5.0, 401))
    phi = phase_integral(states, 1.0)
    assert np.max(np.abs(phi - [s.phi for s in states])) < 1e-6


def test_trajectory_table_layout():
    states = evolve_matrix_ode(np.eye(2) * 2.0, 1.0, [0.0, 1.0])
    cols, rows = matrix_trajectory_table(states)
    assert cols[0] == "t" and cols[-2:] == ["phi", "det_ratio"]
    assert rows.shape == (2, 1 + 8 + 2)


def test_gausson_peak_and_mass(grid1d):
    val = eval_gausson(0.3, [1.0], [0.0], 0.0, 1.0, 0.0, np.array([1.0]))
    assert abs(val) == pytest.approx(np.exp(0.5 + 0.3), rel=1e-14)
    u = sample(lambda x: eval_gausson(0.0, [0.0], [0.0], 0.0, 1.0, 0.0, x), grid1d)
    assert norms(u, SolverConfig(lam=1.0)).mass == pytest.approx(gausson_mass(1.0), rel=1e-10)


def test_scalar_point_gives_the_peak():
    val = eval_gausson(0.3, [1.0], [0.0], 0.0, 1.0, 0.0, 1.0)
    assert abs(val) == pytest.approx(np.exp(0.5 + 0.3), rel=1e-14)
    p = GaussianParams.gausson(1.0, x0=[1.0])
    (s,) = evolve_matrix_ode(p.a_in, 1.0, [0.0])
    assert abs(eval_gaussian_solution(p, s, 1.0)) == pytest.approx(np.exp(0.5), rel=1e-14)


def test_matrix_ode_rejects_nonpositive_initial_width():
    with pytest.raises(DomainViolation):
        evolve_matrix_ode(np.array([[-1.0 + 0.5j]]), 1.0, [0.0, 1.0])
    with pytest.raises(DomainViolation):
        evolve_matrix_ode(np.diag([1.0, 0.0]), 1.0, [0.0, 1.0])


def test_real_part_stays_positive_on_random_data():
    rng = np.random.default_rng(7)
    for _ in range(100):
        d = int(rng.integers(1, 4))
        m = rng.normal(size=(d, d))
        re = m @ m.T + 0.1 * np.eye(d)
        im = rng.normal(size=(d, d))
        a_in = re + 0.5j * (im + im.T)
        lam = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 2.0))
        states = evolve_matrix_ode(a_in, lam, np.linspace(0.0, 2.0, 9))
        assert all(np.linalg.eigvalsh(s.A.real)[0] > 0 for s in states)
        assert all(np.allclose(s.A, s.A.T, atol=1e-12) for s in states)


# residual of i u_t + u_xx / 2 + lam u ln|u|^2 on the core of a moving profile
_X = np.linspace(-20.0, 20.0, 512, endpoint=False)
_K = 2.0 * np.pi * np.fft.fftfreq(_X.size, _X[1] - _X[0])
_H = 1e-4


def _core_residual(u_minus, u, u_plus, lam, center):
    u_t = (u_plus - u_minus) / (2.0 * _H)
    u_xx = np.fft.ifft(-(_K**2) * np.fft.fft(u))
    core = np.abs(_X - center) < 4.0
    res = 1j * u_t[core] + 0.5 * u_xx[core] + lam * u[core] * np.log(np.abs(u[core]) ** 2)
    return float(np.max(np.abs(res)))


@pytest.mark.parametrize("v", [0.0, 1.0, -1.5])
@pytest.mark.parametrize("omega", [0.0, 0.4])
def test_gausson_solves_the_equation(v, omega):
    t = 0.7
    u = [eval_gausson(omega, [0.5], [v], 0.2, 1.0, s, _X) for s in (t - _H, t, t + _H)]
    assert _core_residual(*u, 1.0, 0.5 + v * t) < 1e-5


@pytest.mark.parametrize("v", [0.0, 1.0])
def test_moving_breather_solves_the_equation(v):
    t = 0.7
    p = GaussianParams.breather(1.0, 0.5, 1.0, omega=0.1, v=v)
    states = evolve_matrix_ode(p.a_in, 1.0, [0.0, t - _H, t, t + _H], tol=1e-12)
    u = [eval_gaussian_solution(p, s, _X[:, None]) for s in states[1:]]
    assert _core_residual(*u, 1.0, v * t) < 1e-5


def test_amplitude_shift_scales_the_modulus():
    x = np.linspace(-3.0, 3.0, 61)
    base = eval_gausson(0.0, [0.2], [0.7], 0.0, 1.0, 1.3, x)
    shifted = eval_gausson(0.6, [0.2], [0.7], 0.0, 1.0, 1.3, x)
    assert np.allclose(np.abs(shifted), np.exp(0.6) * np.abs(base), rtol=1e-13)


def test_boost_translates_the_modulus():
    p = GaussianParams.breather(0.8, 0.3, 1.0)
    moving = GaussianParams.breather(0.8, 0.3, 1.0, v=1.5)
    (_, s) = evolve_matrix_ode(p.a_in, 1.0, [0.0, 2.0])
    x = np.linspace(-5.0, 5.0, 101)[:, None]
    at_rest = eval_gaussian_solution(p, s, x - 1.5 * 2.0)
    boosted = eval_gaussian_solution(moving, s, x)
    assert np.allclose(np.abs(boosted), np.abs(at_rest), rtol=1e-12, atol=1e-300)


def test_negative_lambda_width_approaches_its_asymptote():
    rep = breather_asymptotic_check(1.0, 0.0, -1.0, t_end=1e5)
    assert rep.times[-1] == pytest.approx(1e5)
    assert abs(rep.final_ratio - 1.0) < 0.15
