import math

import numpy as np
import pytest

from freejacobi.hierarchy import (
    InvariantViolation,
    MomentTrajectory,
    cauchy_from_moments,
    delta_one_moments,
    equal_rank_rhs,
    half_rank_rhs,
    hankel_matrices,
    integrate,
    pde_residual,
    stationary_moments,
)
from freejacobi.wachter import make_measure, moment


def closed_form_m1(alpha, t):
    return alpha + (1.0 - alpha) * math.exp(-t)


def test_equal_rank_first_order_reduction():
    # n=1 row is alpha - m_1
    m = np.array([1.0, 0.4, 0.3])
    d = equal_rank_rhs(0.6, m)
    assert d[0] == 0.0
    assert d[1] == pytest.approx(0.6 - 0.4, abs=1e-14)


def test_equal_rank_at_point_mass():
    d = equal_rank_rhs(0.3, np.ones(6))
    assert d[1] == pytest.approx(0.3 - 1.0)
    assert d[0] == 0.0


def test_half_rank_first_order_reduction():
    m = np.array([1.0, 0.55, 0.4])
    d = half_rank_rhs(0.7, m)
    assert d[0] == 0.0
    assert d[1] == pytest.approx(0.7 - 0.55, abs=1e-14)


def test_half_rank_stationary_annihilation():
    # quadrature moments of the stationary half-rank law are a fixed point
    for alpha in (0.6, 0.7):
        mu = make_measure("mu_inf", 0.5, alpha)
        m = np.array([moment(mu, j) for j in range(9)])
        assert np.abs(half_rank_rhs(alpha, m)).max() < 1e-8


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
@pytest.mark.parametrize("t_end", [0.5, 1.0, 2.0])
def test_integrate_first_moment_closed_form(alpha, t_end):
    traj = integrate("equal", alpha, delta_one_moments(12), t_end, 1e-3)
    assert traj.at_time(t_end)[1] == pytest.approx(
        closed_form_m1(alpha, t_end), abs=1e-8
    )


def test_integrate_zero_time_is_initial():
    m0 = delta_one_moments(8)
    for fam in ("equal", "half"):
        traj = integrate(fam, 0.6, m0, 0.0, 1e-3)
        assert np.array_equal(traj.moments[0], m0)


def test_integrate_long_time_reaches_stationary():
    alpha = 0.6
    traj = integrate("equal", alpha, delta_one_moments(12), 14.0, 2e-3)
    st = stationary_moments(alpha, 12)
    assert np.abs(traj.at_time(14.0) - st).max() < 1e-6


def test_integrator_fourth_order():
    alpha, t_end = 0.6, 1.0
    errs = []
    for dt in (4e-3, 2e-3):
        traj = integrate("equal", alpha, delta_one_moments(10), t_end, dt)
        errs.append(abs(traj.at_time(t_end)[1] - closed_form_m1(alpha, t_end)))
    ratio = errs[0] / errs[1]
    assert 10.0 < ratio < 24.0  # ~16x for a 4th-order scheme


def test_stationary_moment_low_orders():
    for alpha in (0.3, 0.5, 0.7):
        st = stationary_moments(alpha, 6)
        assert st[0] == pytest.approx(1.0, abs=1e-14)
        assert st[1] == pytest.approx(alpha, abs=1e-13)


def test_stationary_matches_quadrature_half():
    # alpha = 1/2 closed form against the quadrature oracle
    st = stationary_moments(0.5, 8)
    mu = make_measure("mu_inf", 0.5, 0.5)
    q = np.array([moment(mu, j) for j in range(9)])
    assert np.abs((st - q) / q).max() < 1e-8


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_stationary_is_fixed_point(alpha):
    st = stationary_moments(alpha, 10)
    assert np.abs(equal_rank_rhs(alpha, st)).max() < 1e-8


def test_pde_residual_equal_ranks():
    traj = integrate("equal", 0.6, delta_one_moments(40), 1.1, 1e-3)
    r = pde_residual("equal", traj, 2.0, 1.0, 1e-3)
    assert r < 1e-4


def test_pde_residual_stationary_flat():
    alpha = 0.6
    traj = integrate("equal", alpha, stationary_moments(alpha, 40), 0.1, 1e-3)
    r = pde_residual("equal", traj, 2.0, 0.05, 1e-3)
    assert r < 1e-8


def test_pde_residual_second_order_in_h():
    traj = integrate("equal", 0.6, delta_one_moments(40), 0.4, 5e-4)
    r1 = pde_residual("equal", traj, 2.0, 0.2, 2e-3)
    r2 = pde_residual("equal", traj, 2.0, 0.2, 1e-3)
    assert r2 < r1 / 2.5  # roughly O(h^2)


def test_pde_residual_half_family():
    traj = integrate("half", 0.7, delta_one_moments(40), 1.1, 1e-3)
    r = pde_residual("half", traj, 2.0, 1.0, 1e-3)
    assert r < 1e-4


def test_pde_residual_rejects_near_support():
    traj = integrate("equal", 0.6, delta_one_moments(10), 0.1, 1e-3)
    with pytest.raises(ValueError):
        pde_residual("equal", traj, 1.0, 0.05, 1e-3)


def test_trajectory_invariants_validated():
    bad = MomentTrajectory(
        alpha=0.5,
        family="equal",
        times=np.array([0.0]),
        moments=np.array([[1.0, 0.5, 0.6]]),  # m_2 > m_1
    )
    with pytest.raises(InvariantViolation):
        bad.validate()


@pytest.mark.parametrize("family", ["equal", "half"])
def test_hankel_psd_along_trajectory(family):
    traj = integrate(family, 0.6, delta_one_moments(14), 1.0, 1e-3)
    for i in range(0, len(traj.times), 250):
        h0, h1 = hankel_matrices(traj.moments[i], 5)
        assert np.linalg.eigvalsh(h0).min() >= -1e-8
        assert np.linalg.eigvalsh(h1).min() >= -1e-8


def test_cauchy_from_moments_tail():
    m = delta_one_moments(30)
    z = 5.0
    # point mass at one: G(z) = sum z^{-(n+1)} = (1/z)/(1-1/z) truncated
    val = cauchy_from_moments(m, z)
    assert val == pytest.approx(1.0 / (z - 1.0), rel=1e-9)


def test_csv_export(tmp_path):
    traj = integrate("equal", 0.6, delta_one_moments(3), 0.01, 1e-3)
    out = tmp_path / "traj.csv"
    traj.to_csv(out)
    lines = out.read_text().strip().splitlines()
    assert lines[0].split(",")[:2] == ["t", "m_0"]
    assert len(lines) == len(traj.times) + 1
