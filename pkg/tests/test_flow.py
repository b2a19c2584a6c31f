import math

import numpy as np
import pytest

from freejacobi.flow import (
    characteristic_endpoint,
    const_a,
    const_b,
    endpoint_derivative,
    flow_point,
    integrate_characteristics,
    local_inverse,
    mgf_two_forms,
    riccati_residual,
    v_map,
)
from freejacobi.fubm import cut_plane_to_disc, herglotz
from freejacobi.hierarchy import delta_one_moments, integrate


def test_v_map_zero_at_upper_root():
    for alpha in (0.3, 0.5, 0.7):
        assert v_map(alpha, 1.3, 1.0 / (2 * alpha)) == 0.0


def test_v_map_derivative_at_upper_root():
    # d/du V at u = 1/(2a) equals e^t a^2/(1-a); measured by central difference
    h = 1e-6
    for alpha, t in ((0.3, 1.0), (0.7, 2.0)):
        u0 = 1.0 / (2 * alpha)
        num = (v_map(alpha, t, u0 + h) - v_map(alpha, t, u0 - h)) / (2 * h)
        assert num.real == pytest.approx(
            math.exp(t) * alpha**2 / (1 - alpha), rel=1e-8
        )


def test_v_map_reduces_to_inverse_herglotz_at_half():
    # V(1/2, t, u) = (u-1)/(u+1) e^{ut} for u > 0
    for u in (0.4, 1.7):
        for t in (0.5, 2.0):
            expect = (u - 1.0) / (u + 1.0) * math.exp(u * t)
            assert v_map(0.5, t, u) == pytest.approx(expect, rel=1e-13)


def test_v_map_poles_reported():
    alpha = 0.7
    a = const_a(alpha)
    with pytest.raises(ZeroDivisionError, match="-A-1"):
        v_map(alpha, 1.0, -a - 1.0)
    with pytest.raises(ZeroDivisionError, match="-A$"):
        v_map(alpha, 1.0, -a)


def test_endpoint_zero_at_upper_root():
    for alpha in (0.3, 0.6):
        z = characteristic_endpoint(alpha, 1.0, 1.0 / (2 * alpha))
        assert abs(z) < 1e-14


def test_endpoint_derivative_value():
    # dz/du at u = 1/(2a) equals e^t/(1-a); the analytic slope is used by
    # the Newton continuation so it is cross-checked by differences here.
    h = 1e-6
    for alpha, t in ((0.3, 1.0), (0.5, 1.0), (0.7, 2.0)):
        u0 = 1.0 / (2 * alpha)
        fd = (
            characteristic_endpoint(alpha, t, u0 + h)
            - characteristic_endpoint(alpha, t, u0 - h)
        ) / (2 * h)
        exact = endpoint_derivative(alpha, t, u0)
        assert fd.real == pytest.approx(math.exp(t) / (1 - alpha), rel=1e-7)
        assert exact.real == pytest.approx(math.exp(t) / (1 - alpha), rel=1e-12)


def test_endpoint_matches_disc_chain_at_half():
    # alpha = 1/2: endpoint equals 4 xi/(1+xi)^2 with xi the inverse
    # Herglotz value at operator time 2t
    from freejacobi.fubm import disc_to_cut_plane, herglotz_inverse

    t, z0 = 0.8, 0.05
    u = np.sqrt(const_b(1.0 - z0, 0.5))
    xi = herglotz_inverse(2 * t, u)
    expect = disc_to_cut_plane(xi)
    got = characteristic_endpoint(0.5, t, u)
    assert abs(got - expect) < 1e-12


def test_local_inverse_at_origin():
    assert local_inverse(0.7, 1.0, 0.0) == pytest.approx(1.0 / 1.4)
    assert local_inverse(0.3, 2.0, 0.0) == pytest.approx(1.0 / 0.6)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_local_inverse_round_trip(alpha, t):
    for z in (0.05, -0.05, 0.03 + 0.04j):
        u = local_inverse(alpha, t, z)
        assert abs(characteristic_endpoint(alpha, t, u) - z) < 1e-10


def test_local_inverse_matches_herglotz_chain_at_half():
    for t in (0.5, 1.0, 2.0):
        for z in (0.05, 0.2, -0.15 + 0.1j):
            j = local_inverse(0.5, t, z)
            ref = herglotz(2 * t, cut_plane_to_disc(z))
            assert abs(j - ref) < 1e-9


def test_mgf_at_origin():
    for alpha in (0.3, 0.7):
        ms, mh = mgf_two_forms(alpha, 1.0, 0.0)
        assert ms == pytest.approx(1.0, abs=1e-12)
        assert mh == pytest.approx(1.0, abs=1e-12)


def test_mgf_two_forms_agree():
    rng = np.random.default_rng(5)
    for alpha in (0.4, 0.6):
        for _ in range(10):
            z = complex(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05))
            ms, mh = mgf_two_forms(alpha, 1.0, z)
            assert abs(ms - mh) < 1e-10


def test_mgf_branch_ambiguity_flagged():
    with pytest.raises(ValueError):
        mgf_two_forms(0.6, 1.0, 1.0 + 1e-9)


def test_mgf_coefficients_match_hierarchy():
    # Cauchy coefficients of the closed form against the ODE hierarchy
    for alpha in (0.4, 0.6):
        t = 1.0
        traj = integrate("equal", alpha, delta_one_moments(20), t, 1e-3)
        m_ref = traj.at_time(t)
        nodes = 64
        r = 0.02
        zs = r * np.exp(2j * np.pi * (np.arange(nodes) + 0.5) / nodes)
        vals = np.array([mgf_two_forms(alpha, t, z)[0] for z in zs])
        for k in range(1, 6):
            ck = np.mean(vals * zs ** (-k)).real
            assert abs(ck - m_ref[k]) < 1e-6


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_mgf_matches_half_rank_closed_form(t):
    # M(1/2, t, z) = H_{2t}(psi(z))/sqrt(1-z)
    for z in (0.1, 0.3, -0.2, 0.15 + 0.2j):
        ms, mh = mgf_two_forms(0.5, t, z)
        ref = herglotz(2 * t, cut_plane_to_disc(z)) / np.sqrt(1 - z)
        assert abs(ms - ref) < 1e-9
        assert abs(mh - ref) < 1e-9


@pytest.mark.parametrize("alpha", [0.3, 0.7])
def test_characteristic_curve_consistency(alpha):
    # integrating the raw characteristic system reproduces the closed form
    z0, t_end = 0.02, 1.0
    _, zs, fs, _ = integrate_characteristics(alpha, z0, t_end, 1e-4)
    u = np.sqrt(const_b(1.0 - z0, alpha))
    assert abs(characteristic_endpoint(alpha, t_end, u) - zs[-1]) < 1e-8
    ms, mh = mgf_two_forms(alpha, t_end, zs[-1])
    assert abs(ms - fs[-1]) < 1e-6
    assert abs(local_inverse(alpha, t_end, zs[-1]) - u) < 1e-8


def test_riccati_residual_along_curve():
    alpha, z0 = 0.6, 0.03
    _, zs, fs, _ = integrate_characteristics(alpha, z0, 1.0, 1e-4)
    worst = max(
        riccati_residual(alpha, z0, z, f) for z, f in zip(zs[::200], fs[::200])
    )
    assert worst < 1e-8


def test_flow_point_invariants():
    p = flow_point(0.7, 1.0, 0.0)
    assert p.u == pytest.approx(1.0 / 1.4)
    assert p.psi == 0.0
    assert p.m_sqrt == pytest.approx(1.0)
    assert p.const_a == pytest.approx((1 - 1.4) / 1.4)
    assert p.const_c == pytest.approx(0.7 - 1.0)  # (a-1)/(1-z0) at z0 = 0
    assert p.const_b == pytest.approx(p.u * p.u)
