import math

import numpy as np
import pytest

from freejacobi.fubm import (
    cut_plane_to_disc,
    disc_to_cut_plane,
    eta_inverse_series,
    fubm_moment_exact,
    fubm_moments,
    herglotz,
    herglotz_inverse,
)


def test_inverse_herglotz_zero_at_one():
    assert herglotz_inverse(2.0, 1.0) == 0.0


def test_inverse_herglotz_plugin():
    # time 0, argument 3
    assert herglotz_inverse(0.0, 3.0) == pytest.approx(0.5)


def test_inverse_herglotz_pole():
    with pytest.raises(ValueError):
        herglotz_inverse(1.0, -1.0)


def test_inverse_herglotz_increasing_on_positive_axis():
    # operator time 4 (the e^{2u} normalization of the classical display)
    u = np.linspace(1e-3, 3.0, 50)
    vals = [herglotz_inverse(4.0, x).real for x in u]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_first_moment():
    for s in (0.5, 1.0, 4.0):
        m = fubm_moments(s, 1)
        assert m.moments[0] == pytest.approx(math.exp(-s / 2.0), abs=1e-12)


def test_second_moment_vanishes_at_one():
    m = fubm_moments(1.0, 2)
    assert m.moments[1] == pytest.approx(0.0, abs=1e-12)
    # general closed form e^{-s}(1-s)
    m = fubm_moments(0.7, 2)
    assert m.moments[1] == pytest.approx(math.exp(-0.7) * (1 - 0.7), abs=1e-12)


def test_time_zero_moments_all_one():
    m = fubm_moments(0.0, 5)
    assert np.allclose(m.moments, 1.0)


@pytest.mark.parametrize("s", [0.3, 1.0, 2.5])
def test_moments_match_closed_form(s):
    m = fubm_moments(s, 12).moments
    expect = [fubm_moment_exact(s, n) for n in range(1, 13)]
    assert np.allclose(m, expect, atol=1e-11)


@pytest.mark.parametrize("s", [1.0, 4.0])
def test_moment_series_inverse_pair(s):
    inv = eta_inverse_series(s, 16)
    eta = inv.invert_composition()
    comp = inv.compose(eta)
    ident = np.zeros(17)
    ident[1] = 1.0
    assert np.abs(comp.coeffs - ident).max() < 1e-9


def test_herglotz_at_zero():
    assert herglotz(1.0, 0.0) == 1.0 + 0.0j


def test_herglotz_round_trip():
    h = herglotz(2.0, 0.1)
    assert abs(herglotz_inverse(2.0, h) - 0.1) < 1e-10


@pytest.mark.parametrize("z", [0.3 + 0.4j, -0.6 + 0.2j, 0.75j, 0.82])
def test_herglotz_round_trip_near_boundary(z):
    h = herglotz(1.5, z)
    assert abs(herglotz_inverse(1.5, h) - z) < 1e-10


def test_herglotz_conjugate_symmetry():
    z = 0.3 + 0.25j
    assert herglotz(1.0, np.conj(z)) == pytest.approx(np.conj(herglotz(1.0, z)))


def test_disc_map_basics():
    assert cut_plane_to_disc(0.0) == 0.0
    assert cut_plane_to_disc(0.75) == pytest.approx(1.0 / 3.0)


def test_disc_map_round_trip():
    z = 0.3 + 0.2j
    assert abs(disc_to_cut_plane(cut_plane_to_disc(z)) - z) < 1e-12


def test_disc_map_rejects_cut():
    with pytest.raises(ValueError):
        cut_plane_to_disc(1.5)


def test_disc_map_into_unit_disc():
    rng = np.random.default_rng(3)
    count = 0
    while count < 100:
        z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if z.imag == 0 and z.real >= 1:
            continue
        assert abs(cut_plane_to_disc(z)) < 1.0
        count += 1


@pytest.mark.parametrize("s", [0.5, 1.0, 4.0])
def test_toeplitz_moment_matrix_psd(s):
    m = fubm_moments(s, 6).moments
    seq = np.concatenate([[1.0], m])
    k = 7
    top = np.array([[seq[abs(i - j)] for j in range(k)] for i in range(k)])
    eig = np.linalg.eigvalsh(top)
    assert eig.min() >= -1e-9
