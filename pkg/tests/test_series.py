import numpy as np
import pytest

from freejacobi.series import TruncatedSeries


def geometric(order):
    # 1/(1-z)
    return TruncatedSeries(np.ones(order + 1))


def test_add_cancellation():
    z = TruncatedSeries.identity(4)
    s = (1.0 + z) + (1.0 - z)
    assert np.allclose(s.coeffs, [2, 0, 0, 0, 0])


def test_add_identity_and_shift():
    z = TruncatedSeries.identity(5)
    a = 1.0 + 2.0 * z
    assert np.allclose((a + TruncatedSeries.constant(0.0, 5)).coeffs, a.coeffs)
    assert np.allclose((z + z * z).coeffs, [0, 1, 1, 0, 0, 0])


def test_mul_difference_of_squares():
    z = TruncatedSeries.identity(3)
    p = (1.0 + z) * (1.0 - z)
    assert np.allclose(p.coeffs, [1, 0, -1, 0])


def test_mul_geometric_square():
    sq = geometric(3) * geometric(3)
    assert np.allclose(sq.coeffs, [1, 2, 3, 4])


def test_mul_by_one_identity():
    rng = np.random.default_rng(1)
    a = TruncatedSeries(rng.standard_normal(9) + 1j * rng.standard_normal(9))
    assert np.allclose((a * TruncatedSeries.constant(1.0, 8)).coeffs, a.coeffs)


def test_compose_constant_inner_rejected():
    z = TruncatedSeries.identity(4)
    with pytest.raises(ValueError):
        z.compose(1.0 + z)


def test_compose_exp_of_zero():
    e = TruncatedSeries.identity(6).exp()
    z0 = TruncatedSeries.constant(0.0, 6)
    assert np.allclose(e.compose(z0).coeffs, [1, 0, 0, 0, 0, 0, 0])


def test_compose_direct_substitution():
    z = TruncatedSeries.identity(2)
    f = z + z * z
    g = 2.0 * z
    assert np.allclose(f.compose(g).coeffs, [0, 2, 4])


def test_compose_log_exp_inverse_pair():
    n = 8
    z = TruncatedSeries.identity(n)
    expm1 = z.exp() - 1.0
    log1p = z.log1p()
    comp = log1p.compose(expm1)
    assert np.allclose(comp.coeffs, TruncatedSeries.identity(n).coeffs, atol=1e-13)


def test_invert_signed_catalan():
    z = TruncatedSeries.identity(4)
    g = (z + z * z).invert_composition()
    assert np.allclose(g.coeffs, [0, 1, -1, 2, -5], atol=1e-12)


def test_invert_linear():
    z = TruncatedSeries.identity(3)
    g = (3.0 * z).invert_composition()
    assert np.allclose(g.coeffs, [0, 1 / 3, 0, 0], atol=1e-15)


def test_invert_round_trip_zexp():
    # the inverse of z e^z has coefficients (-k)^{k-1}/k!, which reach ~2e6
    # at order 20; round-trip residuals are therefore measured relative to
    # the inverse's coefficient scale
    import math

    n = 20
    z = TruncatedSeries.identity(n)
    f = z * z.exp()
    g = f.invert_composition()
    exact = np.array([0.0] + [(-k) ** (k - 1) / math.factorial(k) for k in range(1, n + 1)])
    rel = np.abs(g.coeffs - exact) / np.maximum(np.abs(exact), 1.0)
    assert rel.max() < 1e-12
    scale = np.abs(g.coeffs).max()
    ident = TruncatedSeries.identity(n)
    assert np.abs((f.compose(g) - ident).coeffs).max() < 1e-12 * scale
    assert np.abs((g.compose(f) - ident).coeffs).max() < 1e-12 * scale


def test_invert_requires_nonzero_linear_term():
    z = TruncatedSeries.identity(4)
    with pytest.raises(ValueError):
        (z * z).invert_composition()
    with pytest.raises(ValueError):
        (1.0 + z).invert_composition()


def test_exp_scalar_coefficients():
    t = 1.7
    e = (TruncatedSeries.identity(10) * t).exp()
    k = np.arange(11)
    import math

    expect = np.array([t**j / math.factorial(j) for j in k])
    assert np.allclose(e.coeffs, expect)


def test_sqrt1p_binomial():
    z = TruncatedSeries.identity(3)
    s = (-z).sqrt1p()
    assert np.allclose(s.coeffs, [1, -0.5, -0.125, -0.0625])


def test_log1p_of_expm1():
    z = TruncatedSeries.identity(10)
    comp = (z.exp() - 1.0).log1p()
    assert np.allclose(comp.coeffs, TruncatedSeries.identity(10).coeffs, atol=1e-13)


@pytest.mark.parametrize("seed", range(4))
def test_ring_axioms_random(seed):
    rng = np.random.default_rng(seed)
    n = 32
    a, b, c = (
        TruncatedSeries(rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1))
        for _ in range(3)
    )
    assoc = ((a * b) * c - a * (b * c)).coeffs
    dist = (a * (b + c) - (a * b + a * c)).coeffs
    scale = max(1.0, np.abs((a * b * c).coeffs).max())
    assert np.abs(assoc).max() / scale < 1e-13
    assert np.abs(dist).max() / scale < 1e-13


@pytest.mark.parametrize("seed", range(4))
def test_invert_round_trip_random(seed):
    # decaying coefficients keep the inverse well-scaled, so the absolute
    # round-trip bound is meaningful
    rng = np.random.default_rng(100 + seed)
    n = 32
    c = rng.standard_normal(n + 1) * 0.4 ** np.arange(n + 1)
    c[0] = 0.0
    c[1] = rng.uniform(0.5, 2.0) * (-1 if rng.uniform() < 0.5 else 1)
    f = TruncatedSeries(c)
    g = f.invert_composition()
    err = np.abs((f.compose(g) - TruncatedSeries.identity(n)).coeffs).max()
    assert err < 1e-10


def test_exp_additivity():
    rng = np.random.default_rng(7)
    a = TruncatedSeries(rng.standard_normal(16) * 0.5)
    b = TruncatedSeries(rng.standard_normal(16) * 0.5)
    lhs = (a.exp() * b.exp()).coeffs
    rhs = (a + b).exp().coeffs
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_reciprocal_and_division():
    z = TruncatedSeries.identity(6)
    r = (1.0 - z).reciprocal()
    assert np.allclose(r.coeffs, np.ones(7))
    with pytest.raises(ZeroDivisionError):
        z.reciprocal()


def test_immutability():
    s = TruncatedSeries([1.0, 2.0])
    with pytest.raises(ValueError):
        s.coeffs[0] = 5.0
