"""Moment hierarchies for the spectral law of the free Jacobi process.

The transport-type PDEs satisfied by the Cauchy/moment transforms of the
equal-rank family (rank pair (a, a)) and the half-rank family (rank pair
(1/2, a)) close coefficientwise: the time derivative of the n-th moment
depends only on moments 0..n.  Truncation at order N is therefore exact for
the first N moments -- no closure approximation is involved.  This module
contains the two right-hand sides, a classical 4th-order integrator, the
stationary moment sequence, and finite-difference PDE residual checks.

Conventions: ``m`` is a vector (m_0, ..., m_N) with m_0 = 1;
``G(z) = sum_n m_n z^{-(n+1)}`` is the Cauchy-Stieltjes transform evaluated
off [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import TruncatedSeries

__all__ = [
    "MomentTrajectory",
    "InvariantViolation",
    "equal_rank_rhs",
    "half_rank_rhs",
    "integrate",
    "delta_one_moments",
    "stationary_moments",
    "cauchy_from_moments",
    "pde_residual",
    "hankel_matrices",
]

FAMILIES = ("equal", "half")

DEFAULT_DT = 1e-3
DEFAULT_ORDER = 40


class InvariantViolation(ValueError):
    """A produced moment table violated a structural moment inequality."""


@dataclass(frozen=True)
class MomentTrajectory:
    """Moments m_{n,t} on a uniform time grid.

    ``moments[i, n]`` is the n-th moment at ``times[i]``.
    """

    alpha: float
    family: str
    times: np.ndarray
    moments: np.ndarray

    @property
    def order(self) -> int:
        return self.moments.shape[1] - 1

    def index_of(self, t: float) -> int:
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > 1e-9:
            raise KeyError(f"time {t} not on the trajectory grid")
        return i

    def at_time(self, t: float) -> np.ndarray:
        return self.moments[self.index_of(t)]

    def validate(self, tol: float = 1e-8) -> None:
        """Check mass, range and monotone decay at every grid time."""
        for i, t in enumerate(self.times):
            m = self.moments[i]
            if abs(m[0] - 1.0) > tol:
                raise InvariantViolation(f"m_0 != 1 at t={t} (got {m[0]})")
            bad = np.where((m < -tol) | (m > 1.0 + tol))[0]
            if bad.size:
                n = int(bad[0])
                raise InvariantViolation(f"m_{n} out of [0,1] at t={t}: {m[n]}")
            inc = np.where(np.diff(m) > tol)[0]
            if inc.size:
                n = int(inc[0])
                raise InvariantViolation(
                    f"m_{n + 1} > m_{n} at t={t}: {m[n + 1]} > {m[n]}"
                )

    def to_csv(self, path) -> None:
        from ._output import write_csv

        header = ["t"] + [f"m_{n}" for n in range(self.order + 1)]
        rows = [[float(t)] + [float(x) for x in row] for t, row in zip(self.times, self.moments)]
        write_csv(path, header, rows)


def _self_convolution(m: np.ndarray) -> np.ndarray:
    """s_n = sum_{i+j=n} m_i m_j for n = 0..N."""
    n = len(m)
    return np.convolve(m, m)[:n]


def equal_rank_rhs(alpha: float, m: np.ndarray) -> np.ndarray:
    """dm_n/dt for the equal-rank family.

    Coefficient extraction of dM/dt = -z d/dz[(1-2a)M + a(1-z)M^2] gives
    dm_n/dt = -n[(1-2a)m_n + a(s_n - s_{n-1})], s_n the self-convolution.
    """
    m = np.asarray(m, dtype=float)
    s = _self_convolution(m)
    s_prev = np.empty_like(s)
    s_prev[0] = 0.0
    s_prev[1:] = s[:-1]
    n = np.arange(len(m))
    return -n * ((1.0 - 2.0 * alpha) * m + alpha * (s - s_prev))


def half_rank_rhs(alpha: float, m: np.ndarray) -> np.ndarray:
    """dm_n/dt for the half-rank family.

    Laurent-coefficient extraction of dG/dt = (1/2) d/dz[(1-2a)G + z(z-1)G^2]
    gives dm_n/dt = (n/2)[-(1-2a)m_{n-1} - s_n + s_{n-1}].
    """
    m = np.asarray(m, dtype=float)
    s = _self_convolution(m)
    s_prev = np.empty_like(s)
    s_prev[0] = 0.0
    s_prev[1:] = s[:-1]
    m_prev = np.empty_like(m)
    m_prev[0] = 0.0
    m_prev[1:] = m[:-1]
    n = np.arange(len(m))
    return 0.5 * n * (-(1.0 - 2.0 * alpha) * m_prev - s + s_prev)


def _rhs(family: str, alpha: float):
    if family == "equal":
        return lambda m: equal_rank_rhs(alpha, m)
    if family == "half":
        return lambda m: half_rank_rhs(alpha, m)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def delta_one_moments(order: int) -> np.ndarray:
    """Moment vector of the point mass at 1 (the default initial law)."""
    return np.ones(order + 1)


def integrate(
    family: str,
    alpha: float,
    m0: np.ndarray,
    t_end: float,
    dt: float = DEFAULT_DT,
    validate: bool = True,
) -> MomentTrajectory:
    """Integrate the moment hierarchy with the classical 4th-order scheme.

    The grid is uniform with the largest step <= dt that divides t_end.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t_end < 0:
        raise ValueError("t_end must be >= 0")
    m0 = np.asarray(m0, dtype=float)
    if abs(m0[0] - 1.0) > 1e-12:
        raise ValueError("initial moments must have m_0 = 1")
    rhs = _rhs(family, alpha)
    if t_end == 0.0:
        traj = MomentTrajectory(alpha, family, np.array([0.0]), m0[None, :].copy())
        if validate:
            traj.validate()
        return traj
    steps = max(1, int(np.ceil(t_end / dt - 1e-12)))
    h = t_end / steps
    out = np.empty((steps + 1, len(m0)))
    out[0] = m0
    m = m0.copy()
    for i in range(steps):
        k1 = rhs(m)
        k2 = rhs(m + 0.5 * h * k1)
        k3 = rhs(m + 0.5 * h * k2)
        k4 = rhs(m + h * k3)
        m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[i + 1] = m
    times = np.linspace(0.0, t_end, steps + 1)
    traj = MomentTrajectory(alpha, family, times, out)
    if validate:
        traj.validate()
    return traj


def stationary_moments(alpha: float, n_max: int) -> np.ndarray:
    """Taylor coefficients of the stationary moment generating function.

    M_inf(z) = (-A + sqrt(A^2 z + (A+1)^2 (1-z))) / (1-z) with
    A = (1-2a)/(2a); the branch is fixed by M_inf(0) = 1.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    a = (1.0 - 2.0 * alpha) / (2.0 * alpha)
    ap1 = a + 1.0
    # A^2 z + (A+1)^2 (1-z) = (A+1)^2 (1 + c z),  c = (A^2 - (A+1)^2) / (A+1)^2
    c = (a * a - ap1 * ap1) / (ap1 * ap1)
    z = TruncatedSeries.identity(n_max)
    root = (z * c).sqrt1p() * ap1
    one_minus_z = 1.0 - z
    mseries = (root - a) * one_minus_z.reciprocal()
    return mseries.coeffs[: n_max + 1].real


def cauchy_from_moments(m: np.ndarray, z: complex) -> complex:
    """G(z) = sum_n m_n z^{-(n+1)} by Horner in 1/z."""
    w = 1.0 / complex(z)
    acc = 0.0 + 0.0j
    for c in m[::-1]:
        acc = (acc + c) * w
    return acc


def _flux(family: str, alpha: float, z: complex, g: complex) -> complex:
    if family == "equal":
        return (1.0 - 2.0 * alpha) * z * g + alpha * z * (z - 1.0) * g * g
    return 0.5 * ((1.0 - 2.0 * alpha) * g + z * (z - 1.0) * g * g)


def pde_residual(
    family: str,
    trajectory: MomentTrajectory,
    z: complex,
    t: float,
    h: float,
) -> float:
    """|dG/dt - d/dz[flux(G)]| by central differences in t and z.

    ``t`` must be an interior grid time with t-h and t+h on the grid; the
    expected size is O(h^2) plus the moment-truncation tail.
    """
    if abs(z) <= 1.2:
        raise ValueError("evaluation point must satisfy |z| > 1.2")
    alpha = trajectory.alpha
    try:
        m_prev = trajectory.at_time(t - h)
        m_mid = trajectory.at_time(t)
        m_next = trajectory.at_time(t + h)
    except KeyError as exc:
        raise ValueError(f"grid too coarse for central differencing: {exc}") from exc
    dgdt = (cauchy_from_moments(m_next, z) - cauchy_from_moments(m_prev, z)) / (2.0 * h)
    f_plus = _flux(family, alpha, z + h, cauchy_from_moments(m_mid, z + h))
    f_minus = _flux(family, alpha, z - h, cauchy_from_moments(m_mid, z - h))
    return abs(dgdt - (f_plus - f_minus) / (2.0 * h))


def hankel_matrices(m: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Hausdorff moment matrices (m_{i+j}) and (m_{i+j+1} - m_{i+j+2}).

    Both must be positive semidefinite for moments of a measure on [0, 1].
    """
    k = order + 1
    if len(m) < 2 * order + 3:
        raise ValueError("need moments up to order 2*order+2")
    h0 = np.array([[m[i + j] for j in range(k)] for i in range(k)])
    h1 = np.array([[m[i + j + 1] - m[i + j + 2] for j in range(k)] for i in range(k)])
    return h0, h1
