"""Transforms and moments of the free unitary Brownian motion.

All time arguments in this module are the operator time ``s`` of the unitary
process Y_s.  Classical displays of the inverse Herglotz transform carry a
half-time convention (the map at operator time 2t reads (u-1)/(u+1) e^{tu});
call sites translate with an explicit ``s = 2*t``.  Keeping a single time
variable here is deliberate: it removes a whole class of factor-of-two bugs.

Branch cuts are principal throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import TruncatedSeries

__all__ = [
    "FubmMoments",
    "herglotz_inverse",
    "herglotz",
    "fubm_moments",
    "fubm_moment_exact",
    "eta_inverse_series",
    "cut_plane_to_disc",
    "disc_to_cut_plane",
]


@dataclass(frozen=True)
class FubmMoments:
    """Moments tau(Y_s^n), n = 1..N, of the unitary process at operator time s."""

    time: float
    moments: np.ndarray

    def __post_init__(self):
        if self.time < 0:
            raise ValueError("operator time must be >= 0")
        m = np.asarray(self.moments, dtype=float)
        if np.any(np.abs(m) > 1.0 + 1e-9):
            raise ValueError("unitary moments must lie in [-1, 1]")
        object.__setattr__(self, "moments", m)


def herglotz_inverse(s: float, u: complex) -> complex:
    """Inverse Herglotz transform of the spectral law of Y_s.

    Value: (u-1)/(u+1) * exp(s*u/2).  Pole at u = -1.
    """
    u = complex(u)
    if u == -1.0:
        raise ValueError("herglotz_inverse has a pole at u = -1")
    return (u - 1.0) / (u + 1.0) * np.exp(0.5 * s * u)


def eta_inverse_series(s: float, order: int) -> TruncatedSeries:
    """Series of v -> (v/(1+v)) exp((s/2)(1+2v)), the inverse of the moment
    generating function of Y_s near the origin."""
    v = TruncatedSeries.identity(order)
    ratio = v * (1.0 + v).reciprocal()
    return ratio * ((v * float(s)).exp() * math.exp(s / 2.0))


def fubm_moments(s: float, n_max: int) -> FubmMoments:
    """Moments of Y_s obtained by compositional inversion of the eta-inverse."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if s < 0:
        raise ValueError("operator time must be >= 0")
    eta = eta_inverse_series(s, n_max).invert_composition()
    m = eta.coeffs[1 : n_max + 1].real
    return FubmMoments(time=s, moments=m)


def fubm_moment_exact(s: float, n: int) -> float:
    """Independent closed form for tau(Y_s^n) as a terminating Laguerre-type sum.

    tau(Y_s^n) = e^{-ns/2} sum_{k=0}^{n-1} (-s)^k / k! * n^{k-1} * C(n, k+1).
    Used as a cross-check oracle for the series-inversion route.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    total = 0.0
    for k in range(n):
        total += (-s) ** k / math.factorial(k) * n ** (k - 1) * math.comb(n, k + 1)
    return math.exp(-n * s / 2.0) * total


_SERIES_RADIUS = 0.5
_SERIES_ORDER = 48


def herglotz(s: float, z: complex, tol: float = 1e-10, max_iter: int = 80) -> complex:
    """Herglotz transform H_s(z) = 1 + 2*sum_n tau(Y_s^n) z^n, |z| < 1.

    Evaluated by the truncated moment series for |z| <= 0.5 and by Newton
    continuation on the inverse map for 0.5 < |z| < 1 (the series loses
    accuracy near the boundary).  Satisfies herglotz_inverse(s, H) = z.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise ValueError("herglotz requires |z| < 1")
    if z == 0.0:
        return 1.0 + 0.0j

    mom = fubm_moments(s, _SERIES_ORDER).moments

    def by_series(w: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in mom[::-1]:
            acc = (acc + c) * w
        return 1.0 + 2.0 * acc

    if abs(z) <= _SERIES_RADIUS:
        return by_series(z)

    # Newton continuation along the ray from the series-trusted radius to z.
    zs = _SERIES_RADIUS * z / abs(z)
    h = by_series(zs)
    n_steps = max(4, int(np.ceil((abs(z) - _SERIES_RADIUS) / 0.05)))
    for target in np.linspace(0, 1, n_steps + 1)[1:]:
        zt = zs + target * (z - zs)
        for _ in range(max_iter):
            val = herglotz_inverse(s, h) - zt
            if abs(val) < tol:
                break
            # d/du [ (u-1)/(u+1) e^{su/2} ]
            dv = (2.0 / (h + 1.0) ** 2 + 0.5 * s * (h - 1.0) / (h + 1.0)) * np.exp(
                0.5 * s * h
            )
            h = h - val / dv
        else:
            resid = abs(herglotz_inverse(s, h) - zt)
            raise RuntimeError(
                f"herglotz Newton failed to converge at z={zt}: residual {resid:.3e}"
            )
    return h


def cut_plane_to_disc(z: complex) -> complex:
    """Conformal map (1 - sqrt(1-z)) / (1 + sqrt(1-z)) from the plane cut
    along [1, +inf) into the unit disc; principal square root."""
    z = complex(z)
    if z.imag == 0.0 and z.real >= 1.0:
        raise ValueError("argument lies on the cut [1, +inf)")
    r = np.sqrt(1.0 - z)
    return (1.0 - r) / (1.0 + r)


def disc_to_cut_plane(w: complex) -> complex:
    """Inverse of :func:`cut_plane_to_disc`: w -> 4w/(1+w)^2."""
    w = complex(w)
    return 4.0 * w / (1.0 + w) ** 2
