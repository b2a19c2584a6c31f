"""Deformed chi-transform: admissibility, critical points, and coefficient
asymptotics of the compositional inverse.

The deformed transform

    chi(a, t, u) = u(u+a) / ((u+1)(u+1-a)) * exp((1+2u)t)

reduces at a = 1/2 to the chi-transform of the free unitary Brownian motion
at operator time 2t.  Its local inverse near the origin expands as

    chi^{-1}(v) = sum_{n>=1} a_n(t) (e^{-t} v)^n,

and the scaled coefficients a_n admit the Cauchy representation

    a_n = (1/(2*pi*i*n)) \oint (1+1/w)^n ((w+1-a)/(w+a))^n e^{-2ntw} dw

over any simple curve around the origin inside the disc of radius a.  The
integrand is exp(-n*phi(w)) for the phase

    phi(a, t, w) = 2tw - log[(1+w)(w+1-a) / (w(w+a))],

whose critical points split into three regimes separated by the transition
times t0(a) <= 2 <= t1(a).  This module computes all regime quantities, the
coefficients by two independent routes (series inversion and contour
quadrature), and the large-n saddle-point asymptotics in the real-critical
regime t >= t1.

All series work happens directly in the scaled variable e^{-t}u so that
coefficients stay representable; magnitudes beyond double range are carried
as (sign, log-magnitude) pairs in the asymptotic comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .series import TruncatedSeries
from .vmap import transition_times

__all__ = [
    "SaddleReport",
    "admissibility_probe",
    "deformed_s_transform",
    "chi",
    "phi_real",
    "phi_complex",
    "phi_second",
    "z_roots",
    "saddle_report",
    "inverse_coefficients",
    "contour_coefficient",
    "contour_coefficient_log",
    "optimal_radius",
    "coefficient_asymptotics",
    "coefficient_table",
]

MAX_LAGRANGE_ORDER = 200


def admissibility_probe(alpha: float) -> dict:
    """Obstruction data for the deformed S-transform.

    Returns the t = 0 boundary value s0 = a/(1-a) (the CLI reports the
    per-t value s0 * e^t), the two roots of q(z) = a^2(1-z)^2 + 4(1-a)^2 z,
    and their common modulus.  For a >= 1/2 both roots lie exactly on the
    unit circle; negativity of q on real segments therefore occurs only at
    |z| >= 1.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    a2 = alpha * alpha
    b = 4.0 * (1.0 - alpha) ** 2 - 2.0 * a2
    roots = np.roots([a2, b, a2])
    return {
        "s0": alpha / (1.0 - alpha),
        "q_roots": (complex(roots[0]), complex(roots[1])),
        "q_root_modulus": (abs(roots[0]) + abs(roots[1])) / 2.0,
    }


def deformed_s_transform(alpha: float, t: float, u: complex) -> complex:
    """(u+a)/(u+1-a) * exp((1+2u)t); the S-transform of Y_{2t} at a = 1/2."""
    u = complex(u)
    return (u + alpha) / (u + 1.0 - alpha) * np.exp((1.0 + 2.0 * u) * t)


def chi(alpha: float, t: float, u: complex) -> complex:
    """u(u+a)/((u+1)(u+1-a)) * exp((1+2u)t); poles at u = -1 and u = a-1."""
    u = complex(u)
    if u == -1.0:
        raise ZeroDivisionError("chi has a pole at u = -1")
    if u == alpha - 1.0:
        raise ZeroDivisionError("chi has a pole at u = alpha - 1")
    return u * (u + alpha) / ((u + 1.0) * (u + 1.0 - alpha)) * np.exp(
        (1.0 + 2.0 * u) * t
    )


def phi_real(alpha: float, t: float, w: float) -> float:
    """Phase at real w in (-a, 0) with the real logarithm branch.

    Requires 1 - a + w > 0 so the log argument is positive.
    """
    if not (-alpha < w < 0.0):
        raise ValueError("phi_real requires w strictly inside (-alpha, 0)")
    if 1.0 - alpha + w <= 0.0:
        raise ValueError("phi_real requires 1 - alpha + w > 0")
    return 2.0 * t * w - math.log(
        (1.0 + w) * (1.0 - alpha + w) / ((-w) * (alpha + w))
    )


def phi_complex(alpha: float, t: float, w: complex) -> complex:
    """Phase with the principal complex logarithm, for reporting."""
    w = complex(w)
    return 2.0 * t * w - np.log((1.0 + w) * (1.0 - alpha + w) / ((-w) * (alpha + w)))


def phi_second(alpha: float, w: complex) -> complex:
    """phi'' = 1/(1+w)^2 - 1/w^2 + 1/(1-a+w)^2 - 1/(a+w)^2."""
    w = complex(w)
    return (
        1.0 / (1.0 + w) ** 2
        - 1.0 / w**2
        + 1.0 / (1.0 - alpha + w) ** 2
        - 1.0 / (alpha + w) ** 2
    )


def z_roots(alpha: float, t: float) -> tuple[complex, complex]:
    """Roots Z+- of t Z^2 + (1-a)(1+at) Z + a(1-a)/2 = 0 (Z = w(w+1))."""
    if t <= 0:
        raise ValueError("z_roots requires t > 0")
    disc = (1.0 - alpha) * ((1.0 - alpha) * (1.0 + alpha * t) ** 2 - 2.0 * alpha * t)
    root = np.sqrt(complex(disc))
    zp = (-(1.0 - alpha) * (1.0 + alpha * t) + root) / (2.0 * t)
    zm = (-(1.0 - alpha) * (1.0 + alpha * t) - root) / (2.0 * t)
    return zp, zm


@dataclass(frozen=True)
class SaddleReport:
    """All critical-point quantities at one (alpha, t)."""

    alpha: float
    t: float
    s0: float  # (a/(1-a)) e^t
    delta: float
    z_plus: complex
    z_minus: complex
    w_plus_plus: complex
    w_plus_minus: complex
    w_minus_plus: complex
    w_minus_minus: complex
    regime: str  # "real-four" | "complex-two-pairs" | "complex-conjugate"
    phi_plus_plus: complex
    phi_plus_minus: complex
    phi2_plus_plus: complex
    phi2_plus_minus: complex
    u_plus: complex
    u_minus: complex
    decay_plus: float
    decay_minus: float

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "t": self.t,
            "s0": self.s0,
            "delta": self.delta,
            "z_plus": self.z_plus,
            "z_minus": self.z_minus,
            "w_plus_plus": self.w_plus_plus,
            "w_plus_minus": self.w_plus_minus,
            "w_minus_plus": self.w_minus_plus,
            "w_minus_minus": self.w_minus_minus,
            "regime": self.regime,
            "phi_plus_plus": self.phi_plus_plus,
            "phi_plus_minus": self.phi_plus_minus,
            "phi2_plus_plus": self.phi2_plus_plus,
            "phi2_plus_minus": self.phi2_plus_minus,
            "u_plus": self.u_plus,
            "u_minus": self.u_minus,
            "decay_plus": self.decay_plus,
            "decay_minus": self.decay_minus,
        }


def saddle_report(alpha: float, t: float) -> SaddleReport:
    """Critical points, second derivatives and decay data of the phase."""
    if t <= 0:
        raise ValueError("saddle_report requires t > 0")
    delta = (1.0 - alpha) * (
        (1.0 - alpha) * (1.0 + alpha * t) ** 2 - 2.0 * alpha * t
    )
    zp, zm = z_roots(alpha, t)
    up = np.sqrt(1.0 + 4.0 * zp)
    um = np.sqrt(1.0 + 4.0 * zm)
    wpp = -0.5 + 0.5 * up
    wpm = -0.5 + 0.5 * um
    wmp = -0.5 - 0.5 * up
    wmm = -0.5 - 0.5 * um
    if alpha >= 0.5:
        t0, t1 = transition_times(alpha)
        if t >= t1:
            regime = "real-four"
        elif t <= t0:
            regime = "complex-two-pairs"
        else:
            regime = "complex-conjugate"
    else:
        # delta > 0 for all t when a < 1/2: Z real; w reality depends on 1+4Z
        if abs(zp.imag) > 0 or abs(zm.imag) > 0:
            regime = "complex-conjugate"
        elif (1.0 + 4.0 * zp.real) >= 0 and (1.0 + 4.0 * zm.real) >= 0:
            regime = "real-four"
        else:
            regime = "complex-two-pairs"
    phi_pp = phi_complex(alpha, t, wpp)
    phi_pm = phi_complex(alpha, t, wpm)
    return SaddleReport(
        alpha=alpha,
        t=t,
        s0=alpha / (1.0 - alpha) * math.exp(t),
        delta=delta,
        z_plus=zp,
        z_minus=zm,
        w_plus_plus=wpp,
        w_plus_minus=wpm,
        w_minus_plus=wmp,
        w_minus_minus=wmm,
        regime=regime,
        phi_plus_plus=phi_pp,
        phi_plus_minus=phi_pm,
        phi2_plus_plus=phi_second(alpha, wpp),
        phi2_plus_minus=phi_second(alpha, wpm),
        u_plus=up,
        u_minus=um,
        decay_plus=t + phi_pp.real,
        decay_minus=t + phi_pm.real,
    )


def inverse_coefficients(alpha: float, t: float, n_max: int) -> np.ndarray:
    """Scaled inverse coefficients a_1..a_n_max by series inversion.

    Inverts the series of u -> e^{-t} chi(a, t, u) (whose linear coefficient
    is a/(1-a), independent of t), so that coefficient n of the inverse is
    exactly a_n.  a_1 = (1-a)/a.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > MAX_LAGRANGE_ORDER:
        raise OverflowError(
            f"n_max = {n_max} exceeds the double-precision guard "
            f"({MAX_LAGRANGE_ORDER}); use the contour route or rescale"
        )
    z = TruncatedSeries.identity(n_max)
    num = (z * z + alpha * z) * (z * (2.0 * t)).exp()
    den = (1.0 + z) * ((1.0 - alpha) + z)
    scaled = num / den
    inv = scaled.invert_composition()
    coeffs = inv.coeffs[1 : n_max + 1]
    if not np.all(np.isfinite(coeffs)):
        raise OverflowError(
            "inverse coefficients overflowed double precision; "
            "reduce n_max or use a larger t scaling"
        )
    return coeffs.real


def _contour_sum(alpha: float, t: float, n: int, radius: float, points: int):
    """One trapezoid pass; returns (max_log, reduced complex sum)."""
    k = np.arange(points)
    w = radius * np.exp(2j * np.pi * (k + 0.5) / points)
    logs = n * (
        np.log(1.0 + 1.0 / w) + np.log((w + 1.0 - alpha) / (w + alpha)) - 2.0 * t * w
    )
    mx = float(np.max(logs.real))
    s = np.sum(np.exp(logs - mx) * w) / (n * points)
    return mx, s


def optimal_radius(alpha: float, t: float) -> float:
    """Radius minimizing the peak log-magnitude of the Cauchy integrand.

    The integrand is exp(n * l(w)) with l independent of n up to the factor
    n itself, so the minimax circle -- the one with the least cancellation,
    hence the least double-precision noise -- does not depend on n and can
    be found with a single coarse scan.  In the real-critical regime it
    settles near the modulus of the interior critical points; below the
    transition it moves out toward the pole at -alpha.
    """
    theta = np.pi * (np.arange(256) + 0.5) / 256  # conjugate symmetry: half circle
    best_r, best_val = alpha / 2.0, math.inf
    for r in np.geomspace(0.04 * alpha, 0.96 * alpha, 64):
        w = r * np.exp(1j * theta)
        prof = (
            np.log(np.abs(1.0 + 1.0 / w))
            + np.log(np.abs((w + 1.0 - alpha) / (w + alpha)))
            - 2.0 * t * w.real
        )
        peak = float(prof.max())
        if peak < best_val:
            best_r, best_val = float(r), peak
    return best_r


def contour_coefficient_log(
    alpha: float,
    t: float,
    n: int,
    radius: float | None = None,
    points: int | None = None,
    rel_tol: float = 1e-10,
) -> tuple[float, float]:
    """(log|a_n|, phase) from the Cauchy integral, overflow-free.

    With ``points=None`` the node count starts at 2048 and doubles until two
    successive results agree to ``rel_tol`` (relative).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if radius is None:
        radius = optimal_radius(alpha, t)
    if not 0.0 < radius < alpha:
        raise ValueError("contour radius must lie in (0, alpha)")
    if points is not None:
        mx, s = _contour_sum(alpha, t, n, radius, points)
        return mx + math.log(abs(s)), math.atan2(s.imag, s.real)
    m = 2048
    mx, s = _contour_sum(alpha, t, n, radius, m)
    prev_diff = math.inf
    while m <= 1 << 18:
        m *= 2
        mx2, s2 = _contour_sum(alpha, t, n, radius, m)
        diff = abs(np.exp(mx - mx2) * s / s2 - 1.0)
        mx, s = mx2, s2
        if diff <= rel_tol:
            return mx + math.log(abs(s)), math.atan2(s.imag, s.real)
        if diff >= 0.5 * prev_diff and diff <= 1e-9:
            # cancellation noise floor reached below the reporting tolerance
            return mx + math.log(abs(s)), math.atan2(s.imag, s.real)
        prev_diff = diff
    raise RuntimeError(
        f"contour quadrature did not stabilize to {rel_tol} for n={n} "
        f"at radius {radius}; the circle is badly conditioned here"
    )


def contour_coefficient(
    alpha: float,
    t: float,
    n: int,
    radius: float | None = None,
    points: int | None = None,
) -> complex:
    """a_n by trapezoid quadrature on |w| = radius (spectrally accurate).

    The imaginary part is a numerical zero (a_n is real).
    """
    if radius is None:
        radius = optimal_radius(alpha, t)
    if not 0.0 < radius < alpha:
        raise ValueError("contour radius must lie in (0, alpha)")
    logmag, phase = contour_coefficient_log(alpha, t, n, radius, points)
    if logmag > 700.0:
        raise OverflowError(
            f"|a_{n}| = exp({logmag:.1f}) exceeds double range; "
            "use contour_coefficient_log"
        )
    return complex(math.exp(logmag) * np.exp(1j * phase))


def coefficient_asymptotics(alpha: float, t: float, n: int) -> dict:
    """Saddle-point prediction for a_n e^{-nt} in the real-critical regime.

    The optimal contour crosses the negative real axis at the critical point
    w_{+,+} (the larger of the two interior critical points), which is the
    bottleneck of the Cauchy integral; the companion point w_{+,-} has
    strictly smaller phase and does not contribute at leading order.  With
    p2 = phi''(w_{+,+}) < 0 the prediction is

        a_n e^{-nt} ~ (-1)^{n+1} e^{-n(t + phi(w_{+,+}))}
                        / (n * sqrt(2 pi n |p2|)),

    verified against high-precision contour integration.  Returns magnitude,
    sign, log_magnitude and the exponential decay rate of a_n e^{-nt}.
    """
    report = saddle_report(alpha, t)
    if report.regime != "real-four":
        raise ValueError(
            f"saddle asymptotics requires the real-critical regime t >= t1; "
            f"got regime {report.regime!r} at alpha={alpha}, t={t}"
        )
    wpp = report.w_plus_plus.real
    rate = t + phi_real(alpha, t, wpp)
    p2 = report.phi2_plus_plus.real
    log_mag = -n * rate - math.log(n) - 0.5 * math.log(2.0 * math.pi * n * abs(p2))
    return {
        "rate": rate,
        "decay_plus": report.decay_plus,
        "decay_minus": report.decay_minus,
        "log_magnitude": log_mag,
        "magnitude": math.exp(log_mag) if log_mag > -700.0 else 0.0,
        "sign": 1.0 if n % 2 == 1 else -1.0,
    }


def coefficient_table(
    alpha: float, t: float, n_max: int, radius: float | None = None
) -> list[dict]:
    """Per-n comparison of the series and contour coefficient routes.

    Adds the asymptotic prediction and ratio when the real-critical regime
    applies.  Ratios are computed in log space so huge coefficients are safe.
    """
    lagr = inverse_coefficients(alpha, t, n_max)
    try:
        in_regime = saddle_report(alpha, t).regime == "real-four"
    except ValueError:
        in_regime = False
    rows = []
    for n in range(1, n_max + 1):
        logmag, phase = contour_coefficient_log(alpha, t, n, radius)
        a_contour_sign = 1.0 if math.cos(phase) >= 0 else -1.0
        a_l = lagr[n - 1]
        rel = abs(math.log(abs(a_l)) - logmag) if a_l != 0 else math.inf
        row = {
            "n": n,
            "a_lagrange": float(a_l),
            "log_abs_contour": logmag,
            "contour_sign": a_contour_sign,
            "log_rel_gap": rel,
        }
        if in_regime:
            asym = coefficient_asymptotics(alpha, t, n)
            row["asym_log_magnitude"] = asym["log_magnitude"]
            row["ratio"] = math.exp(logmag - n * t - asym["log_magnitude"])
        rows.append(row)
    return rows
