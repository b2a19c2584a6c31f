"""Characteristic flow of the moment generating function, equal-rank family.

Starting from the point mass at 1, the moment generating function M_t(z) of
the equal-rank spectral law admits a closed representation through a local
inverse of the characteristic flow.  With A = (1-2a)/(2a) and the deformed
exponential map

    V(a, t, u) = ((u-A-1)(u-A)) / ((u+A+1)(u+A)) * exp(2*a*u*t),

the endpoint of the characteristic curve started at z_0 is an explicit
rational-exponential expression in u = sqrt(B(1-z_0, a)) (see
:func:`characteristic_endpoint`), and inverting it locally around
(z, u) = (0, 1/(2a)) yields two equivalent closed forms of M_t(z):

    M = (-A + sqrt(A^2 z + (1-z) J^2)) / (1-z)          (square-root form)
    M = J (1+psi) / (1-psi) - A,  psi = V(a, t, J)      (homographic form)

where J = J(z) is the local inverse.  Both forms are computed and returned
for cross-checking; the square-root branch is tracked by continuity along
the continuation path, never by a fixed principal-branch rule.

At a = 1/2 the map V degenerates to the inverse Herglotz transform of the
free unitary Brownian motion and J(z) = H_{2t}(psi(z)) with psi the
cut-plane-to-disc map; this specialization is exercised by the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ContinuationError",
    "FlowPoint",
    "const_a",
    "const_b",
    "const_c",
    "v_map",
    "characteristic_endpoint",
    "endpoint_derivative",
    "local_inverse",
    "mgf_two_forms",
    "flow_point",
    "integrate_characteristics",
    "riccati_residual",
    "probe_radius",
]


class ContinuationError(RuntimeError):
    """Newton continuation left the validated invertibility neighborhood."""


def const_a(alpha: float) -> float:
    """A = (1-2a)/(2a)."""
    return (1.0 - 2.0 * alpha) / (2.0 * alpha)


def const_b(one_minus_z0: complex, alpha: float) -> complex:
    """B = (1-a)/(a*(1-z0)) + A^2; u = sqrt(B) is the characteristic variable."""
    a = const_a(alpha)
    return (1.0 - alpha) / (alpha * one_minus_z0) + a * a


def const_c(z0: complex, alpha: float) -> complex:
    """Integration constant of the flow's quadratic equation, (a-1)/(1-z0)."""
    return (alpha - 1.0) / (1.0 - z0)


def v_map(alpha: float, t: float, u: complex) -> complex:
    """Deformed exponential map V; poles at u = -A-1 and u = -A.

    Reduces to the inverse Herglotz transform (u-1)/(u+1) e^{ut} of the
    unitary process at operator time 2t when a = 1/2, u != 0.
    """
    a = const_a(alpha)
    u = complex(u)
    if u == -a - 1.0:
        raise ZeroDivisionError("v_map pole at u = -A-1 = -1/(2*alpha)")
    if u == -a:
        raise ZeroDivisionError("v_map pole at u = -A")
    num = (u - a - 1.0) * (u - a)
    den = (u + a + 1.0) * (u + a)
    return num / den * np.exp(2.0 * alpha * u * t)


def _endpoint_and_slope(alpha: float, t: float, u: complex) -> tuple[complex, complex]:
    """Endpoint z(u) of the characteristic curve and dz/du."""
    a = const_a(alpha)
    u = complex(u)
    num = (u - a - 1.0) * (u - a)
    den = (u + a + 1.0) * (u + a)
    if den == 0.0:
        raise ZeroDivisionError("v_map pole reached")
    e = np.exp(2.0 * alpha * u * t)
    v = num / den * e
    dnum = 2.0 * u - 2.0 * a - 1.0
    dden = 2.0 * u + 2.0 * a + 1.0
    dv = e * ((dnum * den - num * dden) / (den * den) + 2.0 * alpha * t * num / den)
    d = (u - a) + (u + a) * v
    if d == 0.0:
        raise ZeroDivisionError("vanishing inversion denominator (u-A) + (u+A)V")
    w = (1.0 - v) / d
    dd = 1.0 + v + (u + a) * dv
    dw = (-dv * d - (1.0 - v) * dd) / (d * d)
    z = 1.0 + 2.0 * a * w - (u * u - a * a) * w * w
    dz = 2.0 * a * dw - 2.0 * u * w * w - (u * u - a * a) * 2.0 * w * dw
    return z, dz


def characteristic_endpoint(alpha: float, t: float, u: complex) -> complex:
    """z(u) = 1 + 2A(1-V)/D - (u^2 - A^2)((1-V)/D)^2 with D = (u-A)+(u+A)V.

    For u = sqrt(B(1-z0, a)) this is the time-t position of the
    characteristic curve started at z0; z(1/(2a)) = 0.
    """
    z, _ = _endpoint_and_slope(alpha, t, u)
    return z


def endpoint_derivative(alpha: float, t: float, u: complex) -> complex:
    """dz/du of :func:`characteristic_endpoint` (analytic, not differenced)."""
    _, dz = _endpoint_and_slope(alpha, t, u)
    return dz


def _newton_step(alpha, t, u, target, tol, max_iter=60):
    """Damped Newton for z(u) = target, returning (u, converged, n_iters)."""
    z, dz = _endpoint_and_slope(alpha, t, u)
    resid = abs(z - target)
    for it in range(max_iter):
        if resid < tol:
            return u, True, it
        if dz == 0.0:
            return u, False, it
        step = (z - target) / dz
        lam = 1.0
        for _ in range(12):
            u_new = u - lam * step
            try:
                z_new, dz_new = _endpoint_and_slope(alpha, t, u_new)
            except ZeroDivisionError:
                lam *= 0.5
                continue
            if abs(z_new - target) < resid or lam < 1e-3:
                u, z, dz, resid = u_new, z_new, dz_new, abs(z_new - target)
                break
            lam *= 0.5
        else:
            return u, False, max_iter
    return u, resid < tol, max_iter


def _continuation(alpha: float, t: float, z: complex, tol: float = 1e-12):
    """Track (u, sqrt-branch) from (z=0, u=1/(2a)) along the segment 0 -> z.

    Yields the final u and the continuity-tracked square root of
    A^2 z + (1-z) u^2.  Raises ContinuationError on step underflow.
    """
    a = const_a(alpha)
    u = complex(1.0 / (2.0 * alpha))
    s_root = complex(1.0 / (2.0 * alpha))  # sqrt value at z = 0, positive root
    z = complex(z)
    if z == 0.0:
        return u, s_root
    progress = 0.0
    step = min(1.0, 0.005 / abs(z), 1.0 / 8.0)
    while progress < 1.0:
        step = min(step, 1.0 - progress)
        target = (progress + step) * z
        u_try, ok, iters = _newton_step(alpha, t, u, target, tol)
        if not ok:
            step *= 0.5
            if step < 1e-7:
                raise ContinuationError(
                    f"continuation step underflow at z={target} "
                    f"(alpha={alpha}, t={t}); left the local invertibility "
                    "neighborhood"
                )
            continue
        u = u_try
        progress += step
        root_sq = a * a * target + (1.0 - target) * u * u
        r = np.sqrt(root_sq)
        s_root = r if abs(r - s_root) <= abs(-r - s_root) else -r
        if iters < 4:
            step = min(2.0 * step, 1.0 / 8.0)
    return u, s_root


def local_inverse(alpha: float, t: float, z: complex) -> complex:
    """The local inverse J(z) of the characteristic endpoint map.

    J(0) = 1/(2a); computed by damped Newton with continuation along the
    segment from 0 to z, residual below 1e-12.
    """
    u, _ = _continuation(alpha, t, z)
    return u


def mgf_two_forms(alpha: float, t: float, z: complex) -> tuple[complex, complex]:
    """Both closed forms of M_t(z); they agree to ~1e-10 where defined.

    Returns (square-root form, homographic form).  The square-root branch is
    fixed by continuity from M(0) = 1 along the continuation path.
    """
    z = complex(z)
    if abs(1.0 - z) < 1e-8:
        raise ValueError("branch ambiguity too close to z = 1")
    a = const_a(alpha)
    u, s_root = _continuation(alpha, t, z)
    m_sqrt = (-a + s_root) / (1.0 - z)
    psi = v_map(alpha, t, u)
    m_hom = u * (1.0 + psi) / (1.0 - psi) - a
    return m_sqrt, m_hom


@dataclass(frozen=True)
class FlowPoint:
    """All flow quantities at one (alpha, t, z)."""

    alpha: float
    t: float
    z: complex
    u: complex  # characteristic variable sqrt(B(1-z0, a)) = J(z)
    const_a: float
    const_b: complex
    const_c: complex
    psi: complex
    m_sqrt: complex
    m_hom: complex

    @property
    def j(self) -> complex:
        return self.u


def flow_point(alpha: float, t: float, z: complex) -> FlowPoint:
    """Evaluate the whole characteristic-flow stack at one point."""
    z = complex(z)
    a = const_a(alpha)
    u, s_root = _continuation(alpha, t, z)
    psi = v_map(alpha, t, u)
    m_sqrt = (-a + s_root) / (1.0 - z)
    m_hom = u * (1.0 + psi) / (1.0 - psi) - a
    b = u * u
    c = -alpha * (u * u - a * a)
    return FlowPoint(alpha, t, z, u, a, b, c, psi, m_sqrt, m_hom)


def integrate_characteristics(
    alpha: float, z0: complex, t_end: float, dt: float = 1e-4
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Integrate the raw characteristic system by the classical 4th-order scheme.

    State (z, f, y) with z' = (1-2a)z + 2a z(1-z) f, f' = a z f^2, y' = z and
    initial data (z0, 1/(1-z0), 0).  Returns (times, z, f, y) arrays.
    """
    steps = max(1, int(np.ceil(t_end / dt - 1e-12)))
    h = t_end / steps
    zs = np.empty(steps + 1, dtype=complex)
    fs = np.empty(steps + 1, dtype=complex)
    ys = np.empty(steps + 1, dtype=complex)
    state = np.array([z0, 1.0 / (1.0 - z0), 0.0], dtype=complex)

    def rhs(s):
        z, f, _ = s
        return np.array(
            [
                (1.0 - 2.0 * alpha) * z + 2.0 * alpha * z * (1.0 - z) * f,
                alpha * z * f * f,
                z,
            ],
            dtype=complex,
        )

    zs[0], fs[0], ys[0] = state
    for i in range(steps):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * h * k1)
        k3 = rhs(state + 0.5 * h * k2)
        k4 = rhs(state + h * k3)
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        zs[i + 1], fs[i + 1], ys[i + 1] = state
    return np.linspace(0.0, t_end, steps + 1), zs, fs, ys


def riccati_residual(alpha: float, z0: complex, z: complex, f: complex) -> float:
    """Residual of the completed-square first-order equation along a curve.

    Checks |a z f^2 - [a (f+A)^2 - (1-a)/(1-z0) - a A^2]|, which vanishes on
    exact characteristic curves started at z0.
    """
    a = const_a(alpha)
    lhs = alpha * z * f * f
    rhs = alpha * (f + a) ** 2 - (1.0 - alpha) / (1.0 - z0) - alpha * a * a
    return abs(lhs - rhs)


def probe_radius(
    alpha: float, t: float, r_start: float = 0.05, r_max: float = 0.95
) -> float:
    """Empirical radius of local invertibility around the origin.

    Grows the radius geometrically while the continuation converges along
    eight directions; reports the last fully successful radius.  The value
    is an empirical lower bound, not a claim of maximality.
    """
    dirs = np.exp(2j * np.pi * np.arange(8) / 8)
    r, good = r_start, 0.0
    while r <= r_max:
        try:
            for d in dirs:
                local_inverse(alpha, t, r * d)
        except (ContinuationError, ZeroDivisionError):
            break
        good = r
        r *= 1.25
    return good
