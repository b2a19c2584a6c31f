"""Real-line phase analysis of the rescaled deformed exponential map.

The rescaled map

    W(a, t, u) = ((u-1)(u-1+2a)) / ((u+1)(u+1-2a)) * exp(t*u),   u > 0,

equals the characteristic-flow map of :mod:`freejacobi.flow` evaluated at
u/(2a).  Its sign structure on the positive half-line is controlled by the
quadratic

    R(a, t, y) = 4(1-a)(y-1+2a) + t(y-1)(y-(2a-1)^2),   y = u^2,

through dW/du = e^{ut} R(u^2) / ((u+1)^2 (u+1-2a)^2).  For a >= 1/2 the map
is a bijection from an open interval onto (-1, 1) for every t > 0; the
monotone structure changes at the two transition times

    t0 = (a - sqrt(2a-1)) / (a(1-a)),   t1 = (a + sqrt(2a-1)) / (a(1-a)),

which collapse to t = 2 at a = 1/2.  For a < 1/2 and t <= 2 the map never
reaches -1: its unique interior minimum stays above -1 and the image of
(0, inf) misses part of (-1, 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "PhaseReport",
    "BracketError",
    "v_tilde",
    "v_tilde_signed_log",
    "critical_poly",
    "critical_points",
    "threshold_time",
    "transition_times",
    "discriminant_quadratic",
    "alpha_at_time",
    "phase_report",
    "remark_probe",
]

_LOG_CAP = 300.0  # beyond u*t = 300, report sign and log magnitude only


class BracketError(RuntimeError):
    """A root bracket could not be established on the scanned range."""


def v_tilde_signed_log(alpha: float, t: float, u) -> tuple[float, float]:
    """(sign, log|W|) of the rescaled map; overflow-safe.

    Arithmetic follows the dtype of ``u`` (longdouble in, longdouble out),
    which the endpoint refinement uses: near steep crossings the -1 level
    cannot be resolved to 1e-10 at double resolution of u.
    """
    if u == 2.0 * alpha - 1.0:
        raise ZeroDivisionError(
            f"rescaled map singular at u = 2*alpha-1 = {2 * alpha - 1}"
        )
    if u == -1.0:
        raise ZeroDivisionError("rescaled map singular at u = -1")
    gap = 1.0 - 2.0 * alpha  # grouped so u - (1-2a) stays exact near u = |1-2a|
    factors = [u - 1.0, u - gap, u + 1.0, u + gap]
    sign = 1.0
    logmag = t * u
    for i, f in enumerate(factors):
        if f == 0.0:
            return 0.0, -math.inf
        if f < 0.0:
            sign = -sign
        logmag = logmag + (np.log(abs(f)) if i < 2 else -np.log(abs(f)))
    return sign, logmag


def v_tilde(alpha: float, t: float, u):
    """W(a, t, u); returns signed infinity past the overflow guard."""
    sign, logmag = v_tilde_signed_log(alpha, t, u)
    cap = 11000.0 if isinstance(u, np.longdouble) else 700.0
    if logmag > cap:
        return sign * math.inf
    return sign * np.exp(logmag)


def critical_poly(alpha: float, t: float, y: float) -> float:
    """R(a, t, y); sign of dW/du at u = sqrt(y) on the branch u > |2a-1|."""
    return 4.0 * (1.0 - alpha) * (y - 1.0 + 2.0 * alpha) + t * (y - 1.0) * (
        y - (2.0 * alpha - 1.0) ** 2
    )


def critical_points(alpha: float, t: float) -> list[float]:
    """All positive u with R(a, t, u^2) = 0, ascending."""
    if t == 0.0:
        y = 1.0 - 2.0 * alpha
        return [math.sqrt(y)] if y > 0 else []
    a2 = t
    a1 = 4.0 * (1.0 - alpha) - t * (1.0 + (2.0 * alpha - 1.0) ** 2)
    a0 = t * (2.0 * alpha - 1.0) ** 2 - 4.0 * (1.0 - alpha) * (1.0 - 2.0 * alpha)
    disc = a1 * a1 - 4.0 * a2 * a0
    if disc < 0.0:
        return []
    r = math.sqrt(disc)
    # numerically stable quadratic roots
    q = -0.5 * (a1 + math.copysign(r, a1)) if a1 != 0.0 else 0.5 * r
    roots = set()
    if q != 0.0:
        roots.update((q / a2, a0 / q))
    else:
        roots.update(((-a1 + r) / (2 * a2), (-a1 - r) / (2 * a2)))
    return sorted(math.sqrt(y) for y in roots if y > 0.0)


def threshold_time(alpha: float) -> float:
    """T(a) = 4(1-a)/(1+(1-2a)^2); below it R is monotone in y."""
    return 4.0 * (1.0 - alpha) / (1.0 + (1.0 - 2.0 * alpha) ** 2)


def transition_times(alpha: float) -> tuple[float, float]:
    """(t0, t1) for a in [1/2, 1); both equal 2 at a = 1/2.

    These are the roots of the quadratic a^2(1-a) t^2 - 2a^2 t + (1-a),
    equivalently of the discriminant of the saddle Z-polynomial.
    """
    if not 0.5 <= alpha < 1.0:
        raise ValueError("transition times require alpha in [1/2, 1)")
    s = math.sqrt(2.0 * alpha - 1.0)
    d = alpha * (1.0 - alpha)
    return (alpha - s) / d, (alpha + s) / d


def discriminant_quadratic(alpha: float, t: float) -> float:
    """(1-a)[(1-a)(1+at)^2 - 2at]; vanishes exactly at t0 and t1."""
    return (1.0 - alpha) * ((1.0 - alpha) * (1.0 + alpha * t) ** 2 - 2.0 * alpha * t)


def alpha_at_time(t: float) -> float:
    """The unique a in [1/2, 1) with t1(a) = t, for t >= 2."""
    if t < 2.0:
        raise ValueError("alpha_at_time requires t >= 2")
    if t == 2.0:
        return 0.5
    hi = 1.0 - 1e-14
    return brentq(
        lambda a: transition_times(a)[1] - t, 0.5, hi, xtol=1e-15, rtol=8.9e-16
    )


@dataclass(frozen=True)
class PhaseReport:
    """Monotone-structure summary of the rescaled map at one (alpha, t)."""

    alpha: float
    t: float
    threshold: float
    t0: float | None
    t1: float | None
    regime: str  # "increasing" | "interior-min" | "not-applicable"
    critical_points: tuple[float, ...]
    interval: tuple[float, float] | None
    min_value: float | None
    verdict: str  # "bijection-onto-(-1,1)" | "proper-subset" | "undetermined"


def _bisect_value(alpha, t, lo, hi, target, u_tol=1e-15, v_tol=1e-10):
    """Root of W(u) = target on [lo, hi], assuming a sign change.

    brentq locates the root at double resolution; a longdouble bisection
    polish follows, because at steep crossings (slope ~ e^{tu}) one double
    ulp of u moves W by more than the 1e-10 endpoint contract.
    """
    f = lambda u: v_tilde(alpha, t, u) - target
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketError(
            f"no sign change for W = {target} on [{lo}, {hi}] "
            f"(W(lo)-target={flo:.3e}, W(hi)-target={fhi:.3e})"
        )
    root = brentq(f, lo, hi, xtol=u_tol, rtol=8.9e-16)
    ld = np.longdouble
    width = ld(max(abs(root), 1.0)) * ld(1e-12)
    a, b = ld(root) - width, ld(root) + width
    a, b = max(a, ld(lo)), min(b, ld(hi))
    fa, fb = f(a), f(b)
    if fa * fb > 0:  # root landed at the window edge; fall back to the bracket
        a, b, fa, fb = ld(lo), ld(hi), ld(flo), ld(fhi)
    for _ in range(90):
        mid = (a + b) / 2
        fm = f(mid)
        if fm == 0.0:
            return mid
        if fa * fm < 0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    root_ld = (a + b) / 2
    if abs(v_tilde(alpha, t, root_ld) - target) > v_tol:
        raise BracketError(f"bisection for W = {target} stalled at u = {root_ld}")
    return root_ld


def _lower_endpoint(alpha, t, left_limit):
    """Bracket and solve W(a) = -1 on (left_limit, 1); W(1) = 0.

    At the boundary case alpha = 1/2, t <= 2 the infimum -1 is approached
    at the removable singularity u = 0 but never attained; the endpoint is
    then resolved at the -1 + 1e-12 level, within the 1e-10 contract.
    """
    lo = None
    for k in range(1, 200):
        u = left_limit + (1.0 - left_limit) * 0.5**k
        sign, logmag = v_tilde_signed_log(alpha, t, u)
        if sign < 0 and logmag > 0.0:
            lo = u
            break
    if lo is not None:
        return _bisect_value(alpha, t, lo, 1.0, -1.0)
    # open-endpoint case: W decreases to -1 without crossing it
    for k in range(1, 200):
        u = left_limit + (1.0 - left_limit) * 0.5**k
        if v_tilde(alpha, t, u) < -1.0 + 1e-12:
            return _bisect_value(alpha, t, u, 1.0, -1.0 + 1e-12, v_tol=1e-10)
    raise BracketError(
        f"could not bracket W = -1 on ({left_limit}, 1) "
        f"(alpha={alpha}, t={t}); scanned 200 geometric steps"
    )


def _upper_endpoint(alpha, t, u_cap=50.0):
    """Bracket and solve W(b) = +1 on (1, u_cap); W increasing there."""
    step, prev = 0.25, 1.0
    while True:
        u = prev + step
        if u > u_cap:
            raise BracketError(
                f"could not bracket W = +1 below u = {u_cap} (alpha={alpha}, t={t})"
            )
        sign, logmag = v_tilde_signed_log(alpha, t, u)
        if sign > 0 and logmag > 0.0:
            return _bisect_value(alpha, t, prev, u, 1.0)
        prev, step = u, step * 2.0


def phase_report(alpha: float, t: float) -> PhaseReport:
    """Classify the map on (0, inf) and locate the relevant interval/minimum.

    For a >= 1/2 the verdict is bijection-onto-(-1,1); the interval (a, b)
    with W(a) = -1, W(b) = +1 is found on the monotone branch through u = 1
    (the whole branch right of the singularity when t <= t1, the increasing
    branch right of the interior minimum when t > t1).  For a < 1/2, t <= 2,
    the unique minimum is located in (sqrt(1-2a), 1) and the verdict is
    proper-subset when it stays above -1.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    thr = threshold_time(alpha)
    crit = tuple(critical_points(alpha, t))

    if alpha >= 0.5:
        t0, t1 = transition_times(alpha)
        sing = 2.0 * alpha - 1.0
        if t <= t1:
            regime = "increasing"
            left_limit = sing
        else:
            regime = "interior-min"
            on_branch = [u for u in crit if u > sing]
            if not on_branch:
                raise BracketError(
                    f"no interior critical point found for t={t} > t1={t1}"
                )
            left_limit = max(on_branch)
        a_end = _lower_endpoint(alpha, t, left_limit)
        b_end = _upper_endpoint(alpha, t)
        return PhaseReport(
            alpha, t, thr, t0, t1, regime, crit, (a_end, b_end), None,
            "bijection-onto-(-1,1)",
        )

    # alpha < 1/2: locate the interior minimum when the structure is simple.
    min_value = None
    if crit:
        u_min = crit[-1]
        min_value = v_tilde(alpha, t, u_min)
    if t <= 2.0 and min_value is not None and min_value > -1.0:
        verdict = "proper-subset"
    else:
        verdict = "undetermined"
    return PhaseReport(
        alpha, t, thr, None, None, "not-applicable", crit, None, min_value, verdict
    )


def remark_probe(alpha: float, t: float) -> float:
    """W at u = sqrt(sqrt(2a-1)(2a - sqrt(2a-1))), tabulated, never asserted.

    At a = 1/2 the probe point collapses to u = 0 where the map has the
    limiting value -1 along the probe path; that limit is returned.
    """
    if alpha < 0.5:
        raise ValueError("remark_probe requires alpha >= 1/2")
    if alpha == 0.5:
        return -1.0
    x = math.sqrt(2.0 * alpha - 1.0)
    u = math.sqrt(x * (2.0 * alpha - x))
    return v_tilde(alpha, t, u)
