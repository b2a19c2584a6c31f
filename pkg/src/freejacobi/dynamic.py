"""Dynamical pushforward identity between the two moment hierarchies.

The normalized (atom-removed) Cauchy transforms of the two families satisfy
the same PDE once the half-rank family is pushed forward by x -> (2x-1)^2
and run at half speed:

    d/dt g = d/dz [ (2a-1) z g + (1-a) z(z-1) g^2 ]

for both g = v_{t/2} (built from the half-rank trajectory through the
transform chain) and g = tilde-G_t (built from the equal-rank trajectory).
Satisfying the same PDE does not make the solutions equal; they coincide
iff the initial moment data match, which at the matrix level is the
symmetrized initial-data identity checked by :func:`initial_data_check`.

Evenness of the centered pushforward is monitored, never assumed: the
v-branch hard-fails when the odd-moment drift exceeds 1e-6, because the
evenness lemma rests on an operator hypothesis that generic moment data
need not satisfy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hierarchy import MomentTrajectory, cauchy_from_moments
from .wachter import random_projection

__all__ = [
    "EvennessError",
    "half_speed_time",
    "tilde_half",
    "tilde_equal",
    "u_from_tilde",
    "v_from_u",
    "pushforward_even_moments",
    "v_transform",
    "evenness_proxy",
    "same_pde_residual",
    "u_pde_residual",
    "initial_data_check",
    "TransformGrid",
    "build_transform_grid",
]

EVENNESS_TOL = 1e-6


class EvennessError(RuntimeError):
    """Odd pushforward moments drifted; the v-substitution is not valid."""


def half_speed_time(t: float) -> float:
    """Time entering the half-rank trajectory inside the dynamical identity.

    The pushforward chain doubles the PDE speed, so the half-rank family is
    read at t/2 when compared with the equal-rank family at t.  Every time
    conversion in this module routes through this function.
    """
    return 0.5 * t


def _check_z(z: complex) -> complex:
    z = complex(z)
    if abs(z) <= 1.2:
        raise ValueError("transform evaluations require |z| > 1.2")
    return z


def tilde_half(alpha: float, trajectory: MomentTrajectory, t: float, z: complex) -> complex:
    """Cauchy transform of the normalized half-rank density.

    (1/(2(1-a))) [G_t(z) - (2a-1)/(z-1)]: removes the weight 2a-1 at x = 1
    and rescales the remaining mass 2(1-a) to one.  Requires a >= 1/2.
    """
    if alpha < 0.5:
        raise ValueError("tilde_half requires alpha >= 1/2")
    if trajectory.family != "half":
        raise ValueError("tilde_half needs a half-rank trajectory")
    z = _check_z(z)
    g = cauchy_from_moments(trajectory.at_time(t), z)
    return (g - (2.0 * alpha - 1.0) / (z - 1.0)) / (2.0 * (1.0 - alpha))


def tilde_equal(alpha: float, trajectory: MomentTrajectory, t: float, z: complex) -> complex:
    """Cauchy transform of the normalized equal-rank density.

    (a/(1-a)) [G_t(z) - (2a-1)/(a(z-1))]: removes the weight (2a-1)/a at
    x = 1 and rescales the remaining mass (1-a)/a to one.
    """
    if alpha < 0.5:
        raise ValueError("tilde_equal requires alpha >= 1/2")
    if trajectory.family != "equal":
        raise ValueError("tilde_equal needs an equal-rank trajectory")
    z = _check_z(z)
    g = cauchy_from_moments(trajectory.at_time(t), z)
    return alpha / (1.0 - alpha) * (g - (2.0 * alpha - 1.0) / (alpha * (z - 1.0)))


def u_from_tilde(tilde_evaluator, z: complex) -> complex:
    """Centered transform u(z) = (1/2) tilde((z+1)/2)."""
    return 0.5 * tilde_evaluator((complex(z) + 1.0) / 2.0)


def v_from_u(u_evaluator, zeta: complex) -> complex:
    """Squared-variable transform v(zeta) = u(sqrt(zeta))/sqrt(zeta).

    Only valid when the centered density is even (u odd); callers gate on
    :func:`evenness_proxy`.
    """
    root = np.sqrt(complex(zeta))
    return u_evaluator(root) / root


def _centered_moment(alpha: float, m: np.ndarray, j: int) -> float:
    """Normalized integral of (2x-1)^j against the atom-removed density."""
    if j >= len(m):
        raise ValueError(f"need moments up to order {j}")
    total = sum(
        math.comb(j, k) * (2.0**k) * ((-1.0) ** (j - k)) * m[k] for k in range(j + 1)
    )
    return (total - (2.0 * alpha - 1.0)) / (2.0 * (1.0 - alpha))


def pushforward_even_moments(
    alpha: float, m: np.ndarray, j_max: int | None = None
) -> np.ndarray:
    """Moments p_j of the (2x-1)^2-pushforward of the normalized density.

    The binomial transform from raw moments amplifies input noise by ~9^j,
    so only low orders are trustworthy in double precision; the default cap
    keeps the amplification below ~1e-6.
    """
    if j_max is None:
        j_max = min((len(m) - 1) // 2, 10)
    if 2 * j_max > len(m) - 1:
        raise ValueError("not enough raw moments for the requested order")
    return np.array([_centered_moment(alpha, m, 2 * j) for j in range(j_max + 1)])


def v_transform(alpha: float, m: np.ndarray, zeta: complex) -> complex:
    """Cauchy transform of the squared-pushforward law from raw moments.

    Evaluated through the transform chain v(zeta) = u(sqrt(zeta))/sqrt(zeta)
    = tilde-G((sqrt(zeta)+1)/2) / (2 sqrt(zeta)) on the raw moments; going
    through pushforward moments instead would lose ~9^j precision to
    binomial cancellation.  The truncation tail scales like
    (x_+ / |(sqrt(zeta)+1)/2|)^N, so nodes near the support need a high
    moment order N.
    """
    zeta = _check_z(zeta)
    root = np.sqrt(zeta)
    w = (root + 1.0) / 2.0
    g = cauchy_from_moments(m, w)
    tilde = (g - (2.0 * alpha - 1.0) / (w - 1.0)) / (2.0 * (1.0 - alpha))
    return tilde / (2.0 * root)


def evenness_proxy(trajectory: MomentTrajectory, t: float, j_cap: int = 9) -> float:
    """Max |odd centered moment| of the normalized half-rank density at t.

    Small values certify (at tolerance) that the centered density is even,
    which is what licenses the u(z) = z v(z^2) substitution.
    """
    alpha = trajectory.alpha
    m = trajectory.at_time(t)
    top = min(j_cap, len(m) - 1)
    return max(
        abs(_centered_moment(alpha, m, j)) for j in range(1, top + 1, 2)
    )


def _require_even(trajectory: MomentTrajectory, t: float) -> None:
    drift = evenness_proxy(trajectory, t)
    if drift > EVENNESS_TOL:
        raise EvennessError(
            f"odd centered moments drifted to {drift:.3e} at t={t}; "
            "the squared-variable substitution is blocked"
        )


def same_pde_residual(
    alpha: float,
    branch: str,
    t: float,
    z: complex,
    h: float,
    half_trajectory: MomentTrajectory | None = None,
    equal_trajectory: MomentTrajectory | None = None,
) -> float:
    """Central-difference residual of the shared PDE for either branch.

    branch "v": g = v_{t/2} from the half-rank trajectory (times (t+-h)/2);
    branch "alpha": g = tilde-G_t from the equal-rank trajectory.
    """
    z = _check_z(z)

    if branch == "v":
        if half_trajectory is None:
            raise ValueError("v branch needs half_trajectory")
        _require_even(half_trajectory, half_speed_time(t))

        def g(tau, zeta):
            m = half_trajectory.at_time(half_speed_time(tau))
            return v_transform(alpha, m, zeta)

    elif branch == "alpha":
        if equal_trajectory is None:
            raise ValueError("alpha branch needs equal_trajectory")

        def g(tau, zeta):
            return tilde_equal(alpha, equal_trajectory, tau, zeta)

    else:
        raise ValueError("branch must be 'v' or 'alpha'")

    def flux(zeta):
        val = g(t, zeta)
        return (2.0 * alpha - 1.0) * zeta * val + (1.0 - alpha) * zeta * (
            zeta - 1.0
        ) * val * val

    dgdt = (g(t + h, z) - g(t - h, z)) / (2.0 * h)
    dflux = (flux(z + h) - flux(z - h)) / (2.0 * h)
    return abs(dgdt - dflux)


def u_pde_residual(
    alpha: float,
    equal_trajectory: MomentTrajectory,
    t: float,
    z: complex,
    h: float,
) -> float:
    """Residual of the centered-variable PDE for u(t, z) = z g_{2t}(z^2).

    With g the normalized equal-rank transform, u must satisfy
    du/dt = d/dz[(2a-1) z u + (1-a)(z^2-1) u^2]; this exercises the
    chain-rule equivalence between the centered and squared variables on a
    trajectory that provably satisfies the shared PDE.
    """
    z = _check_z(z)
    if abs(z * z) <= 1.2:
        raise ValueError("need |z^2| > 1.2 for the squared argument")

    def u(tau, zeta):
        return zeta * tilde_equal(alpha, equal_trajectory, 2.0 * tau, zeta * zeta)

    def flux(zeta):
        val = u(t, zeta)
        return (2.0 * alpha - 1.0) * zeta * val + (1.0 - alpha) * (
            zeta * zeta - 1.0
        ) * val * val

    dudt = (u(t + h, z) - u(t - h, z)) / (2.0 * h)
    dflux = (flux(z + h) - flux(z - h)) / (2.0 * h)
    return abs(dudt - dflux)


def initial_data_check(
    n: int,
    alpha: float,
    seed: int,
    j_max: int,
    replicas: int = 20,
    rotate: bool = True,
) -> list[dict]:
    """Matrix Monte Carlo test of the initial-data moment identity.

    Compares 2 tau[(2PQP - P)^{2j}] against tau[(Q1+Q2-1)^{2j}] with P a
    rank-n/2 corner projector and Q, Q1, Q2 of rank floor(alpha n).  With
    independently Haar-rotated projections both sides approach the same
    free-probability limit (gap O(1/n) plus Monte Carlo error).  With
    rotate=False the (P, Q) pair is left in non-free position (Q equals the
    corner projector, which is P itself at alpha = 1/2) while (Q1, Q2) stay
    rotated; the resulting O(1) gap shows the identity is not automatic.
    """
    if n % 2:
        raise ValueError("n must be even")
    rank_q = int(alpha * n)
    if rank_q < 1:
        raise ValueError("alpha n too small")
    p = np.zeros((n, n))
    p[: n // 2, : n // 2] = np.eye(n // 2)
    q0 = np.zeros((n, n))
    q0[:rank_q, :rank_q] = np.eye(rank_q)
    lhs = np.zeros((replicas, j_max + 1))
    rhs = np.zeros((replicas, j_max + 1))
    for rep in range(replicas):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))
        if rotate:
            u = _haar(n, rng)
            q = u @ q0 @ u.conj().T
        else:
            q = q0
        u1 = _haar(n, rng)
        u2 = _haar(n, rng)
        q1 = u1 @ q0 @ u1.conj().T
        q2 = u2 @ q0 @ u2.conj().T
        a_op = 2.0 * (p @ q @ p) - p
        b_op = q1 + q2 - np.eye(n)
        a_pow = p.copy()
        b_pow = np.eye(n, dtype=complex)
        a_sq = a_op @ a_op
        b_sq = b_op @ b_op
        for j in range(j_max + 1):
            if j > 0:
                a_pow = a_pow @ a_sq
                b_pow = b_pow @ b_sq
            lhs[rep, j] = 2.0 * float((np.trace(a_pow) / n).real)
            rhs[rep, j] = float((np.trace(b_pow) / n).real)
    rows = []
    for j in range(j_max + 1):
        l_mean, r_mean = lhs[:, j].mean(), rhs[:, j].mean()
        stderr = math.hypot(
            lhs[:, j].std(ddof=1) / math.sqrt(replicas),
            rhs[:, j].std(ddof=1) / math.sqrt(replicas),
        ) if replicas > 1 else 0.0
        rows.append(
            {
                "j": j,
                "lhs": l_mean,
                "rhs": r_mean,
                "gap": abs(l_mean - r_mean),
                "stderr": stderr,
            }
        )
    return rows


def _haar(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


@dataclass(frozen=True)
class TransformGrid:
    """Evaluations of G, tilde-G, u (and v where licensed) on a node grid.

    G and tilde-G are evaluated at ``z_nodes`` (|z| > 1.2); the centered
    transform u lives on [-1, 1], so it is evaluated at the shifted nodes
    2z - 1, and v (squared variable) back at ``z_nodes``.  v entries are
    nan wherever the evenness proxy does not certify the substitution.
    """

    alpha: float
    family: str
    times: np.ndarray
    z_nodes: np.ndarray
    g_values: np.ndarray
    tilde_values: np.ndarray
    u_values: np.ndarray
    v_values: np.ndarray


def build_transform_grid(
    trajectory: MomentTrajectory, times, z_nodes
) -> TransformGrid:
    """Evaluate the transform chain on times x nodes for export."""
    alpha = trajectory.alpha
    times = np.asarray(times, dtype=float)
    z_nodes = np.asarray(z_nodes, dtype=complex)
    shape = (len(times), len(z_nodes))
    g_vals = np.zeros(shape, dtype=complex)
    t_vals = np.zeros(shape, dtype=complex)
    u_vals = np.zeros(shape, dtype=complex)
    v_vals = np.full(shape, np.nan, dtype=complex)
    tilde = tilde_half if trajectory.family == "half" else tilde_equal
    for i, t in enumerate(times):
        m = trajectory.at_time(t)
        even_ok = (
            trajectory.family == "half"
            and evenness_proxy(trajectory, t) <= EVENNESS_TOL
        )
        for k, z in enumerate(z_nodes):
            g_vals[i, k] = cauchy_from_moments(m, z)
            t_vals[i, k] = tilde(alpha, trajectory, t, z)
            u_vals[i, k] = u_from_tilde(
                lambda w: tilde(alpha, trajectory, t, w), 2.0 * z - 1.0
            )
            if even_ok:
                v_vals[i, k] = v_transform(alpha, m, z)
    return TransformGrid(
        alpha, trajectory.family, times, z_nodes, g_vals, t_vals, u_vals, v_vals
    )
