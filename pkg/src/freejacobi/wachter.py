"""Static spectral measures and exact projection identities.

The free MANOVA law nu^(b,a) (free multiplicative convolution of two
Bernoulli laws) and the stationary law mu_inf^(b,a) of the compressed
process share the absolutely-continuous shape

    sqrt((x_+ - x)(x - x_-)) / (c x (1-x)) on [x_-, x_+],
    x_+- = (sqrt(a(1-b)) +- sqrt(b(1-a)))^2,

with c = 2*pi for nu and c = 2*pi*b for mu_inf, plus atoms at 0 and 1.
(The 1/pi is forced by the closed form
 int sqrt((x_+-x)(x-x_-))/(x(1-x)) dx = pi (1 - sqrt(x_- x_+)
 - sqrt((1-x_-)(1-x_+))) together with unit total mass; displays that drop
it leave the measure unnormalized.)  Moments are
computed with a Chebyshev-substituted midpoint rule that absorbs the
square-root edge factors, with one node doubling as an accuracy check.

The module also verifies, on explicit random projection matrices, the two
algebraic identities used by the static pushforward argument: the
symmetrized-sum moment identity

    tau[(Q1+Q2-1)^{2j}] = 2 tau[(Q1Q2Q1)^j] - (2a-1)

(valid for any pair of orthogonal projections of common rank a; the j = 0
case uses the corner-algebra unit (Q1Q2Q1)^0 = Q1), and the binomial
expansion of angle-operator moments through the product of the associated
symmetries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MeasureSpec",
    "make_measure",
    "ac_integral",
    "moment",
    "pushforward_check",
    "random_projection",
    "projection_sum_moment_check",
    "angle_binomial_check",
]

_NODES = 1024


@dataclass(frozen=True)
class MeasureSpec:
    """Atoms plus absolutely-continuous part of nu or mu_inf."""

    kind: str  # "nu" | "mu_inf"
    beta: float
    alpha: float
    atom_at_zero: float
    atom_at_one: float
    x_minus: float
    x_plus: float
    density_scale: float  # the c in sqrt(...)/(c x (1-x))
    mass_ac: float

    def density(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > self.x_minus) & (x < self.x_plus)
        out = np.zeros_like(x)
        xi = x[inside]
        out[inside] = np.sqrt((self.x_plus - xi) * (xi - self.x_minus)) / (
            self.density_scale * xi * (1.0 - xi)
        )
        return out

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "beta": self.beta,
            "alpha": self.alpha,
            "atom_at_zero": self.atom_at_zero,
            "atom_at_one": self.atom_at_one,
            "x_minus": self.x_minus,
            "x_plus": self.x_plus,
            "density_scale": self.density_scale,
            "mass_ac": self.mass_ac,
        }


def ac_integral(spec: MeasureSpec, f, nodes: int = _NODES, check_tol: float = 1e-8) -> float:
    """Integral of f against the absolutely-continuous part of the measure.

    Substituting x = x_- + (x_+ - x_-)(1 + cos(theta))/2 turns the weight
    into sin^2(theta) times a smooth even periodic function, so the uniform
    midpoint rule converges spectrally; one node doubling estimates the
    error.  The 1/x (or 1/(1-x)) endpoint singularities that appear when an
    edge touches 0 or 1 are absorbed by the same substitution.
    """
    width = spec.x_plus - spec.x_minus
    if width <= 0:
        return 0.0

    def pass_at(m: int) -> float:
        theta = np.pi * (np.arange(m) + 0.5) / m
        x = spec.x_minus + width * 0.5 * (1.0 + np.cos(theta))
        vals = f(x) * np.sin(theta) ** 2 / (spec.density_scale * x * (1.0 - x))
        return float((width / 2.0) ** 2 * np.pi / m * np.sum(vals))

    coarse = pass_at(nodes)
    fine = pass_at(2 * nodes)
    if abs(fine - coarse) > check_tol * (1.0 + abs(fine)):
        raise RuntimeError(
            f"quadrature did not converge: |{fine} - {coarse}| too large"
        )
    return fine


def make_measure(kind: str, beta: float, alpha: float) -> MeasureSpec:
    """Populate a MeasureSpec; the AC mass is cross-checked by quadrature."""
    if not (0.0 < beta < 1.0 and 0.0 < alpha < 1.0):
        raise ValueError("beta and alpha must lie in (0, 1)")
    x_m = (math.sqrt(alpha * (1.0 - beta)) - math.sqrt(beta * (1.0 - alpha))) ** 2
    x_p = (math.sqrt(alpha * (1.0 - beta)) + math.sqrt(beta * (1.0 - alpha))) ** 2
    if kind == "nu":
        atom0 = 1.0 - min(beta, alpha)
        atom1 = max(0.0, alpha + beta - 1.0)
        scale = 2.0 * math.pi
    elif kind == "mu_inf":
        atom0 = max(0.0, 1.0 - alpha / beta)
        atom1 = max(0.0, (alpha + beta - 1.0) / beta)
        scale = 2.0 * math.pi * beta
    else:
        raise ValueError("kind must be 'nu' or 'mu_inf'")
    spec = MeasureSpec(
        kind=kind,
        beta=beta,
        alpha=alpha,
        atom_at_zero=atom0,
        atom_at_one=atom1,
        x_minus=x_m,
        x_plus=x_p,
        density_scale=scale,
        mass_ac=1.0 - atom0 - atom1,
    )
    quad_mass = ac_integral(spec, lambda x: np.ones_like(x))
    if abs(quad_mass - spec.mass_ac) > 1e-10:
        raise RuntimeError(
            f"AC mass mismatch for {kind}({beta},{alpha}): expected "
            f"{spec.mass_ac}, quadrature gives {quad_mass}"
        )
    return spec


def moment(spec: MeasureSpec, j: int) -> float:
    """j-th moment: atom contributions plus quadrature, abs error < 1e-10."""
    if j < 0:
        raise ValueError("moment order must be >= 0")
    atom = spec.atom_at_one + (spec.atom_at_zero if j == 0 else 0.0)
    return atom + ac_integral(spec, lambda x: x**j, check_tol=1e-10)


def pushforward_check(alpha: float, j_max: int) -> float:
    """Static pushforward identity between the two stationary laws.

    Compares, for j = 0..j_max, the normalized (2x-1)^{2j} moments of the AC
    part of mu_inf^(1/2, a) against the normalized x^j moments of the AC
    part of mu_inf^(a, a); the pushforward under x -> (2x-1)^2 identifies
    the two normalized densities.  Returns the max relative error.
    """
    if not 0.5 <= alpha < 1.0:
        raise ValueError("pushforward check requires alpha in [1/2, 1)")
    half = make_measure("mu_inf", 0.5, alpha)
    equal = make_measure("mu_inf", alpha, alpha)
    worst = 0.0
    for j in range(j_max + 1):
        lhs = ac_integral(half, lambda x: (2.0 * x - 1.0) ** (2 * j), check_tol=1e-10)
        lhs /= half.mass_ac
        rhs = ac_integral(equal, lambda x: x**j, check_tol=1e-10) / equal.mass_ac
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-300))
    return worst


def random_projection(n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Orthogonal projection onto a random rank-dimensional subspace of C^n."""
    if not 1 <= rank <= n:
        raise ValueError("rank must lie in [1, n]")
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    q, _ = np.linalg.qr(g)
    return q @ q.conj().T


def _ntrace(a: np.ndarray) -> float:
    tr = np.trace(a) / a.shape[0]
    return float(tr.real)


def projection_sum_moment_check(
    n: int, rank1: int, rank2: int, seed: int, j_max: int
) -> float:
    """Max absolute error of the symmetrized-sum identity on random projections.

    Requires rank1 == rank2 (the identity needs a common rank).  The j = 0
    term uses the corner-algebra unit convention (Q1 Q2 Q1)^0 = Q1.
    """
    if rank1 != rank2:
        raise ValueError("the identity requires projections of equal rank")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    q1 = random_projection(n, rank1, rng)
    q2 = random_projection(n, rank2, rng)
    alpha = rank1 / n
    s = q1 + q2 - np.eye(n)
    angle = q1 @ q2 @ q1
    worst = 0.0
    s_pow = np.eye(n)
    for j in range(j_max + 1):
        angle_pow = q1 if j == 0 else np.linalg.matrix_power(angle, j)
        lhs = _ntrace(s_pow)
        rhs = 2.0 * _ntrace(angle_pow) - (2.0 * alpha - 1.0)
        worst = max(worst, abs(lhs - rhs))
        s_pow = s_pow @ s @ s
    return worst


def angle_binomial_check(
    n: int, seed: int, j_max: int, rank_q: int | None = None
) -> float:
    """Max absolute error of the angle-operator binomial expansion.

    For P of rank n/2 (so the symmetry R = 2P-1 is trace-free), S = 2Q-1:

      tau[(PQP)^j] = 2^{-2j-1} C(2j, j) + tau(S)/4
                     + 2^{-2j} sum_{k=1}^{j} C(2j, j-k) tau[(RS)^k].
    """
    if n % 2:
        raise ValueError("n must be even (P needs rank exactly n/2)")
    if rank_q is None:
        rank_q = n // 2
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    p = random_projection(n, n // 2, rng)
    q = random_projection(n, rank_q, rng)
    r = 2.0 * p - np.eye(n)
    s = 2.0 * q - np.eye(n)
    rs = r @ s
    tau_s = _ntrace(s)
    angle = p @ q @ p
    rs_traces = []
    rs_pow = np.eye(n)
    for _ in range(j_max):
        rs_pow = rs_pow @ rs
        rs_traces.append(_ntrace(rs_pow))
    worst = 0.0
    for j in range(1, j_max + 1):
        lhs = _ntrace(np.linalg.matrix_power(angle, j))
        rhs = math.comb(2 * j, j) / 2.0 ** (2 * j + 1) + tau_s / 4.0
        rhs += sum(
            math.comb(2 * j, j - k) * rs_traces[k - 1] for k in range(1, j + 1)
        ) / 2.0 ** (2 * j)
        worst = max(worst, abs(lhs - rhs))
    return worst
