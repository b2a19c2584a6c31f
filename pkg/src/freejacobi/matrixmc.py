"""Finite-size random-matrix oracle for the limit formulas.

Haar unitaries, a unitary Brownian motion scheme, and spectral moments of
matrix Jacobi processes.  Everything is driven by counter-based Philox
streams keyed on (seed, replica), so results are deterministic for a fixed
(seed, replica index) regardless of scheduling, and replicas parallelize
safely across threads.

The Brownian increment is U <- exp(i sqrt(dt) H) U with H drawn from the
GUE normalized so the normalized trace of H^2 is 1 (entry variance 1/N),
the exponential evaluated exactly through the eigendecomposition of H.
No explicit drift term is added: the second-order term of the exponential
supplies the -dt/2 Ito drift, as the e^{-t/2} trace decay test confirms.
Unitarity is re-enforced by polar projection every 100 steps.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = [
    "EnsembleConfig",
    "default_threads",
    "haar_unitary",
    "gue_matrix",
    "unitary_bm",
    "unitary_trace_samples",
    "jacobi_matrix_moments",
]


def default_threads() -> int:
    env = os.environ.get("FREEJACOBI_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


@dataclass(frozen=True)
class EnsembleConfig:
    """Parameters of one Monte Carlo ensemble run."""

    n: int
    dt: float
    t_end: float
    replicas: int
    seed: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("matrix size must be >= 2")
        if not 0 < self.dt <= 0.01:
            raise ValueError("dt must lie in (0, 0.01]")
        if self.replicas < 1:
            raise ValueError("need at least one replica")


def _stream(seed: int, replica: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(key=np.array([seed, replica], dtype=np.uint64))
    )


def haar_unitary(n: int, rng: np.random.Generator | int) -> np.ndarray:
    """Haar-distributed unitary via QR with diagonal phase normalization."""
    if isinstance(rng, (int, np.integer)):
        rng = _stream(int(rng), 0)
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def gue_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian matrix with entry variance 1/n (normalized trace of H^2 is 1)."""
    a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    return (a + a.conj().T) / math.sqrt(2 * n)


def _polar_unitary(u: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(u)
    return w @ vh


def unitary_bm(
    n: int,
    t_end: float,
    dt: float,
    rng: np.random.Generator | int,
    snapshots: list[float] | None = None,
    reortho_every: int = 100,
):
    """Left-increment unitary Brownian motion path.

    Returns the endpoint matrix, or the list of matrices at the requested
    snapshot times (each must be a multiple of dt, within rounding).
    """
    if isinstance(rng, (int, np.integer)):
        rng = _stream(int(rng), 0)
    steps = int(round(t_end / dt))
    if abs(steps * dt - t_end) > 1e-9:
        raise ValueError("t_end must be a multiple of dt")
    want = None
    if snapshots is not None:
        want = {}
        for s in snapshots:
            idx = int(round(s / dt))
            if abs(idx * dt - s) > 1e-9:
                raise ValueError(f"snapshot time {s} is not a multiple of dt")
            want[idx] = s
    u = np.eye(n, dtype=complex)
    out = []
    if want is not None and 0 in want:
        out.append(u.copy())
    sq = math.sqrt(dt)
    for step in range(1, steps + 1):
        h = gue_matrix(n, rng)
        lam, v = np.linalg.eigh(h)
        u = (v * np.exp(1j * sq * lam)) @ (v.conj().T @ u)
        if step % reortho_every == 0:
            u = _polar_unitary(u)
        if want is not None and step in want:
            out.append(u.copy())
    if want is None:
        return u
    return out


def _run_replicas(worker, replicas: int, threads: int | None):
    threads = threads or default_threads()
    if threads <= 1:
        return [worker(r) for r in range(replicas)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(replicas)))


def unitary_trace_samples(
    n: int,
    times: list[float],
    dt: float,
    replicas: int,
    seed: int,
    threads: int | None = None,
) -> np.ndarray:
    """Normalized traces tau_N(U_t) per replica at the requested times.

    Returns a (replicas, len(times)) complex array; snapshots are taken
    along a single path per replica.
    """
    times = sorted(times)

    def worker(rep: int) -> np.ndarray:
        rng = _stream(seed, rep)
        mats = unitary_bm(n, times[-1], dt, rng, snapshots=times)
        return np.array([np.trace(m) / n for m in mats])

    return np.array(_run_replicas(worker, replicas, threads))


def jacobi_matrix_moments(
    n: int,
    beta: float,
    alpha: float,
    t: float,
    dt: float,
    replicas: int,
    seed: int,
    j_max: int,
    coupling: str = "corner",
    threads: int | None = None,
) -> dict:
    """Moment estimates of the matrix Jacobi process at time t.

    P is the corner projector of rank floor(beta n).  With
    coupling="corner", Q is the corner projector of rank floor(alpha n)
    (for beta = alpha this is Q = P, realizing the point-mass initial law);
    with coupling="rotated", Q is independently Haar-rotated.  Note the
    rotated coupling is only a proxy for the stationary initial law: at
    finite n the law of the compressed projector carries O(1/n) corrections.

    Returns per-order means and standard errors of
    tau_N[(P U Q U* P)^j] / beta over the replicas.
    """
    rank_p = int(beta * n)
    rank_q = int(alpha * n)
    if rank_p < 1 or rank_q < 1:
        raise ValueError("floor(beta n) and floor(alpha n) must be >= 1")
    if coupling not in ("corner", "rotated"):
        raise ValueError("coupling must be 'corner' or 'rotated'")

    def worker(rep: int) -> np.ndarray:
        rng = _stream(seed, rep)
        u = unitary_bm(n, t, dt, rng)
        if coupling == "rotated":
            v = haar_unitary(n, rng)
            cols = v[:, :rank_q]
            rotated = u @ cols  # U Q U* compressed below
            b = (rotated @ rotated.conj().T)[:rank_p, :rank_p]
        else:
            ucols = u[:, :rank_q]
            b = (ucols @ ucols.conj().T)[:rank_p, :rank_p]
        vals = np.empty(j_max)
        power = np.eye(rank_p, dtype=complex)
        for j in range(1, j_max + 1):
            power = power @ b
            vals[j - 1] = (np.trace(power) / n).real / beta
        return vals

    samples = np.array(_run_replicas(worker, replicas, threads))
    means = samples.mean(axis=0)
    stderr = (
        samples.std(axis=0, ddof=1) / math.sqrt(replicas)
        if replicas > 1
        else np.zeros(j_max)
    )
    return {
        "orders": list(range(1, j_max + 1)),
        "estimates": means,
        "stderr": stderr,
        "samples": samples,
    }
