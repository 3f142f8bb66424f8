"""Dense direct and iterative solvers with conditioning diagnostics.

The systems are small enough (2N <= 4096) for dense LAPACK factorization;
GMRES is full (no restart) so that the iteration count is the Krylov
dimension and directly reflects the spectral clustering the second-kind
formulations are designed to produce.  No preconditioning anywhere.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla


@dataclass
class SolveReport:
    """Outcome of one linear solve."""

    x: np.ndarray
    method: str
    iterations: int
    residuals: list[float]
    wall_time: float
    converged: bool
    diagnostics: dict = field(default_factory=dict)


def lu_solve(a: np.ndarray, b: np.ndarray) -> SolveReport:
    """Direct solve via partial-pivoting LU factorization."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if a.shape[0] > 4096:
        raise ValueError(f"dense direct solve capped at 4096 unknowns, got {a.shape[0]}")
    t0 = time.perf_counter()
    lu, piv = sla.lu_factor(a)
    if np.min(np.abs(np.diag(lu))) < 1e-300:
        raise np.linalg.LinAlgError("matrix numerically singular (vanishing pivot)")
    x = sla.lu_solve((lu, piv), b)
    elapsed = time.perf_counter() - t0
    bnorm = np.linalg.norm(b)
    res = float(np.linalg.norm(a @ x - b) / bnorm) if bnorm > 0 else 0.0
    return SolveReport(
        x=x,
        method="lu",
        iterations=1,
        residuals=[res],
        wall_time=elapsed,
        converged=True,
    )


def gmres(
    a: np.ndarray,
    b: np.ndarray,
    tol: float = 1e-8,
    maxit: int | None = None,
) -> SolveReport:
    """Full GMRES with modified Gram-Schmidt and Givens rotations.

    The residual history starts at 1 (relative to |b|, zero initial
    guess) and is non-increasing; iterations = Krylov dimension at
    convergence.  Non-convergence is reported in the returned record,
    not raised.
    """
    a = np.asarray(a)
    b = np.asarray(b, dtype=complex)
    n = b.size
    if not 0.0 < tol < 1.0:
        raise ValueError(f"tol must lie in (0, 1), got {tol}")
    if maxit is None:
        maxit = n
    if maxit > 2 * n:
        raise ValueError(f"maxit {maxit} exceeds twice the system size {n}")

    t0 = time.perf_counter()
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return SolveReport(
            x=np.zeros_like(b),
            method="gmres",
            iterations=0,
            residuals=[0.0],
            wall_time=time.perf_counter() - t0,
            converged=True,
        )

    v = np.empty((maxit + 1, n), dtype=complex)
    h = np.zeros((maxit + 1, maxit), dtype=complex)
    cs = np.zeros(maxit, dtype=complex)
    sn = np.zeros(maxit, dtype=complex)
    g = np.zeros(maxit + 1, dtype=complex)

    v[0] = b / bnorm
    g[0] = bnorm
    history = [1.0]
    converged = False
    m = 0
    for j in range(maxit):
        w = a @ v[j]
        for i in range(j + 1):  # modified Gram-Schmidt
            h[i, j] = np.vdot(v[i], w)
            w -= h[i, j] * v[i]
        wnorm = np.linalg.norm(w)
        h[j + 1, j] = wnorm

        for i in range(j):  # previously accumulated rotations
            hi = np.conj(cs[i]) * h[i, j] + np.conj(sn[i]) * h[i + 1, j]
            h[i + 1, j] = -sn[i] * h[i, j] + cs[i] * h[i + 1, j]
            h[i, j] = hi
        rho = np.hypot(abs(h[j, j]), abs(h[j + 1, j]))
        cs[j] = h[j, j] / rho if rho > 0 else 1.0
        sn[j] = h[j + 1, j] / rho if rho > 0 else 0.0
        h[j, j] = rho
        h[j + 1, j] = 0.0
        g[j + 1] = -sn[j] * g[j]
        g[j] = np.conj(cs[j]) * g[j]

        m = j + 1
        history.append(abs(g[m]) / bnorm)  # non-increasing: |sn| <= 1
        if history[-1] <= tol:
            converged = True
            break
        if wnorm == 0.0:  # Krylov space invariant; no further progress possible
            break
        v[m] = w / wnorm

    y = sla.solve_triangular(h[:m, :m], g[:m]) if m > 0 else np.zeros(0, dtype=complex)
    x = v[:m].T @ y
    return SolveReport(
        x=x,
        method="gmres",
        iterations=m,
        residuals=history,
        wall_time=time.perf_counter() - t0,
        converged=converged,
    )


def norm2_estimate(a: np.ndarray, shift: float = 0.0, seed: int = 0) -> float:
    """Largest singular value of (A - shift*I) by power iteration.

    200 iterations or 1e-6 relative stagnation, whichever comes first.
    """
    a = np.asarray(a)
    n = a.shape[0]
    b = a - shift * np.eye(n)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(200):
        w = b.conj().T @ (b @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        new_sigma = np.sqrt(norm)
        v = w / norm
        if sigma > 0 and abs(new_sigma - sigma) <= 1e-6 * sigma:
            return float(new_sigma)
        sigma = new_sigma
    return float(sigma)


def sigma_min_estimate(a: np.ndarray, seed: int = 0) -> float:
    """Smallest singular value by inverse power iteration on A^H A.

    Each step solves with A and A^H from one LU factorization.
    """
    a = np.asarray(a)
    n = a.shape[0]
    lu, piv = sla.lu_factor(a)
    if np.min(np.abs(np.diag(lu))) < 1e-300:
        raise np.linalg.LinAlgError("matrix numerically singular (vanishing pivot)")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(200):
        w = sla.lu_solve((lu, piv), sla.lu_solve((lu, piv), v, trans=2))
        norm = np.linalg.norm(w)
        new_lam = norm
        v = w / norm
        if lam > 0 and abs(new_lam - lam) <= 1e-9 * lam:
            lam = new_lam
            break
        lam = new_lam
    return float(1.0 / np.sqrt(lam))
