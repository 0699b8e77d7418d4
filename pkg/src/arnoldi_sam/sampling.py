"""Arnoldi sampling: Krylov-directed samples and Hessian eigen-estimates.

Each Hessian-vector product of Arnoldi's method is replaced by a finite
gradient difference over a sample radius ``alpha``; the resulting Hessenberg
record is symmetrized and diagonalized to give approximate eigenpairs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import _sort_order, mgs_orthogonalize, symmetric_eigendecomposition


class ZeroGradient(ValueError):
    """The seed gradient vanishes, so no first sampling direction exists."""


@dataclass
class SampleSet:
    """Sample locations, values and gradients; column 0 is the center."""

    X: np.ndarray  # (n, m+1)
    F: np.ndarray  # (m+1,)
    G: np.ndarray  # (n, m+1)
    alpha: float

    @property
    def m(self) -> int:
        return self.F.shape[0] - 1

    @property
    def x0(self) -> np.ndarray:
        return self.X[:, 0]


@dataclass
class SpectralEstimate:
    H: np.ndarray  # (m+1, m) Hessenberg record
    Z: np.ndarray  # (n, m) orthonormal Krylov basis
    eigenvalues: np.ndarray  # (m,), sorted by |lambda| descending
    reduced_eigvecs: np.ndarray  # (m, m)
    eigvecs: np.ndarray  # (n, m) = Z @ reduced_eigvecs

    @property
    def m(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def H_square(self) -> np.ndarray:
        return self.H[: self.m, : self.m]


def arnoldi_sample(oracle, x0, f0, g0, m: int, alpha: float):
    """Run Arnoldi sampling about `x0`.

    `f0` and `g0` are the (possibly noisy) values already known at `x0`; the
    call spends one oracle evaluation per realized iteration. Sampling stops
    early when the orthogonalized difference vanishes, in which case the
    returned sets have fewer than `m` samples.

    Returns
    -------
    SampleSet, SpectralEstimate
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    x0 = np.asarray(x0, dtype=float)
    g0 = np.asarray(g0, dtype=float)
    n = x0.shape[0]
    gnorm = float(np.linalg.norm(g0))
    if gnorm == 0.0:
        raise ZeroGradient("cannot seed Arnoldi sampling with a zero gradient")

    Z = np.zeros((n, m + 1))
    H = np.zeros((m + 1, m))
    X = np.zeros((n, m + 1))
    G = np.zeros((n, m + 1))
    F = np.zeros(m + 1)
    X[:, 0], F[0], G[:, 0] = x0, f0, g0
    Z[:, 0] = -g0 / gnorm

    realized = m
    for j in range(m):
        xj = x0 + alpha * Z[:, j]
        fj, gj = oracle(xj)
        X[:, j + 1], F[j + 1], G[:, j + 1] = xj, fj, gj
        w = (gj - g0) / alpha
        res = mgs_orthogonalize(w, Z[:, : j + 1], passes=2)
        H[: j + 1, j] = res.coeffs
        H[j + 1, j] = res.residual_norm
        if res.breakdown:
            realized = j + 1
            break
        Z[:, j + 1] = res.unit_residual

    k = realized
    samples = SampleSet(X[:, : k + 1].copy(), F[: k + 1].copy(), G[:, : k + 1].copy(), alpha)
    Hk = H[: k + 1, :k].copy()
    Zk = Z[:, :k].copy()
    lam, Vt = symmetric_eigendecomposition(Hk[:k, :k])
    return samples, SpectralEstimate(Hk, Zk, lam, Vt, Zk @ Vt)


def eigenvalue_error(estimate, exact):
    """Relative error of the inverse eigenvalue, ``|exact / estimate - 1|``."""
    estimate = np.asarray(estimate, dtype=float)
    if np.any(estimate == 0):
        raise ZeroDivisionError("estimated eigenvalue is zero")
    out = np.abs(np.asarray(exact, dtype=float) / estimate - 1.0)
    return float(out) if out.ndim == 0 else out


def truncate_spectrum(spec: SpectralEstimate, r: int):
    """Keep the `r` largest-magnitude eigenpairs.

    Returns ``(eigenvalues, eigvecs, reduced_eigvecs)`` restricted to the
    selected modes, with ``reduced_eigvecs`` of shape ``(m, r)``.
    """
    if not 1 <= r <= spec.m:
        raise ValueError(f"rank {r} outside [1, {spec.m}]")
    idx = _sort_order(spec.eigenvalues)[:r]
    return spec.eigenvalues[idx], spec.eigvecs[:, idx], spec.reduced_eigvecs[:, idx]
