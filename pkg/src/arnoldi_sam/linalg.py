"""Small dense linear-algebra kernels.

Modified Gram-Schmidt against a column basis, a cyclic Jacobi eigensolver for
small symmetric matrices, and the orthonormalized Sylvester-Hadamard transform.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

BREAKDOWN_RTOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


class OrthoResult(NamedTuple):
    coeffs: np.ndarray
    residual_norm: float
    unit_residual: np.ndarray | None

    @property
    def breakdown(self) -> bool:
        return self.unit_residual is None


def mgs_orthogonalize(v, basis, tol=None, passes=1):
    """Orthogonalize `v` against the columns of `basis` by modified Gram-Schmidt.

    Projections are removed one column at a time, each computed from the
    partially reduced vector.

    Parameters
    ----------
    v : (n,) array
    basis : (n, k) array with orthonormal columns, k >= 1
    tol : float, optional
        Breakdown threshold on the residual norm. Defaults to
        ``1e-12 * max(1, ||v||)``.
    passes : int
        Number of full sweeps over the basis. A second sweep restores
        orthogonality lost to cancellation; ``coeffs`` accumulates both.

    Returns
    -------
    OrthoResult
        ``unit_residual`` is None when the residual norm is at or below `tol`.
    """
    w = np.array(v, dtype=float, copy=True)
    basis = np.asarray(basis, dtype=float)
    if basis.ndim == 1:
        basis = basis[:, None]
    if basis.shape[1] == 0:
        raise ValueError("basis must have at least one column")
    if basis.shape[0] != w.shape[0]:
        raise ValueError(f"dimension mismatch: v has {w.shape[0]}, basis has {basis.shape[0]}")
    if tol is None:
        tol = BREAKDOWN_RTOL * max(1.0, float(np.linalg.norm(w)))

    k = basis.shape[1]
    coeffs = np.zeros(k)
    for _ in range(passes):
        for i in range(k):
            zi = basis[:, i]
            c = zi @ w
            w -= c * zi
            coeffs[i] += c
    nrm = float(np.linalg.norm(w))
    if nrm <= tol:
        return OrthoResult(coeffs, nrm, None)
    return OrthoResult(coeffs, nrm, w / nrm)


def _sort_order(values):
    # |lambda| descending, ties broken by signed value descending
    return np.lexsort((-values, -np.abs(values)))


def _fix_signs(vecs):
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def _round_robin(m):
    """Rounds of disjoint index pairs covering every pair once (m even)."""
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        half = m // 2
        rounds.append((np.array(players[:half]), np.array(players[half:][::-1])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def symmetric_eigendecomposition(S, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Sweeps use the round-robin ordering: each round applies m/2 disjoint
    rotations at once. The input is symmetrized as ``(S + S.T) / 2``.
    Eigenvalues are returned sorted by magnitude (descending, ties by signed
    value); each eigenvector's largest-magnitude entry is made positive.

    Returns
    -------
    eigenvalues : (m,) array
    eigenvectors : (m, m) array, columns orthonormal
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {S.shape}")
    if not np.all(np.isfinite(S)):
        raise ValueError("matrix has non-finite entries")
    m = S.shape[0]
    if m == 0:
        return np.empty(0), np.eye(0)
    # pad odd sizes with a decoupled zero row/column
    mp = m + (m % 2)
    A = np.zeros((mp, mp))
    A[:m, :m] = 0.5 * (S + S.T)
    V = np.eye(mp)

    threshold = tol * np.linalg.norm(A)
    upper = np.triu_indices(mp, 1)
    rounds = _round_robin(mp)
    for _ in range(max_sweeps):
        if np.sqrt(2.0 * np.sum(A[upper] ** 2)) <= threshold:
            break
        for P, Q in rounds:
            apq = A[P, Q]
            active = apq != 0.0
            if not np.any(active):
                continue
            # rotation angles that annihilate each A[p, q]
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                theta = np.where(active, (A[Q, Q] - A[P, P]) / (2.0 * apq), 0.0)
                big = np.abs(theta) > 1e150
                t = np.where(theta == 0.0, 1.0,
                             np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)))
                t = np.where(big, 0.5 / theta, t)
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            J = np.eye(mp)
            J[P, P] = c
            J[Q, Q] = c
            J[P, Q] = s
            J[Q, P] = -s
            A = J.T @ A @ J
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            V = V @ J

    lam = np.diag(A)[:m].copy()
    V = V[:m, :m]
    order = _sort_order(lam)
    return lam[order], _fix_signs(V[:, order])


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def hadamard_apply(x):
    """Apply the orthonormalized Sylvester-Hadamard matrix ``H_n / sqrt(n)``.

    Works along axis 0, so a 2-D input is transformed column by column. The
    map is symmetric and orthogonal, hence its own inverse.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if not is_power_of_two(n):
        raise ValueError(f"length must be a power of two, got {n}")
    tail = x.shape[1:]
    y = x.reshape(n, -1).copy()
    h = 1
    while h < n:
        y = y.reshape(n // (2 * h), 2, h, -1)
        a = y[:, 0].copy()
        b = y[:, 1]
        y[:, 0] = a + b
        y[:, 1] = a - b
        y = y.reshape(n, -1)
        h *= 2
    return (y / np.sqrt(n)).reshape((n,) + tail)


def hadamard_matrix(n: int) -> np.ndarray:
    """Dense orthonormalized Sylvester-Hadamard matrix, for small n."""
    return hadamard_apply(np.eye(n))
