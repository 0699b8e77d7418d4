"""Reduced quadratic models and the diagonal trust-region subproblem."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

STEP_AVERAGE = "step_average"
DIRECTIONAL = "directional"
VARIANTS = (STEP_AVERAGE, DIRECTIONAL)

SECULAR_RTOL = 1e-10
SECULAR_MAX_ITER = 100


@dataclass
class ReducedQuadraticModel:
    """``q(y) = f_bar + g_red^T y + 0.5 * sum(lam * y**2)``, step ``p = V y``."""

    center: np.ndarray
    f_bar: float
    g_red: np.ndarray
    lam: np.ndarray
    V: np.ndarray
    variant: str
    g_full: np.ndarray | None = None  # mean sampled gradient (step-average only)

    @property
    def r(self) -> int:
        return self.lam.shape[0]

    def value(self, y) -> float:
        return model_value(self, y)

    def point(self, y) -> np.ndarray:
        return self.center + self.V @ y

    def gradient_norm(self) -> float:
        """Norm used by the outer loop's convergence test."""
        g = self.g_full if self.variant == STEP_AVERAGE else self.g_red
        return float(np.linalg.norm(g))


def build_step_average(samples, lam, V) -> ReducedQuadraticModel:
    """Center the model at the mean sample point with the mean sampled gradient."""
    x_bar = samples.X.mean(axis=1)
    g_bar = samples.G.mean(axis=1)
    return ReducedQuadraticModel(
        center=x_bar,
        f_bar=float(samples.F.mean()),
        g_red=V.T @ g_bar,
        lam=np.asarray(lam, dtype=float),
        V=V,
        variant=STEP_AVERAGE,
        g_full=g_bar,
    )


def build_directional(samples, lam, V, reduced_eigvecs, alpha) -> ReducedQuadraticModel:
    """Reduced gradient from function-value differences along the Krylov basis.

    ``g_red = reduced_eigvecs^T [f_1 - f_0, ..., f_m - f_0] / alpha``. No
    gradient sample enters, so a constant gradient bias has no effect here.
    `reduced_eigvecs` is the ``(m, r)`` block matching the columns of `V`.
    """
    reduced_eigvecs = np.asarray(reduced_eigvecs, dtype=float)
    m = samples.m
    r = np.asarray(lam).shape[0]
    if m < r or reduced_eigvecs.shape[0] != m:
        raise ValueError(f"need at least r+1={r + 1} samples with an ({m}, r) eigvec block")
    df = samples.F[1:] - samples.F[0]
    return ReducedQuadraticModel(
        center=samples.x0.copy(),
        f_bar=float(samples.F[0]),
        g_red=reduced_eigvecs[:, :r].T @ df / alpha,
        lam=np.asarray(lam, dtype=float),
        V=V,
        variant=DIRECTIONAL,
    )


def model_value(model: ReducedQuadraticModel, y) -> float:
    y = np.asarray(y, dtype=float)
    if y.shape != model.g_red.shape:
        raise ValueError(f"expected y of length {model.r}")
    return float(model.f_bar + model.g_red @ y + 0.5 * np.sum(model.lam * y * y))


class TrustRegionStep(NamedTuple):
    y: np.ndarray
    predicted_decrease: float
    on_boundary: bool
    sigma: float


def _reduction(g, lam, y):
    return -float(g @ y + 0.5 * np.sum(lam * y * y))


def _y_of(g, lam, sigma):
    d = lam + sigma
    y = np.zeros_like(g)
    nz = g != 0
    y[nz] = -g[nz] / d[nz]
    return y


def solve_trust_region_subproblem(g_red, lam, delta) -> TrustRegionStep:
    """Minimize ``g^T y + 0.5 y^T diag(lam) y`` subject to ``||y|| <= delta``.

    Because the Hessian is diagonal, ``y(sigma) = -g / (lam + sigma)``
    in closed form and the More-Sorensen iteration reduces to a scalar root
    find on ``1/||y(sigma)|| - 1/delta`` (Newton, safeguarded by bisection).
    In the hard case the step is completed along the most negative curvature
    axis until it reaches the boundary.
    """
    g = np.array(g_red, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if g.shape != lam.shape or g.ndim != 1:
        raise ValueError("g_red and lam must be 1-D arrays of equal length")
    if not delta > 0:
        raise ValueError("trust radius must be positive")
    if g.size == 0:
        return TrustRegionStep(g, 0.0, False, 0.0)

    gnorm = float(np.linalg.norm(g))
    # components this small are indistinguishable from an exact zero
    g[np.abs(g) <= 1e-15 * max(1.0, gnorm)] = 0.0

    lam_min = float(lam.min())
    sigma_lo = max(0.0, -lam_min)
    singular = (lam + sigma_lo) == 0
    if not np.any(g[singular] != 0):
        y = _y_of(g, lam, sigma_lo)
        ynorm = float(np.linalg.norm(y))
        if ynorm <= delta:
            if sigma_lo == 0.0:
                return TrustRegionStep(y, _reduction(g, lam, y), False, 0.0)
            # hard case: move along the negative-curvature axis to the boundary
            i = int(np.flatnonzero(singular)[0])
            y[i] = np.sqrt(max(delta * delta - ynorm * ynorm, 0.0))
            return TrustRegionStep(y, _reduction(g, lam, y), True, sigma_lo)

    sigma = _secular_root(g, lam, delta, sigma_lo, gnorm)
    y = _y_of(g, lam, sigma)
    return TrustRegionStep(y, _reduction(g, lam, y), True, sigma)


def _secular_root(g, lam, delta, lo, gnorm):
    # ||y(sigma)|| <= ||g|| / (lam_min + sigma) <= delta beyond this point
    hi = max(lo, gnorm / delta - float(lam.min())) * (1.0 + 1e-12) + 1e-300
    g2 = g * g

    def phi(s):
        d = lam + s
        with np.errstate(divide="ignore"):
            yn2 = np.sum(np.where(g2 > 0, g2 / (d * d), 0.0))
        if not np.isfinite(yn2) or yn2 == 0.0:
            return -1.0 / delta, np.inf, 0.0
        yn = np.sqrt(yn2)
        dyn = -np.sum(np.where(g2 > 0, g2 / d**3, 0.0)) / yn
        return 1.0 / yn - 1.0 / delta, -dyn / yn2, yn

    # phi is increasing and concave, so Newton from the left end is monotone
    pole = np.any(((lam + lo) == 0) & (g != 0))
    s = 0.5 * (lo + hi) if pole else lo
    for _ in range(SECULAR_MAX_ITER):
        val, dval, yn = phi(s)
        if yn > 0 and abs(yn - delta) <= SECULAR_RTOL * delta:
            return s
        if val < 0:
            lo = s
        else:
            hi = s
        step = s - val / dval if np.isfinite(dval) and dval > 0 else np.nan
        s = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 1e-16 * max(1.0, abs(hi)):
            break
    return s
