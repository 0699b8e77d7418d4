"""Test objectives and the Gaussian noise layered on top of them."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import hadamard_apply, hadamard_matrix


@dataclass(frozen=True)
class SyntheticQuadratic:
    """``F(x) = x^T E Sigma E^T x`` with E the orthonormal Hadamard matrix.

    ``Sigma_ii = 1 / i**q`` for ``i = 1..2**p``. The Hessian is
    ``2 E Sigma E^T``, so its eigenvalues are ``2 / i**q``.
    """

    p: int
    q: float

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("p must be non-negative")

    @property
    def n(self) -> int:
        return 2**self.p

    @property
    def sigma(self) -> np.ndarray:
        return 1.0 / np.arange(1, self.n + 1, dtype=float) ** self.q

    @property
    def exact_eigenvalues(self) -> np.ndarray:
        """Hessian eigenvalues, descending."""
        return 2.0 * self.sigma

    def eigenvector(self, i: int) -> np.ndarray:
        """Column ``i`` (0-based) of E."""
        e = np.zeros(self.n)
        e[i] = 1.0
        return hadamard_apply(e)

    def hessian(self) -> np.ndarray:
        E = hadamard_matrix(self.n)
        return 2.0 * (E * self.sigma) @ E.T

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected a point of dimension {self.n}, got shape {x.shape}")
        # E is symmetric, so E^T x = hadamard_apply(x)
        y = hadamard_apply(x)
        sy = self.sigma * y
        return float(y @ sy), 2.0 * hadamard_apply(sy)


def quad_eval(problem: SyntheticQuadratic, x):
    return problem.evaluate(x)


@dataclass(frozen=True)
class ModifiedRosenbrock:
    """Chained Rosenbrock with the i-th pair weighted by ``1/i``.

    ``F(x) = sum_i (1/i) [100 (x_{2i} - x_{2i-1}^2)^2 + (1 - x_{2i-1})^2]``
    """

    n: int

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ValueError(f"dimension must be even and positive, got {self.n}")

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected a point of dimension {self.n}, got shape {x.shape}")
        a = x[0::2]
        b = x[1::2]
        w = 1.0 / np.arange(1, self.n // 2 + 1, dtype=float)
        r = b - a * a
        f = float(np.sum(w * (100.0 * r * r + (1.0 - a) ** 2)))
        g = np.empty(self.n)
        g[0::2] = w * (-400.0 * a * r - 2.0 * (1.0 - a))
        g[1::2] = w * (200.0 * r)
        return f, g

    @property
    def minimizer(self) -> np.ndarray:
        return np.ones(self.n)


def rosenbrock_eval(problem: ModifiedRosenbrock, x):
    return problem.evaluate(x)


def alternating_start(n: int) -> np.ndarray:
    """-1 on odd (1-based) indices, 0 on even ones."""
    x = np.zeros(n)
    x[0::2] = -1.0
    return x


def sine_start(n: int) -> np.ndarray:
    """``x_i = sin(i)`` for ``i = 1..n``."""
    return np.sin(np.arange(1, n + 1, dtype=float))


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian noise sized relative to the clean objective at the initial point.

    ``rel_sigma_f`` scales ``|F(x0)|``; ``rel_sigma_g`` and ``rel_bias_g``
    scale ``||grad F(x0)||`` and apply per gradient component.
    """

    rel_sigma_f: float = 0.0
    rel_sigma_g: float = 0.0
    rel_bias_g: float = 0.0

    def __post_init__(self):
        if self.rel_sigma_f < 0 or self.rel_sigma_g < 0:
            raise ValueError("noise standard deviations must be non-negative")

    @property
    def kind(self) -> str:
        if self.rel_sigma_f == 0 and self.rel_sigma_g == 0 and self.rel_bias_g == 0:
            return "none"
        return "gaussian"


@dataclass(frozen=True)
class CalibratedNoise:
    sigma_f: float
    sigma_g: float
    mu_g: float

    @property
    def is_zero(self) -> bool:
        return self.sigma_f == 0 and self.sigma_g == 0 and self.mu_g == 0


def calibrate_noise(model: NoiseModel, clean_oracle, x0) -> CalibratedNoise:
    """Freeze absolute noise levels from one clean evaluation at `x0`.

    `clean_oracle` is any callable returning ``(f, g)``.
    """
    f0, g0 = clean_oracle(np.asarray(x0, dtype=float))
    gnorm = float(np.linalg.norm(g0))
    return CalibratedNoise(
        sigma_f=model.rel_sigma_f * abs(f0),
        sigma_g=model.rel_sigma_g * gnorm,
        mu_g=model.rel_bias_g * gnorm,
    )


def noisy_eval(calibrated: CalibratedNoise, clean, rng: np.random.Generator):
    """Perturb a clean ``(f, g)`` pair with fresh Gaussian draws."""
    f, g = clean
    g = np.asarray(g, dtype=float)
    if calibrated.is_zero:
        return float(f), g.copy()
    # always draw both so the stream layout does not depend on the levels
    ef = rng.standard_normal()
    eg = rng.standard_normal(g.shape)
    return float(f + calibrated.sigma_f * ef), g + calibrated.mu_g + calibrated.sigma_g * eg


class ObjectiveOracle:
    """Counting, optionally noisy, wrapper around ``problem.evaluate``.

    One instance per run: it owns an evaluation counter and an RNG stream.
    """

    def __init__(self, problem, noise: CalibratedNoise | None = None, rng=None):
        self.problem = problem
        self.noise = noise if noise is not None else CalibratedNoise(0.0, 0.0, 0.0)
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.evals = 0

    @property
    def n(self) -> int:
        return self.problem.n

    def __call__(self, x):
        self.evals += 1
        return noisy_eval(self.noise, self.problem.evaluate(x), self.rng)

    def value(self, x) -> float:
        """Noisy function value only (one counted evaluation)."""
        return self(x)[0]

    def clean(self, x):
        """Noise-free evaluation; not counted."""
        return self.problem.evaluate(x)


def make_oracle(problem, noise: NoiseModel, x0, rng) -> ObjectiveOracle:
    return ObjectiveOracle(problem, calibrate_noise(noise, problem.evaluate, x0), rng)
