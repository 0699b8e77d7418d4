"""Stochastic Arnoldi's Method: a trust-region loop over Arnoldi-sampled models."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import trace as tr
from .model import VARIANTS, STEP_AVERAGE, build_directional, build_step_average, solve_trust_region_subproblem
from .sampling import ZeroGradient, arnoldi_sample, truncate_spectrum

log = logging.getLogger(__name__)

SHRINK_BELOW = 0.1
EXPAND_ABOVE = 0.75
ACCEPT_ABOVE = 1e-4
BOUNDARY_FRACTION = 0.99


@dataclass
class SamConfig:
    r: int = 4
    m: int = 16
    alpha: float = 0.5
    delta0: float = 1.0
    delta_max: float | None = None  # defaults to 100 * delta0
    tau: float = 0.1
    max_iter: int = 10
    variant: str = STEP_AVERAGE

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if not 1 <= self.r <= self.m:
            raise ValueError(f"need 1 <= r <= m, got r={self.r}, m={self.m}")
        for name in ("alpha", "delta0", "tau"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.delta_max is None:
            self.delta_max = 100.0 * self.delta0
        if self.delta_max < self.delta0:
            raise ValueError("delta_max must be at least delta0")
        if self.max_iter < 0:
            raise ValueError("max_iter must be non-negative")


def _build_model(samples, spec, cfg):
    r = min(cfg.r, spec.m)
    lam, V, Vt = truncate_spectrum(spec, r)
    if cfg.variant == STEP_AVERAGE:
        return build_step_average(samples, lam, V)
    return build_directional(samples, lam, V, Vt, samples.alpha)


def sam_optimize(oracle, x0, config: SamConfig) -> tr.OptimizationTrace:
    """Minimize a noisy objective with Stochastic Arnoldi's Method.

    Each pass builds a rank-r model from fresh Arnoldi samples about the
    current iterate, takes a trust-region step, and accepts it when
    ``rho = (f_prev - f_new) / predicted_decrease`` exceeds 1e-4. A rejected
    step re-evaluates the objective at the kept iterate so the next comparison
    uses a fresh noise draw.
    """
    cfg = config
    x = np.array(x0, dtype=float)
    f, g = oracle(x)
    out = tr.OptimizationTrace(method=f"sam_{cfg.variant}", x0=x.copy(), f0=f)
    delta = cfg.delta0
    try:
        samples, spec = arnoldi_sample(oracle, x, f, g, cfg.m, cfg.alpha)
    except ZeroGradient:
        out.x_final, out.f_final, out.reason, out.evals = x, f, tr.BREAKDOWN, oracle.evals
        out.initial_evals = oracle.evals
        return out
    out.initial_evals = oracle.evals

    reason = tr.MAX_ITER
    for k in range(cfg.max_iter):
        model = _build_model(samples, spec, cfg)
        gnorm = model.gradient_norm()
        if gnorm <= cfg.tau:
            reason = tr.CONVERGED
            break

        step = solve_trust_region_subproblem(model.g_red, model.lam, delta)
        x_new = model.point(step.y)
        f_new, g_new = oracle(x_new)
        pred = step.predicted_decrease
        rho = (f - f_new) / pred if pred > 0 else -np.inf

        delta_used = delta
        ynorm = float(np.linalg.norm(step.y))
        if rho < SHRINK_BELOW:
            delta = delta / 4.0
        elif rho > EXPAND_ABOVE and ynorm >= BOUNDARY_FRACTION * delta:
            delta = min(2.0 * delta, cfg.delta_max)

        accepted = rho > ACCEPT_ABOVE
        if accepted:
            x, f, g = x_new, f_new, g_new
        else:
            f, g = oracle(x)
        log.debug("iter %d f=%.6e |g|=%.3e delta=%.3e rho=%.3e %s",
                  k, f, gnorm, delta_used, rho, "accept" if accepted else "reject")

        try:
            samples, spec = arnoldi_sample(oracle, x, f, g, cfg.m, cfg.alpha)
        except ZeroGradient:
            out.records.append(tr.IterationRecord(x.copy(), f, gnorm, delta_used, rho, ynorm,
                                                  accepted, oracle.evals, 0))
            reason = tr.BREAKDOWN
            break
        out.records.append(tr.IterationRecord(x.copy(), f, gnorm, delta_used, rho, ynorm,
                                              accepted, oracle.evals, samples.m))

    out.x_final, out.f_final, out.reason, out.evals = x, f, reason, oracle.evals
    return out
