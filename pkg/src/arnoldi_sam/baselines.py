"""Reference optimizers: dense BFGS with a weak-Wolfe line search, and Nelder-Mead."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import trace as tr


class _BudgetExhausted(Exception):
    pass


@dataclass
class BfgsConfig:
    max_evals: int = 10_000
    grad_tol: float = 1e-8
    c1: float = 1e-4  # Armijo (sufficient decrease)
    c2: float = 0.9  # curvature
    max_line_search: int = 30
    max_iter: int = 10_000


def _wolfe_line_search(phi, f0, d0, t0, cfg):
    """Bracketing search for a step satisfying the weak Wolfe conditions.

    `phi(t)` returns ``(f, g_dot_d, x, g)``. Returns that tuple and the step
    length, or None when no acceptable step is found.
    """
    lo, hi = 0.0, np.inf
    t = t0
    for _ in range(cfg.max_line_search):
        ft, dt, xt, gt = phi(t)
        if not np.isfinite(ft) or ft > f0 + cfg.c1 * t * d0:
            hi = t
        elif dt < cfg.c2 * d0:
            lo = t
        else:
            return (ft, dt, xt, gt), t
        t = 2.0 * lo if hi == np.inf else 0.5 * (lo + hi)
    return None


def bfgs_optimize(oracle, x0, config: BfgsConfig | None = None) -> tr.OptimizationTrace:
    """Quasi-Newton minimization with a dense inverse-Hessian BFGS update.

    Terminates on the gradient tolerance, the evaluation budget, or a failed
    line search; the reason is recorded in the returned trace.
    """
    cfg = config or BfgsConfig()
    start = oracle.evals

    def evaluate(x):
        if oracle.evals - start >= cfg.max_evals:
            raise _BudgetExhausted
        return oracle(x)

    x = np.array(x0, dtype=float)
    f, g = evaluate(x)
    out = tr.OptimizationTrace(method="bfgs", x0=x.copy(), f0=f, initial_evals=oracle.evals - start)
    n = x.shape[0]
    Hinv = np.eye(n)
    first = True
    reason = tr.MAX_ITER
    try:
        for _ in range(cfg.max_iter):
            gnorm = float(np.linalg.norm(g))
            if gnorm <= cfg.grad_tol:
                reason = tr.CONVERGED
                break
            d = -Hinv @ g
            d0 = float(g @ d)
            if d0 >= 0:  # lost descent; restart from steepest descent
                Hinv = np.eye(n)
                d = -g
                d0 = -gnorm * gnorm
            t0 = min(1.0, 1.0 / gnorm) if first else 1.0

            def phi(t, x=x, d=d):
                xt = x + t * d
                ft, gt = evaluate(xt)
                return ft, float(gt @ d), xt, gt

            found = _wolfe_line_search(phi, f, d0, t0, cfg)
            if found is None:
                reason = tr.LINE_SEARCH_FAILED
                break
            (f_new, _, x_new, g_new), t = found
            s = x_new - x
            yv = g_new - g
            sy = float(s @ yv)
            if sy > 0:
                if first:
                    Hinv = np.eye(n) * (sy / float(yv @ yv))
                rho = 1.0 / sy
                Hy = Hinv @ yv
                Hinv = (Hinv - rho * (np.outer(s, Hy) + np.outer(Hy, s))
                        + (rho * rho * float(yv @ Hy) + rho) * np.outer(s, s))
            first = False
            out.records.append(tr.IterationRecord(x_new.copy(), f_new, float(np.linalg.norm(g_new)), np.nan,
                                                  t, float(np.linalg.norm(s)), True, oracle.evals - start))
            x, f, g = x_new, f_new, g_new
    except _BudgetExhausted:
        reason = tr.MAX_EVALS

    out.x_final, out.f_final, out.reason, out.evals = x, f, reason, oracle.evals - start
    return out


@dataclass
class NelderMeadConfig:
    max_evals: int = 10_000
    init_scale: float = 0.05
    zero_step: float = 0.05
    xtol: float = 1e-8
    ftol: float = 1e-10
    reflect: float = 1.0
    expand: float = 2.0
    contract: float = 0.5
    shrink: float = 0.5


def initial_simplex(x0, scale=0.05, zero_step=0.05):
    """`x0` plus one vertex per axis, perturbed by `scale` relative (or `zero_step` at 0)."""
    x0 = np.asarray(x0, dtype=float)
    n = x0.shape[0]
    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        simplex[i + 1, i] = x0[i] * (1.0 + scale) if x0[i] != 0 else zero_step
    return simplex


def shrink_simplex(simplex, best: int, factor=0.5):
    """Move every vertex toward `simplex[best]`, scaling edges by `factor`."""
    return simplex[best] + factor * (simplex - simplex[best])


def nelder_mead_optimize(f, x0, config: NelderMeadConfig | None = None) -> tr.OptimizationTrace:
    """Derivative-free simplex minimization.

    `f` returns a scalar (pass ``oracle.value`` to use a noisy oracle). The
    initial simplex has `x0` as a vertex. Stops on the evaluation budget or
    when both the simplex diameter and the spread of values fall below
    tolerance. The returned ``evals`` counts calls to `f`.
    """
    cfg = config or NelderMeadConfig()
    calls = 0

    def fe(x):
        nonlocal calls
        if calls >= cfg.max_evals:
            raise _BudgetExhausted
        calls += 1
        return float(f(x))

    x0 = np.array(x0, dtype=float)
    n = x0.shape[0]
    simplex = initial_simplex(x0, cfg.init_scale, cfg.zero_step)
    fvals = np.full(n + 1, np.inf)
    out = tr.OptimizationTrace(method="nelder_mead", x0=x0.copy(), f0=np.nan)
    reason = tr.MAX_ITER
    try:
        for i in range(n + 1):
            fvals[i] = fe(simplex[i])
            if i == 0:
                out.f0 = fvals[0]
        out.initial_evals = calls
        while True:
            order = np.argsort(fvals, kind="stable")
            simplex, fvals = simplex[order], fvals[order]
            diam = np.max(np.abs(simplex[1:] - simplex[0]))
            if diam <= cfg.xtol and fvals[-1] - fvals[0] <= cfg.ftol:
                reason = tr.SIMPLEX_TOL
                break
            centroid = simplex[:-1].mean(axis=0)
            worst = simplex[-1]
            xr = centroid + cfg.reflect * (centroid - worst)
            fr = fe(xr)
            if fr < fvals[0]:
                xe = centroid + cfg.expand * (xr - centroid)
                fe_ = fe(xe)
                if fe_ < fr:
                    simplex[-1], fvals[-1] = xe, fe_
                else:
                    simplex[-1], fvals[-1] = xr, fr
            elif fr < fvals[-2]:
                simplex[-1], fvals[-1] = xr, fr
            else:
                if fr < fvals[-1]:
                    xc = centroid + cfg.contract * (xr - centroid)
                else:
                    xc = centroid + cfg.contract * (worst - centroid)
                fc = fe(xc)
                if fc < min(fr, fvals[-1]):
                    simplex[-1], fvals[-1] = xc, fc
                else:
                    shrunk = shrink_simplex(simplex, 0, cfg.shrink)
                    for i in range(1, n + 1):
                        fvals[i] = fe(shrunk[i])
                        simplex[i] = shrunk[i]
            b = int(np.argmin(fvals))
            out.records.append(tr.IterationRecord(simplex[b].copy(), fvals[b], np.nan, float(diam),
                                                  np.nan, np.nan, True, calls))
    except _BudgetExhausted:
        reason = tr.MAX_EVALS

    b = int(np.argmin(fvals))
    out.x_final = simplex[b].copy() if np.isfinite(fvals[b]) else x0
    out.f_final = fvals[b] if np.isfinite(fvals[b]) else out.f0
    out.reason, out.evals = reason, calls
    return out
