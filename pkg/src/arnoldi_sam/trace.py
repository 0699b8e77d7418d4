"""Per-iteration records shared by all optimizers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CONVERGED = "converged"
MAX_ITER = "max_iter"
BREAKDOWN = "breakdown"
MAX_EVALS = "max_evals"
LINE_SEARCH_FAILED = "line_search_failed"
SIMPLEX_TOL = "simplex_tol"


@dataclass
class IterationRecord:
    iterate: np.ndarray
    f: float  # objective value as seen by the optimizer (noisy)
    model_grad_norm: float
    delta: float
    rho: float
    step_norm: float
    accepted: bool
    evals: int  # cumulative oracle evaluations after this iteration
    samples: int = 0  # realized Arnoldi samples taken this iteration (SAM)


@dataclass
class OptimizationTrace:
    method: str
    x0: np.ndarray
    f0: float
    records: list[IterationRecord] = field(default_factory=list)
    x_final: np.ndarray | None = None
    f_final: float = float("nan")
    reason: str = ""
    evals: int = 0
    initial_evals: int = 0  # spent before the first iteration

    @property
    def iterations(self) -> int:
        return len(self.records)

    def eval_history(self):
        """``(cumulative evals, f)`` pairs, starting with the initial point."""
        return [(self.initial_evals, self.f0)] + [(r.evals, r.f) for r in self.records]
