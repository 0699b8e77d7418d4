"""Median / quantile summaries and bootstrap intervals."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SummaryStatistics:
    median: float
    quantile_025: float
    quantile_975: float
    count: int


def summarize(values) -> SummaryStatistics:
    """Median and 2.5% / 97.5% quantiles (linear interpolation of order statistics)."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("cannot summarize an empty sample")
    if not np.all(np.isfinite(v)):
        raise ValueError("sample contains non-finite values")
    lo, med, hi = np.quantile(v, [0.025, 0.5, 0.975])
    return SummaryStatistics(float(med), float(lo), float(hi), int(v.size))


def bootstrap_median_interval(values, rng, level=0.95, n_boot=2000):
    """Percentile bootstrap interval for the median."""
    v = np.asarray(values, dtype=float).ravel()
    idx = rng.integers(0, v.size, size=(n_boot, v.size))
    meds = np.median(v[idx], axis=1)
    a = (1.0 - level) / 2.0
    lo, hi = np.quantile(meds, [a, 1.0 - a])
    return float(lo), float(hi)
