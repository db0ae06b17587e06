from __future__ import annotations

import numpy as np
from scipy import stats


def wilson(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        return (0.0, 1.0)
    ci = stats.binomtest(k, n).proportion_ci(confidence, method="wilson")
    return (float(ci.low), float(ci.high))


def success_at_least(k: int, n: int, p0: float, alpha: float = 0.01) -> tuple[bool, float]:
    """One-sided binomial test of H0: rate >= p0. Returns (not rejected, p-value)."""
    pv = stats.binomtest(k, n, p0, alternative="less").pvalue
    return pv >= alpha, pv


def independence_pvalue(table) -> float:
    """Chi-square test of independence on a 2-D contingency table.

    Rows or columns that are identically zero carry no information and are
    dropped; a table that collapses to one row or column is trivially
    independent.
    """
    t = np.asarray(table, dtype=float)
    t = t[t.sum(axis=1) > 0][:, t.sum(axis=0) > 0]
    if t.shape[0] < 2 or t.shape[1] < 2:
        return 1.0
    return float(stats.chi2_contingency(t, correction=False)[1])
