"""Rank-based accuracy metrics comparing approximate and exact contributions."""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .core import HvcEstimate, Method

TIE_TOL = 1e-12


def _values(x) -> np.ndarray:
    return np.asarray(x.values if isinstance(x, HvcEstimate) else x, dtype=float).reshape(-1)


def _pair(truth, approx) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(truth, HvcEstimate) and truth.method is not Method.EXACT:
        raise ValueError("truth must come from the exact method")
    t, a = _values(truth), _values(approx)
    if t.shape != a.shape:
        raise ValueError(f"length mismatch: {t.shape[0]} vs {a.shape[0]}")
    return t, a


def _signs(v: np.ndarray, tol: float) -> np.ndarray:
    d = v[:, None] - v[None, :]
    return np.where(np.abs(d) <= tol, 0, np.sign(d)).astype(np.int8)


def consistency_rate(truth, approx, tol: float = TIE_TOL) -> float:
    """Fraction of solution pairs ordered the same way by both estimates.

    Differences within ``tol`` count as ties, and a tie is consistent only
    with a tie.
    """
    t, a = _pair(truth, approx)
    n = t.shape[0]
    if n < 2:
        raise ValueError("need at least two solutions")
    iu = np.triu_indices(n, k=1)
    agree = _signs(t, tol)[iu] == _signs(a, tol)[iu]
    return float(np.count_nonzero(agree) / agree.shape[0])


def argmin_lowest(v: np.ndarray, tol: float = TIE_TOL) -> int:
    """Lowest index whose value is within ``tol`` of the minimum."""
    v = _values(v)
    return int(np.flatnonzero(v <= v.min() + tol)[0])


def correct_identification(truth, approx, tol: float = TIE_TOL) -> bool:
    t, a = _pair(truth, approx)
    return argmin_lowest(t, tol) == argmin_lowest(a, tol)


def identification_rate(results: Sequence[tuple], tol: float = TIE_TOL) -> float:
    """Share of solution sets whose smallest contributor is identified correctly."""
    if len(results) == 0:
        raise ValueError("no results to score")
    hits = sum(correct_identification(t, a, tol) for t, a in results)
    return hits / len(results)


class RunSummary(NamedTuple):
    mean: float
    stddev: float


def aggregate_runs(per_run_metrics: Sequence[float], n_runs: int) -> RunSummary:
    """Sample mean and (n-1)-denominator deviation; one run gives deviation 0."""
    x = np.asarray(per_run_metrics, dtype=float)
    if n_runs < 1 or x.shape[0] != n_runs:
        raise ValueError(f"expected {n_runs} run metrics, got {x.shape[0]}")
    sd = float(np.std(x, ddof=1)) if n_runs > 1 else 0.0
    return RunSummary(float(x.mean()), sd)
