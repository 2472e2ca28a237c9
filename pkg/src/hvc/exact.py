"""Exact hypervolume and hypervolume contributions for low dimensions.

The engine slices along the last objective: points are sorted by it in
ascending order, and each point's exclusive volume with respect to the
points after it factorizes into its depth along that objective times an
``(m-1)``-dimensional exclusive volume. Limited sets are dominance-filtered
before recursing. Worst-case cost is exponential in ``m``; the guard keeps
the engine in the regime where it serves as a test oracle.
"""

from __future__ import annotations

import time

import numpy as np
from numpy.typing import ArrayLike

from .core import HvcEstimate, Method, SetLike, to_maximize, weakly_dominated_mask

MAX_EXACT_DIM = 8
MAX_INCLUSION_EXCLUSION = 20


class DimensionGuardError(ValueError):
    """Raised when exact computation is requested above the dimension guard."""


def _guard(m: int) -> None:
    if m > MAX_EXACT_DIM:
        raise DimensionGuardError(
            f"exact hypervolume is limited to m <= {MAX_EXACT_DIM} (got m={m}); "
            "use r2_hvc, r2_contribution or monte_carlo_hvc instead"
        )


def _nondominated(points: np.ndarray) -> np.ndarray:
    return points[~weakly_dominated_mask(points)]


def _hv2d(points: np.ndarray, ref: np.ndarray) -> float:
    order = np.lexsort((-points[:, 1], -points[:, 0]))
    x = points[order, 0] - ref[0]
    y = points[order, 1] - ref[1]
    ceiling = np.maximum.accumulate(np.concatenate(([0.0], y[:-1])))
    return float(np.sum(x * np.clip(y - ceiling, 0.0, None)))


def _hv(points: np.ndarray, ref: np.ndarray) -> float:
    """Volume dominated by ``points`` (all strictly above ``ref``), maximization."""
    n, m = points.shape
    if n == 0:
        return 0.0
    if n == 1:
        return float(np.prod(points[0] - ref))
    if m == 1:
        return float(points[:, 0].max() - ref[0])
    if m == 2:
        return _hv2d(points, ref)
    points = points[np.argsort(points[:, -1], kind="stable")]
    head = points[:, :-1]
    sub_ref = ref[:-1]
    total = 0.0
    for k in range(n):
        p = head[k]
        box = float(np.prod(p - sub_ref))
        later = head[k + 1 :]
        if later.shape[0]:
            covered = _hv(_nondominated(np.minimum(later, p)), sub_ref)
        else:
            covered = 0.0
        total += (points[k, -1] - ref[-1]) * (box - covered)
    return total


def _relevant(points: np.ndarray, ref: np.ndarray) -> np.ndarray:
    return points[np.all(points > ref, axis=1)]


def hv_exact(A: SetLike, r: ArrayLike, orientation=None) -> float:
    """Exact hypervolume of ``A`` with respect to ``r``.

    Points that do not strictly dominate ``r`` add nothing. The empty set
    has hypervolume 0.
    """
    pts, ref = to_maximize(A, r, orientation)
    _guard(pts.shape[1])
    return _hv(_nondominated(_relevant(pts, ref)), ref)


def hv_inclusion_exclusion(A: SetLike, r: ArrayLike, orientation=None) -> float:
    """Brute-force hypervolume: signed sum of box volumes over all subsets.

    The box of a subset is spanned by ``r`` and the componentwise minimum
    of its members. Only usable for small sets.
    """
    pts, ref = to_maximize(A, r, orientation)
    if pts.shape[0] > MAX_INCLUSION_EXCLUSION:
        raise ValueError(f"inclusion-exclusion is limited to {MAX_INCLUSION_EXCLUSION} points")
    m = pts.shape[1]
    meets = np.empty((0, m))
    signs = np.empty(0)
    for p in pts:
        meets = np.concatenate([meets, p[None, :], np.minimum(meets, p)])
        signs = np.concatenate([signs, [1.0], -signs])
    if meets.shape[0] == 0:
        return 0.0
    volumes = np.prod(np.clip(meets - ref, 0.0, None), axis=1)
    return float(np.sum(signs * volumes))


def _exclusive(pts: np.ndarray, ref: np.ndarray) -> np.ndarray:
    n = pts.shape[0]
    values = np.zeros(n)
    inside = np.all(pts > ref, axis=1)
    for i in np.flatnonzero(inside):
        s = pts[i]
        others = np.delete(pts, i, axis=0)
        others = others[np.all(others > ref, axis=1)]
        box = float(np.prod(s - ref))
        covered = _hv(_nondominated(np.minimum(others, s)), ref) if others.shape[0] else 0.0
        values[i] = max(box - covered, 0.0)
    return values


def hvc_exact(A: SetLike, r: ArrayLike, orientation=None) -> HvcEstimate:
    """Exact contribution ``HV(A) - HV(A minus s)`` of every solution.

    Computed as the volume of the box of ``s`` not covered by the other
    solutions, which is the same quantity without two full evaluations.
    """
    pts, ref = to_maximize(A, r, orientation)
    _guard(pts.shape[1])
    start = time.perf_counter()
    values = _exclusive(pts, ref)
    elapsed = time.perf_counter() - start
    return HvcEstimate(Method.EXACT, values, budget=0, wall_time=elapsed)


def smallest_contributor(A: SetLike, r: ArrayLike, orientation=None) -> int:
    """Index of the smallest exact contribution; ties go to the lowest index."""
    return int(np.argmin(hvc_exact(A, r, orientation).values))
