"""Approximate hypervolume contributions: R2-HVC, R2 contribution, Monte Carlo."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .core import (
    DirectionsLike,
    DirectionSet,
    HvcEstimate,
    Method,
    Orientation,
    SetLike,
    as_directions,
    to_maximize,
)
from .generate import STREAM_MONTE_CARLO, make_rng
from .indicators import CHUNK_ELEMENTS, _best_two
from .scalarize import g_mtch, g_star_2tch


@dataclass(frozen=True)
class R2HvcParams:
    """Directions plus the exponent applied to each segment length.

    ``alpha=None`` means ``alpha = m``.
    """

    directions: DirectionSet
    alpha: int | None = None

    def resolve_alpha(self, m: int) -> int:
        alpha = m if self.alpha is None else int(self.alpha)
        if alpha not in (1, m):
            raise ValueError(f"alpha must be 1 or m={m}, got {alpha}")
        return alpha


def _solution(pts: np.ndarray, s: int) -> tuple[np.ndarray, np.ndarray]:
    s = int(s)
    if not 0 <= s < pts.shape[0]:
        raise IndexError(f"solution index {s} not in set of size {pts.shape[0]}")
    return pts[s], np.delete(pts, s, axis=0)


def _direction(lam: ArrayLike, m: int) -> np.ndarray:
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if lam.shape[0] != m:
        raise ValueError(f"direction has dimension {lam.shape[0]}, expected {m}")
    if np.any(lam <= 0.0):
        raise ValueError("direction components must be strictly positive")
    return lam


def segment_length(s: int, A: SetLike, r: ArrayLike, lam: ArrayLike, orientation=None) -> float:
    """Length of the ray from solution ``A[s]`` along ``lam`` inside its contribution region.

    The ray stops at whichever comes first: the attainment surface of the
    other solutions or the reference boundary. A solution that does not
    strictly dominate ``r``, or is weakly dominated by another solution,
    gets length 0.
    """
    pts, ref = to_maximize(A, r, orientation)
    point, others = _solution(pts, s)
    lam = _direction(lam, pts.shape[1])
    if not np.all(point > ref):
        return 0.0
    to_others = min((g_star_2tch(a, lam, point, Orientation.MAXIMIZE) for a in others), default=np.inf)
    to_boundary = g_mtch(ref, lam, point)
    return max(0.0, min(to_others, to_boundary))


def segment_length_via_augmented_points(
    s: int, A: SetLike, r: ArrayLike, lam: ArrayLike, orientation=None
) -> float:
    """:func:`segment_length` computed without a separate boundary term.

    The reference boundary is replaced by ``m`` auxiliary points, copies of
    ``A[s]`` with one coordinate set to the reference value, which are
    treated as ordinary competitors.
    """
    pts, ref = to_maximize(A, r, orientation)
    point, others = _solution(pts, s)
    lam = _direction(lam, pts.shape[1])
    auxiliary = np.repeat(point[None, :], pts.shape[1], axis=0)
    np.fill_diagonal(auxiliary, ref)
    candidates = np.concatenate([others, auxiliary])
    length = min(g_star_2tch(a, lam, point, Orientation.MAXIMIZE) for a in candidates)
    return max(0.0, length)


def _segment_lengths(pts: np.ndarray, ref: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Segment lengths for every solution and direction, shape ``(n, k)``."""
    n, m = pts.shape
    k = lam.shape[0]
    offsets = pts[:, None, :] - pts[None, :, :]  # offsets[s, a] = s - a
    margin = pts - ref
    inside = np.all(margin > 0.0, axis=1)
    diag = np.arange(n)
    out = np.empty((n, k))
    step = max(1, CHUNK_ELEMENTS // (n * n))
    for start in range(0, k, step):
        sl = slice(start, min(k, start + step))
        lam_c = lam[sl]
        g = offsets[:, :, 0, None] / lam_c[None, None, :, 0]
        for j in range(1, m):
            np.maximum(g, offsets[:, :, j, None] / lam_c[None, None, :, j], out=g)
        g[diag, diag, :] = np.inf
        length = g.min(axis=1)
        boundary = margin[:, None, 0] / lam_c[None, :, 0]
        for j in range(1, m):
            np.minimum(boundary, margin[:, None, j] / lam_c[None, :, j], out=boundary)
        np.minimum(length, boundary, out=length)
        np.maximum(length, 0.0, out=length)
        out[:, sl] = length
    out[~inside] = 0.0
    return out


def r2_hvc(
    A: SetLike,
    r: ArrayLike,
    params: R2HvcParams | DirectionsLike,
    orientation=None,
) -> HvcEstimate:
    """R2-based contribution estimate: mean of ``segment_length ** alpha`` over directions."""
    pts, ref = to_maximize(A, r, orientation)
    if pts.shape[0] == 0:
        raise ValueError("solution set is empty")
    if not isinstance(params, R2HvcParams):
        params = R2HvcParams(DirectionSet(as_directions(params)))
    lam = as_directions(params.directions, pts.shape[1])
    alpha = params.resolve_alpha(pts.shape[1])
    start = time.perf_counter()
    terms = _segment_lengths(pts, ref, lam)
    if alpha != 1:
        terms **= alpha
    values = terms.sum(axis=1) / lam.shape[0]
    elapsed = time.perf_counter() - start
    return HvcEstimate(Method.R2HVC, values, budget=lam.shape[0], wall_time=elapsed, alpha=alpha)


def r2_contribution(A: SetLike, r: ArrayLike, directions: DirectionsLike, orientation=None) -> HvcEstimate:
    """Traditional estimate: drop in the m-powered R2 indicator when ``s`` is removed.

    One pass records the best and runner-up ray length per direction; a
    solution only loses value on directions where it is the unique best.
    """
    pts, ref = to_maximize(A, r, orientation)
    if pts.shape[0] < 2:
        raise ValueError("the R2 contribution needs at least two solutions")
    lam = as_directions(directions, pts.shape[1])
    m = pts.shape[1]
    start = time.perf_counter()
    best, index, second = _best_two(pts, lam, ref)
    gain = best**m - second**m
    values = np.bincount(index, weights=gain, minlength=pts.shape[0]) / lam.shape[0]
    np.maximum(values, 0.0, out=values)
    elapsed = time.perf_counter() - start
    return HvcEstimate(Method.R2_CONTRIBUTION, values, budget=lam.shape[0], wall_time=elapsed)


def monte_carlo_hvc(
    A: SetLike, r: ArrayLike, n_samples: int, seed: int, orientation=None
) -> HvcEstimate:
    """Monte Carlo contribution estimate with one sampling box per solution.

    Samples are uniform in the box spanned by ``r`` and ``s``. A sample hits
    when no other solution weakly dominates it; the estimate is the hit
    fraction times the box volume. Solution ``i`` reads the ``i``-th block
    of ``n_samples * m`` uniforms from the Philox stream keyed by ``seed``,
    so its draws do not depend on the other solutions.
    """
    pts, ref = to_maximize(A, r, orientation)
    n_samples = int(n_samples)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    n, m = pts.shape
    start = time.perf_counter()
    margin = pts - ref
    inside = np.all(margin > 0.0, axis=1)
    samples = make_rng(seed, STREAM_MONTE_CARLO).random((n, n_samples, m))
    samples *= margin[:, None, :]
    samples += ref
    hits = np.zeros(n, dtype=np.int64)
    diag = np.arange(n)
    step = max(1, CHUNK_ELEMENTS // (n * n))
    for lo in range(0, n_samples, step):
        x = samples[:, lo : lo + step, :]
        covered = pts[None, None, :, 0] >= x[:, :, None, 0]
        for j in range(1, m):
            covered &= pts[None, None, :, j] >= x[:, :, None, j]
        covered[diag, :, diag] = False
        hits += np.count_nonzero(~covered.any(axis=2), axis=1)
    volume = np.prod(margin, axis=1)
    values = np.where(inside, hits / n_samples * volume, 0.0)
    elapsed = time.perf_counter() - start
    return HvcEstimate(Method.MONTE_CARLO, values, budget=n_samples, wall_time=elapsed)
