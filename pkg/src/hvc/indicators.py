"""Whole-set R2 indicators built on the Tchebycheff scalarizers."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from .core import DirectionsLike, SetLike, as_directions, to_maximize

# Upper bound on elements of one (points x directions) work array.
CHUNK_ELEMENTS = 1 << 18


def direction_chunks(n_rows: int, k: int):
    """Yield slices over ``k`` directions so ``n_rows * chunk`` stays bounded."""
    step = max(1, CHUNK_ELEMENTS // max(1, n_rows))
    for start in range(0, k, step):
        yield slice(start, min(k, start + step))


def reference_lengths(points: np.ndarray, lam: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Ray lengths from ``ref`` to each point's box, shape ``(n, k)``.

    Maximization form. A point that does not strictly dominate ``ref`` spans
    an empty box and gets length 0; otherwise the value equals ``g_mtch``.
    """
    diff = points - ref
    out = np.min(diff[:, None, :] / lam[None, :, :], axis=2)
    np.maximum(out, 0.0, out=out)
    return out


def _setup(A: SetLike, Lambda: DirectionsLike, r: ArrayLike, orientation):
    pts, ref = to_maximize(A, r, orientation, min_objectives=1)
    if pts.shape[0] == 0:
        raise ValueError("solution set is empty")
    lam = as_directions(Lambda, pts.shape[1])
    return pts, lam, ref


def r2_2tch(A: SetLike, Lambda: DirectionsLike, r_star: ArrayLike, orientation=None) -> float:
    """Mean over directions of the smallest 2-Tch distance from the utopian point."""
    pts, lam, ustar = _setup(A, Lambda, r_star, orientation)
    terms = np.empty(lam.shape[0])
    diff = np.abs(ustar - pts)
    for sl in direction_chunks(pts.shape[0], lam.shape[0]):
        g = np.max(diff[:, None, :] / lam[None, sl, :], axis=2)
        terms[sl] = g.min(axis=0)
    return float(terms.sum() / terms.shape[0])


def _max_lengths(pts: np.ndarray, lam: np.ndarray, ref: np.ndarray) -> np.ndarray:
    best = np.empty(lam.shape[0])
    for sl in direction_chunks(pts.shape[0], lam.shape[0]):
        best[sl] = reference_lengths(pts, lam[sl], ref).max(axis=0)
    return best


def r2_mtch(A: SetLike, Lambda: DirectionsLike, r: ArrayLike, orientation=None) -> float:
    """Mean over directions of the longest ray from ``r`` to the attainment surface."""
    pts, lam, ref = _setup(A, Lambda, r, orientation)
    best = _max_lengths(pts, lam, ref)
    return float(best.sum() / best.shape[0])


def r2_hv(A: SetLike, Lambda: DirectionsLike, r: ArrayLike, orientation=None) -> float:
    """Like :func:`r2_mtch` but averaging the m-th power of each ray length."""
    pts, lam, ref = _setup(A, Lambda, r, orientation)
    best = _max_lengths(pts, lam, ref) ** pts.shape[1]
    return float(best.sum() / best.shape[0])


class BestTwo(NamedTuple):
    best: np.ndarray
    best_index: np.ndarray
    second: np.ndarray


def per_direction_best_two(
    A: SetLike, Lambda: DirectionsLike, r: ArrayLike, orientation=None
) -> BestTwo:
    """Largest and second-largest ray length per direction, with the argmax.

    Removing solution ``i`` only changes the per-direction maximum where
    ``best_index == i``; there ``second`` takes over. Ties go to the lowest
    index, so duplicates yield ``best == second``.
    """
    pts, lam, ref = _setup(A, Lambda, r, orientation)
    if pts.shape[0] < 2:
        raise ValueError("need at least two solutions")
    return _best_two(pts, lam, ref)


def _best_two(pts: np.ndarray, lam: np.ndarray, ref: np.ndarray) -> BestTwo:
    k = lam.shape[0]
    best = np.empty(k)
    second = np.empty(k)
    index = np.empty(k, dtype=np.intp)
    for sl in direction_chunks(pts.shape[0], k):
        lengths = reference_lengths(pts, lam[sl], ref)
        idx = np.argmax(lengths, axis=0)
        cols = np.arange(lengths.shape[1])
        best[sl] = lengths[idx, cols]
        index[sl] = idx
        lengths[idx, cols] = -np.inf
        second[sl] = lengths.max(axis=0)
    return BestTwo(best, index, second)
