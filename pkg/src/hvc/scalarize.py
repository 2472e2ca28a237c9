"""Tchebycheff-type scalarizing functions.

Each function measures a ray length along a direction ``lam``. ``lam`` may be
a single vector of shape ``(m,)`` or a stack of shape ``(k, m)``; the result
is then a scalar or an array of ``k`` values. Components of ``lam`` must be
strictly positive (direction sampling clamps them away from zero).
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from .core import Orientation


def _prepare(x: ArrayLike, lam: ArrayLike, y: ArrayLike) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or lam.shape[-1] != x.shape[0]:
        raise ValueError(
            f"dimension mismatch: point {x.shape}, anchor {y.shape}, direction {lam.shape}"
        )
    return x, lam, y


def _out(values: np.ndarray):
    return float(values) if values.ndim == 0 else values


def g_2tch(a: ArrayLike, lam: ArrayLike, r_star: ArrayLike):
    """Max-ratio distance ``max_j |r*_j - a_j| / lam_j`` from a utopian point."""
    a, lam, r_star = _prepare(a, lam, r_star)
    return _out(np.max(np.abs(r_star - a) / lam, axis=-1))


def g_mtch(p: ArrayLike, lam: ArrayLike, origin: ArrayLike):
    """Min-ratio distance ``min_j |origin_j - p_j| / lam_j``.

    With ``origin`` the reference point this is the ray length from ``r`` to
    the box of ``p``; with ``origin`` a solution ``s`` and ``p = r`` it is the
    length from ``s`` to the reference boundary.
    """
    p, lam, origin = _prepare(p, lam, origin)
    return _out(np.min(np.abs(origin - p) / lam, axis=-1))


def g_star_2tch(
    a: ArrayLike,
    lam: ArrayLike,
    s: ArrayLike,
    orientation: Orientation | str = Orientation.MAXIMIZE,
):
    """Signed max-ratio distance from ``s`` to the attainment surface of ``a``.

    Maximization uses ``(s_j - a_j)``, minimization ``(a_j - s_j)``. There is
    no absolute value: the result is negative when ``a`` dominates ``s``,
    and clamping is left to the caller.
    """
    a, lam, s = _prepare(a, lam, s)
    if Orientation.parse(orientation) is Orientation.MAXIMIZE:
        diff = s - a
    else:
        diff = a - s
    return _out(np.max(diff / lam, axis=-1))
