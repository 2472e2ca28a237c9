"""Shared domain types: orientation, solution sets, direction sets, estimates.

Every algorithm in the package works internally on maximization problems.
Minimization inputs are negated once at the boundary via :func:`to_maximize`,
which keeps the numerical kernels free of orientation branches.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike


class Orientation(enum.Enum):
    MAXIMIZE = "max"
    MINIMIZE = "min"

    @classmethod
    def parse(cls, value: "Orientation | str") -> "Orientation":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for member in cls:
            if key in (member.value, member.name.lower(), member.name.lower()[:3]):
                return member
        raise ValueError(f"unknown orientation {value!r}")


class Method(enum.Enum):
    R2HVC = "r2hvc"
    R2_CONTRIBUTION = "r2contrib"
    MONTE_CARLO = "montecarlo"
    EXACT = "exact"


def _as_matrix(points: ArrayLike, name: str = "points") -> np.ndarray:
    arr = np.array(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a 2-D array of shape (n, m), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def _as_vector(values: ArrayLike, m: int | None = None, name: str = "vector") -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    if m is not None and arr.shape[0] != m:
        raise ValueError(f"{name} has dimension {arr.shape[0]}, expected {m}")
    return arr


@dataclass(frozen=True)
class SolutionSet:
    """Ordered, immutable collection of objective vectors with one orientation.

    The row index of a point is its identity across all methods.
    """

    points: np.ndarray
    orientation: Orientation = Orientation.MAXIMIZE

    def __post_init__(self) -> None:
        pts = _as_matrix(self.points)
        if pts.shape[1] < 2:
            raise ValueError("objective vectors need at least two objectives")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "orientation", Orientation.parse(self.orientation))

    @property
    def m(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def without(self, index: int) -> "SolutionSet":
        return SolutionSet(np.delete(self.points, index, axis=0), self.orientation)


@dataclass(frozen=True)
class DirectionSet:
    """Unit-norm, strictly positive direction vectors, one per row."""

    vectors: np.ndarray
    seed: int | None = None

    def __post_init__(self) -> None:
        vec = _as_matrix(self.vectors, "direction vectors")
        if np.any(vec <= 0.0):
            raise ValueError("direction vectors must have strictly positive components")
        norms = np.linalg.norm(vec, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("direction vectors must have unit 2-norm")
        vec.setflags(write=False)
        object.__setattr__(self, "vectors", vec)

    @property
    def m(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.vectors.shape[0]


@dataclass
class HvcEstimate:
    """Per-solution hypervolume contributions produced by one method."""

    method: Method
    values: np.ndarray
    budget: int = 0
    wall_time: float = 0.0
    alpha: int | None = None

    def __post_init__(self) -> None:
        self.method = Method(self.method)
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if not np.all(np.isfinite(self.values)) or np.any(self.values < 0.0):
            raise ValueError("contribution values must be finite and nonnegative")

    def __len__(self) -> int:
        return self.values.shape[0]


SetLike = Union[SolutionSet, ArrayLike]
DirectionsLike = Union[DirectionSet, ArrayLike]


def as_solution_set(A: SetLike, orientation: Orientation | str | None = None) -> SolutionSet:
    if isinstance(A, SolutionSet):
        if orientation is not None and Orientation.parse(orientation) is not A.orientation:
            raise ValueError("orientation argument conflicts with the solution set")
        return A
    return SolutionSet(np.asarray(A, dtype=float), Orientation.parse(orientation or Orientation.MAXIMIZE))


def to_maximize(
    A: SetLike,
    r: ArrayLike,
    orientation: Orientation | str | None = None,
    min_objectives: int = 2,
) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(points, r)`` as float arrays in maximization form.

    Minimization data is negated; dominance relations and all box volumes
    are preserved by the negation. ``min_objectives=1`` admits raw arrays
    with a single objective (used by the whole-set indicators).
    """
    if isinstance(A, SolutionSet):
        if orientation is not None and Orientation.parse(orientation) is not A.orientation:
            raise ValueError("orientation argument conflicts with the solution set")
        pts, orient = A.points, A.orientation
    else:
        pts = _as_matrix(A)
        if pts.shape[1] < min_objectives:
            raise ValueError(f"need at least {min_objectives} objectives, got {pts.shape[1]}")
        orient = Orientation.parse(orientation or Orientation.MAXIMIZE)
    ref = _as_vector(r, pts.shape[1], "reference point")
    if orient is Orientation.MINIMIZE:
        return -pts, -ref
    return np.array(pts, dtype=float), ref


def as_directions(directions: DirectionsLike, m: int | None = None) -> np.ndarray:
    if isinstance(directions, DirectionSet):
        vec = directions.vectors
    else:
        vec = DirectionSet(np.asarray(directions, dtype=float)).vectors
    if m is not None and vec.shape[1] != m:
        raise ValueError(f"directions have dimension {vec.shape[1]}, expected {m}")
    return vec


def dominates(a: ArrayLike, b: ArrayLike, orientation: Orientation | str = Orientation.MAXIMIZE) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and strictly better somewhere."""
    a = _as_vector(a, name="a")
    b = _as_vector(b, name="b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    if Orientation.parse(orientation) is Orientation.MINIMIZE:
        a, b = -a, -b
    return bool(np.all(a >= b) and np.any(a > b))


def weakly_dominated_mask(points: np.ndarray) -> np.ndarray:
    """Mask of rows (maximization) weakly dominated by another row.

    Among identical rows the lowest index survives, so the complement is a
    duplicate-free nondominated subset.
    """
    n = points.shape[0]
    if n < 2:
        return np.zeros(n, dtype=bool)
    geq = np.all(points[:, None, :] >= points[None, :, :], axis=2)  # geq[i, j]: i >= j everywhere
    gt = np.any(points[:, None, :] > points[None, :, :], axis=2)
    strictly = geq & gt
    equal = geq & ~gt
    earlier_equal = np.triu(equal, k=1)  # i < j with points equal
    return np.any(strictly, axis=0) | np.any(earlier_equal, axis=0)


@dataclass(frozen=True)
class Diagnostics:
    not_better_than_ref: tuple[int, ...] = ()
    duplicates: tuple[tuple[int, int], ...] = ()
    dominated: tuple[int, ...] = ()

    @property
    def clean(self) -> bool:
        return not (self.not_better_than_ref or self.duplicates or self.dominated)


def validate_set(A: SetLike, r: ArrayLike, orientation: Orientation | str | None = None) -> Diagnostics:
    """Report points that cannot contribute: beyond ``r``, duplicated, or dominated."""
    pts, ref = to_maximize(A, r, orientation)
    n = pts.shape[0]
    beyond = tuple(int(i) for i in np.flatnonzero(~np.all(pts > ref, axis=1)))
    dups = []
    for i in range(n):
        same = np.flatnonzero(np.all(pts[i + 1 :] == pts[i], axis=1))
        dups.extend((i, i + 1 + int(j)) for j in same)
    geq = np.all(pts[:, None, :] >= pts[None, :, :], axis=2)
    gt = np.any(pts[:, None, :] > pts[None, :, :], axis=2)
    dominated = tuple(int(j) for j in np.flatnonzero(np.any(geq & gt, axis=0)))
    return Diagnostics(beyond, tuple(dups), dominated)
