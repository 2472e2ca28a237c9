"""Benchmark fronts, direction vectors, reference points and seeded streams.

Randomness comes from numpy's Philox counter-based generator. A stream is
addressed by a 64-bit master seed plus an integer key path, hashed through
``SeedSequence``; streams for different keys are statistically independent,
so per-set and per-solution draws do not depend on evaluation order.
Results are bit-reproducible within this implementation only.
"""

from __future__ import annotations

import csv
import enum
import json
from pathlib import Path

import numpy as np

from .core import DirectionSet, Orientation, SolutionSet

EPS = 1e-12

# Stream tags keep the key paths of unrelated consumers apart.
STREAM_SUITE = 0
STREAM_FRONT = 1
STREAM_DIRECTIONS = 2
STREAM_MONTE_CARLO = 3


class PfShape(enum.Enum):
    LINEAR_TRIANGULAR = "linear_triangular"
    CONCAVE_TRIANGULAR = "concave_triangular"
    CONVEX_TRIANGULAR = "convex_triangular"
    LINEAR_INVERTED = "linear_inverted"
    CONCAVE_INVERTED = "concave_inverted"
    CONVEX_INVERTED = "convex_inverted"

    @property
    def inverted(self) -> bool:
        return self.value.endswith("_inverted")

    @property
    def curvature(self) -> str:
        return self.value.split("_")[0]

    @classmethod
    def parse(cls, value: "PfShape | str") -> "PfShape":
        return value if isinstance(value, cls) else cls(str(value).strip().lower())


TRIANGULAR = tuple(s for s in PfShape if not s.inverted)
INVERTED = tuple(s for s in PfShape if s.inverted)


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def make_rng(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for the stream addressed by ``(seed, *key)``."""
    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(seed: int, *key: int) -> int:
    """Hash ``(seed, *key)`` to a new 64-bit seed."""
    ss = np.random.SeedSequence(_check_seed(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def surface_residual(shape: PfShape | str, f: np.ndarray) -> np.ndarray:
    """Per-point deviation from the front's defining equation."""
    shape = PfShape.parse(shape)
    f = np.atleast_2d(np.asarray(f, dtype=float))
    g = 1.0 - f if shape.inverted else f
    if shape.curvature == "linear":
        return g.sum(axis=1) - 1.0
    if shape.curvature == "concave":
        return (g**2).sum(axis=1) - 1.0
    return np.sqrt(np.clip(g, 0.0, None)).sum(axis=1) - 1.0


def shape_map(shape: PfShape | str, w: np.ndarray) -> np.ndarray:
    """Push simplex weights ``w`` (rows summing to one) onto the front."""
    shape = PfShape.parse(shape)
    w = np.atleast_2d(np.asarray(w, dtype=float))
    if shape.curvature == "linear":
        f = w.copy()
    elif shape.curvature == "concave":
        f = w / np.linalg.norm(w, axis=1, keepdims=True)
    else:
        f = w**2
    if shape.inverted:
        f = 1.0 - f
    return f


def sample_front(shape: PfShape | str, m: int, n: int, seed: int) -> SolutionSet:
    """Draw ``n`` points of an ``m``-objective front (maximization).

    Weights are uniform on the unit simplex (normalized exponential
    spacings) and then mapped onto the surface, so the measure is not
    uniform in area on curved fronts.
    """
    if int(m) < 2 or int(n) < 1:
        raise ValueError(f"need m >= 2 and n >= 1, got m={m}, n={n}")
    rng = make_rng(seed, STREAM_FRONT)
    e = rng.standard_exponential((int(n), int(m)))
    w = e / e.sum(axis=1, keepdims=True)
    return SolutionSet(shape_map(shape, w), Orientation.MAXIMIZE)


def sample_directions(m: int, k: int, seed: int) -> DirectionSet:
    """``k`` direction vectors ``|x| / ||x||`` with ``x`` standard normal.

    Components are clamped to at least ``EPS`` and the rows renormalized.
    """
    if int(m) < 1 or int(k) < 1:
        raise ValueError(f"need m >= 1 and k >= 1, got m={m}, k={k}")
    rng = make_rng(seed, STREAM_DIRECTIONS)
    x = np.abs(rng.standard_normal((int(k), int(m))))
    lam = x / np.maximum(np.linalg.norm(x, axis=1, keepdims=True), np.finfo(float).tiny)
    np.maximum(lam, EPS, out=lam)
    lam /= np.linalg.norm(lam, axis=1, keepdims=True)
    return DirectionSet(lam, seed=int(seed))


def reference_point(m: int, r_scalar: float) -> np.ndarray:
    return np.full(int(m), float(r_scalar))


def suite_seeds(seed: int, n_sets: int) -> list[int]:
    if int(n_sets) < 1:
        raise ValueError("n_sets must be >= 1")
    return [derive_seed(seed, STREAM_SUITE, i) for i in range(int(n_sets))]


def make_benchmark_suite(shape: PfShape | str, m: int, n: int, n_sets: int, seed: int) -> list[SolutionSet]:
    """``n_sets`` independent sets; set ``i`` is seeded by hashing ``(seed, i)``."""
    return [sample_front(shape, m, n, s) for s in suite_seeds(seed, n_sets)]


def write_set(path: Path, A: SolutionSet, meta: dict) -> None:
    """Write a solution set as CSV plus a JSON sidecar next to it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"f{j + 1}" for j in range(A.m)])
        for row in A.points:
            writer.writerow([repr(float(v)) for v in row])
    sidecar = dict(meta, m=A.m, n=len(A), orientation=A.orientation.value)
    path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_set(path: Path) -> tuple[SolutionSet, dict]:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if header != [f"f{j + 1}" for j in range(len(header))]:
        raise ValueError(f"{path}: unexpected header {header}")
    meta = json.loads(path.with_suffix(".json").read_text(encoding="utf-8"))
    points = np.array([[float(v) for v in row] for row in body], dtype=float)
    return SolutionSet(points, Orientation.parse(meta.get("orientation", "max"))), meta
