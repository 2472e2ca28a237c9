"""Experiment grid: configuration, set generation, method runs, metrics, reports.

Output layout under ``output_dir``::

    sets/<shape>/<m>d/<N>/set_<i>.csv (+ .json sidecar)
    results.csv   one row per method call, with wall time
    values.csv    one row per (method call, solution)
    metrics.csv   accuracy metrics averaged over runs
    bench.csv     median total runtime per method over a suite
    report/       per-figure tables and summary.txt

Rows are produced in a fixed grid order, so files are byte-identical for a
fixed configuration except for the wall-time columns.
"""

from __future__ import annotations

import copy
import csv
import json
import logging
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .contribution import R2HvcParams, monte_carlo_hvc, r2_contribution, r2_hvc
from .core import HvcEstimate, Method, SolutionSet
from .exact import MAX_EXACT_DIM, hvc_exact
from .generate import (
    STREAM_DIRECTIONS,
    STREAM_MONTE_CARLO,
    STREAM_SUITE,
    PfShape,
    derive_seed,
    make_benchmark_suite,
    read_set,
    reference_point,
    sample_directions,
    write_set,
)
from .metrics import aggregate_runs, consistency_rate, correct_identification

log = logging.getLogger(__name__)

RESULTS_COLUMNS = ["set_id", "shape", "m", "N", "r", "method", "budget", "alpha", "run", "wall_time_s"]
VALUES_COLUMNS = ["set_id", "shape", "m", "N", "r", "method", "budget", "alpha", "run", "solution", "value"]
METRICS_COLUMNS = [
    "shape", "m", "N", "r", "method", "budget", "alpha",
    "mean_consistency", "sd_consistency", "identification_rate", "sd_identification", "n_runs",
]
BENCH_COLUMNS = [
    "shape", "m", "N", "r", "method", "budget", "alpha", "n_sets", "repeats", "median_total_s", "min_total_s",
]


class PipelineError(Exception):
    exit_code = 1


class ConfigError(PipelineError):
    exit_code = 2


class OutputError(PipelineError):
    exit_code = 2


class MissingSetsError(PipelineError):
    exit_code = 3


class ExactGuardError(PipelineError):
    exit_code = 4


class MissingInputsError(PipelineError):
    exit_code = 5


@dataclass(frozen=True)
class MethodSpec:
    method: Method
    budget: int = 0
    alpha: int | None = None

    @property
    def label(self) -> str:
        return self.method.value


APPROX_METHODS = (Method.R2HVC, Method.R2_CONTRIBUTION, Method.MONTE_CARLO)

DESK_SCALE = {
    "shapes": [s.value for s in PfShape],
    "dims": [3],
    "set_sizes": [20],
    "n_sets": 30,
    "ref_scalars": [-0.2],
    "methods": [
        {"name": "r2hvc", "budgets": [100, 500]},
        {"name": "r2contrib", "budgets": [100, 500]},
        {"name": "montecarlo", "budgets": [100, 500]},
        {"name": "exact"},
    ],
    "n_runs": 10,
    "seed": 0,
    "output_dir": "hvc-out",
    "workers": 1,
}

PAPER_SCALE = {
    "dims": [5],
    "set_sizes": [100, 200, 300, 400, 500],
    "n_sets": 100,
    "ref_scalars": [0.0, -0.1, -0.2, -0.3, -0.4],
    "methods": [
        {"name": "r2hvc", "budgets": list(range(100, 1001, 100))},
        {"name": "r2contrib", "budgets": list(range(100, 1001, 100))},
        {"name": "montecarlo", "budgets": list(range(100, 1001, 100))},
        {"name": "exact"},
    ],
    "n_runs": 30,
}


@dataclass
class ExperimentConfig:
    shapes: list[PfShape]
    dims: list[int]
    set_sizes: list[int]
    n_sets: int
    ref_scalars: list[float]
    methods: list[MethodSpec]
    n_runs: int
    seed: int
    output_dir: Path
    workers: int = 1

    @property
    def approx_methods(self) -> list[MethodSpec]:
        return [s for s in self.methods if s.method is not Method.EXACT]

    @property
    def wants_exact(self) -> bool:
        return any(s.method is Method.EXACT for s in self.methods)

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        data = copy.deepcopy(DESK_SCALE)
        data.update(raw)
        try:
            shapes = [PfShape.parse(s) for s in data["shapes"]]
            dims = [int(m) for m in data["dims"]]
            sizes = [int(n) for n in data["set_sizes"]]
            refs = [float(r) for r in data["ref_scalars"]]
            methods = _parse_methods(data["methods"])
            cfg = cls(
                shapes=shapes,
                dims=dims,
                set_sizes=sizes,
                n_sets=int(data["n_sets"]),
                ref_scalars=refs,
                methods=methods,
                n_runs=int(data["n_runs"]),
                seed=int(data["seed"]),
                output_dir=Path(data["output_dir"]),
                workers=int(data.get("workers", 1)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid configuration: {exc}") from exc
        cfg.validate()
        return cfg

    def validate(self) -> None:
        for name in ("shapes", "dims", "set_sizes", "ref_scalars", "methods"):
            if not getattr(self, name):
                raise ConfigError(f"config field {name!r} must be a nonempty list")
        if min(self.dims) < 2 or min(self.set_sizes) < 1 or self.n_sets < 1:
            raise ConfigError("need dims >= 2, set_sizes >= 1 and n_sets >= 1")
        if self.n_runs < 1 or self.workers < 1:
            raise ConfigError("n_runs and workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        for spec in self.approx_methods:
            if spec.budget < 1:
                raise ConfigError(f"{spec.label}: budget must be >= 1")
        if any(s.method is Method.R2_CONTRIBUTION for s in self.methods) and min(self.set_sizes) < 2:
            raise ConfigError("r2contrib needs set sizes >= 2")

    def to_dict(self) -> dict:
        methods = []
        for s in self.methods:
            entry = {"name": s.method.value}
            if s.method is not Method.EXACT:
                entry["budget"] = s.budget
            if s.alpha is not None:
                entry["alpha"] = s.alpha
            methods.append(entry)
        return {
            "shapes": [s.value for s in self.shapes],
            "dims": self.dims,
            "set_sizes": self.set_sizes,
            "n_sets": self.n_sets,
            "ref_scalars": self.ref_scalars,
            "methods": methods,
            "n_runs": self.n_runs,
            "seed": self.seed,
            "output_dir": str(self.output_dir),
            "workers": self.workers,
        }


def _parse_methods(entries: Iterable) -> list[MethodSpec]:
    specs: list[MethodSpec] = []
    for entry in entries:
        if isinstance(entry, str):
            entry = {"name": entry}
        method = Method(str(entry["name"]).lower())
        alpha = entry.get("alpha")
        alpha = None if alpha is None else int(alpha)
        if method is Method.EXACT:
            specs.append(MethodSpec(method))
            continue
        if alpha is not None and method is not Method.R2HVC:
            raise ValueError(f"alpha only applies to r2hvc, not {method.value}")
        budgets = entry.get("budgets", [entry["budget"]] if "budget" in entry else None)
        if not budgets:
            raise ValueError(f"method {method.value} needs 'budget' or 'budgets'")
        specs.extend(MethodSpec(method, int(b), alpha) for b in budgets)
    if len(set(specs)) != len(specs):
        raise ValueError("duplicate method specs")
    return specs


def load_config(path: str | Path | None, seed: int | None = None, out: str | Path | None = None,
                paper_scale: bool = False, workers: int | None = None) -> ExperimentConfig:
    raw: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if paper_scale:
        raw = dict(raw, **PAPER_SCALE)
    if seed is not None:
        raw["seed"] = seed
    if out is not None:
        raw["output_dir"] = str(out)
    if workers is not None:
        raw["workers"] = workers
    return ExperimentConfig.from_dict(raw)


# ---------------------------------------------------------------- grid helpers

def _fmt(x: float) -> str:
    return repr(float(x))


def _alpha_str(alpha: int | None) -> str:
    return "" if alpha is None else str(alpha)


def set_path(root: Path, shape: PfShape, m: int, n: int, index: int) -> Path:
    return Path(root) / "sets" / shape.value / f"{m}d" / str(n) / f"set_{index:04d}.csv"


def _suite_seed(cfg: ExperimentConfig, shape: PfShape, m: int, n: int) -> int:
    shape_index = list(PfShape).index(shape)
    return derive_seed(cfg.seed, STREAM_SUITE, shape_index, m, n)


def _cells(cfg: ExperimentConfig):
    for shape in cfg.shapes:
        for m in cfg.dims:
            for n in cfg.set_sizes:
                yield shape, m, n


def _check_exact_guard(cfg: ExperimentConfig) -> None:
    if cfg.wants_exact and max(cfg.dims) > MAX_EXACT_DIM:
        raise ExactGuardError(
            f"exact contributions requested for m={max(cfg.dims)} above the guard m <= {MAX_EXACT_DIM}; "
            "drop 'exact' from methods or use only the approximation methods at this dimension"
        )


def _ensure_dir(path: Path) -> None:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create output directory {path}: {exc}") from exc


def _write_csv(path: Path, header: list[str], rows: Iterable[list]) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _read_csv(path: Path, header: list[str]) -> list[dict]:
    if not path.exists():
        raise MissingInputsError(f"missing input file {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            found = next(reader)
        except StopIteration:
            raise MissingInputsError(f"{path} is empty") from None
        if found != header:
            unknown = sorted(set(found) - set(header))
            raise MissingInputsError(
                f"{path}: schema mismatch (unknown columns {unknown})" if unknown
                else f"{path}: expected columns {header}, found {found}"
            )
        return [dict(zip(header, row)) for row in reader]


# ---------------------------------------------------------------- gen

def cmd_gen(cfg: ExperimentConfig) -> list[Path]:
    """Write every benchmark suite of the grid as CSV + JSON sidecar."""
    root = Path(cfg.output_dir)
    _ensure_dir(root)
    written = []
    for shape, m, n in _cells(cfg):
        seed = _suite_seed(cfg, shape, m, n)
        suite = make_benchmark_suite(shape, m, n, cfg.n_sets, seed)
        for i, A in enumerate(suite):
            path = set_path(root, shape, m, n, i)
            meta = {"shape": shape.value, "set_index": i, "suite_seed": seed,
                    "seed": derive_seed(seed, STREAM_SUITE, i)}
            try:
                write_set(path, A, meta)
            except OSError as exc:
                raise OutputError(f"cannot write {path}: {exc}") from exc
            written.append(path)
    log.info("wrote %d solution sets under %s", len(written), root / "sets")
    return written


def load_suite(cfg: ExperimentConfig, shape: PfShape, m: int, n: int) -> list[SolutionSet]:
    sets = []
    for i in range(cfg.n_sets):
        path = set_path(cfg.output_dir, shape, m, n, i)
        if not path.exists():
            raise MissingSetsError(f"missing solution set {path}; run 'hvc gen' first")
        A, _ = read_set(path)
        if A.m != m or len(A) != n:
            raise MissingSetsError(f"{path} has shape {len(A)}x{A.m}, expected {n}x{m}")
        sets.append(A)
    return sets


# ---------------------------------------------------------------- run

def directions_for(cfg: ExperimentConfig, m: int, run: int, budget: int):
    return sample_directions(m, budget, derive_seed(cfg.seed, STREAM_DIRECTIONS, m, run, budget))


def mc_seed(cfg: ExperimentConfig, shape: PfShape, m: int, n: int, index: int, run: int, budget: int) -> int:
    shape_index = list(PfShape).index(shape)
    return derive_seed(cfg.seed, STREAM_MONTE_CARLO, shape_index, m, n, index, run, budget)


def estimate(spec: MethodSpec, A: SolutionSet, r: np.ndarray, directions=None, seed: int = 0) -> HvcEstimate:
    if spec.method is Method.EXACT:
        return hvc_exact(A, r)
    if spec.method is Method.R2HVC:
        return r2_hvc(A, r, R2HvcParams(directions, spec.alpha))
    if spec.method is Method.R2_CONTRIBUTION:
        return r2_contribution(A, r, directions)
    return monte_carlo_hvc(A, r, spec.budget, seed)


def _run_set(task) -> list[tuple[list, list[list]]]:
    """All method calls for one solution set; returns (result row, value rows) pairs."""
    cfg, shape, m, n, index, A = task
    out = []
    for r_scalar in cfg.ref_scalars:
        r = reference_point(m, r_scalar)
        key = [index, shape.value, m, n, _fmt(r_scalar)]
        calls = []
        if cfg.wants_exact:
            calls.append((MethodSpec(Method.EXACT), 0, None, 0))
        for run in range(cfg.n_runs):
            for spec in cfg.approx_methods:
                lam = directions_for(cfg, m, run, spec.budget) if spec.method is not Method.MONTE_CARLO else None
                calls.append((spec, run, lam, mc_seed(cfg, shape, m, n, index, run, spec.budget)))
        for spec, run, lam, seed in calls:
            est = estimate(spec, A, r, lam, seed)
            head = key + [spec.label, est.budget, _alpha_str(est.alpha), run]
            values = [head + [j, _fmt(v)] for j, v in enumerate(est.values)]
            out.append((head + [f"{est.wall_time:.6f}"], values))
    return out


def _map_sets(cfg: ExperimentConfig, tasks: list):
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            yield from pool.map(_run_set, tasks)
    else:
        yield from map(_run_set, tasks)


def cmd_run(cfg: ExperimentConfig) -> tuple[Path, Path]:
    """Evaluate every configured method on every set and reference point."""
    _check_exact_guard(cfg)
    root = Path(cfg.output_dir)
    _ensure_dir(root)
    tasks = []
    for shape, m, n in _cells(cfg):
        for i, A in enumerate(load_suite(cfg, shape, m, n)):
            tasks.append((cfg, shape, m, n, i, A))
    result_rows, value_rows = [], []
    for per_set in _map_sets(cfg, tasks):
        for row, values in per_set:
            result_rows.append(row)
            value_rows.extend(values)
    results_path, values_path = root / "results.csv", root / "values.csv"
    _write_csv(results_path, RESULTS_COLUMNS, result_rows)
    _write_csv(values_path, VALUES_COLUMNS, value_rows)
    log.info("wrote %d method rows to %s", len(result_rows), results_path)
    return results_path, values_path


# ---------------------------------------------------------------- eval

def _collect_values(rows: list[dict]):
    """Group value rows into arrays keyed by (cell, set, method, budget, alpha, run)."""
    grouped: OrderedDict = OrderedDict()
    for row in rows:
        key = (row["shape"], row["m"], row["N"], row["r"], row["set_id"],
               row["method"], row["budget"], row["alpha"], row["run"])
        grouped.setdefault(key, []).append((int(row["solution"]), float(row["value"])))
    arrays = OrderedDict()
    for key, items in grouped.items():
        items.sort()
        arrays[key] = np.array([v for _, v in items])
    return arrays


def evaluate_values(rows: list[dict]) -> list[list]:
    """Metric rows (see ``METRICS_COLUMNS``) from parsed values.csv rows."""
    arrays = _collect_values(rows)
    truth = {}
    for key, values in arrays.items():
        if key[5] == Method.EXACT.value:
            truth[key[:5]] = values
    # (cell, method, budget, alpha) -> run -> list of (truth, approx)
    groups: OrderedDict = OrderedDict()
    for key, values in arrays.items():
        shape, m, n, r, set_id, method, budget, alpha, run = key
        if method == Method.EXACT.value:
            continue
        t = truth.get(key[:5])
        if t is None:
            raise MissingInputsError(
                f"no exact rows for set {set_id} ({shape}, m={m}, N={n}, r={r}); include 'exact' in methods"
            )
        if t.shape != values.shape:
            raise MissingInputsError(f"set {set_id}: {method} has {values.size} values, exact has {t.size}")
        groups.setdefault((shape, m, n, r, method, budget, alpha), OrderedDict()).setdefault(run, []).append((t, values))
    out = []
    for (shape, m, n, r, method, budget, alpha), runs in groups.items():
        cons, ident = [], []
        for pairs in runs.values():
            if len(pairs[0][0]) >= 2:
                cons.append(float(np.mean([consistency_rate(t, a) for t, a in pairs])))
            else:
                cons.append(1.0)
            ident.append(float(np.mean([correct_identification(t, a) for t, a in pairs])))
        c = aggregate_runs(cons, len(cons))
        i = aggregate_runs(ident, len(ident))
        out.append([shape, m, n, r, method, budget, alpha,
                    _fmt(c.mean), _fmt(c.stddev), _fmt(i.mean), _fmt(i.stddev), len(runs)])
    return out


def cmd_eval(cfg: ExperimentConfig) -> Path:
    """Score approximations against the exact rows; writes metrics.csv."""
    root = Path(cfg.output_dir)
    rows = _read_csv(root / "values.csv", VALUES_COLUMNS)
    metrics = evaluate_values(rows)
    path = root / "metrics.csv"
    _write_csv(path, METRICS_COLUMNS, metrics)
    log.info("wrote %d metric rows to %s", len(metrics), path)
    return path


# ---------------------------------------------------------------- bench

def bench_suite(cfg: ExperimentConfig, shape: PfShape, m: int, n: int, sets: list[SolutionSet],
                r_scalar: float, spec: MethodSpec, repeat: int) -> float:
    """Total wall time of one method over all sets of a suite."""
    r = reference_point(m, r_scalar)
    lam = None
    if spec.method in (Method.R2HVC, Method.R2_CONTRIBUTION):
        lam = directions_for(cfg, m, repeat, spec.budget)
    total = 0.0
    for i, A in enumerate(sets):
        total += estimate(spec, A, r, lam, mc_seed(cfg, shape, m, n, i, repeat, spec.budget)).wall_time
    return total


def cmd_bench(cfg: ExperimentConfig) -> Path:
    """Median (over ``n_runs`` repeats) of each method's total runtime per suite.

    Repeats are interleaved across methods so slow drifts of the machine
    spread evenly over them.
    """
    _check_exact_guard(cfg)
    root = Path(cfg.output_dir)
    _ensure_dir(root)
    rows = []
    for shape, m, n in _cells(cfg):
        sets = load_suite(cfg, shape, m, n)
        for r_scalar in cfg.ref_scalars:
            times = {spec: [] for spec in cfg.methods}
            for repeat in range(cfg.n_runs):
                for spec in cfg.methods:
                    times[spec].append(bench_suite(cfg, shape, m, n, sets, r_scalar, spec, repeat))
            for spec in cfg.methods:
                t = np.array(times[spec])
                rows.append([shape.value, m, n, _fmt(r_scalar), spec.label, spec.budget, _alpha_str(spec.alpha),
                             len(sets), cfg.n_runs, f"{np.median(t):.6f}", f"{t.min():.6f}"])
    path = root / "bench.csv"
    _write_csv(path, BENCH_COLUMNS, rows)
    return path


# ---------------------------------------------------------------- report

_SHAPE_ORDER = {s.value: i for i, s in enumerate(PfShape)}


def _num(x: str) -> float:
    return float(x) if x != "" else -1.0


def cmd_report(cfg: ExperimentConfig) -> list[Path]:
    """Per-figure CSV tables and a plain-text summary from metrics.csv (and bench.csv)."""
    root = Path(cfg.output_dir)
    metrics = _read_csv(root / "metrics.csv", METRICS_COLUMNS)
    if not metrics:
        raise MissingInputsError(f"{root / 'metrics.csv'} has no rows")
    out_dir = root / "report"
    _ensure_dir(out_dir)
    cols = ["mean_consistency", "identification_rate"]

    def table(name: str, fixed: list[str], axis: str, descending: bool = False) -> Path:
        def order(row):
            head = [_SHAPE_ORDER.get(row["shape"], 99)]
            for f in fixed[1:]:
                head.append(row[f] if f == "method" else _num(row[f]))
            return head + [-_num(row[axis]) if descending else _num(row[axis])]
        rows = sorted(metrics, key=order)
        path = out_dir / name
        _write_csv(path, fixed + [axis] + cols, ([row[c] for c in fixed + [axis] + cols] for row in rows))
        return path

    paths = [
        table("accuracy_vs_ref_point.csv", ["shape", "m", "N", "budget", "alpha", "method"], "r", descending=True),
        table("accuracy_vs_budget.csv", ["shape", "m", "N", "r", "alpha", "method"], "budget"),
        table("accuracy_vs_set_size.csv", ["shape", "m", "r", "budget", "alpha", "method"], "N"),
    ]
    bench_path = root / "bench.csv"
    if bench_path.exists():
        bench = _read_csv(bench_path, BENCH_COLUMNS)
        bench.sort(key=lambda b: (_SHAPE_ORDER.get(b["shape"], 99), int(b["m"]), int(b["N"]),
                                  float(b["r"]), b["method"], _num(b["alpha"]), int(b["budget"])))
        path = out_dir / "runtime_vs_budget.csv"
        keep = ["shape", "m", "N", "r", "method", "alpha", "budget", "median_total_s"]
        _write_csv(path, keep, ([b[c] for c in keep] for b in bench))
        paths.append(path)

    best: OrderedDict = OrderedDict()
    for row in sorted(metrics, key=lambda x: (_SHAPE_ORDER.get(x["shape"], 99), int(x["m"]), int(x["N"]),
                                              -float(x["r"]), int(x["budget"]))):
        key = (row["shape"], row["m"], row["N"], row["r"], row["budget"])
        score = (float(row["identification_rate"]), float(row["mean_consistency"]))
        if key not in best or score > best[key][0]:
            best[key] = (score, row["method"])
    lines = [f"{len(metrics)} metric rows; best method per setting (identification, consistency):"]
    for (shape, m, n, r, budget), ((ident, cons), method) in best.items():
        lines.append(f"  {shape:<20} m={m} N={n} r={r} budget={budget}: {method} ({ident:.3f}, {cons:.3f})")
    summary = out_dir / "summary.txt"
    try:
        summary.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {summary}: {exc}") from exc
    paths.append(summary)
    return paths
