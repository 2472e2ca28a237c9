import csv
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from hvc.cli import main
from hvc.experiment import METRICS_COLUMNS, VALUES_COLUMNS, evaluate_values

SMALL = {
    "shapes": ["linear_triangular", "convex_inverted"],
    "dims": [2, 3],
    "set_sizes": [6],
    "n_sets": 3,
    "ref_scalars": [-0.2],
    "methods": [
        {"name": "r2hvc", "budget": 50},
        {"name": "r2contrib", "budget": 50},
        {"name": "montecarlo", "budget": 50},
        {"name": "exact"},
    ],
    "n_runs": 2,
    "seed": 5,
}


def write_config(tmp_path, **over):
    cfg = dict(SMALL, output_dir=str(tmp_path / "out"), **over)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_desk_scale_gen_writes_180_sets(tmp_path):
    out = tmp_path / "desk"
    assert main(["gen", "--out", str(out)]) == 0
    assert len(list((out / "sets").rglob("*.csv"))) == 180
    assert len(list((out / "sets").rglob("*.json"))) == 180


def test_gen_is_byte_identical(tmp_path):
    cfg = write_config(tmp_path)
    assert main(["gen", "--config", cfg]) == 0
    first = {p: p.read_bytes() for p in (tmp_path / "out" / "sets").rglob("*") if p.is_file()}
    assert main(["gen", "--config", cfg]) == 0
    second = {p: p.read_bytes() for p in (tmp_path / "out" / "sets").rglob("*") if p.is_file()}
    assert first == second and len(first) == 2 * 2 * 3 * 2


def test_seed_override_changes_sets(tmp_path):
    cfg = write_config(tmp_path)
    main(["gen", "--config", cfg, "--out", str(tmp_path / "a")])
    main(["gen", "--config", cfg, "--out", str(tmp_path / "b"), "--seed", "6"])
    rel = "sets/linear_triangular/2d/6/set_0000.csv"
    assert (tmp_path / "a" / rel).read_bytes() != (tmp_path / "b" / rel).read_bytes()


def test_pipeline_row_counts(tmp_path):
    cfg = write_config(tmp_path)
    for cmd in ("gen", "run", "eval", "report"):
        assert main([cmd, "--config", cfg]) == 0
    out = tmp_path / "out"
    results = read_rows(out / "results.csv")
    # 12 sets x (1 exact + 2 runs x 3 methods)
    assert len(results) == 12 * 7
    assert len(read_rows(out / "values.csv")) == 12 * 7 * 6
    metrics = read_rows(out / "metrics.csv")
    assert list(metrics[0]) == METRICS_COLUMNS
    assert len(metrics) == 2 * 2 * 3
    assert all(row["n_runs"] == "2" for row in metrics)
    assert (out / "report" / "summary.txt").read_text().strip()


def test_perfect_approximator_scores_one(tmp_path):
    cfg = write_config(tmp_path)
    main(["gen", "--config", cfg])
    main(["run", "--config", cfg])
    rows = read_rows(tmp_path / "out" / "values.csv")
    truth = [r for r in rows if r["method"] == "exact"]
    copied = [dict(r, method="r2hvc", budget="1", run=str(run)) for run in range(3) for r in truth]
    metrics = evaluate_values(truth + copied)
    assert len(metrics) == 4
    for row in metrics:
        assert float(row[7]) == 1.0 and float(row[9]) == 1.0 and row[11] == 3


def test_shuffled_values_give_half_consistency(tmp_path):
    rng = np.random.default_rng(0)
    rows = []
    for set_id in range(200):
        truth = rng.random(12)
        for method, vals in (("exact", truth), ("montecarlo", rng.permutation(truth))):
            for j, v in enumerate(vals):
                rows.append(dict(zip(VALUES_COLUMNS, [set_id, "s", 3, 12, "-0.2", method, 0, "", 0, j, repr(float(v))])))
    (row,) = evaluate_values(rows)
    assert float(row[7]) == pytest.approx(0.5, abs=0.05)


def test_reference_sweep_report(tmp_path):
    cfg = write_config(tmp_path, dims=[2], ref_scalars=[0.0, -0.1, -0.2, -0.3, -0.4], n_runs=1)
    for cmd in ("gen", "run", "eval", "report"):
        assert main([cmd, "--config", cfg]) == 0
    table = read_rows(tmp_path / "out" / "report" / "accuracy_vs_ref_point.csv")
    for shape in SMALL["shapes"]:
        assert len([r for r in table if r["shape"] == shape]) == 15
    first = [r["r"] for r in table[:5]]
    assert first == ["0", "-0.1", "-0.2", "-0.3", "-0.4"] or first == ["0.0", "-0.1", "-0.2", "-0.3", "-0.4"]


def test_bench_writes_medians(tmp_path):
    cfg = write_config(tmp_path, dims=[2], n_runs=3)
    main(["gen", "--config", cfg])
    assert main(["bench", "--config", cfg]) == 0
    rows = read_rows(tmp_path / "out" / "bench.csv")
    assert len(rows) == 2 * 4
    assert all(float(r["median_total_s"]) >= float(r["min_total_s"]) >= 0.0 for r in rows)
    assert main(["eval", "--config", cfg]) == 5


def test_exit_code_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["gen", "--out", str(blocker / "sub")]) == 2


def test_exit_code_bad_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["gen", "--config", str(bad)]) == 2
    assert main(["gen", "--config", write_config(tmp_path, n_runs=0)]) == 2
    assert main(["gen", "--config", write_config(tmp_path, methods=[{"name": "r2hvc"}])]) == 2


def test_exit_code_missing_sets(tmp_path):
    assert main(["run", "--config", write_config(tmp_path)]) == 3


def test_exit_code_dimension_guard(tmp_path):
    cfg = write_config(tmp_path, dims=[9], n_sets=1)
    assert main(["gen", "--config", cfg]) == 0
    assert main(["run", "--config", cfg]) == 4


def test_exit_code_missing_truth(tmp_path):
    cfg = write_config(tmp_path, dims=[2], methods=[{"name": "r2hvc", "budget": 20}], n_runs=1)
    main(["gen", "--config", cfg])
    assert main(["run", "--config", cfg]) == 0
    assert main(["eval", "--config", cfg]) == 5
    assert main(["report", "--config", cfg]) == 5


def test_eval_rejects_unknown_columns(tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    (out / "values.csv").write_text(",".join(VALUES_COLUMNS + ["bogus"]) + "\n")
    assert main(["eval", "--out", str(out)]) == 5


def test_report_rejects_empty_metrics(tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    (out / "metrics.csv").write_text(",".join(METRICS_COLUMNS) + "\n")
    assert main(["report", "--out", str(out)]) == 5


def test_console_script(tmp_path):
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(sys.path))
    proc = subprocess.run([sys.executable, "-m", "hvc", "run", "--out", str(tmp_path)],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 3
    assert "hvc gen" in proc.stderr
