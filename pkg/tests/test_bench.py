import csv
import math
from pathlib import Path

import numpy as np
import pytest

from amoc import bench
from amoc.bench import ExperimentConfig, config_from_mapping, emit_reports, run_experiment
from amoc.datasets import Dataset


def _csv_without_wall_time(path: Path):
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if "wall_time_s" in rows[0]:
        drop = rows[0].index("wall_time_s")
        rows = [r[:drop] + r[drop + 1:] for r in rows]
    return rows


@pytest.fixture(scope="module")
def iris_small():
    cfg = ExperimentConfig(dataset="iris", runs=4, seed=5)
    return run_experiment(cfg)


def test_record_order_and_seeds(iris_small):
    records, summaries = iris_small
    assert [(r.algorithm, r.run) for r in records] == [
        (a, i) for a in bench.ALGORITHMS for i in range(4)
    ]
    assert len({r.seed for r in records}) == len(records)
    assert [s.algorithm for s in summaries] == list(bench.ALGORITHMS)


def test_baselines_use_true_class_count(iris_small):
    records, _ = iris_small
    for r in records:
        if r.algorithm in ("kmeans", "kmeanspp", "fcm"):
            assert r.input_k == r.output_k == 3
        else:
            assert r.input_k == 12  # published k_max for iris
            assert 2 <= r.output_k <= 12
            assert r.trace is not None


def test_summary_means(iris_small):
    records, summaries = iris_small
    for s in summaries:
        recs = [r for r in records if r.algorithm == s.algorithm]
        for fld in ("ari", "rand", "silhouette", "silhouette_sq", "db", "cs"):
            assert getattr(s, fld) == pytest.approx(np.mean([getattr(r, fld) for r in recs]), abs=1e-9)
        assert s.mean_output_k == pytest.approx(np.mean([r.output_k for r in recs]), abs=1e-9)
        assert 0 <= s.error_min <= s.error_mean <= s.error_max <= 100
        assert s.excluded_geometric == 0


def test_single_run_summary_equals_record():
    records, summaries = run_experiment(ExperimentConfig(dataset="iris", algorithms=("amoc_kmpp",), runs=1))
    r, s = records[0], summaries[0]
    assert (s.mean_output_k, s.ari, s.rand, s.db, s.cs) == (r.output_k, r.ari, r.rand, r.db, r.cs)
    assert s.error_min == s.error_mean == s.error_max == r.error_rate


def test_parallel_matches_sequential():
    base = dict(dataset="synthetic3", algorithms=("kmeans", "amoc_rand"), runs=6, seed=2)
    seq, _ = run_experiment(ExperimentConfig(**base))
    par, _ = run_experiment(ExperimentConfig(**base, jobs=2))
    strip = lambda r: {c: getattr(r, c) for c in bench.RUN_COLUMNS if c != "wall_time_s"}
    assert [strip(r) for r in seq] == [strip(r) for r in par]


def test_reports(tmp_path, iris_small):
    records, summaries = iris_small
    written = emit_reports(records, summaries, tmp_path)
    names = {p.relative_to(tmp_path).as_posix() for p in written}
    assert {"runs.csv", "summary.csv", "summary.md", "k_histogram.csv", "error_by_run.csv",
            "paper_comparison.csv", "traces/amoc_kmpp_run003.csv"} <= names
    assert len(_csv_without_wall_time(tmp_path / "runs.csv")) == len(records) + 1
    hist = _csv_without_wall_time(tmp_path / "k_histogram.csv")
    assert len(hist) == len(records) + 1
    errs = _csv_without_wall_time(tmp_path / "error_by_run.csv")[1:]
    for row, rec in zip(errs, records):
        assert float(row[3]) == pytest.approx(rec.error_rate, rel=1e-5)
    trace = _csv_without_wall_time(tmp_path / "traces/amoc_rand_run000.csv")
    assert trace[0] == ["step", "round", "action", "k", "score", "src", "dst"]
    assert trace[1][2] == "init"


def test_summary_markdown_golden(iris_small):
    md = bench.summary_markdown(iris_small[1]).splitlines()
    assert md[0] == (
        "| Dataset | Algorithm | i/p k | o/p k | ARI | RI | SIL | DB | CS "
        "| Error mean | Error least | Error max |"
    )
    assert md[1] == "|---|---|---|---|---|---|---|---|---|---|---|---|"
    assert md[2].startswith("| iris | kmeans | 3 | 3 | ")
    assert len(md) == 2 + len(bench.ALGORITHMS)


def test_csv_formatting():
    assert bench.fmt(None) == ""
    assert bench.fmt(np.int64(7)) == "7"
    assert bench.fmt(1 / 3) == "0.333333"
    assert bench.fmt(17.6923077) == "17.6923"


def test_config_file(tmp_path):
    p = tmp_path / "exp.cfg"
    p.write_text("# iris sweep\ndataset = iris\nalgorithms = kmeans, fcm\nruns=3\nrestart-mode = random_restart\nkmax = 7\n")
    cfg = config_from_mapping(bench.load_config_file(p))
    assert cfg.dataset == "iris" and cfg.algorithms == ("kmeans", "fcm")
    assert cfg.runs == 3 and cfg.kmax == 7 and cfg.restart_mode == "random_restart"
    p.write_text("oops\n")
    with pytest.raises(ValueError, match="key=value"):
        bench.load_config_file(p)


@pytest.mark.parametrize(
    "values",
    [{"runs": "0"}, {"algorithms": "kmeans,dbscan"}, {"scaling": "minmax"}, {"criterion": "x"}, {"bogus": "1"}],
)
def test_config_rejects(values):
    with pytest.raises(ValueError):
        config_from_mapping(values)


def test_resolve_kmax():
    ds = Dataset("mine", np.zeros((50, 1)))
    assert bench.resolve_kmax(ExperimentConfig(), ds) == 7
    assert bench.resolve_kmax(ExperimentConfig(kmax=4), ds) == 4
    with pytest.raises(ValueError):
        bench.resolve_kmax(ExperimentConfig(kmax="paper"), ds)
    iris = Dataset("iris", np.zeros((150, 1)))
    assert bench.resolve_kmax(ExperimentConfig(), iris) == 12
    assert bench.resolve_kmax(ExperimentConfig(kmax="sqrt"), iris) == 12


def test_unlabelled_data_needs_k_and_internal_criterion():
    x = np.random.default_rng(0).normal(size=(30, 2))
    data = Dataset("nolabels", x)
    with pytest.raises(ValueError, match="no labels"):
        run_experiment(ExperimentConfig(dataset="nolabels", runs=1), data=data)
    records, summaries = run_experiment(
        ExperimentConfig(dataset="nolabels", runs=2, k=3, criterion="internal_silhouette"), data=data
    )
    assert all(r.rand is None and r.silhouette is not None for r in records)
    assert summaries[0].error_mean is None


def test_no_reference_rows(tmp_path):
    x = np.random.default_rng(0).normal(size=(30, 2))
    data = Dataset("custom", x, np.arange(30) % 2)
    records, summaries = run_experiment(ExperimentConfig(dataset="custom", runs=1), data=data)
    written = emit_reports(records, summaries, tmp_path)
    assert not (tmp_path / "paper_comparison.csv").exists()
    assert written and bench.reference.validate_against_paper(summaries) == []


def test_validate_report_covers_rows(iris_small):
    comps = bench.reference.validate_against_paper(iris_small[1])
    statuses = {c.status for c in comps}
    assert statuses <= {"pass", "fail", "excluded", "missing"}
    assert {(c.algorithm, c.status) for c in comps if c.algorithm == "acde"} == {("acde", "excluded")}
    wine_row = bench.reference.paper_row("wine", "amoc_kmpp")
    assert wine_row["output_k"] == 2
    for c in comps:
        if c.status in ("pass", "fail"):
            assert (abs(c.computed - c.paper) <= c.tolerance + 1e-12) == (c.status == "pass")
            assert not math.isnan(c.deviation)
