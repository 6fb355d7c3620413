"""Repeated-run experiments and their CSV / Markdown reports."""
from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from types import SimpleNamespace

import numpy as np

from . import reference
from .amoc import AmocResult, Criterion, RestartMode, TraceStep, amoc
from .clustering import FCM_FUZZIFIER, fuzzy_cmeans, kmeans
from .datasets import Dataset, default_kmax, resolve_dataset, zscore
from .numerics import RandomSource, pairwise_distances
from .validity import (
    adjusted_rand,
    cs_measure,
    davies_bouldin,
    error_rate,
    rand_index,
    silhouette,
)

log = logging.getLogger(__name__)

ALGORITHMS = ("kmeans", "kmeanspp", "fcm", "amoc_rand", "amoc_kmpp")


@dataclass
class ExperimentConfig:
    dataset: str = "synthetic1"
    label_column: str | None = None
    algorithms: tuple[str, ...] = ALGORITHMS
    runs: int = 40
    seed: int = 0
    k: int | None = None  # baselines; defaults to the number of true classes
    kmax: str | int | None = None  # int, "sqrt", "paper" or None (paper if known, else sqrt)
    scaling: str = "none"
    criterion: str = Criterion.REFERENCE_RAND.value
    restart_mode: str = RestartMode.MERGED_CENTROIDS.value
    fuzzifier: float = FCM_FUZZIFIER
    jobs: int = 1
    out: str | None = None

    def validate(self) -> None:
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithm(s): {', '.join(sorted(unknown))}")
        if self.scaling not in ("none", "zscore"):
            raise ValueError(f"scaling must be 'none' or 'zscore', got {self.scaling!r}")
        Criterion(self.criterion)
        RestartMode(self.restart_mode)
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


@dataclass
class RunRecord:
    dataset: str
    algorithm: str
    run: int
    seed: int
    input_k: int
    output_k: int
    ari: float | None = None
    rand: float | None = None
    silhouette: float | None = None
    silhouette_sq: float | None = None
    db: float | None = None
    cs: float | None = None
    error_rate: float | None = None
    wall_time_s: float = 0.0
    trace: list[TraceStep] | None = field(default=None, repr=False)


@dataclass
class SummaryRow:
    dataset: str
    algorithm: str
    runs: int
    input_k: int
    mean_output_k: float
    ari: float | None
    rand: float | None
    silhouette: float | None
    silhouette_sq: float | None
    db: float | None
    cs: float | None
    error_mean: float | None
    error_min: float | None
    error_max: float | None
    excluded_geometric: int = 0


RUN_COLUMNS = [f.name for f in fields(RunRecord) if f.name != "trace"]
SUMMARY_COLUMNS = [f.name for f in fields(SummaryRow)]
SUMMARY_MD_HEADER = (
    "| Dataset | Algorithm | i/p k | o/p k | ARI | RI | SIL | DB | CS "
    "| Error mean | Error least | Error max |"
)


def load_config_file(path) -> dict:
    """Parse flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def config_from_mapping(values: dict) -> ExperimentConfig:
    cfg = ExperimentConfig()
    known = {f.name for f in fields(ExperimentConfig)}
    for key, value in values.items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        if value is None:
            continue
        if key == "algorithms":
            if isinstance(value, str):
                value = tuple(a.strip() for a in value.split(",") if a.strip())
            else:
                value = tuple(value)
        elif key in ("runs", "seed", "jobs") or (key == "k" and value != ""):
            value = int(value)
        elif key == "fuzzifier":
            value = float(value)
        elif key == "kmax" and str(value).isdigit():
            value = int(value)
        setattr(cfg, key, value)
    cfg.validate()
    return cfg


def resolve_kmax(cfg: ExperimentConfig, data: Dataset) -> int:
    if isinstance(cfg.kmax, int):
        return cfg.kmax
    if cfg.kmax in (None, "paper"):
        printed = reference.paper_kmax(data.name)
        if printed is not None:
            return printed
        if cfg.kmax == "paper":
            raise ValueError(f"no published k_max for dataset {data.name!r}")
    elif cfg.kmax != "sqrt":
        raise ValueError(f"kmax must be an integer, 'sqrt' or 'paper', got {cfg.kmax!r}")
    return default_kmax(data.m)


def prepare_dataset(cfg: ExperimentConfig) -> Dataset:
    data = resolve_dataset(cfg.dataset, cfg.label_column, seed=cfg.seed)
    return zscore(data) if cfg.scaling == "zscore" else data


def _metrics(data: Dataset, labels, centroids, distances):
    out = {}
    if data.labels is not None:
        out["ari"] = adjusted_rand(labels, data.labels)
        out["rand"] = rand_index(labels, data.labels)
        out["error_rate"] = error_rate(labels, data.labels)
    if centroids.shape[0] >= 2:
        out["silhouette"] = silhouette(None, labels, distances=distances)
        out["silhouette_sq"] = silhouette(None, labels, distances=distances**2)
        result = SimpleNamespace(assignments=labels, centroids=centroids)
        try:
            out["db"] = davies_bouldin(data, result)
            out["cs"] = cs_measure(data, result, distances=distances)
        except ValueError as exc:  # coincident centroids
            log.warning("skipping DB/CS: %s", exc)
    return out


def _execute(task):
    data, cfg, algorithm, run, k_base, k_max, distances = task
    seed = RandomSource.derive_seed(cfg.seed, algorithm, run)
    rng = RandomSource(seed)
    t0 = time.perf_counter()
    trace = None
    if algorithm in ("kmeans", "kmeanspp"):
        res = kmeans(data, k_base, rng, seeding="kmeanspp" if algorithm == "kmeanspp" else "random")
        input_k = k_base
    elif algorithm == "fcm":
        res = fuzzy_cmeans(data, k_base, rng, fuzzifier=cfg.fuzzifier).hardened
        input_k = k_base
    else:
        out: AmocResult = amoc(
            data,
            rng,
            k_max=k_max,
            seeding="kmeanspp" if algorithm == "amoc_kmpp" else "random",
            criterion=cfg.criterion,
            restart=cfg.restart_mode,
        )
        res, trace, input_k = out.result, out.trace, k_max
    wall = time.perf_counter() - t0
    metrics = _metrics(data, res.assignments, res.centroids, distances)
    return RunRecord(
        dataset=data.name,
        algorithm=algorithm,
        run=run,
        seed=seed,
        input_k=input_k,
        output_k=res.k,
        wall_time_s=wall,
        trace=trace,
        **metrics,
    )


def _mean(values):
    vals = [v for v in values if v is not None]
    return math.fsum(vals) / len(vals) if vals else None


def summarize(records: list[RunRecord]) -> list[SummaryRow]:
    rows = []
    groups: dict[tuple[str, str], list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.dataset, r.algorithm), []).append(r)
    for (dataset, algorithm), recs in groups.items():
        errors = [r.error_rate for r in recs if r.error_rate is not None]
        rows.append(
            SummaryRow(
                dataset=dataset,
                algorithm=algorithm,
                runs=len(recs),
                input_k=recs[0].input_k,
                mean_output_k=_mean([r.output_k for r in recs]),
                ari=_mean([r.ari for r in recs]),
                rand=_mean([r.rand for r in recs]),
                silhouette=_mean([r.silhouette for r in recs]),
                silhouette_sq=_mean([r.silhouette_sq for r in recs]),
                db=_mean([r.db for r in recs]),
                cs=_mean([r.cs for r in recs]),
                error_mean=_mean(errors),
                error_min=min(errors) if errors else None,
                error_max=max(errors) if errors else None,
                excluded_geometric=sum(r.db is None or r.cs is None for r in recs),
            )
        )
    return rows


def run_experiment(cfg: ExperimentConfig, data: Dataset | None = None):
    """Run every configured algorithm ``cfg.runs`` times.

    Returns ``(records, summaries)``; records are ordered by algorithm (in
    config order) and run index regardless of ``cfg.jobs``.
    """
    cfg.validate()
    if data is None:
        data = prepare_dataset(cfg)
    needs_labels = cfg.k is None or (
        Criterion(cfg.criterion) is Criterion.REFERENCE_RAND
        and any(a.startswith("amoc") for a in cfg.algorithms)
    )
    if needs_labels and data.labels is None:
        raise ValueError(
            f"dataset {data.name!r} has no labels: pass k for the baselines and "
            "use the internal_silhouette criterion for AMOC"
        )
    k_base = cfg.k if cfg.k is not None else data.n_classes
    k_max = resolve_kmax(cfg, data)
    distances = pairwise_distances(data.points)
    tasks = [
        (data, cfg, algorithm, run, k_base, k_max, distances)
        for algorithm in cfg.algorithms
        for run in range(cfg.runs)
    ]
    log.info("running %d tasks on %s (k=%s, k_max=%s)", len(tasks), data.name, k_base, k_max)
    if cfg.jobs == 1:
        records = [_execute(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = list(pool.map(_execute, tasks, chunksize=4))
    return records, summarize(records)


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".6g")


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])


def summary_markdown(summaries: list[SummaryRow]) -> str:
    lines = [SUMMARY_MD_HEADER, "|" + "---|" * (SUMMARY_MD_HEADER.count("|") - 1)]
    for s in summaries:
        cells = [
            s.dataset, s.algorithm, fmt(s.input_k), fmt(s.mean_output_k), fmt(s.ari),
            fmt(s.rand), fmt(s.silhouette), fmt(s.db), fmt(s.cs), fmt(s.error_mean),
            fmt(s.error_min), fmt(s.error_max),
        ]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


COMPARISON_COLUMNS = ["dataset", "algorithm", "field", "computed", "paper", "deviation", "tolerance", "status"]


def write_comparison(comparisons, path) -> None:
    _write_csv(
        Path(path),
        COMPARISON_COLUMNS,
        (
            [c.dataset, c.algorithm, c.field, c.computed, c.paper, c.deviation, c.tolerance, c.status]
            for c in comparisons
        ),
    )


def emit_reports(records: list[RunRecord], summaries: list[SummaryRow], out_dir) -> list[Path]:
    if not records:
        raise ValueError("nothing to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def target(name):
        p = out / name
        written.append(p)
        return p

    _write_csv(target("runs.csv"), RUN_COLUMNS, ([getattr(r, c) for c in RUN_COLUMNS] for r in records))
    _write_csv(
        target("summary.csv"), SUMMARY_COLUMNS, ([getattr(s, c) for c in SUMMARY_COLUMNS] for s in summaries)
    )
    target("summary.md").write_text(summary_markdown(summaries), encoding="utf-8")
    _write_csv(
        target("k_histogram.csv"),
        ["dataset", "algorithm", "run", "output_k"],
        ([r.dataset, r.algorithm, r.run, r.output_k] for r in records),
    )
    _write_csv(
        target("error_by_run.csv"),
        ["dataset", "algorithm", "run", "error_rate"],
        ([r.dataset, r.algorithm, r.run, r.error_rate] for r in records),
    )
    traced = [r for r in records if r.trace is not None]
    if traced:
        (out / "traces").mkdir(exist_ok=True)
    for r in traced:
        _write_csv(
            target(f"traces/{r.algorithm}_run{r.run:03d}.csv"),
            ["step", "round", "action", "k", "score", "src", "dst"],
            ([i, s.round, s.action, s.k, s.score, s.src, s.dst] for i, s in enumerate(r.trace)),
        )
    comparisons = reference.validate_against_paper(summaries)
    if comparisons:
        write_comparison(comparisons, target("paper_comparison.csv"))
    return written


def read_summary_csv(path) -> list[dict]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
