"""Command line entry point: ``amoc generate|run|score|validate-paper``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import bench, reference
from .datasets import builtin_spec, generate, load_csv, write_csv
from .numerics import RandomSource
from .validity import (
    adjusted_rand,
    as_partition,
    cs_measure,
    davies_bouldin,
    error_rate,
    rand_index,
    silhouette,
)


def _cmd_generate(args) -> int:
    data = generate(builtin_spec(args.spec), RandomSource(args.seed))
    write_csv(data, args.out)
    print(f"wrote {data.m} points ({data.n} features, {data.n_classes} classes) to {args.out}")
    return 0


def _cmd_run(args) -> int:
    values = bench.load_config_file(args.config) if args.config else {}
    overrides = {
        "dataset": args.dataset,
        "label_column": args.label_column,
        "algorithms": ",".join(args.algo) if args.algo else None,
        "runs": args.runs,
        "seed": args.seed,
        "out": args.out,
        "scaling": args.scaling,
        "kmax": args.kmax,
        "criterion": args.criterion,
        "restart_mode": args.restart_mode,
        "k": args.k,
        "jobs": args.jobs,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = bench.config_from_mapping(values)
    records, summaries = bench.run_experiment(cfg)
    out = Path(cfg.out or "results")
    bench.emit_reports(records, summaries, out)
    sys.stdout.write(bench.summary_markdown(summaries))
    print(f"reports written to {out}/")
    return 0


def _read_partition(path) -> np.ndarray:
    lines = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    try:
        return np.array([int(ln) for ln in lines if ln], dtype=np.int64)
    except ValueError as exc:
        raise ValueError(f"{path}: partition files hold one integer per line ({exc})") from None


def _cmd_score(args) -> int:
    pred = _read_partition(args.pred)
    truth = _read_partition(args.truth)
    if pred.size != truth.size:
        raise ValueError(f"partitions differ in length: {pred.size} vs {truth.size}")
    scores = {
        "rand": rand_index(pred, truth),
        "ari": adjusted_rand(pred, truth),
        "error_rate": error_rate(pred, truth),
    }
    if args.data:
        data = load_csv(args.data, label_column=args.label_column)
        if data.m != pred.size:
            raise ValueError(f"{args.data} has {data.m} rows but the partition has {pred.size}")
        if as_partition(pred).max() >= 1:
            scores["silhouette"] = silhouette(data, pred)
            scores["silhouette_sq"] = silhouette(data, pred, squared=True)
            scores["db"] = davies_bouldin(data, pred)
            scores["cs"] = cs_measure(data, pred)
    print("metric,value")
    for name, value in scores.items():
        print(f"{name},{bench.fmt(value)}")
    return 0


def _cmd_validate(args) -> int:
    summaries = bench.read_summary_csv(args.summary)
    comparisons = reference.validate_against_paper(summaries)
    if args.out:
        bench.write_comparison(comparisons, args.out)
    print(",".join(bench.COMPARISON_COLUMNS))
    for c in comparisons:
        row = [c.dataset, c.algorithm, c.field, c.computed, c.paper, c.deviation, c.tolerance, c.status]
        print(",".join(v if isinstance(v, str) else bench.fmt(v) for v in row))
    if comparisons:
        print(f"# {reference.pass_fraction(comparisons):.1%} of scored cells within tolerance",
              file=sys.stderr)
    else:
        print("# no reference rows for these datasets", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="amoc", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a built-in synthetic dataset as CSV")
    g.add_argument("--spec", type=int, required=True, choices=range(1, 6), metavar="{1..5}")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_generate)

    r = sub.add_parser("run", help="repeated-run experiment with reports")
    r.add_argument("--config", help="flat key=value file; flags override it")
    r.add_argument("--dataset", help="synthetic1..synthetic5, iris, wine, or a CSV path")
    r.add_argument("--label-column")
    r.add_argument("--algo", action="append", choices=bench.ALGORITHMS,
                   help="repeatable; default is every algorithm")
    r.add_argument("--runs", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--out")
    r.add_argument("--scaling", choices=("none", "zscore"))
    r.add_argument("--kmax", help="integer, 'sqrt' or 'paper'")
    r.add_argument("--criterion", choices=("reference_rand", "internal_silhouette"))
    r.add_argument("--restart-mode", choices=("merged_centroids", "random_restart"))
    r.add_argument("--k", type=int, help="cluster count for the k-means and FCM baselines")
    r.add_argument("--jobs", type=int)
    r.set_defaults(func=_cmd_run)

    s = sub.add_parser("score", help="validity indices for two partition files")
    s.add_argument("--pred", required=True)
    s.add_argument("--truth", required=True)
    s.add_argument("--data", help="CSV of the points, enables silhouette/DB/CS")
    s.add_argument("--label-column", help="column of --data to ignore as labels")
    s.set_defaults(func=_cmd_score)

    v = sub.add_parser("validate-paper", help="compare a summary.csv with published values")
    v.add_argument("--summary", required=True)
    v.add_argument("--out")
    v.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"amoc {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
