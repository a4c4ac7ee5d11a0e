"""
Command line entry point ``bench``.

    bench run --datasets gaussian,uniform --ranks default --reps 10 --seed 0 --out results
    bench report --in results --rank 190
    bench verify --in results

Exit codes: 0 success, 1 failed cells or violated invariants, 2 configuration error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path

from ..data import (DATASET_NAMES, GENERATOR_KINDS, Generator, data_dir, is_available,
                    named_dataset, resolve)
from .charts import emit_charts
from .harness import PAPER_RANKS, SUMMARY_RANK, RunConfig, cell_seed, run_sweep
from .report import emit_csv, emit_summary_tables, read_csv, summary_text, verify_records

log = logging.getLogger("interpdecomp.bench")

RESULTS_CSV = "results.csv"
MANIFEST = "manifest.json"
SUMMARY = "summary.txt"
CHARTS = "charts"


class ConfigError(Exception):
    pass


def parse_ranks(text):
    if text == "default":
        return PAPER_RANKS
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"bad rank list {text!r}")


def select_datasets(text, seed, root=None):
    root = Path(root) if root is not None else data_dir()
    explicit = text != "all"
    names = [t.strip() for t in text.split(",") if t.strip()] if explicit else list(DATASET_NAMES)
    specs = []
    for name in names:
        if name not in DATASET_NAMES:
            raise ConfigError(f"unknown dataset {name!r}; choose from {', '.join(DATASET_NAMES)}")
        data_seed = cell_seed(seed, name, "generate", 0, 0) if name in GENERATOR_KINDS else 0
        spec = named_dataset(name, root, seed=data_seed)
        if not is_available(spec):
            if explicit:
                raise ConfigError(f"dataset {name}: file {spec.source.path} not found "
                                  f"(set ID_DATA_DIR)")
            log.warning("dataset %s unavailable (%s missing); skipping", name, spec.source.path)
            continue
        specs.append(spec)
    if not specs:
        raise ConfigError("no datasets selected")
    return specs


def _describe(spec):
    src = spec.source
    if isinstance(src, Generator):
        return {"name": spec.name, "generator": src.kind, "rows": src.rows,
                "cols": src.cols, "seed": src.seed}
    return {"name": spec.name, "path": str(src.path), "rank_limit": spec.rank_limit}


def write_report(records, out, rank=SUMMARY_RANK):
    emit_summary_tables(records, out / SUMMARY, rank)
    emit_charts(records, out / CHARTS)


def cmd_run(args):
    specs = select_datasets(args.datasets, args.seed)
    if args.oversampling < 0:
        raise ConfigError("oversampling must be >= 0")
    try:
        config = RunConfig(datasets=specs, ranks=parse_ranks(args.ranks), repetitions=args.reps,
                           base_seed=args.seed, out_dir=args.out, oversampling=args.oversampling,
                           warmup=args.warmup, skip_timing=args.skip_timing, workers=args.workers)
    except ValueError as exc:
        raise ConfigError(str(exc))
    matrices = {}
    for spec in specs:
        try:
            matrices[spec.name] = resolve(spec)
        except (ValueError, OSError) as exc:
            raise ConfigError(f"dataset {spec.name}: {exc}")

    records = run_sweep(config, matrices)
    out = Path(args.out)
    emit_csv(records, out / RESULTS_CSV)
    manifest = {
        "datasets": [_describe(s) for s in specs],
        "ranks": list(config.ranks),
        "repetitions": config.repetitions,
        "base_seed": config.base_seed,
        "oversampling": config.oversampling,
        "warmup": config.warmup,
        "skip_timing": config.skip_timing,
        "expected_records": len(records),
        "skipped": [list(c) for c in config.skipped],
    }
    (out / MANIFEST).write_text(json.dumps(manifest, indent=2) + "\n")
    write_report(records, out)
    failed = [r for r in records if not r.ok]
    print(f"{len(records)} records, {len(failed)} failed, {len(config.skipped)} cells skipped; "
          f"results in {out}")
    return 1 if failed else 0


def _load(directory):
    path = Path(directory) / RESULTS_CSV
    if not path.is_file():
        raise ConfigError(f"{path} not found")
    return read_csv(path)


def cmd_report(args):
    records = _load(args.inp)
    out = Path(args.inp)
    write_report(records, out, args.rank)
    print(summary_text(records, args.rank), end="")
    return 0


def cmd_verify(args):
    records = _load(args.inp)
    manifest_path = Path(args.inp) / MANIFEST
    expected = None
    if manifest_path.is_file():
        expected = json.loads(manifest_path.read_text()).get("expected_records")
    problems = verify_records(records, expected_count=expected)
    for p in problems:
        print(f"FAIL {p}")
    print(f"{len(records)} records checked, {len(problems)} problems")
    return 1 if problems else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="bench", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a rank sweep")
    run.add_argument("--datasets", default="all", help="comma-separated names or 'all'")
    run.add_argument("--ranks", default="default", help="comma-separated ranks or 'default'")
    run.add_argument("--reps", type=int, default=10, help="repetitions per randomized cell")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--oversampling", type=float, default=0.2)
    run.add_argument("--out", default="results")
    run.add_argument("--warmup", type=int, default=0, help="untimed calls before each timed call")
    run.add_argument("--skip-timing", action="store_true")
    run.add_argument("--workers", type=int, default=1,
                     help="worker threads (only used with --skip-timing)")
    run.set_defaults(func=cmd_run)

    report = sub.add_parser("report", help="summary tables and charts from a results dir")
    report.add_argument("--in", dest="inp", required=True)
    report.add_argument("--rank", type=int, default=SUMMARY_RANK)
    report.set_defaults(func=cmd_report)

    verify = sub.add_parser("verify", help="re-check invariants on emitted results")
    verify.add_argument("--in", dest="inp", required=True)
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
