"""Rank-190 error / time / max|Z| tables for every dataset that is available locally.

    python scripts/rank190_tables.py --reps 10 --out results/rank190
"""
import argparse
import logging
from pathlib import Path

from interpdecomp.bench import RunConfig, emit_csv, emit_summary_tables, run_sweep
from interpdecomp.bench.cli import select_datasets
from interpdecomp.bench.report import summary_text


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--datasets", default="all")
    parser.add_argument("--rank", type=int, default=190)
    parser.add_argument("--reps", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="results/rank190")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO)

    config = RunConfig(datasets=select_datasets(args.datasets, args.seed), ranks=(args.rank,),
                       repetitions=args.reps, base_seed=args.seed, out_dir=args.out)
    records = run_sweep(config)
    out = Path(args.out)
    emit_csv(records, out / "results.csv")
    emit_summary_tables(records, out / "summary.txt", args.rank)
    print(summary_text(records, args.rank), end="")


if __name__ == "__main__":
    main()
