"""CSV serialization, rank-k summary tables and invariant checks for sweep records."""
import csv
import math
from collections import defaultdict
from pathlib import Path

import numpy as np
from scipy.stats import spearmanr

from .harness import ALGORITHMS, SUMMARY_RANK, ExperimentRecord, sort_records

CSV_FIELDS = ("dataset", "algorithm", "rank", "repetition", "seed",
              "relative_error", "wall_time_s", "max_abs_z", "status")


def _fmt_float(x):
    if x is None:
        return ""
    return f"{x:.17g}"


def _parse_float(s):
    return None if s == "" else float(s)


def emit_csv(records, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for r in sort_records(records):
            writer.writerow([r.dataset, r.algorithm, r.rank, r.repetition, r.seed,
                             _fmt_float(r.relative_error), _fmt_float(r.wall_time_s),
                             _fmt_float(r.max_abs_z), r.status])
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_FIELDS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        return [ExperimentRecord(
            dataset=row["dataset"], algorithm=row["algorithm"], rank=int(row["rank"]),
            repetition=int(row["repetition"]), seed=int(row["seed"]),
            relative_error=float(row["relative_error"]),
            wall_time_s=float(row["wall_time_s"]),
            max_abs_z=_parse_float(row["max_abs_z"]), status=row["status"],
        ) for row in reader]


def _mean(values):
    values = [v for v in values if v is not None and not math.isnan(v)]
    return float(np.mean(values)) if values else None


def aggregate(records, rank):
    """``{dataset: {algorithm: (mean error, mean time, mean max|Z|)}}`` at ``rank``."""
    groups = defaultdict(list)
    for r in records:
        if r.rank == rank and r.ok:
            groups[(r.dataset, r.algorithm)].append(r)
    out = defaultdict(dict)
    for (dataset, algorithm), rs in groups.items():
        out[dataset][algorithm] = (
            _mean([r.relative_error for r in rs]),
            _mean([r.wall_time_s for r in rs]),
            _mean([r.max_abs_z for r in rs]),
        )
    return out


def _table(title, datasets, agg, slot, algorithms, digits):
    header = ["Dataset"] + list(algorithms)
    rows = []
    for d in datasets:
        row = [d]
        for alg in algorithms:
            cell = agg.get(d, {}).get(alg)
            val = None if cell is None else cell[slot]
            row.append("absent" if val is None else f"{val:.{digits}f}")
        rows.append(row)
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    sep = "+".join("-" * (w + 2) for w in widths)
    fmt = lambda cells: " " + " | ".join(str(c).rjust(w) for c, w in zip(cells, widths)) + " "
    return "\n".join([title, sep, fmt(header), sep, *map(fmt, rows), sep])


def summary_text(records, rank=SUMMARY_RANK):
    datasets = sorted({r.dataset for r in records})
    ranks_by_dataset = defaultdict(set)
    for r in records:
        ranks_by_dataset[r.dataset].add(r.rank)
    notices = [f"notice: no records at rank {rank} for dataset {d}"
               for d in datasets if rank not in ranks_by_dataset[d]]
    present = [d for d in datasets if rank in ranks_by_dataset[d]]
    agg = aggregate(records, rank)
    id_algs = [a for a in ALGORITHMS if a != "svd_baseline"]
    parts = [
        _table(f"Max entries of Z, rank {rank}", present, agg, 2, id_algs, 3),
        _table(f"Relative error, rank {rank}", present, agg, 0, ALGORITHMS, 3),
        _table(f"Execution time (s), rank {rank}", present, agg, 1, ALGORITHMS, 3),
    ]
    return "\n\n".join(parts + (["\n".join(notices)] if notices else [])) + "\n"


def emit_summary_tables(records, path, rank=SUMMARY_RANK):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(summary_text(records, rank))
    return path


def verify_records(records, expected_count=None, tol=1e-10):
    """Re-check sweep invariants; returns a list of human-readable violations."""
    problems = []
    if expected_count is not None and len(records) != expected_count:
        problems.append(f"record count {len(records)} != expected {expected_count}")
    for r in records:
        if not r.ok:
            problems.append(f"failed cell {r.dataset}/{r.algorithm}/k={r.rank}/rep={r.repetition}: {r.status}")
            continue
        if r.relative_error < 0:
            problems.append(f"negative error in {r.dataset}/{r.algorithm}/k={r.rank}")
        if not math.isnan(r.wall_time_s) and r.wall_time_s <= 0:
            problems.append(f"non-positive time in {r.dataset}/{r.algorithm}/k={r.rank}")

    ranks = sorted({r.rank for r in records})
    by_rank = {k: aggregate(records, k) for k in ranks}
    for k, agg in by_rank.items():
        for dataset, algs in agg.items():
            if "svd_baseline" not in algs:
                continue
            floor = algs["svd_baseline"][0]
            for alg in ("det_id", "rand_id"):
                if alg in algs and algs[alg][0] < floor - tol:
                    problems.append(
                        f"{dataset}/{alg}/k={k}: error {algs[alg][0]:.6g} below SVD {floor:.6g}")

    det = defaultdict(list)
    for r in records:
        if r.algorithm == "det_id" and r.ok:
            det[r.dataset].append(r)
    for dataset, rs in det.items():
        rs.sort(key=lambda r: r.rank)
        for a, b in zip(rs, rs[1:]):
            if b.relative_error > a.relative_error + tol:
                problems.append(f"{dataset}/det_id: error rises from k={a.rank} "
                                f"({a.relative_error:.6g}) to k={b.rank} ({b.relative_error:.6g})")
        times = [r.wall_time_s for r in rs]
        if len(rs) >= 3 and not any(math.isnan(t) for t in times):
            rho = spearmanr([r.rank for r in rs], times).statistic
            if not rho > 0:
                problems.append(f"{dataset}/det_id: time not increasing in rank (spearman {rho:.3f})")
    return problems
