"""Cost of stopping column-pivoted QR after k steps versus running it to completion.

The first k pivots are identical either way, so the ID is unchanged.

    python scripts/early_stop_qr.py --rows 784 --cols 1000 --ranks 10,50,190,470
"""
import argparse
import time

import numpy as np

from interpdecomp.dense import qr_column_pivoted


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--rows", type=int, default=784)
    parser.add_argument("--cols", type=int, default=1000)
    parser.add_argument("--ranks", default="10,50,190,470")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    a = np.random.default_rng(args.seed).standard_normal((args.rows, args.cols))
    full, t_full = timed(lambda: qr_column_pivoted(a))
    print(f"full factorization ({full.steps} steps): {t_full:.3f}s")
    print(f"{'k':>6} {'time (s)':>10} {'fraction':>9} {'same pivots':>12}")
    for k in (int(t) for t in args.ranks.split(",")):
        part, t = timed(lambda: qr_column_pivoted(a, k))
        same = np.array_equal(part.perm[:k], full.perm[:k])
        print(f"{k:>6} {t:>10.3f} {t / t_full:>9.2f} {str(same):>12}")


if __name__ == "__main__":
    main()
