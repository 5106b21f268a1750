#!/usr/bin/env python3
"""Counter-growth experiment: per-insert work of the two trees as n grows.

The packed-node tree should spend word ops proportional to its height,
while the baseline's comparisons track B * log_B n.  Writes one CSV row
per (algo, n) and prints a small table with the fitted per-level
constants.

    python3 scripts/growth_study.py --ns 1000 10000 100000 --csv growth.csv
"""

import argparse
import math

from fusionsort.bench import BenchConfig, run, write_csv


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ns", type=int, nargs="+",
                    default=[1_000, 10_000, 100_000, 1_000_000])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--cap", type=int, default=7)
    ap.add_argument("--dist", default="uniform")
    ap.add_argument("--csv", metavar="PATH")
    args = ap.parse_args()

    degree = args.cap + 1
    rows = []
    print(f"{'algo':>7} {'n':>9} {'height':>6} {'word_ops/n':>11} "
          f"{'compares/n':>11} {'ratio':>8}")
    for n in args.ns:
        for algo in ("fusion", "btree"):
            cfg = BenchConfig(algo=algo, n=n, seed=args.seed, dist=args.dist,
                              cap=args.cap)
            rec = run(cfg)[0]
            rows.append(rec)
            if algo == "fusion":
                ratio = rec.word_ops / n / max(rec.height, 1)
                label = "wops/lvl"
            else:
                ratio = rec.key_compares / n / (degree * math.log(n, degree))
                label = "cmp/BlogB"
            print(f"{algo:>7} {n:>9} {rec.height:>6} "
                  f"{rec.word_ops / n:>11.1f} {rec.key_compares / n:>11.1f} "
                  f"{ratio:>8.3f}  ({label})")
    if args.csv:
        write_csv(args.csv, rows)
        print(f"wrote {len(rows)} rows to {args.csv}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
