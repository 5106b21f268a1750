"""Command-line front end for the sorting benchmark.

    bench --algo fusion --n 100000 --seed 1 --dist uniform --width 64 \
          --cap 7 --trials 3 --csv out.csv

    bench --demo [--dot trie.dot]      # worked-example trace, exits
                                       # nonzero on any deviation
"""

from __future__ import annotations

import argparse
import statistics
import sys

from .bench import (
    ALGOS,
    CSV_HEADER,
    DISTS,
    BenchConfig,
    GoldenMismatch,
    InvalidConfig,
    VerificationFailed,
    demo_walkthrough,
    generate,
    read_keys,
    run,
    write_csv,
    write_keys,
)
from .btree import btree_sort
from .counters import OpCounters
from .fusion_tree import fusion_sort
from .bench import mergesort
from .sketch import STRATEGIES
from .wordops import WIDTHS


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bench",
        description="Verified integer-sorting benchmark with word-op counting.",
    )
    p.add_argument("--algo", choices=ALGOS, default="fusion")
    p.add_argument("--n", type=int, default=1000, help="number of keys to generate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", choices=DISTS, default="uniform")
    p.add_argument("--width", type=int, choices=WIDTHS, default=64)
    p.add_argument("--cap", type=int, default=7, help="max keys per tree node")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--strategy", choices=STRATEGIES, default="multiplicative",
                   help="sketch strategy for the fusion tree")
    p.add_argument("--csv", metavar="PATH", help="append one CSV row per trial")
    p.add_argument("--demo", action="store_true",
                   help="print the worked-example trace and exit")
    p.add_argument("--dot", metavar="PATH",
                   help="with --demo: write the demo compressed trie as DOT")
    p.add_argument("--in", dest="infile", metavar="PATH",
                   help="read keys from a file instead of generating "
                        "(decimal lines, or binary with the key-file header)")
    p.add_argument("--out", metavar="PATH", help="write the sorted keys")
    p.add_argument("--out-binary", action="store_true",
                   help="write --out in the binary key-file format")
    return p


def _sort_file(args) -> int:
    values, file_width = read_keys(args.infile)
    width = file_width or args.width
    sorters = {
        "fusion": lambda v: fusion_sort(v, width=width, cap=args.cap,
                                        strategy=args.strategy),
        "btree": lambda v: btree_sort(v, width=width, cap=args.cap),
        "mergesort": lambda v: mergesort(v, OpCounters()),
        "stdsort": sorted,
    }
    out = sorters[args.algo](values)
    if out != sorted(values):
        raise VerificationFailed("file sort disagrees with the reference sort")
    if args.out:
        write_keys(args.out, out, width, binary=args.out_binary)
        print(f"sorted {len(out)} keys ({args.algo}, width {width}) -> {args.out}")
    else:
        for v in out:
            print(v)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.demo:
        try:
            text = demo_walkthrough(dot_path=args.dot)
        except GoldenMismatch as exc:
            print(f"worked example DEVIATED: {exc}", file=sys.stderr)
            return 2
        print(text, end="")
        return 0

    try:
        if args.infile:
            return _sort_file(args)

        cfg = BenchConfig(algo=args.algo, n=args.n, seed=args.seed,
                          dist=args.dist, width=args.width, cap=args.cap,
                          trials=args.trials, strategy=args.strategy)
        records = run(cfg)
    except (InvalidConfig, ValueError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    except VerificationFailed as exc:
        print(f"verification FAILED: {exc}", file=sys.stderr)
        return 1

    if args.csv:
        write_csv(args.csv, records)
    if args.out:
        data = generate(cfg.dist, cfg.n, cfg.seed, cfg.width)
        write_keys(args.out, sorted(data), cfg.width, binary=args.out_binary)

    median_ns = statistics.median(r.wall_time_ns for r in records)
    first = records[0]
    print(CSV_HEADER)
    for r in records:
        print(r.csv_row())
    print(f"# median wall time: {median_ns / 1e6:.3f} ms over {len(records)} trial(s); "
          f"word_ops={first.word_ops} key_compares={first.key_compares} "
          f"height={first.height} splits={first.splits} verified={first.verified}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
