#!/usr/bin/env python3
"""Inspect the packed anatomy of a single node for a given key set.

Prints the debug dump (keys, relevant bits, sketches, packed word), the
compressed trie as DOT if asked, and traces one query through the
subtract/mask/floor-lg pipeline.

    python3 scripts/node_anatomy.py --keys 223 224 225 254 --width 16 --query 231
"""

import argparse

from fusionsort.fusion_node import FusionNode
from fusionsort.sketch import STRATEGIES
from fusionsort.trie import CompressedTrie


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--keys", type=int, nargs="+", required=True)
    ap.add_argument("--width", type=int, default=64)
    ap.add_argument("--query", type=int)
    ap.add_argument("--strategy", choices=STRATEGIES, default="exact")
    ap.add_argument("--dot", metavar="PATH", help="write the compressed trie")
    args = ap.parse_args()

    node = FusionNode(sorted(args.keys), width=args.width, cap=8,
                      strategy=args.strategy)
    print(node.dump())
    if args.query is not None:
        x = args.query
        wq = node.make_query_word(x)
        diff = node.node_word - wq
        masked = diff & node._top_mask
        print(f"\nquery {x} (sketch {node.sketch_of(x)}):")
        print(f"  query word     = {wq}")
        print(f"  difference     = {diff}")
        print(f"  masked         = {masked}")
        print(f"  sketches below = {node.parallel_compare(x)}")
        print(f"  shares prefix  = {node.node_trs(x)}")
        print(f"  rank           = {node.rank(x)}")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(CompressedTrie(sorted(args.keys), width=args.width).to_dot())
        print(f"\nwrote {args.dot}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
