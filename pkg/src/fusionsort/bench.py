"""Benchmark harness: input generation, verified sort runs, CSV records.

Every run is cross-checked against the built-in sort before a record is
emitted; an unverified run never produces output.  Counters are exact
and deterministic, wall time is whatever the clock says.
"""

from __future__ import annotations

import random
import struct
import time
from dataclasses import dataclass

from .btree import btree_sort_with_stats
from .counters import OpCounters
from .fusion_node import CAP_LIMIT, FusionNode
from .fusion_tree import fusion_sort_with_stats
from .sketch import EXACT, MULTIPLICATIVE, STRATEGIES
from .trie import CompressedTrie
from .wordops import WIDTHS

ALGOS = ("fusion", "btree", "mergesort", "stdsort")
DISTS = ("uniform", "sorted", "reverse", "clustered", "duplicates")

CSV_HEADER = "algo,n,seed,dist,width,cap,trial,wall_time_ns,word_ops,key_compares,height,splits"

KEY_FILE_MAGIC = b"WRDKEYS\x00"  # 8 bytes, followed by one width byte


class InvalidConfig(ValueError):
    """Benchmark configuration out of range."""


class VerificationFailed(RuntimeError):
    """A sorting run disagreed with the reference sort."""


class GoldenMismatch(RuntimeError):
    """The worked-example trace deviated from its known-good constants."""


@dataclass(frozen=True)
class BenchConfig:
    algo: str
    n: int
    seed: int = 0
    dist: str = "uniform"
    width: int = 64
    cap: int = 7
    trials: int = 1
    strategy: str = MULTIPLICATIVE

    def validate(self) -> "BenchConfig":
        if self.algo not in ALGOS:
            raise InvalidConfig(f"algo must be one of {ALGOS}, got {self.algo!r}")
        if self.dist not in DISTS:
            raise InvalidConfig(f"dist must be one of {DISTS}, got {self.dist!r}")
        if self.width not in WIDTHS:
            raise InvalidConfig(f"width must be one of {WIDTHS}, got {self.width!r}")
        if self.n < 0:
            raise InvalidConfig(f"n must be nonnegative, got {self.n}")
        if self.trials < 1:
            raise InvalidConfig(f"trials must be at least 1, got {self.trials}")
        if not 3 <= self.cap <= CAP_LIMIT:
            raise InvalidConfig(f"cap must be in [3, {CAP_LIMIT}], got {self.cap}")
        if self.strategy not in STRATEGIES:
            raise InvalidConfig(f"strategy must be one of {STRATEGIES}")
        return self


@dataclass
class BenchRecord:
    algo: str
    n: int
    seed: int
    dist: str
    width: int
    cap: int
    trial: int
    wall_time_ns: int
    word_ops: int
    key_compares: int
    height: int
    splits: int
    verified: bool

    def csv_row(self) -> str:
        return (f"{self.algo},{self.n},{self.seed},{self.dist},{self.width},"
                f"{self.cap},{self.trial},{self.wall_time_ns},{self.word_ops},"
                f"{self.key_compares},{self.height},{self.splits}")


# -- input generation ---------------------------------------------------------


def generate(dist: str, n: int, seed: int, width: int) -> list[int]:
    """Deterministic key sequence for (dist, n, seed, width)."""
    if dist not in DISTS:
        raise InvalidConfig(f"unknown distribution {dist!r}")
    if width not in WIDTHS:
        raise InvalidConfig(f"unsupported width {width!r}")
    if n < 0:
        raise InvalidConfig(f"n must be nonnegative, got {n}")
    rng = random.Random(f"{seed}:{dist}:{width}:{n}")  # str seeding is stable
    if dist == "uniform":
        return [rng.getrandbits(width) for _ in range(n)]
    if dist in ("sorted", "reverse"):
        if n > (1 << width):
            raise InvalidConfig(
                f"cannot draw {n} distinct {width}-bit keys")
        if width < 63:  # range() length must fit a C ssize_t for sample()
            vals = sorted(rng.sample(range(1 << width), n))
        else:
            seen: set[int] = set()
            while len(seen) < n:
                seen.add(rng.getrandbits(width))
            vals = sorted(seen)
        return vals if dist == "sorted" else vals[::-1]
    if dist == "clustered":
        wm = (1 << width) - 1
        jitter = max(1, width // 4)
        centers = [rng.getrandbits(width) for _ in range(max(1, n // 1000))]
        return [(rng.choice(centers) + rng.getrandbits(jitter)) & wm
                for _ in range(n)]
    # duplicates: draw from a deliberately small universe
    universe = max(1, -(-n // 10))
    pool = [rng.getrandbits(width) for _ in range(universe)]
    return [pool[rng.randrange(universe)] for _ in range(n)]


# -- baseline sorts -----------------------------------------------------------


def mergesort(values, counters: OpCounters | None = None) -> list[int]:
    """Bottom-up stable merge sort, one charged comparison per element pair."""
    src = list(values)
    n = len(src)
    if n < 2:
        return src
    dst = [0] * n
    run = 1
    while run < n:
        for lo in range(0, n, 2 * run):
            mid = min(lo + run, n)
            hi = min(lo + 2 * run, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if counters is not None:
                    counters.key_compares += 1
                if src[j] < src[i]:
                    dst[k] = src[j]
                    j += 1
                else:
                    dst[k] = src[i]
                    i += 1
                k += 1
            if i < mid:
                dst[k:hi] = src[i:mid]
            else:
                dst[k:hi] = src[j:hi]
        src, dst = dst, src
        run *= 2
    return src


# -- runs ---------------------------------------------------------------------


def _run_once(cfg: BenchConfig, data: list[int]):
    """One timed sort; returns (output, word_ops, key_compares, height, splits)."""
    if cfg.algo == "fusion":
        out, tree = fusion_sort_with_stats(
            data, width=cfg.width, cap=cfg.cap, strategy=cfg.strategy)
        c = tree.counters
        return out, c.word_ops, c.key_compares, tree.height, tree.splits
    if cfg.algo == "btree":
        out, tree = btree_sort_with_stats(data, width=cfg.width, cap=cfg.cap)
        c = tree.counters
        return out, c.word_ops, c.key_compares, tree.height, tree.splits
    if cfg.algo == "mergesort":
        c = OpCounters()
        out = mergesort(data, c)
        return out, 0, c.key_compares, 0, 0
    return sorted(data), 0, 0, 0, 0


def run(config: BenchConfig) -> list[BenchRecord]:
    """Execute config.trials timed, verified runs over one generated input."""
    cfg = config.validate()
    data = generate(cfg.dist, cfg.n, cfg.seed, cfg.width)
    expected = sorted(data)
    records = []
    for trial in range(cfg.trials):
        t0 = time.perf_counter_ns()
        out, word_ops, key_compares, height, splits = _run_once(cfg, data)
        dt = time.perf_counter_ns() - t0
        if out != expected:
            raise VerificationFailed(
                f"{cfg.algo} output disagrees with the reference sort "
                f"(n={cfg.n}, seed={cfg.seed}, dist={cfg.dist})")
        records.append(BenchRecord(
            cfg.algo, cfg.n, cfg.seed, cfg.dist, cfg.width, cfg.cap, trial,
            dt, word_ops, key_compares, height, splits, verified=True))
    return records


def write_csv(path: str, records, append: bool = True) -> None:
    """Append records, writing the header if the file is new/empty."""
    import os

    need_header = True
    if append and os.path.exists(path) and os.path.getsize(path) > 0:
        need_header = False
    with open(path, "a" if append else "w") as fh:
        if need_header:
            fh.write(CSV_HEADER + "\n")
        for rec in records:
            fh.write(rec.csv_row() + "\n")


# -- worked example ------------------------------------------------------------

_DEMO_KEYS = (0b11011111, 0b11100000, 0b11100001, 0b11111110)
_DEMO_QUERY = 0b11100111
_DEMO_SKETCHES = (0b011, 0b100, 0b101, 0b110)
_DEMO_NODE_WORD = 48350
_DEMO_QUERY_WORD = 21845
_DEMO_DIFFERENCE = 26505
_DEMO_SURVIVORS = 136
_DEMO_MSB = 7
_DEMO_ANSWER = 0b11100001


def demo_walkthrough(dot_path: str | None = None) -> str:
    """Step-by-step packed-comparison trace with known-good intermediates.

    Builds the four-key demo node (16-bit packing, 4-bit blocks), runs
    the subtract/mask/floor-lg pipeline for the demo query, and checks
    every intermediate value exactly.  Raises GoldenMismatch on any
    deviation.  Optionally writes the keys' compressed trie as DOT.
    """
    node = FusionNode(list(_DEMO_KEYS), width=16, cap=7, strategy=EXACT)
    x = _DEMO_QUERY
    lines = ["packed-comparison walkthrough", ""]
    lines.append(node.dump())
    lines.append("")

    checks = []
    sketches = tuple(node.sketches())
    checks.append(("sketches", sketches, _DEMO_SKETCHES))
    checks.append(("node word", node.node_word, _DEMO_NODE_WORD))
    skx = node.sketch_of(x)
    wq = node.make_query_word(x)
    checks.append(("query word", wq, _DEMO_QUERY_WORD))
    diff = node.node_word - wq
    checks.append(("difference", diff, _DEMO_DIFFERENCE))
    survivors = diff & node._top_mask
    checks.append(("masked survivors", survivors, _DEMO_SURVIVORS))
    top = survivors.bit_length() - 1
    checks.append(("survivor floor-lg", top, _DEMO_MSB))
    answer = node.node_trs(x)
    checks.append(("selected key", answer, _DEMO_ANSWER))

    lines.append(f"query x        = {x:08b} ({x}), sk(x) = {skx:03b}")
    lines.append(f"query word     = {wq} (0 sk(x) per block)")
    lines.append(f"difference     = {node.node_word} - {wq} = {diff}")
    lines.append(f"masked         = {survivors} (separator positions only)")
    lines.append(f"floor-lg       = b{top}  ->  block index {(node._word_bits - 1 - top) // node.block_size}")
    lines.append(f"selected key   = {answer:08b} ({answer})")
    lines.append("")

    bad = [f"{name}: got {got!r}, want {want!r}"
           for name, got, want in checks if got != want]
    for name, got, want in checks:
        mark = "ok" if got == want else "MISMATCH"
        lines.append(f"  [{mark}] {name}: {got!r} (expected {want!r})")
    text = "\n".join(lines) + "\n"
    if bad:
        raise GoldenMismatch("; ".join(bad))
    if dot_path is not None:
        trie = CompressedTrie(_DEMO_KEYS, width=8)
        with open(dot_path, "w") as fh:
            fh.write(trie.to_dot())
        text += f"\nwrote compressed trie to {dot_path}\n"
    return text


# -- key file I/O --------------------------------------------------------------


def write_keys(path: str, values, width: int, binary: bool = False) -> None:
    """Newline-delimited decimal, or little-endian fixed width with header."""
    if binary:
        if width not in WIDTHS:
            raise InvalidConfig(f"unsupported width {width!r}")
        fmt = {8: "<B", 16: "<H", 32: "<I", 64: "<Q"}[width]
        with open(path, "wb") as fh:
            fh.write(KEY_FILE_MAGIC)
            fh.write(bytes([width]))
            for v in values:
                fh.write(struct.pack(fmt, v))
    else:
        with open(path, "w") as fh:
            for v in values:
                fh.write(f"{v}\n")


def read_keys(path: str) -> tuple[list[int], int | None]:
    """Sniff the magic; returns (values, width from header or None for text)."""
    with open(path, "rb") as fh:
        head = fh.read(len(KEY_FILE_MAGIC))
        if head == KEY_FILE_MAGIC:
            width = fh.read(1)[0]
            if width not in WIDTHS:
                raise InvalidConfig(f"key file declares unsupported width {width}")
            fmt = {8: "<B", 16: "<H", 32: "<I", 64: "<Q"}[width]
            step = width // 8
            payload = fh.read()
            if len(payload) % step:
                raise InvalidConfig("truncated binary key file")
            vals = [struct.unpack_from(fmt, payload, off)[0]
                    for off in range(0, len(payload), step)]
            return vals, width
    with open(path, "r") as fh:
        vals = [int(line) for line in fh if line.strip()]
    return vals, None
