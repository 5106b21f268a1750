import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionsort.fusion_node import NodeError
from fusionsort.fusion_tree import FusionTree, fusion_sort, fusion_sort_with_stats
from fusionsort.trie import DuplicateKey


def check_tree(tree: FusionTree):
    """Structural sweep: equal leaf depth, fill bounds, order, sizes."""
    if tree.root is None:
        assert tree.size == 0 and tree.height == 0
        return

    depths = set()

    def walk(node, depth, lo, hi):
        keys = node.keys
        assert keys == sorted(keys)
        assert 1 <= len(keys) <= tree.cap
        if node is not tree.root:
            assert len(keys) >= (tree.cap + 1) // 2 - 1
        if lo is not None:
            assert keys[0] > lo
        if hi is not None:
            assert keys[-1] < hi
        total = len(keys)
        if node.children is None:
            depths.add(depth)
        else:
            assert len(node.children) == len(keys) + 1
            bounds = [lo] + keys + [hi]
            for i, ch in enumerate(node.children):
                total += walk(ch, depth + 1, bounds[i], bounds[i + 1])
        assert node.subtree_size == total
        return total

    n = walk(tree.root, 1, None, None)
    assert n == tree.size
    assert len(depths) == 1
    assert depths.pop() == tree.height


def test_insert_single():
    t = FusionTree(width=16)
    t.insert(5)
    assert t.size == 1 and t.height == 1
    assert t.in_order() == [5]
    check_tree(t)


def test_insert_cap_plus_one_splits_root():
    t = FusionTree(width=16, cap=7)
    for k in range(1, 9):
        t.insert(k * 10)
    assert t.height == 2
    assert len(t.root.keys) == 1
    assert t.root.keys[0] == 40  # median of the first seven promoted
    assert [len(c.keys) for c in t.root.children] == [3, 4]
    assert t.in_order() == [k * 10 for k in range(1, 9)]
    check_tree(t)


def test_insert_duplicate_raises():
    t = FusionTree(width=16)
    t.insert(3)
    with pytest.raises(DuplicateKey):
        t.insert(3)
    for k in (1, 2, 4, 5, 6, 7, 9):
        t.insert(k)
    for k in (1, 3, 9):  # duplicates at any depth
        with pytest.raises(DuplicateKey):
            t.insert(k)
    check_tree(t)


def test_insert_random_invariants():
    rng = random.Random(61)
    for cap in (3, 4, 5, 7):
        t = FusionTree(width=32, cap=cap)
        keys = rng.sample(range(1 << 32), 2000)
        for k in keys:
            t.insert(k)
        assert t.in_order() == sorted(keys)
        check_tree(t)


def test_search():
    rng = random.Random(67)
    t = FusionTree(width=64)
    keys = [rng.getrandbits(64) for _ in range(1500)]
    keys = list(dict.fromkeys(keys))
    for k in keys:
        t.insert(k)
    for k in rng.sample(keys, 300):
        assert t.search(k)
        assert k in t
    for _ in range(300):
        x = rng.getrandbits(64)
        assert t.search(x) == (x in set(keys))
    assert not FusionTree().search(1)


def test_search_word_ops_bounded_by_height():
    # per-visit cost: <= 40 word ops on the multiplicative route, up to
    # ~80 for the rare per-bit-extraction fallback nodes
    rng = random.Random(71)
    t = FusionTree(width=64, cap=7)
    for _ in range(3000):
        try:
            t.insert(rng.getrandbits(64))
        except DuplicateKey:
            pass
    for _ in range(200):
        before = t.counters.word_ops
        t.search(rng.getrandbits(64))
        used = t.counters.word_ops - before
        assert used <= 80 * t.height

    # a tree whose every node stays on the constant-op route meets the
    # tight budget: keys below 2**8 keep each node's bit span within the
    # t=7 block budget, so the multiplier search never falls back
    t2 = FusionTree(width=64, cap=7)
    for k in rng.sample(range(256), 40):
        t2.insert(k)
    for x in range(256):
        before = t2.counters.word_ops
        t2.search(x)
        used = t2.counters.word_ops - before
        assert used <= 40 * t2.height


def test_rank_oracle():
    rng = random.Random(73)
    keys = rng.sample(range(1 << 32), 3000)
    t = FusionTree(width=32, cap=5)
    for k in keys:
        t.insert(k)
    ks = sorted(keys)
    assert t.rank(ks[-1]) == len(ks)
    assert t.rank(0) == (1 if ks[0] == 0 else 0)
    for _ in range(500):
        x = rng.randrange(1 << 32)
        assert t.rank(x) == sum(1 for k in ks if k <= x)
    for k in rng.sample(keys, 200):
        want = ks.index(k) + 1
        assert t.rank(k) == want


def test_predecessor_successor():
    t = FusionTree(width=16)
    for k in [223, 224, 225, 254]:
        t.insert(k)
    assert t.predecessor(231) == 225
    assert t.successor(231) == 254
    assert t.predecessor(222) is None
    assert t.successor(255) is None
    assert t.predecessor(224) == 224
    assert t.successor(224) == 224

    rng = random.Random(79)
    keys = sorted(rng.sample(range(1 << 16), 800))
    t2 = FusionTree(width=16, cap=4)
    for k in keys:
        t2.insert(k)
    import bisect
    for _ in range(400):
        x = rng.randrange(1 << 16)
        i = bisect.bisect_right(keys, x)
        assert t2.predecessor(x) == (keys[i - 1] if i else None)
        j = bisect.bisect_left(keys, x)
        assert t2.successor(x) == (keys[j] if j < len(keys) else None)


def test_in_order_empty():
    assert FusionTree().in_order() == []


def test_in_order_small_mixed_set():
    vals = [100, 200, 20, 60, 80, 5, 10, 15, 30, 40, 75, 85, 90, 95]
    t = FusionTree(width=16, cap=3)
    for v in vals:
        t.insert(v)
    assert t.in_order() == sorted(vals)
    check_tree(t)
    # the sorter restores duplicates that the tree itself cannot hold
    assert fusion_sort(vals + [60], width=16, cap=3) == sorted(vals + [60])


def test_concurrent_reads_between_mutations():
    from concurrent.futures import ThreadPoolExecutor

    rng = random.Random(103)
    keys = rng.sample(range(1 << 32), 2000)
    t = FusionTree(width=32)
    for k in keys:
        t.insert(k)
    ks = sorted(keys)

    def probe(seed):
        r = random.Random(seed)
        for _ in range(300):
            x = r.randrange(1 << 32)
            if t.rank(x) != sum(1 for k in ks if k <= x):
                return False
        return True

    with ThreadPoolExecutor(max_workers=4) as pool:
        assert all(pool.map(probe, range(8)))


def test_height_bound_shape():
    rng = random.Random(83)
    for cap in (3, 5, 7):
        t = FusionTree(width=64, cap=cap)
        n = 20000
        for _ in range(n):
            try:
                t.insert(rng.getrandbits(64))
            except DuplicateKey:
                pass
        m = (cap + 1) // 2
        bound = math.ceil(math.log((t.size + 1) / 2, m)) + 1
        assert t.height <= bound
        check_tree(t)


def test_split_amortization():
    rng = random.Random(89)
    t = FusionTree(width=64, cap=7)
    n = 20000
    for _ in range(n):
        try:
            t.insert(rng.getrandbits(64))
        except DuplicateKey:
            pass
    min_fill = (t.cap + 1) // 2 - 1
    assert t.splits <= t.size / min_fill + t.height


def test_fusion_sort_basic():
    assert fusion_sort([]) == []
    assert fusion_sort([5]) == [5]
    assert fusion_sort([3, 1, 2]) == [1, 2, 3]
    assert fusion_sort([7, 7, 7, 7]) == [7, 7, 7, 7]
    data = list(range(100))
    assert fusion_sort(data) == data  # already sorted stays put
    assert fusion_sort(data[::-1]) == data


def test_fusion_sort_random_with_duplicates():
    rng = random.Random(97)
    for _ in range(30):
        data = [rng.randrange(50) for _ in range(rng.randrange(0, 400))]
        assert fusion_sort(data, width=8) == sorted(data)


def test_fusion_sort_signed():
    rng = random.Random(101)
    data = [rng.randint(-(1 << 63), (1 << 63) - 1) for _ in range(2000)]
    assert fusion_sort(data, signed=True) == sorted(data)
    with pytest.raises(NodeError):
        fusion_sort([1 << 63], signed=True)


@given(st.lists(st.integers(min_value=0, max_value=(1 << 64) - 1), max_size=300))
@settings(max_examples=100, deadline=None)
def test_fusion_sort_matches_sorted(data):
    assert fusion_sort(data) == sorted(data)


def test_stats_variant_returns_tree():
    data = [5, 1, 5, 2]
    out, tree = fusion_sort_with_stats(data, width=8)
    assert out == [1, 2, 5, 5]
    assert tree.size == 3  # distinct keys only
    assert tree.counters.word_ops > 0


def test_tree_config_validation():
    with pytest.raises(NodeError):
        FusionTree(width=12)
    with pytest.raises(NodeError):
        FusionTree(cap=2)
    with pytest.raises(NodeError):
        FusionTree(cap=9)
    with pytest.raises(NodeError):
        FusionTree(strategy="bogus")
