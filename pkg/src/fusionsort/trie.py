"""Compressed binary trie over fixed-width integer keys.

The branch-only trie of t distinct keys has exactly t - 1 internal
nodes, each labeled with the bit index at which its two subtrees
diverge; leaves hold the keys in increasing order left to right, and
branch bits strictly decrease along every root-to-leaf path.

This is the structurally explicit reference implementation: descent
search and the two-pass rank procedure walk the tree node by node, and
the packed word-parallel machinery in fusion_node is cross-checked
against it.
"""

from __future__ import annotations

from bisect import bisect_left, insort

from .wordops import check_word, clear_low_bits, set_low_bits


class TrieError(ValueError):
    """Base error for trie operations."""


class DuplicateKey(TrieError):
    """Key is already present."""


class EmptyTrie(TrieError):
    """Operation requires at least one key."""


class _Leaf:
    __slots__ = ("key",)

    def __init__(self, key: int):
        self.key = key


class _Branch:
    __slots__ = ("bit", "zero", "one")

    def __init__(self, bit: int, zero, one):
        self.bit = bit
        self.zero = zero
        self.one = one


class CompressedTrie:
    """Build-then-read trie; insert splices in place under exclusive access."""

    __slots__ = ("width", "root", "_keys")

    def __init__(self, keys=(), *, width: int = 64):
        ks = sorted(keys)
        for k in ks:
            check_word(k, width)
        for a, b in zip(ks, ks[1:]):
            if a == b:
                raise DuplicateKey(f"duplicate key {a}")
        self.width = width
        self._keys: list[int] = ks
        self.root = self._build(ks, 0, len(ks)) if ks else None

    # -- construction --------------------------------------------------

    def _build(self, ks: list[int], lo: int, hi: int):
        if hi - lo == 1:
            return _Leaf(ks[lo])
        bit = (ks[lo] ^ ks[hi - 1]).bit_length() - 1
        # keys sorted and sharing all bits above `bit`: zeros then ones
        mid = bisect_left(ks, 1, lo, hi, key=lambda k: (k >> bit) & 1)
        return _Branch(bit, self._build(ks, lo, mid), self._build(ks, mid, hi))

    def insert(self, x: int) -> "CompressedTrie":
        """Splice x in; the single new branch bit is delta(x, trs(x))."""
        check_word(x, self.width)
        if self.root is None:
            self.root = _Leaf(x)
            self._keys = [x]
            return self
        s = self._descend(x)
        if s == x:
            raise DuplicateKey(f"duplicate key {x}")
        b = (x ^ s).bit_length() - 1
        leaf = _Leaf(x)
        parent = None
        node = self.root
        while isinstance(node, _Branch) and node.bit > b:
            parent = node
            node = node.one if (x >> node.bit) & 1 else node.zero
        branch = _Branch(b, node, leaf) if (x >> b) & 1 else _Branch(b, leaf, node)
        if parent is None:
            self.root = branch
        elif parent.one is node:
            parent.one = branch
        else:
            parent.zero = branch
        insort(self._keys, x)
        return self

    # -- queries --------------------------------------------------------

    def _descend(self, x: int) -> int:
        node = self.root
        while isinstance(node, _Branch):
            node = node.one if (x >> node.bit) & 1 else node.zero
        return node.key

    def trs(self, x: int) -> int:
        """Leaf reached by following x's bit at every branch on the way down."""
        if self.root is None:
            raise EmptyTrie("search on an empty trie")
        check_word(x, self.width)
        return self._descend(x)

    def rank(self, x: int) -> int:
        """Number of keys <= x.

        First descent finds the key sharing x's branch-path bits.  If it
        is not x itself, the most significant differing bit marks where
        x falls off the trie; forcing the lower bits all-ones (when x
        carries a 1 there) steers a second descent to the predecessor,
        forcing them all-zero steers it to the successor.
        """
        check_word(x, self.width)
        if self.root is None:
            return 0
        s = self._descend(x)
        if s == x:
            return bisect_left(self._keys, x) + 1
        b = (x ^ s).bit_length() - 1
        if (x >> b) & 1:
            pred = self._descend(set_low_bits(x, b, self.width))
            return bisect_left(self._keys, pred) + 1
        succ = self._descend(clear_low_bits(x, b, self.width))
        return bisect_left(self._keys, succ)

    # -- structure ------------------------------------------------------

    @property
    def keys(self) -> tuple[int, ...]:
        return tuple(self._keys)

    @property
    def size(self) -> int:
        return len(self._keys)

    def relevant_bits(self) -> tuple[int, ...]:
        """Deduplicated branch bit indices, descending."""
        bits = set()
        stack = [self.root] if self.root is not None else []
        while stack:
            node = stack.pop()
            if isinstance(node, _Branch):
                bits.add(node.bit)
                stack.append(node.zero)
                stack.append(node.one)
        return tuple(sorted(bits, reverse=True))

    def internal_node_count(self) -> int:
        count = 0
        stack = [self.root] if self.root is not None else []
        while stack:
            node = stack.pop()
            if isinstance(node, _Branch):
                count += 1
                stack.append(node.zero)
                stack.append(node.one)
        return count

    def leaves(self):
        """Keys in left-to-right leaf order (must equal sorted order)."""
        out: list[int] = []
        if self.root is None:
            return out
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, _Leaf):
                out.append(node.key)
            else:
                stack.append(node.one)
                stack.append(node.zero)
        return out

    def to_tuple(self):
        """Nested-tuple structural form: leaf -> key, branch -> (bit, zero, one)."""

        def form(node):
            if isinstance(node, _Leaf):
                return node.key
            return (node.bit, form(node.zero), form(node.one))

        return None if self.root is None else form(self.root)

    def to_dot(self) -> str:
        """DOT graph: nodes named n<preorder-index>, 0-edges left, 1-edges right."""
        lines = [
            "digraph compressed_trie {",
            "  node [fontname=monospace];",
        ]
        counter = [0]
        width = self.width

        def emit(node) -> str:
            name = f"n{counter[0]}"
            counter[0] += 1
            if isinstance(node, _Leaf):
                lines.append(f'  {name} [shape=box label="{node.key:0{width}b}"];')
                return name
            lines.append(f'  {name} [label="b{node.bit}"];')
            zero = emit(node.zero)
            lines.append(f'  {name} -> {zero} [label="0"];')
            one = emit(node.one)
            lines.append(f'  {name} -> {one} [label="1"];')
            return name

        if self.root is not None:
            emit(self.root)
        lines.append("}")
        return "\n".join(lines) + "\n"
