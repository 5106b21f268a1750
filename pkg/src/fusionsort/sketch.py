"""Order-preserving sketch compression of a key set's relevant bits.

A scheme fixes which bit positions matter (the branch bits of the
owning key set) and how they are extracted from a word:

* ``exact``          -- one masked shift per relevant bit, packed
                        contiguously, most significant relevant bit
                        first;
* ``multiplicative`` -- a single masked multiplication relocates every
                        relevant bit into a short window, possibly with
                        interleaved zero padding.

Both encodings order identically over any words, because the padded
form is a strictly monotone re-spacing of the exact form; that is
verified exhaustively over all relevant-bit patterns when a multiplier
is constructed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

from .trie import CompressedTrie, EmptyTrie
from .wordops import word_mask

logger = logging.getLogger(__name__)

EXACT = "exact"
MULTIPLICATIVE = "multiplicative"
STRATEGIES = (EXACT, MULTIPLICATIVE)

# DFS step budget for the multiplier search before giving up.
_SEARCH_BUDGET = 200_000


class SketchError(ValueError):
    """Base error for sketch schemes."""


class NoValidMultiplier(SketchError):
    """The bounded multiplier search found no valid constant."""


class SchemeNotMultiplicative(SketchError):
    """Multiplicative evaluation requested on an exact-only scheme."""


@dataclass(frozen=True)
class SketchScheme:
    """Extraction recipe for one key set's relevant bits.

    ``padded_length`` is the number of payload bits a sketch occupies:
    the relevant-bit count for the exact strategy, the (zero-padded)
    window length for the multiplicative one.  ``fallback`` records that
    a multiplicative scheme was requested but could not be built.
    """

    width: int
    relevant_bits: tuple[int, ...]  # descending
    mask: int
    strategy: str
    padded_length: int
    multiplier: int | None = None
    shift: int | None = None
    fallback: bool = False

    @property
    def length(self) -> int:
        return self.padded_length

    def sketch(self, x: int) -> int:
        if self.strategy == MULTIPLICATIVE:
            return sketch_approx(self, x)
        return sketch_exact(self, x)


def sketch_exact(scheme: SketchScheme, x: int) -> int:
    """Relevant bits of x packed contiguously, most significant first."""
    s = 0
    for b in scheme.relevant_bits:
        s = (s << 1) | ((x >> b) & 1)
    return s


def sketch_approx(scheme: SketchScheme, x: int) -> int:
    """Single-multiplication extraction into the padded window."""
    if scheme.strategy != MULTIPLICATIVE:
        raise SchemeNotMultiplicative("scheme has no multiplier")
    prod = ((x & scheme.mask) * scheme.multiplier) & word_mask(scheme.width)
    return (prod >> scheme.shift) & ((1 << scheme.padded_length) - 1)


def scheme_from_bits(
    relevant_bits,
    width: int,
    strategy: str = MULTIPLICATIVE,
    max_padded_length: int | None = None,
) -> SketchScheme:
    """Build a scheme for the given branch bits (any order, deduplicated)."""
    if strategy not in STRATEGIES:
        raise SketchError(f"unknown strategy {strategy!r}")
    bits = tuple(sorted(set(relevant_bits), reverse=True))
    for b in bits:
        if not 0 <= b < width:
            raise SketchError(f"relevant bit {b} outside [0, {width})")
    return _scheme_cached(bits, width, strategy, max_padded_length)


@lru_cache(maxsize=65536)
def _scheme_cached(
    bits: tuple[int, ...], width: int, strategy: str,
    max_padded_length: int | None,
) -> SketchScheme:
    """Schemes are immutable, so identical bit patterns share one instance."""
    mask = 0
    for b in bits:
        mask |= 1 << b
    if not bits or strategy == EXACT:
        return SketchScheme(width, bits, mask, EXACT, len(bits))
    try:
        mult, shift, plen = find_multiplier(bits, width, max_padded_length)
    except NoValidMultiplier:
        logger.debug(
            "multiplicative sketch fallback: bits=%s width=%d cap=%s",
            bits, width, max_padded_length,
        )
        return SketchScheme(width, bits, mask, EXACT, len(bits), fallback=True)
    return SketchScheme(width, bits, mask, MULTIPLICATIVE, plen, mult, shift)


def scheme_from_trie(
    trie: CompressedTrie,
    strategy: str = MULTIPLICATIVE,
    max_padded_length: int | None = None,
) -> SketchScheme:
    """Scheme whose relevant bits are the trie's branch bits."""
    if trie.root is None:
        raise EmptyTrie("cannot derive a scheme from an empty trie")
    return scheme_from_bits(trie.relevant_bits(), trie.width, strategy, max_padded_length)


def find_multiplier(
    relevant_bits,
    width: int,
    max_padded_length: int | None = None,
) -> tuple[int, int, int]:
    """Constant so that ``((x & mask) * multiplier) >> shift`` is an
    order-preserving image of the relevant bits of x.

    Returns (multiplier, shift, padded_length).  The relevant bits land
    at strictly increasing positions of a window of at most r*r bits
    (tighter if max_padded_length says so); every other term of the
    product is placed where it cannot disturb the window, so no carries
    reach it.  Raises NoValidMultiplier when the bounded search fails.
    """
    bits = tuple(sorted(set(relevant_bits)))
    if not bits:
        raise SketchError("at least one relevant bit is required")
    for b in bits:
        if not 0 <= b < width:
            raise SketchError(f"relevant bit {b} outside [0, {width})")
    r = len(bits)
    lcap = r * r
    if max_padded_length is not None:
        lcap = min(lcap, max_padded_length)
    lcap = min(lcap, width)
    return _find_multiplier_cached(bits, width, lcap)


@lru_cache(maxsize=65536)
def _find_multiplier_cached(bits: tuple[int, ...], width: int, lcap: int):
    r = len(bits)
    if lcap < r:
        raise NoValidMultiplier(f"window cap {lcap} below bit count {r}")

    span = bits[-1] - bits[0] + 1
    if span <= lcap:
        # One shared shift: the bits are already close enough together.
        result = (1, bits[0], span)
        if _verified(bits, width, result):
            return result
        raise NoValidMultiplier("degenerate single-shift scheme failed verification")

    # General case: partition the ascending bits into consecutive runs,
    # one shift per run, so each run's window image mirrors its internal
    # spacing.  Cross-run product terms must fall outside the window
    # [0, lcap) and must not collide below it, where a carry could ripple
    # upward into the extracted field.
    budget = [_SEARCH_BUDGET]
    sigmas: list[int] = []
    offsets: list[int] = [0] * r  # window offset of each bit's target
    negatives: set[int] = set()

    def place(i: int, next_off: int):
        if budget[0] <= 0:
            return None
        if i == r:
            base = max(0, max(bits[k] - offsets[k] for k in range(r)))
            last = offsets[r - 1]
            if base + last >= width:
                return None
            mult = 0
            for sg in set(sigmas):
                mult |= 1 << (base + sg)
            return (mult, base, last + 1)
        for j in range(r - 1, i - 1, -1):  # longest run first
            gspan = bits[j] - bits[i] + 1
            if i == 0:
                bases = (0,) if gspan <= lcap else ()
            else:
                bases = range(next_off, lcap - gspan + 1)
            for o in bases:
                budget[0] -= 1
                if budget[0] <= 0:
                    return None
                sigma = o - bits[i]
                if sigma in sigmas:
                    continue  # covered by the merged-run alternative
                fresh: list[int] = []
                ok = True
                for k in range(r):
                    if i <= k <= j:
                        offsets[k] = o + (bits[k] - bits[i])
                        continue
                    p = bits[k] + sigma
                    if 0 <= p < lcap:
                        ok = False  # stray inside the window
                        break
                    if p < 0:
                        if p in negatives:
                            ok = False  # collision below the window
                            break
                        fresh.append(p)
                if ok:
                    sigmas.append(sigma)
                    negatives.update(fresh)
                    found = place(j + 1, o + gspan)
                    if found is not None:
                        return found
                    sigmas.pop()
                    negatives.difference_update(fresh)
        return None

    result = place(0, 0)
    if result is not None and _verified(bits, width, result):
        return result
    raise NoValidMultiplier(f"no constant found for bits {bits} within window {lcap}")


def _verified(bits_asc, width, result) -> bool:
    # exhaustive self-check; pattern space is only enumerable up to 2**16
    if len(bits_asc) > 16:
        return True
    return _order_preserving(bits_asc, width, *result)


def _order_preserving(bits_asc, width, mult, shift, plen) -> bool:
    """Exhaustive check: padded images of all relevant-bit patterns are
    strictly increasing in the exact-sketch order."""
    wm = word_mask(width)
    lenm = (1 << plen) - 1
    prev = -1
    for pattern in range(1 << len(bits_asc)):
        y = 0
        for k, b in enumerate(bits_asc):
            y |= ((pattern >> k) & 1) << b
        img = (((y * mult) & wm) >> shift) & lenm
        if img <= prev:
            return False
        prev = img
    return True
