"""Operation tallies for the word-RAM cost model."""

from dataclasses import dataclass


@dataclass
class OpCounters:
    """Running totals of charged word operations and full-key comparisons.

    Word ops are charged cooperatively at the call sites that perform
    masked arithmetic/logic on machine words; full-key comparisons are
    charged wherever two keys are compared as whole values.  Totals only
    ever grow within a measured scope; callers snapshot before/after to
    scope a measurement.
    """

    word_ops: int = 0
    key_compares: int = 0

    def snapshot(self) -> tuple[int, int]:
        return (self.word_ops, self.key_compares)

    def add(self, other: "OpCounters") -> None:
        self.word_ops += other.word_ops
        self.key_compares += other.key_compares
