"""Fibonacci numbers under shifted indexing and Zeckendorf decomposition.

The whole package uses the shifted sequence F_1 = 1, F_2 = 2, F_3 = 3,
F_{i+1} = F_i + F_{i-1}.  Starting the sequence at 1, 2 (instead of the
classic 1, 1) is what makes the decomposition of a positive integer into
distinct non-adjacent terms unique, and that unique decomposition is the
terminal position of the game: everything downstream treats this module
as the ground truth for "is this list of parts finished?".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

# Values use 64-bit unsigned semantics: anything past U64_MAX is reported
# as an overflow instead of silently widening.
U64_MAX = 2**64 - 1

# Inputs n are capped far above any instance the solver can touch.
N_CAP = 10**9


def _check_positive(n: int, name: str = "n") -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"{name} must be a positive integer, got {n!r}")


def _check_n(n: int) -> None:
    _check_positive(n)
    if n > N_CAP:
        raise ValueError(f"n must be <= {N_CAP}, got {n}")


def fib_value(i: int) -> int:
    """Return F_i with F_1 = 1, F_2 = 2.

    Raises ValueError for i < 1 and OverflowError once F_i would exceed
    64-bit unsigned range.
    """
    _check_positive(i, "index")
    a, b = 1, 2  # F_1, F_2
    if i == 1:
        return a
    for _ in range(i - 2):
        a, b = b, a + b
        if b > U64_MAX:
            raise OverflowError(f"F_{i} exceeds 64-bit unsigned range")
    return b


def fib_sequence_upto(n: int) -> list[int]:
    """All Fibonacci values F_1, F_2, ... that are <= n, in ascending order."""
    _check_n(n)
    seq = [1]
    a, b = 1, 2
    while b <= n:
        seq.append(b)
        a, b = b, a + b
    return seq


def max_index(n: int) -> int:
    """Largest index i with F_i <= n."""
    return len(fib_sequence_upto(n))


@dataclass(frozen=True)
class Decomposition:
    """A strictly increasing, non-adjacent set of Fibonacci indices."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        prev = None
        for i in self.indices:
            _check_positive(i, "index")
            if prev is not None and i - prev < 2:
                raise ValueError(
                    f"indices must be strictly increasing and non-adjacent, "
                    f"got {prev} then {i}"
                )
            prev = i

    def values(self) -> tuple[int, ...]:
        return tuple(fib_value(i) for i in self.indices)

    def total(self) -> int:
        return sum(self.values())

    def to_counts(self, capacity: int | None = None) -> tuple[int, ...]:
        """Counts-array form: position j holds the multiplicity of F_{j+1}."""
        top = self.indices[-1] if self.indices else 0
        if capacity is None:
            capacity = top
        if capacity < top:
            raise ValueError(f"capacity {capacity} cannot hold index {top}")
        counts = [0] * capacity
        for i in self.indices:
            counts[i - 1] = 1
        return tuple(counts)


def zeckendorf(n: int) -> Decomposition:
    """Greedy largest-first decomposition of n into non-adjacent Fibonacci terms.

    Greedy is correct here: subtracting the largest F_i <= n always leaves a
    remainder below F_{i-1}, so adjacent indices can never be picked.  The
    test suite cross-checks this against exhaustive subset enumeration
    rather than taking it on faith.
    """
    _check_n(n)
    seq = fib_sequence_upto(n)
    indices: list[int] = []
    remaining = n
    for i in range(len(seq), 0, -1):
        if seq[i - 1] <= remaining:
            indices.append(i)
            remaining -= seq[i - 1]
        if remaining == 0:
            break
    return Decomposition(tuple(reversed(indices)))


def is_zeckendorf(counts: Sequence[int]) -> bool:
    """True iff a counts array is a Zeckendorf decomposition.

    ``counts[j]`` is the multiplicity of F_{j+1}.  The check is purely
    structural: every count at most 1 and no two adjacent indices both
    present.
    """
    prev = 0
    for c in counts:
        if c < 0:
            raise ValueError("counts must be non-negative")
        if c > 1:
            return False
        if c == 1 and prev == 1:
            return False
        prev = c
    return True
