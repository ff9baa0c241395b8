"""
Integer partitions in sparse multiplicity form
"""
import logging
from array import array
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple

import numpy as np

from core.config import settings
from core.errors import ArgumentError, ResourceError

logger = logging.getLogger(__name__)

Pairs = Tuple[Tuple[int, int], ...]


def iter_multiplicities(n: int) -> Iterator[Pairs]:
    """
    Every partition of n as ((j, k_j), ...) with j descending

    Order is descending-lexicographic on the part sequence: [n] first,
    [1]*n last. n = 0 yields the single empty partition.
    """
    if n < 0:
        raise ArgumentError("n must be nonnegative", n=n)
    stack: List[Tuple[int, int]] = []

    def walk(rem: int, largest: int) -> Iterator[Pairs]:
        if rem == 0:
            yield tuple(stack)
            return
        for j in range(min(rem, largest), 1, -1):
            for k in range(rem // j, 0, -1):
                stack.append((j, k))
                yield from walk(rem - j * k, j - 1)
                stack.pop()
        stack.append((1, rem))
        yield tuple(stack)
        stack.pop()

    yield from walk(n, n)


def partition_count(n: int) -> int:
    """p(n) by Euler's pentagonal recurrence"""
    if n < 0:
        return 0
    table = [1] + [0] * n
    for m in range(1, n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * table[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * table[m - g2]
            k += 1
        table[m] = total
    return table[n]


def check_guard(n: int, override_guard: bool = False) -> None:
    """
    Enforce the exact-enumeration guard

    Raises:
        ResourceError: n above the guard without override, or above the hard limit
    """
    if n <= settings.PARTITION_GUARD:
        return
    if not override_guard or n > settings.PARTITION_HARD_LIMIT:
        raise ResourceError(
            "partition enumeration guard exceeded",
            n=n,
            guard=settings.PARTITION_GUARD,
            hard_limit=settings.PARTITION_HARD_LIMIT,
            override=override_guard,
        )
    logger.warning(
        "enumerating p(%d)=%d partitions past the guard of %d",
        n, partition_count(n), settings.PARTITION_GUARD,
    )


class PartitionIndex:
    """
    Flat sparse table of partitions of n

    Entry i of partition r lives at offsets[r] + i in `parts` (cycle length j)
    and `mults` (k_j). Per-partition reductions use numpy reduceat over
    `starts`.
    """

    def __init__(self, n: int, parts: np.ndarray, mults: np.ndarray, offsets: np.ndarray):
        self.n = n
        self.parts = parts
        self.mults = mults
        self.offsets = offsets

    @classmethod
    def build(cls, n: int, chunk: Optional[Iterator[Pairs]] = None) -> "PartitionIndex":
        parts, mults, offsets = array("i"), array("i"), array("q", [0])
        for pairs in chunk if chunk is not None else iter_multiplicities(n):
            for j, k in pairs:
                parts.append(j)
                mults.append(k)
            offsets.append(len(parts))
        return cls(
            n,
            np.asarray(parts, dtype=np.int64),
            np.asarray(mults, dtype=np.int64),
            np.asarray(offsets, dtype=np.int64),
        )

    def __len__(self) -> int:
        return len(self.offsets) - 1

    @property
    def starts(self) -> np.ndarray:
        return self.offsets[:-1]

    def row(self, r: int) -> Pairs:
        lo, hi = self.offsets[r], self.offsets[r + 1]
        return tuple(zip(self.parts[lo:hi].tolist(), self.mults[lo:hi].tolist()))

    def reduce_sum(self, entry_values: np.ndarray) -> np.ndarray:
        """Sum entry_values over each partition's entries"""
        if self.n == 0:
            return np.zeros(len(self), dtype=entry_values.dtype)
        return np.add.reduceat(entry_values, self.starts)

    def reduce_prod(self, entry_values: np.ndarray) -> np.ndarray:
        """Multiply entry_values over each partition's entries"""
        if self.n == 0:
            return np.ones(len(self), dtype=entry_values.dtype)
        return np.multiply.reduceat(entry_values, self.starts)


@lru_cache(maxsize=8)
def _cached_index(n: int) -> PartitionIndex:
    return PartitionIndex.build(n)


def partition_blocks(n: int, override_guard: bool = False, block_size: int = 500_000) -> Iterator[PartitionIndex]:
    """
    Partitions of n as one or more PartitionIndex blocks

    Within the guard the whole table is built once and cached; past it
    (override only) partitions stream in blocks so memory stays bounded.
    """
    check_guard(n, override_guard)
    if n <= settings.PARTITION_GUARD:
        yield _cached_index(n)
        return
    pending: List[Pairs] = []
    for pairs in iter_multiplicities(n):
        pending.append(pairs)
        if len(pending) >= block_size:
            yield PartitionIndex.build(n, iter(pending))
            pending = []
    if pending:
        yield PartitionIndex.build(n, iter(pending))
