"""Finite Kripke frames: directed graphs over nodes 0..n-1 with bitmask rows.

Node sets are plain ints used as bitmasks, so row images and membership are
single word operations.  ``rows[k]`` has bit j set iff k R j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = ["Frame", "bits", "mask_of"]


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(nodes: Iterable[int]) -> int:
    m = 0
    for k in nodes:
        m |= 1 << k
    return m


@dataclass(frozen=True)
class Frame:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("node count must be nonnegative")
        if len(self.rows) != self.n:
            raise ValueError("one relation row per node required")
        full = (1 << self.n) - 1
        for k, row in enumerate(self.rows):
            if row & ~full:
                raise ValueError(f"row of node {k} has endpoints out of range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Frame":
        rows = [0] * n
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for {n} nodes")
            rows[i] |= 1 << j
        return cls(n, tuple(rows))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Frame":
        """Decode a row-major relation bitmask: bit i*n+j set iff i R j."""
        if mask < 0 or mask >> (n * n):
            raise ValueError("relation mask out of range")
        row_bits = (1 << n) - 1
        return cls(n, tuple((mask >> (i * n)) & row_bits for i in range(n)))

    def to_mask(self) -> int:
        m = 0
        for i, row in enumerate(self.rows):
            m |= row << (i * self.n)
        return m

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in bits(self.rows[i])]

    def has_edge(self, i: int, j: int) -> bool:
        self._check(i)
        self._check(j)
        return bool(self.rows[i] >> j & 1)

    def _check(self, k: int):
        if not (0 <= k < self.n):
            raise ValueError(f"node {k} out of range for {self.n} nodes")

    def image(self, k: int) -> int:
        """R[k], the direct successors of k."""
        self._check(k)
        return self.rows[k]

    def n_step_image(self, k: int, steps: int) -> int:
        """Endpoints of relation paths of exactly ``steps`` edges from k."""
        self._check(k)
        if steps < 1:
            raise ValueError("step count must be at least 1")
        current = self.rows[k]
        for _ in range(steps - 1):
            nxt = 0
            for j in bits(current):
                nxt |= self.rows[j]
            current = nxt
        return current

    def reach_plus(self, k: int) -> int:
        """Nodes reachable from k in one or more steps (least fixpoint)."""
        self._check(k)
        reach = self.rows[k]
        frontier = reach
        while frontier:
            nxt = 0
            for j in bits(frontier):
                nxt |= self.rows[j]
            frontier = nxt & ~reach
            reach |= frontier
        return reach

    def reach_plusplus(self, k: int) -> int:
        """Nodes reachable from k in two or more steps."""
        self._check(k)
        out = 0
        for j in bits(self.rows[k]):
            out |= self.reach_plus(j)
        return out

    def is_reflexive_on(self, carrier: int) -> bool:
        """Every node of ``carrier`` relates to itself."""
        for k in bits(carrier):
            if not self.rows[k] >> k & 1:
                return False
        return True

    def is_transitive_on(self, carrier: int) -> bool:
        """Transitivity of the relation restricted to sources in ``carrier``:
        whenever k, k' are in the carrier and k R k' R k'', also k R k''."""
        for k in bits(carrier):
            for k2 in bits(self.rows[k] & carrier):
                if self.rows[k2] & ~self.rows[k]:
                    return False
        return True

    def is_connected(self) -> bool:
        """Any two nodes reachable from a common node are related one way or
        the other; with equal nodes this forces loops on reachable nodes."""
        for k in range(self.n):
            reach = self.reach_plus(k)
            for k1 in bits(reach):
                for k2 in bits(reach):
                    if not (self.rows[k1] >> k2 & 1 or self.rows[k2] >> k1 & 1):
                        return False
        return True
