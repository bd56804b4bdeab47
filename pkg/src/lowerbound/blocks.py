"""Block partitions of {1..n}, head pairs and the "checks a block" relation.

A pair of an S head and a T head checks block B_j if, at some configuration of
the run, both heads read items whose indices lie in B_j. A head on END reads no
item. In the general (pi) layout, pairs with exactly one backward head are
"mixed" and are charged against subblocks instead of blocks.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from src.automata.engine import Trace
from src.automata.model import HeadId, StreamSide, head_layout
from src.disjointness.instances import Layout, LayoutKind, SubsetFamilyInstance
from src.utils.errors import InvalidParameterError, InvalidSizeError, LayoutMismatchError
from src.utils.validation import validate_divides, validate_positive_int

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Region:
    """Block B_j (``sub`` is None) or subblock B_j^{sub}; both 1-based."""

    block: int
    sub: Optional[int] = None

    def __str__(self) -> str:
        return f"B{self.block}" if self.sub is None else f"B{self.block}^{self.sub}"


@dataclass(frozen=True)
class BlockPartition:
    """v1 consecutive blocks of size n/v1, each split into v2 subblocks of size n/v."""

    n: int
    v1: int
    v2: int = 1

    @property
    def v(self) -> int:
        return self.v1 * self.v2

    @property
    def block_size(self) -> int:
        return self.n // self.v1

    @property
    def subblock_size(self) -> int:
        return self.n // self.v

    def block_of(self, i: int) -> int:
        return (i - 1) // self.block_size + 1

    def subblock_of(self, i: int) -> Region:
        offset = (i - 1) % self.block_size
        return Region(self.block_of(i), offset // self.subblock_size + 1)

    def block(self, j: int) -> Tuple[int, ...]:
        start = (j - 1) * self.block_size
        return tuple(range(start + 1, start + self.block_size + 1))

    def subblock(self, j: int, sub: int) -> Tuple[int, ...]:
        start = (j - 1) * self.block_size + (sub - 1) * self.subblock_size
        return tuple(range(start + 1, start + self.subblock_size + 1))

    def indices(self, region: Region) -> Tuple[int, ...]:
        if region.sub is None:
            return self.block(region.block)
        return self.subblock(region.block, region.sub)

    def blocks(self) -> List[Tuple[int, ...]]:
        return [self.block(j) for j in range(1, self.v1 + 1)]

    def regions(self) -> List[Region]:
        """Blocks when v2 = 1, otherwise all subblocks; in index order."""
        if self.v2 == 1:
            return [Region(j) for j in range(1, self.v1 + 1)]
        return [Region(j, s) for j in range(1, self.v1 + 1) for s in range(1, self.v2 + 1)]


def partition_blocks(n: int, v1: int, v2: int = 1) -> BlockPartition:
    """Split {1..n} into v1 blocks and each block into v2 subblocks.

    Raises:
        DivisibilityError: If v1·v2 does not divide n
    """
    validate_positive_int(n, "n", error_cls=InvalidSizeError)
    validate_positive_int(v1, "v1")
    validate_positive_int(v2, "v2")
    validate_divides(v1 * v2, n, "v1*v2")
    return BlockPartition(n=n, v1=v1, v2=v2)


def largest_divisor_at_most(n: int, bound: int) -> int:
    """Largest d with d | n and d <= bound (at least 1)."""
    for d in range(min(n, bound), 0, -1):
        if n % d == 0:
            return d
    return 1


@dataclass(frozen=True)
class PartitionPlan:
    """Block counts demanded by the head counts and the ones actually used."""

    mode: str
    v1_wanted: int
    v2_wanted: int
    partition: BlockPartition
    layout: Layout

    @property
    def truncated(self) -> bool:
        return (self.partition.v1, self.partition.v2) != (self.v1_wanted, self.v2_wanted)


def plan_partition(n: int, kf: int, kb: int, layout_kind: LayoutKind) -> PartitionPlan:
    """Derive the partition for a fooling search from the head counts.

    Reversed layout (forward-only heads): v = kf²+1 blocks. Pi layout:
    v1 = kf²+kb²+1 blocks of v2 = 2·kf·kb+1 subblocks. Counts that do not divide
    n are truncated to the largest divisor not above them.

    Raises:
        InvalidParameterError: If the reversed layout is used with backward heads
    """
    if layout_kind is LayoutKind.REVERSED:
        if kb != 0:
            raise InvalidParameterError(
                "the reversed layout needs forward-only heads",
                details={"kb": kb, "layout": layout_kind.value},
            )
        v_wanted = kf * kf + 1
        partition = partition_blocks(n, largest_divisor_at_most(n, v_wanted))
        return PartitionPlan("forward", v_wanted, 1, partition, Layout.reversed())

    v1_wanted = kf * kf + kb * kb + 1
    v2_wanted = 2 * kf * kb + 1
    v1 = largest_divisor_at_most(n, v1_wanted)
    v2 = largest_divisor_at_most(n // v1, v2_wanted)
    partition = partition_blocks(n, v1, v2)
    return PartitionPlan("general", v1_wanted, v2_wanted, partition, Layout.pi(v1))


@dataclass(frozen=True)
class HeadPair:
    s_head: HeadId
    t_head: HeadId

    @property
    def mixed(self) -> bool:
        return self.s_head.is_forward != self.t_head.is_forward

    @property
    def label(self) -> str:
        return f"({self.s_head.label},{self.t_head.label})"


def head_pairs(kf: int, kb: int) -> Tuple[HeadPair, ...]:
    """All (kf+kb)² (S-head, T-head) pairs in canonical order."""
    heads = head_layout(kf, kb)
    s_heads = [h for h in heads if h.stream is StreamSide.S]
    t_heads = [h for h in heads if h.stream is StreamSide.T]
    return tuple(HeadPair(hs, ht) for hs in s_heads for ht in t_heads)


@dataclass
class CheckReport:
    """Blocks checked by every head pair, and subblocks checked by mixed pairs."""

    partition: BlockPartition
    blocks: Dict[HeadPair, Set[int]] = field(default_factory=dict)
    subblocks: Dict[HeadPair, Set[Region]] = field(default_factory=dict)

    def checked_blocks(self, mixed: Optional[bool] = None) -> FrozenSet[int]:
        """Union over pairs; ``mixed`` restricts to mixed (True) or non-mixed (False) pairs."""
        return frozenset(
            j
            for pair, js in self.blocks.items()
            if mixed is None or pair.mixed == mixed
            for j in js
        )

    def checked_subblocks(self) -> FrozenSet[Region]:
        return frozenset(r for regions in self.subblocks.values() for r in regions)

    def unchecked_blocks(self, mixed: Optional[bool] = None) -> Tuple[int, ...]:
        checked = self.checked_blocks(mixed)
        return tuple(j for j in range(1, self.partition.v1 + 1) if j not in checked)

    def unchecked_regions(self) -> Tuple[Region, ...]:
        """Regions no pair checks.

        Without subblocks: blocks checked by no pair. With subblocks: B_j^{j'}
        where B_j is unchecked by non-mixed pairs and B_j^{j'} by mixed pairs.
        """
        if self.partition.v2 == 1:
            return tuple(Region(j) for j in self.unchecked_blocks())
        by_mixed = self.checked_subblocks()
        return tuple(
            Region(j, s)
            for j in self.unchecked_blocks(mixed=False)
            for s in range(1, self.partition.v2 + 1)
            if Region(j, s) not in by_mixed
        )

    def max_blocks_per_pair(self, mixed: Optional[bool] = None) -> int:
        sizes = [len(js) for pair, js in self.blocks.items() if mixed is None or pair.mixed == mixed]
        return max(sizes, default=0)

    def max_subblocks_per_mixed_pair(self) -> int:
        """Most subblocks of a single block checked by one mixed pair."""
        per_block = Counter((pair, r.block) for pair, regions in self.subblocks.items() for r in regions)
        return max(per_block.values(), default=0)

    def is_empty(self) -> bool:
        return not any(self.blocks.values())


def _head_indices(trace: Trace, instance: SubsetFamilyInstance, positions: Tuple[int, ...]) -> List[Optional[int]]:
    indices: List[Optional[int]] = []
    for head, p in zip(trace.heads, positions):
        if p == trace.end_position(head):
            indices.append(None)
        elif head.stream is StreamSide.S:
            indices.append(instance.s_index_at(p))
        else:
            indices.append(instance.t_index_at(p))
    return indices


def analyze_checks(trace: Trace, instance: SubsetFamilyInstance, partition: BlockPartition) -> CheckReport:
    """Compute the checking relation of one run on ``instance``.

    Raises:
        LayoutMismatchError: If the trace was not produced on streams of this instance's size
    """
    if trace.lengths != (instance.n, instance.n) or partition.n != instance.n:
        raise LayoutMismatchError(
            "trace, instance and partition sizes disagree",
            details={"trace": trace.lengths, "instance_n": instance.n, "partition_n": partition.n},
        )

    kf = sum(1 for h in trace.heads if h.stream is StreamSide.S and h.is_forward)
    kb = sum(1 for h in trace.heads if h.stream is StreamSide.S and not h.is_forward)
    pairs = head_pairs(kf, kb)
    report = CheckReport(
        partition=partition,
        blocks={pair: set() for pair in pairs},
        subblocks={pair: set() for pair in pairs if pair.mixed},
    )

    seen_positions = set()
    for config in trace.configurations():
        if config.positions in seen_positions:
            continue
        seen_positions.add(config.positions)
        indices = _head_indices(trace, instance, config.positions)
        for pair in pairs:
            i, i2 = indices[pair.s_head.index], indices[pair.t_head.index]
            if i is None or i2 is None:
                continue
            if partition.block_of(i) == partition.block_of(i2):
                report.blocks[pair].add(partition.block_of(i))
            if pair.mixed:
                region = partition.subblock_of(i)
                if region == partition.subblock_of(i2):
                    report.subblocks[pair].add(region)
    return report
