"""Tests for block partitions, head pairs and the checking relation."""

import pytest

from src.automata.engine import run
from src.automata.model import AutomatonParams, make_automaton
from src.disjointness.builders import build_crippled, build_trivial
from src.disjointness.instances import Layout, LayoutKind, complement_instance
from src.disjointness.problem import IndexSet
from src.lowerbound.blocks import (
    Region,
    analyze_checks,
    head_pairs,
    largest_divisor_at_most,
    partition_blocks,
    plan_partition,
)
from src.utils.errors import DivisibilityError, InvalidParameterError, LayoutMismatchError


def lockstep_automaton(n, kf, kb):
    """Every head advances on every step."""
    k = 2 * kf + 2 * kb
    params = AutomatonParams(domain_size=2 * n, m=1, kf=kf, kb=kb)
    return make_automaton(params, ["p"], "p", {"p"}, lambda q, symbols: (q, (True,) * k))


class TestPartition:
    """Blocks and subblocks."""

    def test_sizes_and_lookups(self):
        p = partition_blocks(12, 3, 2)
        assert (p.v, p.block_size, p.subblock_size) == (6, 4, 2)
        assert p.block_of(5) == 2
        assert p.subblock_of(5) == Region(2, 1)
        assert p.subblock_of(8) == Region(2, 2)
        assert p.block(3) == (9, 10, 11, 12)
        assert p.subblock(3, 2) == (11, 12)
        assert len(p.regions()) == 6

    def test_blocks_only(self):
        p = partition_blocks(4, 2)
        assert p.regions() == [Region(1), Region(2)]
        assert p.indices(Region(2)) == (3, 4)
        assert p.blocks() == [(1, 2), (3, 4)]

    def test_region_labels_and_order(self):
        assert str(Region(2)) == "B2"
        assert str(Region(2, 1)) == "B2^1"
        assert Region(1, 3) < Region(2, 1)

    def test_must_divide(self):
        with pytest.raises(DivisibilityError):
            partition_blocks(10, 3)

    @pytest.mark.parametrize("n,bound,expected", [(12, 5, 4), (7, 5, 1), (4, 5, 4), (9, 3, 3)])
    def test_largest_divisor(self, n, bound, expected):
        assert largest_divisor_at_most(n, bound) == expected


class TestPlan:
    """Partitions derived from head counts."""

    def test_forward_exact(self):
        plan = plan_partition(4, 1, 0, LayoutKind.REVERSED)
        assert plan.partition.v1 == 2
        assert not plan.truncated
        assert plan.layout == Layout.reversed()

    def test_forward_truncated(self):
        plan = plan_partition(4, 2, 0, LayoutKind.REVERSED)
        assert plan.v1_wanted == 5
        assert plan.partition.v1 == 4
        assert plan.truncated

    def test_general(self):
        plan = plan_partition(12, 1, 1, LayoutKind.PI)
        assert (plan.v1_wanted, plan.v2_wanted) == (3, 3)
        assert (plan.partition.v1, plan.partition.v2) == (3, 2)
        assert plan.layout == Layout.pi(3)
        assert plan.truncated

    def test_reversed_needs_forward_heads(self):
        with pytest.raises(InvalidParameterError):
            plan_partition(4, 1, 1, LayoutKind.REVERSED)


class TestHeadPairs:
    """S/T head pairs."""

    def test_pairs_and_mixing(self):
        pairs = head_pairs(1, 1)
        assert [p.label for p in pairs] == [
            "(S-f1,T-f1)",
            "(S-f1,T-b1)",
            "(S-b1,T-f1)",
            "(S-b1,T-b1)",
        ]
        assert [p.mixed for p in pairs] == [False, True, True, False]

    def test_count(self):
        assert len(head_pairs(2, 3)) == 25


class TestAnalyzeChecks:
    """The checking relation on concrete runs."""

    def test_crippled_leaves_second_block_unchecked(self):
        inst = complement_instance(IndexSet.of(4), Layout.reversed())
        a = build_crippled(4, IndexSet.from_mask("1100"))
        trace = run(a, inst.s, inst.t, capture_trace=True).trace
        report = analyze_checks(trace, inst, partition_blocks(4, 2))

        (pair,) = head_pairs(1, 0)
        assert report.blocks[pair] == {1}
        assert report.unchecked_regions() == (Region(2),)
        assert report.max_blocks_per_pair() == 1
        assert not report.is_empty()

    def test_trivial_leaves_first_block_unchecked(self):
        inst = complement_instance(IndexSet.of(4, {2, 3}), Layout.reversed())
        trace = run(build_trivial(4), inst.s, inst.t, capture_trace=True).trace
        report = analyze_checks(trace, inst, partition_blocks(4, 2))
        assert report.unchecked_blocks() == (1,)

    def test_mixed_pairs_charge_subblocks(self):
        n = 9
        inst = complement_instance(IndexSet.of(n), Layout.pi(3))
        trace = run(lockstep_automaton(n, 1, 1), inst.s, inst.t, capture_trace=True).trace
        report = analyze_checks(trace, inst, partition_blocks(n, 3, 3))

        assert report.checked_blocks(mixed=False) == frozenset({2})
        assert report.checked_blocks(mixed=True) == frozenset({1, 2, 3})
        assert report.checked_subblocks() == frozenset({Region(1, 2), Region(2, 2), Region(3, 2)})
        # three subblocks in total, one per block
        assert report.max_subblocks_per_mixed_pair() == 1
        assert report.unchecked_regions() == (Region(1, 1), Region(1, 3), Region(3, 1), Region(3, 3))

    def test_size_mismatch(self):
        inst = complement_instance(IndexSet.of(4), Layout.reversed())
        trace = run(build_trivial(4), inst.s, inst.t, capture_trace=True).trace
        with pytest.raises(LayoutMismatchError):
            analyze_checks(trace, inst, partition_blocks(8, 2))
