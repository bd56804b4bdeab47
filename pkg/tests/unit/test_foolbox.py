"""Tests for exit configurations, splice conditions and the fooling-pair search."""

import pytest

from src.automata.engine import run
from src.disjointness.builders import build_crippled, build_sqrt, build_trivial
from src.disjointness.instances import (
    EnumerationSpec,
    Layout,
    LayoutKind,
    build_instance,
    complement_instance,
)
from src.disjointness.problem import IndexSet
from src.lowerbound.blocks import Region, partition_blocks
from src.lowerbound.foolbox import (
    VACUOUS_REASON,
    exit_config_tuple,
    fooling_search,
    splice_conditions,
)
from src.utils.errors import EnumerationTooLargeError, LayoutMismatchError

REVERSED = Layout.reversed()


def trace_on(a, i, layout=REVERSED):
    inst = complement_instance(i, layout)
    return run(a, inst.s, inst.t, capture_trace=True).trace, inst


@pytest.fixture
def crippled():
    return build_crippled(4, IndexSet.from_mask("1100"))


class TestExitConfigs:
    """config^I for a set of indices."""

    def test_one_configuration_per_head(self, crippled):
        trace, inst = trace_on(crippled, IndexSet.of(4, {3}))
        configs = exit_config_tuple(trace, (3, 4), inst)
        assert len(configs) == 2
        # S leaves position 4 last, T leaves position 2 during the recording phase
        assert configs[0].positions == (5, 5)
        assert configs[1].positions == (1, 3)

    def test_forgotten_indices_give_equal_configs(self, crippled):
        first = exit_config_tuple(*_args(crippled, IndexSet.of(4)))
        second = exit_config_tuple(*_args(crippled, IndexSet.of(4, {3, 4})))
        assert first == second

    def test_remembered_indices_give_different_configs(self):
        a = build_trivial(4)
        first = exit_config_tuple(*_args(a, IndexSet.of(4, {1}), indices=(1, 2)))
        second = exit_config_tuple(*_args(a, IndexSet.of(4, {2}), indices=(1, 2)))
        assert first != second

    def test_size_mismatch(self, crippled):
        trace, _ = trace_on(build_trivial(2), IndexSet.of(2))
        inst = complement_instance(IndexSet.of(4), REVERSED)
        with pytest.raises(LayoutMismatchError):
            exit_config_tuple(trace, (3, 4), inst)


def _args(a, i, indices=(3, 4)):
    trace, inst = trace_on(a, i)
    return trace, indices, inst


class TestSpliceConditions:
    """The three splice conditions."""

    def test_all_pass_for_crippled_pair(self, crippled):
        i, i_prime = IndexSet.of(4), IndexSet.of(4, {3})
        run_i, inst_i = trace_on(crippled, i)
        run_ip, inst_ip = trace_on(crippled, i_prime)
        report = splice_conditions(run_i, run_ip, Region(2), inst_i, inst_ip, partition_blocks(4, 2))
        assert report.all_pass
        assert report.failed() == []

    def test_difference_outside_region(self):
        a = build_trivial(4)
        run_i, inst_i = trace_on(a, IndexSet.of(4, {1}))
        run_ip, inst_ip = trace_on(a, IndexSet.of(4, {2}))
        report = splice_conditions(run_i, run_ip, Region(2), inst_i, inst_ip, partition_blocks(4, 2))
        assert not report.differ_only_in_region
        assert "a" in report.failed()

    def test_exit_configs_differ(self):
        a = build_trivial(4)
        run_i, inst_i = trace_on(a, IndexSet.of(4, {1}))
        run_ip, inst_ip = trace_on(a, IndexSet.of(4, {2}))
        report = splice_conditions(run_i, run_ip, Region(1), inst_i, inst_ip, partition_blocks(4, 2))
        assert report.failed() == ["c"]

    def test_aliases(self, crippled):
        run_i, inst_i = trace_on(crippled, IndexSet.of(4))
        report = splice_conditions(run_i, run_i, Region(1), inst_i, inst_i, partition_blocks(4, 2))
        dumped = report.model_dump(by_alias=True)
        assert set(dumped) == {"a", "b", "c"}
        # B1 is checked in the crippled run
        assert dumped["b"] is False


class TestFoolingSearch:
    """End-to-end search."""

    def test_crippled_is_fooled(self, crippled):
        outcome = fooling_search(crippled, 4, LayoutKind.REVERSED, EnumerationSpec.exhaustive())

        witness = outcome.witness
        assert witness is not None
        assert witness.i == IndexSet.of(4)
        assert witness.i_prime == IndexSet.of(4, {3})
        assert witness.bhat == Region(2)
        assert witness.spliced_run.accepted
        assert not witness.oracle_verdict
        assert witness.splice.all_pass

        stats = outcome.stats
        assert (stats.runs, stats.x0, stats.x0_best, stats.x1, stats.x2) == (16, 16, 16, 4, 4)
        assert stats.x0_prime is None
        assert stats.buckets == 4
        assert stats.multi_member_buckets == 4
        assert stats.splices == 1

    def test_witness_is_a_real_false_accept(self, crippled):
        witness = fooling_search(crippled, 4, LayoutKind.REVERSED, EnumerationSpec.exhaustive()).witness
        inst = build_instance(witness.i, witness.i_prime.complement(), 4, REVERSED)
        assert run(crippled, inst.s, inst.t).accepted
        assert not inst.is_disjoint()

    def test_report_shape(self, crippled):
        report = fooling_search(crippled, 4, LayoutKind.REVERSED, EnumerationSpec.exhaustive()).to_report()
        dumped = report.model_dump(mode="json", by_alias=True)
        assert dumped["params"] == {"n": 4, "m": 17, "kf": 1, "kb": 0, "k": 2}
        assert dumped["layout"] == "reversed"
        assert dumped["enumeration"] == {"kind": "exhaustive"}
        assert dumped["bucketStats"]["x0Best"] == 16
        assert dumped["witness"]["I"] == []
        assert dumped["witness"]["Iprime"] == [3]
        assert dumped["witness"]["bhat"] == "B2"
        assert dumped["witness"]["spliceReport"] == {"a": True, "b": True, "c": True}

    def test_trivial_has_only_singleton_buckets(self):
        outcome = fooling_search(build_trivial(4), 4, LayoutKind.REVERSED, EnumerationSpec.exhaustive())
        assert outcome.witness is None
        assert outcome.stats.x0 == 16
        assert outcome.stats.buckets == 16
        assert outcome.stats.x2 == 1
        assert outcome.reason == "every bucket has one member"

    def test_sqrt_is_vacuous(self):
        outcome = fooling_search(build_sqrt(4), 4, LayoutKind.REVERSED, EnumerationSpec.exhaustive())
        assert outcome.plan.truncated
        assert outcome.vacuous
        assert outcome.witness is None
        assert outcome.reason == VACUOUS_REASON

    def test_sampled_enumeration(self, crippled):
        outcome = fooling_search(crippled, 4, LayoutKind.REVERSED, EnumerationSpec.sample(40, 1))
        assert outcome.stats.runs <= 16
        assert outcome.to_report().enumeration == {"kind": "sample", "count": 40, "seed": 1}

    def test_exhaustive_limit(self):
        with pytest.raises(EnumerationTooLargeError):
            fooling_search(build_trivial(1), 21, LayoutKind.REVERSED, EnumerationSpec.exhaustive())
