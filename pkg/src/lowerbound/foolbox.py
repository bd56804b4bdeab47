"""Fooling-pair search: exit-configuration bucketing and splice verification.

For every enumerated index set I the automaton runs on D(I, Ī). Each region
(block, or subblock in the general layout) that no head pair checks during that
run puts I into the bucket

    (region B̂, I \\ B̂, exit configurations of all heads w.r.t. B̂)

Two members I ≠ I′ of one bucket cannot be told apart by the automaton, so it
must treat D(I, Ī′) like D(I, Ī) and accept, although A^I and A^{Ī′} intersect.
Every such candidate is checked by simulating D(I, Ī′) directly; splice
conditions are reported alongside to explain the false accept.

Usage:
    from src.lowerbound.foolbox import fooling_search

    outcome = fooling_search(automaton, n=4, layout=LayoutKind.REVERSED,
                             enumeration=EnumerationSpec.exhaustive())
    if outcome.witness:
        print(outcome.witness.i, outcome.witness.i_prime)
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from src.automata.engine import Configuration, RunResult, Trace, run
from src.automata.model import Automaton, StreamSide
from src.disjointness.instances import (
    EnumerationSpec,
    LayoutKind,
    SubsetFamilyInstance,
    build_instance,
    complement_instance,
)
from src.disjointness.problem import IndexSet
from src.lowerbound.blocks import (
    BlockPartition,
    PartitionPlan,
    Region,
    analyze_checks,
    plan_partition,
)
from src.utils.errors import IncompleteTraceError, LayoutMismatchError
from src.utils.logger import log_with_context
from src.utils.timing import SweepTimer

logger = logging.getLogger(__name__)

ExitConfigTuple = Tuple[Configuration, ...]
BucketKey = Tuple[Region, int, ExitConfigTuple]

VACUOUS_REASON = "vacuous - no buckets: every run checks every region"


def exit_config_tuple(trace: Trace, indices: Sequence[int], instance: SubsetFamilyInstance) -> ExitConfigTuple:
    """config^I: per head, the configuration right after it leaves the last
    position (in its direction) holding an item whose index is in ``indices``.

    Positions are found through the instance layout: identity on S, the
    reversal or pi on T.

    Raises:
        IncompleteTraceError: If some head never leaves that position
        LayoutMismatchError: If the trace does not belong to the instance
    """
    if trace.lengths != (instance.n, instance.n):
        raise LayoutMismatchError(
            "trace does not match the instance size",
            details={"trace": trace.lengths, "instance_n": instance.n},
        )

    s_positions = instance.s_positions_of(indices)
    t_positions = instance.t_positions_of(indices)
    exit_positions = []
    for head in trace.heads:
        positions = s_positions if head.stream is StreamSide.S else t_positions
        exit_positions.append(max(positions) if head.is_forward else min(positions))

    captured: List[Optional[Configuration]] = [None] * len(trace.heads)
    pending = len(trace.heads)
    for record in trace.records:
        if not pending:
            break
        for h, p in enumerate(exit_positions):
            if captured[h] is None and record.before.positions[h] == p != record.after.positions[h]:
                captured[h] = record.after
                pending -= 1

    if pending:
        missing = [trace.heads[h].label for h, c in enumerate(captured) if c is None]
        raise IncompleteTraceError(
            "some heads never leave the region",
            details={"heads": ",".join(missing), "indices": list(indices)},
        )
    return tuple(captured)


# === Reports ===

class SpliceReport(BaseModel):
    """Conditions under which the runs on D(I, Ī) and D(I′, Ī′) splice into a run on D(I, Ī′)."""

    model_config = ConfigDict(populate_by_name=True)

    differ_only_in_region: bool = Field(..., alias="a", description="I and I′ differ only inside B̂")
    region_unchecked: bool = Field(..., alias="b", description="B̂ is checked in neither run")
    same_exit_configs: bool = Field(..., alias="c", description="config^I = config^I′")

    @property
    def all_pass(self) -> bool:
        return self.differ_only_in_region and self.region_unchecked and self.same_exit_configs

    def failed(self) -> List[str]:
        names = {"a": self.differ_only_in_region, "b": self.region_unchecked, "c": self.same_exit_configs}
        return [item for item, ok in names.items() if not ok]


def splice_conditions(
    run_i: Trace,
    run_iprime: Trace,
    bhat: Region,
    instance_i: SubsetFamilyInstance,
    instance_iprime: SubsetFamilyInstance,
    partition: BlockPartition,
) -> SpliceReport:
    """Check the three splice conditions for runs on D(I, Ī) and D(I′, Ī′).

    Never raises for bad runs; a condition that cannot be established fails.
    """
    indices = partition.indices(bhat)
    differ = instance_i.i1.symmetric_difference(instance_iprime.i1)
    cond_a = differ <= frozenset(indices)

    cond_b = all(
        bhat in analyze_checks(trace, inst, partition).unchecked_regions()
        for trace, inst in ((run_i, instance_i), (run_iprime, instance_iprime))
    )

    try:
        cond_c = exit_config_tuple(run_i, indices, instance_i) == exit_config_tuple(
            run_iprime, indices, instance_iprime
        )
    except (IncompleteTraceError, LayoutMismatchError):
        cond_c = False

    return SpliceReport(
        differ_only_in_region=cond_a,
        region_unchecked=cond_b,
        same_exit_configs=cond_c,
    )


class BucketStats(BaseModel):
    """Per-stage counts of the averaging argument.

    x0Prime: runs with a block no non-mixed pair checks (general layout only);
    x0: runs with an unchecked region; x0Best: most runs sharing one unchecked
    region; x1: most runs sharing (B̂, I \\ B̂); x2: largest bucket.
    """

    model_config = ConfigDict(populate_by_name=True)

    runs: int = 0
    x0_prime: Optional[int] = Field(None, alias="x0Prime")
    x0: int = 0
    x0_best: int = Field(0, alias="x0Best")
    x1: int = 0
    x2: int = 0
    buckets: int = 0
    multi_member_buckets: int = Field(0, alias="multiMemberBuckets")
    splices: int = 0


class WitnessReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    i: List[int] = Field(..., alias="I")
    i_prime: List[int] = Field(..., alias="Iprime")
    bhat: str
    accepted: bool
    oracle: bool
    splice_report: SpliceReport = Field(..., alias="spliceReport")


class FoolingReport(BaseModel):
    """Fooling report file; serialize with ``model_dump(by_alias=True)``."""

    model_config = ConfigDict(populate_by_name=True)

    automaton: str
    params: Dict[str, int]
    layout: str
    partition: Dict[str, Any]
    enumeration: Dict[str, Any]
    bucket_stats: BucketStats = Field(..., alias="bucketStats")
    witness: Optional[WitnessReport] = None
    reason: Optional[str] = None


@dataclass(frozen=True)
class FoolingWitness:
    """I ≠ I′ from one bucket and the accepting run on D(I, Ī′)."""

    i: IndexSet
    i_prime: IndexSet
    bhat: Region
    spliced_run: RunResult
    oracle_verdict: bool
    splice: SpliceReport

    def to_report(self) -> WitnessReport:
        return WitnessReport(
            i=list(self.i.sorted()),
            i_prime=list(self.i_prime.sorted()),
            bhat=str(self.bhat),
            accepted=self.spliced_run.accepted,
            oracle=self.oracle_verdict,
            splice_report=self.splice,
        )

    def summary(self) -> str:
        return (
            f"witness I={self.i} I'={self.i_prime} bhat={self.bhat}: "
            f"D(I, complement of I') accepted, oracle says disjoint={self.oracle_verdict}"
        )


@dataclass
class FoolingOutcome:
    automaton: Automaton
    n: int
    plan: PartitionPlan
    enumeration: EnumerationSpec
    stats: BucketStats
    witness: Optional[FoolingWitness]
    reason: Optional[str] = None

    @property
    def vacuous(self) -> bool:
        return self.stats.buckets == 0

    def to_report(self) -> FoolingReport:
        p = self.automaton.params
        part = self.plan.partition
        return FoolingReport(
            automaton=self.automaton.name,
            params={"n": self.n, "m": p.m, "kf": p.kf, "kb": p.kb, "k": p.k},
            layout=str(self.plan.layout),
            partition={
                "mode": self.plan.mode,
                "v1": part.v1,
                "v2": part.v2,
                "v1Wanted": self.plan.v1_wanted,
                "v2Wanted": self.plan.v2_wanted,
                "truncated": self.plan.truncated,
            },
            enumeration=self.enumeration.to_dict(),
            bucket_stats=self.stats,
            witness=self.witness.to_report() if self.witness else None,
            reason=self.reason,
        )


# === Search ===

def _trace_of(a: Automaton, instance: SubsetFamilyInstance) -> Trace:
    return run(a, instance.s, instance.t, capture_trace=True).trace


def fooling_search(
    a: Automaton,
    n: int,
    layout: LayoutKind,
    enumeration: EnumerationSpec,
    exhaustive_limit: int = 20,
    progress: bool = False,
) -> FoolingOutcome:
    """Search for a fooling pair I ≠ I′ that makes ``a`` accept D(I, Ī′).

    Args:
        a: Automaton under test (its head counts fix the partition)
        n: Instance size
        layout: Reversed (forward-only heads) or pi
        enumeration: Which index sets I to run
        exhaustive_limit: Largest n for exhaustive enumeration
        progress: Show a tqdm progress bar

    Returns:
        FoolingOutcome; ``witness`` is the first false accept in canonical order
        (buckets by region, then I \\ B̂, then smallest member; pairs by I, I′)

    Raises:
        StallError: Propagated from the engine
        EnumerationTooLargeError: If exhaustive enumeration exceeds the limit
    """
    plan = plan_partition(n, a.params.kf, a.params.kb, layout)
    partition = plan.partition
    if plan.truncated:
        logger.info(
            f"Partition truncated to v1={partition.v1}, v2={partition.v2} "
            f"(wanted {plan.v1_wanted}x{plan.v2_wanted}) for n={n}"
        )

    index_sets = enumeration.index_sets(n, exhaustive_limit)
    general = plan.mode == "general"
    stats = BucketStats(x0_prime=0 if general else None)
    buckets: Dict[BucketKey, List[IndexSet]] = defaultdict(list)
    per_region: Counter = Counter()
    per_region_rest: Counter = Counter()

    with SweepTimer(f"fooling runs {a.name}") as timer:
        for i in tqdm(index_sets, disable=not progress, desc="runs"):
            instance = complement_instance(i, plan.layout)
            trace = _trace_of(a, instance)
            checks = analyze_checks(trace, instance, partition)
            stats.runs += 1
            timer.tick()

            if general and checks.unchecked_blocks(mixed=False):
                stats.x0_prime += 1
            regions = checks.unchecked_regions()
            if not regions:
                continue
            stats.x0 += 1

            for region in regions:
                indices = partition.indices(region)
                rest = i.minus(indices).as_int
                config = exit_config_tuple(trace, indices, instance)
                per_region[region] += 1
                per_region_rest[(region, rest)] += 1
                buckets[(region, rest, config)].append(i)

    stats.buckets = len(buckets)
    stats.x0_best = max(per_region.values(), default=0)
    stats.x1 = max(per_region_rest.values(), default=0)
    stats.x2 = max((len(members) for members in buckets.values()), default=0)
    ordered = sorted(
        (
            (key[0], key[1], sorted(members, key=lambda s: s.as_int))
            for key, members in buckets.items()
        ),
        key=lambda entry: (entry[0], entry[1], entry[2][0].as_int),
    )
    multi = [entry for entry in ordered if len(entry[2]) > 1]
    stats.multi_member_buckets = len(multi)

    log_with_context(
        logger,
        "info",
        f"{a.name} n={n}: bucket statistics",
        **stats.model_dump(by_alias=True, exclude_none=True, exclude={"splices"}),
    )

    outcome = FoolingOutcome(a, n, plan, enumeration, stats, witness=None)
    if not buckets:
        outcome.reason = VACUOUS_REASON
        return outcome

    with SweepTimer(f"splice runs {a.name}") as timer:
        for region, _, members in multi:
            for i in members:
                for i_prime in members:
                    if i == i_prime:
                        continue
                    spliced = build_instance(i, i_prime.complement(), n, plan.layout)
                    result = run(a, spliced.s, spliced.t)
                    stats.splices += 1
                    timer.tick()
                    oracle = spliced.is_disjoint()
                    if result.accepted and not oracle:
                        outcome.witness = _make_witness(a, plan, region, i, i_prime, result, oracle)
                        logger.warning(outcome.witness.summary())
                        return outcome

    outcome.reason = "no splice of colliding members is accepted" if multi else "every bucket has one member"
    return outcome


def _make_witness(
    a: Automaton,
    plan: PartitionPlan,
    region: Region,
    i: IndexSet,
    i_prime: IndexSet,
    result: RunResult,
    oracle: bool,
) -> FoolingWitness:
    inst_i = complement_instance(i, plan.layout)
    inst_iprime = complement_instance(i_prime, plan.layout)
    splice = splice_conditions(
        _trace_of(a, inst_i), _trace_of(a, inst_iprime), region, inst_i, inst_iprime, plan.partition
    )
    return FoolingWitness(
        i=i,
        i_prime=i_prime,
        bhat=region,
        spliced_run=result,
        oracle_verdict=oracle,
        splice=splice,
    )
