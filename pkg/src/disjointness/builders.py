"""Disjointness automata: the subset-memory algorithm, the √n-heads algorithm and
memory-starved fixtures, plus oracle verification sweeps.

Usage:
    from src.disjointness.builders import build_sqrt, verify_against_oracle
    from src.disjointness.problem import all_stream_pairs

    a = build_sqrt(4)
    report = verify_against_oracle(a, all_stream_pairs(2))
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from tqdm import tqdm

from src.automata.engine import run
from src.automata.model import (
    END,
    AdvanceMask,
    Automaton,
    AutomatonParams,
    DataItem,
    ExplicitStates,
    State,
    StateSpace,
    Stream,
    SymbolView,
    make_automaton,
)
from src.disjointness.instances import SubsetFamilyInstance
from src.disjointness.problem import (
    IndexSet,
    StreamPair,
    is_disjoint_oracle,
    item_token,
    make_domain,
    parse_item,
)
from src.utils.errors import InvalidSizeError, InvalidSpecError
from src.utils.timing import SweepTimer
from src.utils.validation import validate_perfect_square, validate_positive_int

logger = logging.getLogger(__name__)


class Marker(str, Enum):
    """Named singleton states."""

    REJECTING = "Rejecting"
    SCANNING = "Scanning"
    FOUND = "Found"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Seen:
    """Subset-memory state: the items collected so far."""

    items: FrozenSet[DataItem] = frozenset()

    def __str__(self) -> str:
        return "Seen{" + ",".join(sorted(self.items)) + "}"


@dataclass(frozen=True)
class Phase1:
    """√n algorithm, Phase 1: the still-moving S heads are at ``pos``."""

    pos: int

    def __str__(self) -> str:
        return f"Phase1({self.pos})"


class BoundedSubsetStates(StateSpace):
    """Seen(X) for every X ⊆ universe with |X| <= max_size, plus a few marker states.

    The set is described structurally; ``size`` is computed, never materialized.
    """

    def __init__(self, universe: Iterable[DataItem], max_size: int, extras: Tuple[State, ...] = ()):
        self.universe = tuple(universe)
        self._universe_set = frozenset(self.universe)
        self.max_size = max_size
        self.extras = extras

    @property
    def size(self) -> int:
        u = len(self.universe)
        return sum(math.comb(u, i) for i in range(min(u, self.max_size) + 1)) + len(self.extras)

    def __contains__(self, state: object) -> bool:
        if isinstance(state, Seen):
            return len(state.items) <= self.max_size and state.items <= self._universe_set
        return state in self.extras

    def __iter__(self) -> Iterator[State]:
        yield from self.extras
        for r in range(min(len(self.universe), self.max_size) + 1):
            for combo in combinations(self.universe, r):
                yield Seen(frozenset(combo))

    def __repr__(self) -> str:
        return f"BoundedSubsetStates(|U|={len(self.universe)}, max={self.max_size}, size={self.size})"


def _is_seen(state: State) -> bool:
    return isinstance(state, Seen)


# === Subset-memory algorithm ===

def build_trivial(n: int) -> Automaton:
    """One forward head per stream and 2^{2n} states.

    Phase 1 stores the items of S in the state while the S head advances alone;
    Phase 2 moves the T head and enters Rejecting on the first stored item.
    Items outside D_n, or more than n distinct items on S, also lead to
    Rejecting: such streams are not Disj_n inputs.

    Raises:
        InvalidSizeError: If n < 1
    """
    validate_positive_int(n, "n", error_cls=InvalidSizeError)
    domain = make_domain(n)
    states = BoundedSubsetStates(domain.items, n, extras=(Marker.REJECTING,))
    universe = frozenset(domain.items)

    def delta(state: State, symbols: SymbolView) -> Tuple[State, AdvanceMask]:
        s_item, t_item = symbols
        if state is Marker.REJECTING:
            return state, (True, True)
        if s_item is not END:
            stored = state.items | {s_item}
            if s_item not in universe or len(stored) > n:
                return Marker.REJECTING, (True, False)
            return Seen(stored), (True, False)
        if t_item in state.items:
            return Marker.REJECTING, (False, True)
        return state, (False, True)

    params = AutomatonParams(domain_size=len(domain), m=2 ** (2 * n), kf=1, kb=0)
    return make_automaton(params, states, Seen(), _is_seen, delta, name=f"trivial:{n}")


# === √n-heads algorithm ===

def build_sqrt(n: int) -> Automaton:
    """√n forward heads per stream and n+2-√n states.

    Phase 1 spreads the S heads so head i stops on position (i-1)·√n+1; the
    state ``Phase1(pos)`` tracks the moving heads and the last Phase-1 state is
    identified with Scanning. In Phase 2 the number e of leading T heads at END
    identifies the sub-phase: T head e+1 scans T while its item is compared with
    every S item under an S head. When a T head reaches END the S heads shift
    by one position before the next T head starts. Once all T heads are at END
    the S heads are flushed without comparisons.

    The state cannot see whether the shift for sub-phase e has already been
    made, so the parity of the number of shifts is kept in the state: Scanning
    means even and ``Phase1(1)`` (which is never revisited in Phase 1 once a T
    head is at END) means odd. The flush always ends in Scanning unless a match was
    found, and the input is accepted iff the final state is Scanning.

    Raises:
        NotPerfectSquareError: If n is not a perfect square
        InvalidSizeError: If n < 1
    """
    validate_positive_int(n, "n", error_cls=InvalidSizeError)
    r = validate_perfect_square(n)
    last_pos = n - r
    targets = tuple((i - 1) * r + 1 for i in range(1, r + 1))
    odd = Phase1(1)

    states: List[State] = [Phase1(pos) for pos in range(1, last_pos + 1)]
    states += [Marker.SCANNING, Marker.FOUND]
    start: State = Phase1(1) if last_pos >= 1 else Marker.SCANNING

    all_s = (True,) * r
    no_s = (False,) * r
    no_t = (False,) * r

    def delta(state: State, symbols: SymbolView) -> Tuple[State, AdvanceMask]:
        s_view, t_view = symbols[:r], symbols[r:]
        if state is Marker.FOUND:
            return state, (True,) * (2 * r)

        e = 0
        while e < r and t_view[e] is END:
            e += 1

        if isinstance(state, Phase1) and e == 0:
            pos = state.pos
            mask = tuple(target > pos for target in targets)
            nxt = Marker.SCANNING if pos + 1 == last_pos + 1 else Phase1(pos + 1)
            return nxt, mask + no_t

        if e == r:
            return Marker.SCANNING, all_s + no_t

        parity = 1 if state == odd else 0
        if e % 2 != parity:
            return (Marker.SCANNING if parity else odd), all_s + no_t

        item = t_view[e]
        advance_t = tuple(h == e for h in range(r))
        if any(item == s for s in s_view if s is not END):
            return Marker.FOUND, no_s + advance_t
        return state, no_s + advance_t

    params = AutomatonParams(domain_size=2 * n, m=n + 2, kf=r, kb=0)
    return make_automaton(
        params,
        ExplicitStates(states),
        start,
        lambda q: q is Marker.SCANNING,
        delta,
        name=f"sqrt:{n}",
    )


# === Memory-starved fixture ===

def build_crippled(n: int, remembered: IndexSet) -> Automaton:
    """A deliberately incorrect subset-memory automaton.

    Phase 1 moves the T head and stores only the items whose index lies in
    ``remembered``; Phase 2 moves the S head and rejects on a stored item. Any
    instance whose common items all have indices outside ``remembered`` is
    falsely accepted.

    Raises:
        InvalidSpecError: If ``remembered`` is all of {1..n}
    """
    validate_positive_int(n, "n", error_cls=InvalidSizeError)
    if remembered.n != n:
        raise InvalidSpecError(
            "remembered set belongs to a different instance size",
            details={"remembered_n": remembered.n, "n": n},
        )
    if len(remembered) == n:
        raise InvalidSpecError(
            "a crippled automaton must forget at least one index",
            details={"n": n, "remembered": str(remembered)},
        )

    universe = tuple(item_token(kind, i) for i in remembered for kind in ("a", "b"))
    states = BoundedSubsetStates(universe, len(universe), extras=(Marker.REJECTING,))

    def recorded(item: DataItem) -> bool:
        parsed = parse_item(item)
        return parsed is not None and parsed[1] in remembered

    def delta(state: State, symbols: SymbolView) -> Tuple[State, AdvanceMask]:
        s_item, t_item = symbols
        if state is Marker.REJECTING:
            return state, (True, True)
        if t_item is not END:
            if recorded(t_item):
                return Seen(state.items | {t_item}), (False, True)
            return state, (False, True)
        if s_item in state.items:
            return Marker.REJECTING, (True, False)
        return state, (True, False)

    params = AutomatonParams(domain_size=2 * n, m=states.size, kf=1, kb=0)
    return make_automaton(
        params, states, Seen(), _is_seen, delta, name=f"crippled:{n}:{remembered.to_mask()}"
    )


# === Sweeps ===

Instances = Iterable[Union[SubsetFamilyInstance, StreamPair]]


def _streams(instance: Union[SubsetFamilyInstance, StreamPair]) -> StreamPair:
    if isinstance(instance, SubsetFamilyInstance):
        return instance.s, instance.t
    return instance


def count_reachable_states(a: Automaton, instances: Instances) -> int:
    """Distinct states seen across full runs of ``a`` on every instance.

    Includes the start state of every run; 0 for an empty family.
    """
    seen = set()
    for instance in instances:
        s, t = _streams(instance)
        result = run(a, s, t, capture_trace=True)
        seen.update(c.state for c in result.trace.configurations())
    return len(seen)


@dataclass(frozen=True)
class Disagreement:
    s: Stream
    t: Stream
    accepted: bool
    oracle: bool


@dataclass
class VerificationReport:
    """Agreement between an automaton and the disjointness oracle."""

    automaton: str
    total: int = 0
    agreements: int = 0
    false_accepts: int = 0
    false_rejects: int = 0
    first_disagreements: List[Disagreement] = field(default_factory=list)
    reachable_states: Optional[int] = None

    @property
    def disagreements(self) -> int:
        return self.false_accepts + self.false_rejects

    @property
    def all_agree(self) -> bool:
        return self.disagreements == 0

    def to_dict(self) -> dict:
        return {
            "automaton": self.automaton,
            "total": self.total,
            "agreements": self.agreements,
            "falseAccepts": self.false_accepts,
            "falseRejects": self.false_rejects,
            "firstDisagreements": [
                {"s": str(d.s), "t": str(d.t), "accepted": d.accepted, "oracle": d.oracle}
                for d in self.first_disagreements
            ],
            "reachableStates": self.reachable_states,
        }


def verify_against_oracle(
    a: Automaton,
    instances: Instances,
    track_states: bool = False,
    keep: int = 5,
    progress: bool = False,
    total: Optional[int] = None,
) -> VerificationReport:
    """Run ``a`` on every instance and compare with is_disjoint_oracle.

    Args:
        a: Automaton under test
        instances: Stream pairs or subset-family instances
        track_states: Also count reachable states (captures traces, slower)
        keep: How many disagreements to keep verbatim
        progress: Show a tqdm progress bar
        total: Length hint for the progress bar

    Raises:
        StallError: Propagated from the engine
    """
    report = VerificationReport(automaton=a.name)
    seen = set()

    with SweepTimer(f"verify {a.name}") as timer:
        for instance in tqdm(instances, total=total, disable=not progress, desc=a.name):
            s, t = _streams(instance)
            result = run(a, s, t, capture_trace=track_states)
            if track_states:
                seen.update(c.state for c in result.trace.configurations())

            oracle = is_disjoint_oracle(s, t)
            report.total += 1
            if result.accepted == oracle:
                report.agreements += 1
            else:
                if result.accepted:
                    report.false_accepts += 1
                else:
                    report.false_rejects += 1
                if len(report.first_disagreements) < keep:
                    report.first_disagreements.append(Disagreement(s, t, result.accepted, oracle))
            timer.tick()

    if track_states:
        report.reachable_states = len(seen)
    if not report.all_agree:
        logger.warning(
            f"{a.name} disagrees with the oracle on {report.disagreements}/{report.total} inputs"
        )
    return report
