"""Step-exact simulator for mp2s-automata.

Head positions are absolute 1-based stream positions. A head that has passed its
stream sits on the END position: |stream| + 1 for a forward head, 0 for a
backward head. Both encodings coincide with the start position on an empty
stream, so empty streams need no special case.

A run ends as soon as every head is at END; it is accepted if the state then
belongs to F. A run in which m+1 consecutive steps advance no head is stuck in a
loop (with fixed positions a deterministic machine must revisit a state) and
raises StallError.

Usage:
    from src.automata.engine import run

    result = run(automaton, s, t, capture_trace=True)
    result.accepted, result.steps, result.trace.records[0].symbols
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from src.automata.model import (
    END,
    AdvanceMask,
    Automaton,
    HeadId,
    State,
    Stream,
    StreamSide,
    SymbolView,
)
from src.utils.errors import (
    InvalidParameterError,
    RunFinishedError,
    StallError,
    StateOutOfSpaceError,
)

logger = logging.getLogger(__name__)

# (items, direction +1/-1, END position) per head
_Tape = Tuple[Tuple[str, ...], int, int]


@dataclass(frozen=True)
class Configuration:
    """Current state plus the absolute positions of all heads (canonical order)."""

    state: State
    positions: Tuple[int, ...]


@dataclass(frozen=True)
class StepRecord:
    step: int
    before: Configuration
    symbols: SymbolView
    mask: AdvanceMask
    after: Configuration


@dataclass(frozen=True)
class Trace:
    """Every step of one run, in order. ``lengths`` is (|S|, |T|)."""

    heads: Tuple[HeadId, ...]
    lengths: Tuple[int, int]
    initial: Configuration
    records: Tuple[StepRecord, ...]

    @property
    def final(self) -> Configuration:
        return self.records[-1].after if self.records else self.initial

    def configurations(self) -> Iterator[Configuration]:
        """The initial configuration and the configuration after every step."""
        yield self.initial
        for record in self.records:
            yield record.after

    def end_position(self, head: HeadId) -> int:
        length = self.lengths[0] if head.stream is StreamSide.S else self.lengths[1]
        return length + 1 if head.is_forward else 0

    def is_complete(self) -> bool:
        final = self.final.positions
        return all(final[h.index] == self.end_position(h) for h in self.heads)

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class RunResult:
    accepted: bool
    steps: int
    final: Configuration
    trace: Optional[Trace] = None


def _tapes(a: Automaton, s: Stream, t: Stream) -> Tuple[_Tape, ...]:
    tapes = []
    for head in a.heads:
        items = s.items if head.stream is StreamSide.S else t.items
        if head.is_forward:
            tapes.append((items, 1, len(items) + 1))
        else:
            tapes.append((items, -1, 0))
    return tuple(tapes)


def _read(tapes: Sequence[_Tape], positions: Sequence[int]) -> SymbolView:
    return tuple(
        END if p == end else items[p - 1]
        for (items, _, end), p in zip(tapes, positions)
    )


def _all_at_end(tapes: Sequence[_Tape], positions: Sequence[int]) -> bool:
    return all(p == end for (_, _, end), p in zip(tapes, positions))


def _apply(
    a: Automaton,
    tapes: Sequence[_Tape],
    state: State,
    positions: Tuple[int, ...],
) -> Tuple[SymbolView, AdvanceMask, State, Tuple[int, ...]]:
    symbols = _read(tapes, positions)
    new_state, mask = a.delta(state, symbols)
    mask = tuple(mask)

    if len(mask) != len(tapes):
        raise StateOutOfSpaceError(
            "advance mask has the wrong length",
            details={"expected": len(tapes), "actual": len(mask), "state": state},
        )
    if new_state not in a.states:
        raise StateOutOfSpaceError(
            "transition produced an undeclared state",
            details={"from": state, "to": new_state, "automaton": a.name},
        )

    new_positions = tuple(
        p + direction if adv and p != end else p
        for (_, direction, end), p, adv in zip(tapes, positions, mask)
    )
    return symbols, mask, new_state, new_positions


def initial_configuration(a: Automaton, s: Stream, t: Stream) -> Configuration:
    """Start state; forward heads on position 1, backward heads on the last position.

    Heads on an empty stream start at END.
    """
    positions = tuple(
        1 if direction > 0 else len(items)
        for items, direction, _ in _tapes(a, s, t)
    )
    return Configuration(a.start, positions)


def step(a: Automaton, s: Stream, t: Stream, c: Configuration) -> Configuration:
    """Perform one computation step from configuration ``c``.

    Raises:
        RunFinishedError: If every head is already at END
        TransitionUndefinedError: If a table-loaded delta has no matching row
        StateOutOfSpaceError: If delta leaves Q or returns a malformed mask
    """
    tapes = _tapes(a, s, t)
    if len(c.positions) != len(tapes):
        raise InvalidParameterError(
            "configuration has the wrong number of head positions",
            details={"expected": len(tapes), "actual": len(c.positions)},
        )
    if _all_at_end(tapes, c.positions):
        raise RunFinishedError(
            "all heads have passed their streams",
            details={"state": c.state},
        )
    _, _, state, positions = _apply(a, tapes, c.state, c.positions)
    return Configuration(state, positions)


def run(a: Automaton, s: Stream, t: Stream, capture_trace: bool = False) -> RunResult:
    """Run ``a`` on (s, t) until every head has passed its stream.

    Args:
        a: Automaton to execute
        s: Stream S
        t: Stream T
        capture_trace: Record every step (including all-stay steps)

    Returns:
        RunResult; ``trace`` is set only when capture_trace is true

    Raises:
        StallError: If m+1 consecutive steps advance no head
    """
    tapes = _tapes(a, s, t)
    initial = initial_configuration(a, s, t)
    state, positions = initial.state, initial.positions
    stall_limit = a.params.m + 1
    records: List[StepRecord] = []
    steps = 0
    idle = 0

    while not _all_at_end(tapes, positions):
        symbols, mask, new_state, new_positions = _apply(a, tapes, state, positions)
        steps += 1

        if capture_trace:
            records.append(
                StepRecord(
                    step=steps,
                    before=Configuration(state, positions),
                    symbols=symbols,
                    mask=mask,
                    after=Configuration(new_state, new_positions),
                )
            )

        idle = idle + 1 if new_positions == positions else 0
        state, positions = new_state, new_positions

        if idle >= stall_limit:
            logger.warning(f"{a.name} stalled after {steps} steps in state {state!r}")
            raise StallError(
                "no head advanced for m+1 consecutive steps",
                details={"automaton": a.name, "steps": steps, "state": state, "positions": positions},
            )

    final = Configuration(state, positions)
    trace = None
    if capture_trace:
        trace = Trace(
            heads=a.heads,
            lengths=(len(s), len(t)),
            initial=initial,
            records=tuple(records),
        )
    accepted = a.is_accepting(state)
    logger.debug(f"{a.name} {'accepted' if accepted else 'rejected'} after {steps} steps")
    return RunResult(accepted=accepted, steps=steps, final=final, trace=trace)


def step_bound(a: Automaton, s: Stream, t: Stream) -> int:
    """Upper bound on the steps of any non-stalling run: (k·(maxLen+1)+1)·(m+1)."""
    max_len = max(len(s), len(t))
    return (a.params.k * (max_len + 1) + 1) * (a.params.m + 1)
