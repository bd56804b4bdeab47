"""The mp2s-automaton: streams, parameters, head indexing, state spaces and the
validated Automaton value.

An automaton with parameters (D, m, kf, kb) reads two streams S and T with kf
forward and kb backward heads on each, k = 2kf + 2kb heads in total. Heads are
indexed in one canonical order, used for symbol views and advance masks alike:

    S-forward 1..kf, S-backward 1..kb, T-forward 1..kf, T-backward 1..kb

Usage:
    from src.automata.model import AutomatonParams, make_automaton

    params = AutomatonParams(domain_size=4, m=3, kf=1, kb=0)
    a = make_automaton(params, states=["p", "q", "r"], start="p",
                       accepting={"p"}, delta=my_delta)
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import (
    Any,
    Callable,
    Collection,
    Hashable,
    Iterable,
    Iterator,
    Tuple,
    Union,
)

from src.utils.errors import (
    InvalidParameterError,
    InvalidStartStateError,
    StateBudgetExceededError,
)
from src.utils.validation import validate_non_negative_int, validate_positive_int

logger = logging.getLogger(__name__)


class EndMarker:
    """The reserved symbol read by a head that has passed its entire stream."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "end"

    def __reduce__(self):
        return (EndMarker, ())


END = EndMarker()
END_TOKEN = "end"

# Data items are opaque string tokens ("a7", "b7" for the disjointness domain).
DataItem = str
Symbol = Union[DataItem, EndMarker]
SymbolView = Tuple[Symbol, ...]
# True = advance, False = stay
AdvanceMask = Tuple[bool, ...]
ADVANCE = True
STAY = False

State = Hashable
Delta = Callable[[Any, SymbolView], Tuple[Any, AdvanceMask]]


@dataclass(frozen=True)
class Stream:
    """Immutable finite stream of data items with 1-based positions."""

    items: Tuple[DataItem, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        for p, item in enumerate(self.items, start=1):
            if not isinstance(item, str) or not item or item == END_TOKEN:
                raise InvalidParameterError(
                    "stream items must be non-empty tokens other than 'end'",
                    details={"position": p, "item": item},
                )

    @classmethod
    def of(cls, tokens: Iterable[DataItem]) -> "Stream":
        return cls(tuple(tokens))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[DataItem]:
        return iter(self.items)

    def item(self, position: int) -> DataItem:
        """Item at 1-based position; raises for positions outside 1..|S|."""
        if not 1 <= position <= len(self.items):
            raise InvalidParameterError(
                "stream position out of range",
                details={"position": position, "valid_range": f"[1, {len(self.items)}]"},
            )
        return self.items[position - 1]

    def __str__(self) -> str:
        return " ".join(self.items)


@dataclass(frozen=True)
class AutomatonParams:
    """Parameters (D, m, kf, kb) with the derived head count k = 2kf + 2kb."""

    domain_size: int
    m: int
    kf: int
    kb: int

    def __post_init__(self):
        validate_non_negative_int(self.domain_size, "domain_size")
        validate_positive_int(self.m, "m")
        validate_non_negative_int(self.kf, "kf")
        validate_non_negative_int(self.kb, "kb")

    @property
    def k(self) -> int:
        return 2 * self.kf + 2 * self.kb


class StreamSide(str, Enum):
    S = "S"
    T = "T"


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class HeadId:
    """A head: its stream, direction, 1-based ordinal in its group, and global index."""

    stream: StreamSide
    direction: Direction
    ordinal: int
    index: int

    @property
    def is_forward(self) -> bool:
        return self.direction is Direction.FORWARD

    @property
    def label(self) -> str:
        return f"{self.stream.value}-{'f' if self.is_forward else 'b'}{self.ordinal}"

    def __str__(self) -> str:
        return self.label


@lru_cache(maxsize=None)
def head_layout(kf: int, kb: int) -> Tuple[HeadId, ...]:
    """All k heads in canonical order."""
    heads = []
    for side in (StreamSide.S, StreamSide.T):
        for direction, count in ((Direction.FORWARD, kf), (Direction.BACKWARD, kb)):
            for ordinal in range(1, count + 1):
                heads.append(HeadId(side, direction, ordinal, len(heads)))
    return tuple(heads)


class StateSpace(ABC):
    """Declared finite state set Q. ``size`` may be astronomically large, so it is
    an int property rather than ``__len__``."""

    @property
    @abstractmethod
    def size(self) -> int:
        ...

    @abstractmethod
    def __contains__(self, state: object) -> bool:
        ...

    @abstractmethod
    def __iter__(self) -> Iterator[State]:
        ...


class ExplicitStates(StateSpace):
    """A state set given by listing its members (order preserved)."""

    def __init__(self, states: Iterable[State]):
        ordered = list(dict.fromkeys(states))
        self._states = tuple(ordered)
        self._members = frozenset(ordered)

    @property
    def size(self) -> int:
        return len(self._states)

    def __contains__(self, state: object) -> bool:
        try:
            return state in self._members
        except TypeError:
            return False

    def __iter__(self) -> Iterator[State]:
        return iter(self._states)

    def __repr__(self) -> str:
        return f"ExplicitStates(size={self.size})"


@dataclass(frozen=True)
class Automaton:
    """A validated mp2s-automaton. Immutable and safe to share between runs."""

    params: AutomatonParams
    states: StateSpace
    start: State
    accepting: Callable[[State], bool]
    delta: Delta
    name: str = field(default="automaton", compare=False)

    @property
    def heads(self) -> Tuple[HeadId, ...]:
        return head_layout(self.params.kf, self.params.kb)

    def is_accepting(self, state: State) -> bool:
        return bool(self.accepting(state))

    def __str__(self) -> str:
        p = self.params
        return f"{self.name}(m={p.m}, kf={p.kf}, kb={p.kb}, |Q|={self.states.size})"


def make_automaton(
    params: AutomatonParams,
    states: Union[StateSpace, Iterable[State]],
    start: State,
    accepting: Union[Callable[[State], bool], Collection[State]],
    delta: Delta,
    name: str = "automaton",
) -> Automaton:
    """Validate and assemble an Automaton.

    Args:
        params: Parameters (domain size, state budget m, kf, kb)
        states: Declared state set, either a StateSpace or an iterable of tokens
        start: Start state; must belong to ``states``
        accepting: Predicate on states, or a collection of accepting states (F)
        delta: Pure transition mapping (state, symbol view) -> (state, advance mask)
        name: Label used in logs and reports

    Raises:
        StateBudgetExceededError: If |states| > m
        InvalidStartStateError: If start is not in states
    """
    space = states if isinstance(states, StateSpace) else ExplicitStates(states)

    if space.size > params.m:
        raise StateBudgetExceededError(
            "declared state set exceeds the state budget",
            details={"declared": space.size, "m": params.m, "automaton": name},
        )

    if start not in space:
        raise InvalidStartStateError(
            "start state is not a declared state",
            details={"start": start, "automaton": name},
        )

    if not callable(accepting):
        accepting = frozenset(accepting).__contains__

    automaton = Automaton(
        params=params,
        states=space,
        start=start,
        accepting=accepting,
        delta=delta,
        name=name,
    )
    logger.debug(f"Built {automaton} with k={params.k}")
    return automaton
