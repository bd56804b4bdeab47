"""The set-disjointness problem Disj_n: the domain D_n, index sets and the oracle.

D_n = {a_1, b_1, ..., a_n, b_n}; an input is a pair of length-n streams over
D_n, and the answer is whether their item SETS are disjoint.

Usage:
    from src.disjointness.problem import IndexSet, is_disjoint_oracle, subset_items

    i = IndexSet.from_mask("1100")        # {1, 2} for n = 4
    subset_items(i)                       # {"a1", "a2", "b3", "b4"}
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, Optional, Tuple

import numpy as np

from src.automata.model import DataItem, Stream
from src.utils.errors import InvalidParameterError, InvalidSizeError
from src.utils.validation import validate_index_members, validate_positive_int

logger = logging.getLogger(__name__)

_ITEM = re.compile(r"^([ab])([1-9][0-9]*)$")

StreamPair = Tuple[Stream, Stream]


def item_token(kind: str, index: int) -> DataItem:
    return f"{kind}{index}"


def parse_item(token: str) -> Optional[Tuple[str, int]]:
    """Split ``"a7"`` into ``("a", 7)``; None for tokens outside the a<i>/b<i> grammar."""
    match = _ITEM.match(token)
    if match is None:
        return None
    return match.group(1), int(match.group(2))


@dataclass(frozen=True)
class DisjDomain:
    """D_n in canonical order a1, b1, a2, b2, ..."""

    n: int
    items: Tuple[DataItem, ...]

    def __contains__(self, item: object) -> bool:
        parsed = parse_item(item) if isinstance(item, str) else None
        return parsed is not None and parsed[1] <= self.n

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[DataItem]:
        return iter(self.items)


def make_domain(n: int) -> DisjDomain:
    """Build D_n.

    Raises:
        InvalidSizeError: If n < 1
    """
    validate_positive_int(n, "n", error_cls=InvalidSizeError)
    items = tuple(item_token(kind, i) for i in range(1, n + 1) for kind in ("a", "b"))
    return DisjDomain(n=n, items=items)


def is_disjoint_oracle(s: Stream, t: Stream) -> bool:
    """True iff the item sets of s and t share no element (order and repeats ignored)."""
    return set(s.items).isdisjoint(t.items)


@dataclass(frozen=True)
class IndexSet:
    """A subset I of {1..n}.

    Index sets order as integers with bit i-1 set for index i; masks on the
    command line are big-endian position strings (``"1100"`` = {1, 2}).
    """

    n: int
    members: FrozenSet[int]

    def __post_init__(self):
        validate_positive_int(self.n, "n", error_cls=InvalidSizeError)
        object.__setattr__(self, "members", frozenset(self.members))
        validate_index_members(self.members, self.n, "index set")

    # --- constructors ---

    @classmethod
    def of(cls, n: int, members: Iterable[int] = ()) -> "IndexSet":
        return cls(n, frozenset(members))

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(n, frozenset(range(1, n + 1)))

    @classmethod
    def from_int(cls, n: int, value: int) -> "IndexSet":
        return cls(n, frozenset(i for i in range(1, n + 1) if value >> (i - 1) & 1))

    @classmethod
    def from_mask(cls, mask: str) -> "IndexSet":
        if not mask or any(c not in "01" for c in mask):
            raise InvalidParameterError(
                "index mask must be a non-empty string of 0/1",
                details={"mask": mask},
            )
        return cls(len(mask), frozenset(i for i, c in enumerate(mask, start=1) if c == "1"))

    @classmethod
    def from_csv(cls, text: str, n: int) -> "IndexSet":
        parts = [p.strip() for p in text.split(",") if p.strip()]
        try:
            members = frozenset(int(p) for p in parts)
        except ValueError:
            raise InvalidParameterError(
                "index list must be comma-separated integers",
                details={"value": text},
            ) from None
        return cls(n, members)

    @classmethod
    def parse(cls, text: str, n: int) -> "IndexSet":
        """Accept either a length-n 0/1 mask or a comma-separated index list."""
        text = text.strip()
        if len(text) == n and text and all(c in "01" for c in text):
            return cls.from_mask(text)
        return cls.from_csv(text, n)

    # --- views ---

    @property
    def as_int(self) -> int:
        return sum(1 << (i - 1) for i in self.members)

    def to_mask(self) -> str:
        return "".join("1" if i in self.members else "0" for i in range(1, self.n + 1))

    def sorted(self) -> Tuple[int, ...]:
        return tuple(sorted(self.members))

    def complement(self) -> "IndexSet":
        return IndexSet(self.n, frozenset(range(1, self.n + 1)) - self.members)

    def minus(self, indices: Iterable[int]) -> "IndexSet":
        return IndexSet(self.n, self.members - frozenset(indices))

    def symmetric_difference(self, other: "IndexSet") -> FrozenSet[int]:
        return self.members ^ other.members

    def __contains__(self, i: object) -> bool:
        return i in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __lt__(self, other: "IndexSet") -> bool:
        return (self.n, self.as_int) < (other.n, other.as_int)

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.sorted()) + "}"


def subset_items(i: IndexSet) -> FrozenSet[DataItem]:
    """A^I = {a_i : i in I} ∪ {b_i : i not in I}."""
    return frozenset(
        item_token("a" if idx in i else "b", idx) for idx in range(1, i.n + 1)
    )


def all_index_sets(n: int) -> Iterator[IndexSet]:
    """Every I ⊆ {1..n} in ascending integer order."""
    for value in range(1 << n):
        yield IndexSet.from_int(n, value)


def sample_index_sets(n: int, count: int, seed: int) -> Tuple[IndexSet, ...]:
    """``count`` seeded random index sets, duplicates dropped (first occurrence kept)."""
    validate_positive_int(count, "count")
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(count, n), dtype=np.int8)
    seen = {}
    for row in bits:
        members = frozenset(int(i) + 1 for i in np.flatnonzero(row))
        seen.setdefault(members, IndexSet(n, members))
    return tuple(seen.values())


def all_stream_pairs(n: int) -> Iterator[StreamPair]:
    """Every pair of length-n streams over D_n: (2n)^n · (2n)^n pairs."""
    domain = make_domain(n).items
    streams = [Stream(items) for items in itertools.product(domain, repeat=n)]
    for s in streams:
        for t in streams:
            yield s, t


def sample_stream_pairs(n: int, count: int, seed: int) -> Iterator[StreamPair]:
    """``count`` seeded random pairs of length-n streams over D_n (repeats allowed)."""
    validate_positive_int(count, "count")
    domain = np.array(make_domain(n).items)
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, len(domain), size=(count, 2, n))
    for row in draws:
        yield Stream(tuple(domain[row[0]].tolist())), Stream(tuple(domain[row[1]].tolist()))
