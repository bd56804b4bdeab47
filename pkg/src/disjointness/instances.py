"""Subset-family instances D(I1, I2) = (S^{I1}, T^{I2}) and their stream layouts.

S^I carries the index-i item (a_i if i in I, else b_i) at position i. T^I carries
the same items in a permuted order:

* ``reversed``: index i at position n - i + 1 (forward-only lower bound);
* ``pi``:       index i at position pi(i), where pi swaps block B_j with block
  B_{v1-j+1} and keeps the offset inside the block (general lower bound).

Both permutations are involutions, so the index read at T-position q is the
permutation applied to q.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterator, Optional, Sequence, Tuple

from src.automata.model import DataItem, Stream
from src.disjointness.problem import (
    IndexSet,
    all_index_sets,
    is_disjoint_oracle,
    item_token,
    sample_index_sets,
    subset_items,
)
from src.utils.errors import (
    EnumerationTooLargeError,
    InvalidParameterError,
    InvalidSizeError,
)
from src.utils.validation import validate_divides, validate_positive_int

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PermutationPi:
    """pi((j-1)·n/v1 + s) = (v1-j)·n/v1 + s, stored as a 1-based lookup table."""

    n: int
    v1: int
    mapping: Tuple[int, ...] = field(repr=False)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise InvalidParameterError(
                "pi argument out of range",
                details={"value": i, "valid_range": f"[1, {self.n}]"},
            )
        return self.mapping[i - 1]

    def as_tuple(self) -> Tuple[int, ...]:
        return self.mapping


def permutation_pi(n: int, v1: int) -> PermutationPi:
    """Build pi for n indices split into v1 equal blocks.

    Raises:
        DivisibilityError: If v1 does not divide n
    """
    validate_positive_int(n, "n", error_cls=InvalidSizeError)
    validate_positive_int(v1, "v1")
    validate_divides(v1, n, "v1")
    size = n // v1
    mapping = tuple(
        (v1 - j) * size + s
        for j in range(1, v1 + 1)
        for s in range(1, size + 1)
    )
    return PermutationPi(n=n, v1=v1, mapping=mapping)


class LayoutKind(str, Enum):
    REVERSED = "reversed"
    PI = "pi"


@dataclass(frozen=True)
class Layout:
    """How T^I orders its items. ``v1`` is only meaningful for the pi layout."""

    kind: LayoutKind
    v1: int = 1

    @classmethod
    def reversed(cls) -> "Layout":
        return cls(LayoutKind.REVERSED)

    @classmethod
    def pi(cls, v1: int) -> "Layout":
        validate_positive_int(v1, "v1")
        return cls(LayoutKind.PI, v1)

    @classmethod
    def parse(cls, text: str) -> "Layout":
        """``reversed``, ``pi`` (v1 = 1) or ``pi:<v1>``."""
        kind, _, arg = text.strip().partition(":")
        if kind == LayoutKind.REVERSED.value and not arg:
            return cls.reversed()
        if kind == LayoutKind.PI.value:
            try:
                return cls.pi(int(arg) if arg else 1)
            except ValueError:
                pass
        raise InvalidParameterError(
            "layout must be 'reversed', 'pi' or 'pi:<v1>'",
            details={"layout": text},
        )

    def __str__(self) -> str:
        return self.kind.value if self.kind is LayoutKind.REVERSED else f"pi:{self.v1}"


@dataclass(frozen=True)
class SubsetFamilyInstance:
    """The input D(I1, I2) with both streams realized."""

    n: int
    i1: IndexSet
    i2: IndexSet
    layout: Layout
    s: Stream
    t: Stream
    pi: Optional[PermutationPi] = field(default=None, repr=False, compare=False)

    def s_index_at(self, position: int) -> int:
        return position

    def t_index_at(self, position: int) -> int:
        if self.pi is not None:
            return self.pi(position)
        return self.n - position + 1

    def s_positions_of(self, indices: Sequence[int]) -> FrozenSet[int]:
        return frozenset(indices)

    def t_positions_of(self, indices: Sequence[int]) -> FrozenSet[int]:
        # both layouts are involutions
        return frozenset(self.t_index_at(i) for i in indices)

    @property
    def items_s(self) -> FrozenSet[DataItem]:
        return subset_items(self.i1)

    @property
    def items_t(self) -> FrozenSet[DataItem]:
        return subset_items(self.i2)

    def is_disjoint(self) -> bool:
        return is_disjoint_oracle(self.s, self.t)


def _layout_positions(n: int, layout: Layout) -> Tuple[Optional[PermutationPi], Tuple[int, ...]]:
    """Returns pi (or None) and, for T-positions 1..n, the index each one carries."""
    if layout.kind is LayoutKind.PI:
        pi = permutation_pi(n, layout.v1)
        return pi, pi.as_tuple()
    return None, tuple(n - q + 1 for q in range(1, n + 1))


def build_instance(i1: IndexSet, i2: IndexSet, n: int, layout: Layout) -> SubsetFamilyInstance:
    """Realize D(I1, I2) in the given layout.

    Raises:
        DivisibilityError: If layout is pi(v1) and v1 does not divide n
        InvalidParameterError: If an index set was built for a different n
    """
    for name, idx in (("I1", i1), ("I2", i2)):
        if idx.n != n:
            raise InvalidParameterError(
                f"{name} belongs to a different instance size",
                details={"index_set_n": idx.n, "n": n},
            )

    pi, t_indices = _layout_positions(n, layout)

    def token(i: IndexSet, index: int) -> DataItem:
        return item_token("a" if index in i else "b", index)

    s = Stream(tuple(token(i1, q) for q in range(1, n + 1)))
    t = Stream(tuple(token(i2, t_indices[q - 1]) for q in range(1, n + 1)))
    return SubsetFamilyInstance(n=n, i1=i1, i2=i2, layout=layout, s=s, t=t, pi=pi)


def complement_instance(i: IndexSet, layout: Layout) -> SubsetFamilyInstance:
    """D(I, Ī): the disjoint instance the fooling argument runs on."""
    return build_instance(i, i.complement(), i.n, layout)


def all_instances(n: int, layout: Layout) -> Iterator[SubsetFamilyInstance]:
    """All 2^n · 2^n instances D(I1, I2), I1 outer, both ascending."""
    index_sets = list(all_index_sets(n))
    for i1 in index_sets:
        for i2 in index_sets:
            yield build_instance(i1, i2, n, layout)


# === Enumeration specs ===

class EnumerationKind(str, Enum):
    EXHAUSTIVE = "exhaustive"
    SAMPLE = "sample"


@dataclass(frozen=True)
class EnumerationSpec:
    """``exhaustive`` or ``sample:<count>[:<seed>]``."""

    kind: EnumerationKind
    count: Optional[int] = None
    seed: Optional[int] = None

    @classmethod
    def exhaustive(cls) -> "EnumerationSpec":
        return cls(EnumerationKind.EXHAUSTIVE)

    @classmethod
    def sample(cls, count: int, seed: int) -> "EnumerationSpec":
        validate_positive_int(count, "count")
        return cls(EnumerationKind.SAMPLE, count, seed)

    @classmethod
    def parse(cls, text: str, default_seed: int = 0) -> "EnumerationSpec":
        parts = text.strip().split(":")
        if parts == ["exhaustive"]:
            return cls.exhaustive()
        if parts[0] == "sample" and len(parts) in (2, 3):
            try:
                count = int(parts[1])
                seed = int(parts[2]) if len(parts) == 3 else default_seed
            except ValueError:
                pass
            else:
                return cls.sample(count, seed)
        raise InvalidParameterError(
            "enumeration must be 'exhaustive' or 'sample:<count>[:<seed>]'",
            details={"enumeration": text},
        )

    def index_sets(self, n: int, limit: int = 20) -> Tuple[IndexSet, ...]:
        """The enumerated index sets in a deterministic order.

        Raises:
            EnumerationTooLargeError: If exhaustive enumeration is asked for n > limit
        """
        if self.kind is EnumerationKind.EXHAUSTIVE:
            if n > limit:
                raise EnumerationTooLargeError(
                    "exhaustive enumeration is limited",
                    details={"n": n, "limit": limit},
                )
            return tuple(all_index_sets(n))
        return sample_index_sets(n, self.count, self.seed)

    def to_dict(self) -> dict:
        if self.kind is EnumerationKind.EXHAUSTIVE:
            return {"kind": self.kind.value}
        return {"kind": self.kind.value, "count": self.count, "seed": self.seed}

    def __str__(self) -> str:
        if self.kind is EnumerationKind.EXHAUSTIVE:
            return self.kind.value
        return f"{self.kind.value}:{self.count}:{self.seed}"
