"""Table-defined automata: the line-oriented description format and seeded random tables.

Format (toy machines only; a full table has |Q|·(2n+1)^k rows):

    mp2s n=2 m=2 kf=1 kb=0
    state p start accept
    state q
    trans p a1,a1 -> p AS
    ...

Symbols are ``a<i>``, ``b<i>`` (1 <= i <= n) or ``end``; the mask has one letter
per head in canonical order, ``A`` = advance, ``S`` = stay. For k = 0 both the
symbol list and the mask are written as ``-``. Every (state, symbols)
combination must be listed; anything missing is rejected at load time.
"""

from __future__ import annotations

import itertools
import logging
from pathlib import Path
from typing import Dict, IO, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.automata.model import (
    END,
    END_TOKEN,
    AdvanceMask,
    Automaton,
    AutomatonParams,
    State,
    Symbol,
    SymbolView,
    make_automaton,
)
from src.utils.errors import (
    AutomatonFileError,
    InvalidParameterError,
    TransitionUndefinedError,
)
from src.utils.validation import validate_positive_int

logger = logging.getLogger(__name__)

MAX_TABLE_ROWS = 250_000
MAX_RANDOM_ROWS = 2_000_000

Row = Tuple[State, SymbolView]


def domain_symbols(n: int) -> Tuple[Symbol, ...]:
    """D_n in canonical order followed by END."""
    items: List[Symbol] = []
    for i in range(1, n + 1):
        items.extend((f"a{i}", f"b{i}"))
    items.append(END)
    return tuple(items)


def table_rows(states: Sequence[State], n: int, k: int) -> Iterator[Row]:
    for state in states:
        for symbols in itertools.product(domain_symbols(n), repeat=k):
            yield state, symbols


class TableDelta:
    """Transition mapping backed by an explicit table."""

    def __init__(self, table: Dict[Row, Tuple[State, AdvanceMask]]):
        self._table = dict(table)

    def __call__(self, state: State, symbols: SymbolView) -> Tuple[State, AdvanceMask]:
        try:
            return self._table[(state, tuple(symbols))]
        except KeyError:
            raise TransitionUndefinedError(
                "no transition for state and symbols",
                details={"state": state, "symbols": _format_symbols(symbols)},
            ) from None

    def __len__(self) -> int:
        return len(self._table)


class ArrayTableDelta:
    """Total transition table held in numpy arrays.

    Rows are state-major; the symbol view is read as base-(2n+1) digits in
    canonical head order, digit values following ``domain_symbols(n)``.
    """

    def __init__(self, states: Sequence[State], n: int, k: int, targets: np.ndarray, masks: np.ndarray):
        self._states = tuple(states)
        self._state_index = {q: i for i, q in enumerate(self._states)}
        self._codes = {sym: c for c, sym in enumerate(domain_symbols(n))}
        self._base = 2 * n + 1
        self._k = k
        self._targets = targets
        self._masks = masks

    def _row(self, state: State, symbols: SymbolView) -> int:
        try:
            row = self._state_index[state]
            for sym in symbols:
                row = row * self._base + self._codes[sym]
        except KeyError:
            raise TransitionUndefinedError(
                "no transition for state and symbols",
                details={"state": state, "symbols": _format_symbols(symbols)},
            ) from None
        return row

    def __call__(self, state: State, symbols: SymbolView) -> Tuple[State, AdvanceMask]:
        row = self._row(state, symbols)
        target = self._states[int(self._targets[row])]
        return target, tuple(bool(b) for b in self._masks[row])


def random_table_automaton(
    n: int,
    m: int,
    kf: int,
    kb: int,
    seed: int,
    advance_prob: float = 0.5,
) -> Automaton:
    """A random total table automaton over D_n with states q0..q{m-1}.

    Drawn from ``numpy.random.default_rng(seed)``: start state q0, each state
    accepting with probability 1/2, each head marked ``advance`` with
    probability ``advance_prob``.

    Raises:
        InvalidParameterError: If the table would exceed MAX_RANDOM_ROWS rows
    """
    validate_positive_int(n, "n")
    params = AutomatonParams(domain_size=2 * n, m=m, kf=kf, kb=kb)
    k = params.k
    rows = m * (2 * n + 1) ** k
    if rows > MAX_RANDOM_ROWS:
        raise InvalidParameterError(
            "random transition table too large",
            details={"rows": rows, "max": MAX_RANDOM_ROWS},
        )

    rng = np.random.default_rng(seed)
    states = [f"q{i}" for i in range(m)]
    accepting = {q for q, flag in zip(states, rng.random(m) < 0.5) if flag}
    targets = rng.integers(0, m, size=rows)
    masks = rng.random((rows, k)) < advance_prob
    delta = ArrayTableDelta(states, n, k, targets, masks)
    return make_automaton(params, states, "q0", accepting, delta, name=f"random:{n}:{m}:{kf}:{kb}:{seed}")


# === Text format ===

def _format_symbols(symbols: Sequence[Symbol]) -> str:
    if not symbols:
        return "-"
    return ",".join(END_TOKEN if s is END else str(s) for s in symbols)


def _parse_symbols(field: str, n: int, k: int, line_no: int) -> SymbolView:
    if field == "-":
        parts: List[str] = []
    else:
        parts = field.split(",")
    if len(parts) != k:
        raise AutomatonFileError(
            "wrong number of symbols",
            details={"line": line_no, "expected": k, "actual": len(parts)},
        )
    allowed = set(domain_symbols(n)[:-1])
    symbols: List[Symbol] = []
    for part in parts:
        if part == END_TOKEN:
            symbols.append(END)
        elif part in allowed:
            symbols.append(part)
        else:
            raise AutomatonFileError(
                "symbol outside D_n and end",
                details={"line": line_no, "symbol": part, "n": n},
            )
    return tuple(symbols)


def _parse_mask(field: str, k: int, line_no: int) -> AdvanceMask:
    letters = "" if field == "-" else field
    if len(letters) != k or any(c not in "AS" for c in letters):
        raise AutomatonFileError(
            "mask must have one A/S letter per head",
            details={"line": line_no, "mask": field, "k": k},
        )
    return tuple(c == "A" for c in letters)


def _parse_header(line: str, line_no: int) -> Dict[str, int]:
    parts = line.split()
    if not parts or parts[0] != "mp2s":
        raise AutomatonFileError("missing 'mp2s' header", details={"line": line_no})
    values: Dict[str, int] = {}
    for part in parts[1:]:
        key, _, value = part.partition("=")
        try:
            values[key] = int(value)
        except ValueError:
            raise AutomatonFileError(
                "header values must be integers",
                details={"line": line_no, "field": part},
            ) from None
    missing = {"n", "m", "kf", "kb"} - values.keys()
    if missing:
        raise AutomatonFileError(
            "header is missing fields",
            details={"line": line_no, "missing": ",".join(sorted(missing))},
        )
    return values


def parse_automaton(text: str, source: str = "<text>") -> Automaton:
    """Parse the description format into an Automaton with a TableDelta.

    Raises:
        AutomatonFileError: On syntax errors, duplicate or missing transitions
    """
    header: Optional[Dict[str, int]] = None
    states: List[str] = []
    start: Optional[str] = None
    accepting: List[str] = []
    table: Dict[Row, Tuple[State, AdvanceMask]] = {}

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        if header is None:
            header = _parse_header(line, line_no)
            continue

        n, k = header["n"], 2 * header["kf"] + 2 * header["kb"]
        parts = line.split()

        if parts[0] == "state":
            if len(parts) < 2 or any(flag not in ("start", "accept") for flag in parts[2:]):
                raise AutomatonFileError("malformed state line", details={"line": line_no})
            state = parts[1]
            if state in states:
                raise AutomatonFileError("duplicate state", details={"line": line_no, "state": state})
            states.append(state)
            if "start" in parts[2:]:
                if start is not None:
                    raise AutomatonFileError("more than one start state", details={"line": line_no})
                start = state
            if "accept" in parts[2:]:
                accepting.append(state)

        elif parts[0] == "trans":
            if len(parts) != 6 or parts[3] != "->":
                raise AutomatonFileError("malformed trans line", details={"line": line_no})
            source_state, target = parts[1], parts[4]
            for q in (source_state, target):
                if q not in states:
                    raise AutomatonFileError("undeclared state", details={"line": line_no, "state": q})
            symbols = _parse_symbols(parts[2], n, k, line_no)
            key = (source_state, symbols)
            if key in table:
                raise AutomatonFileError("duplicate transition", details={"line": line_no})
            table[key] = (target, _parse_mask(parts[5], k, line_no))

        else:
            raise AutomatonFileError("unknown line kind", details={"line": line_no, "kind": parts[0]})

    if header is None:
        raise AutomatonFileError("empty automaton description", details={"source": source})
    if start is None:
        raise AutomatonFileError("no start state declared", details={"source": source})

    n, k = header["n"], 2 * header["kf"] + 2 * header["kb"]
    expected = len(states) * (2 * n + 1) ** k
    if len(table) != expected:
        missing = next(row for row in table_rows(states, n, k) if row not in table)
        raise AutomatonFileError(
            "transition table is not total",
            details={
                "source": source,
                "listed": len(table),
                "expected": expected,
                "first_missing": f"{missing[0]} {_format_symbols(missing[1])}",
            },
        )

    try:
        params = AutomatonParams(domain_size=2 * n, m=header["m"], kf=header["kf"], kb=header["kb"])
    except InvalidParameterError as e:
        raise AutomatonFileError(f"invalid header: {e.message}", details=e.details) from e

    logger.debug(f"Loaded {len(table)} transitions from {source}")
    return make_automaton(params, states, start, accepting, TableDelta(table), name=f"file:{source}")


def load_automaton(path: Union[str, Path]) -> Automaton:
    path = Path(path)
    if not path.exists():
        raise AutomatonFileError("automaton file not found", details={"path": str(path)})
    return parse_automaton(path.read_text(encoding="utf8"), source=str(path))


def dump_automaton(a: Automaton, n: int, out: Union[str, Path, IO[str], None] = None) -> str:
    """Serialize ``a`` over D_n into the description format by tabulating delta.

    Raises:
        InvalidParameterError: If the table would exceed MAX_TABLE_ROWS rows
    """
    p = a.params
    rows = a.states.size * (2 * n + 1) ** p.k
    if rows > MAX_TABLE_ROWS:
        raise InvalidParameterError(
            "transition table too large to serialize",
            details={"rows": rows, "max": MAX_TABLE_ROWS},
        )

    states = list(a.states)
    lines = [f"mp2s n={n} m={p.m} kf={p.kf} kb={p.kb}"]
    for q in states:
        flags = (" start" if q == a.start else "") + (" accept" if a.is_accepting(q) else "")
        lines.append(f"state {q}{flags}")
    for q, symbols in table_rows(states, n, p.k):
        target, mask = a.delta(q, symbols)
        letters = "".join("A" if adv else "S" for adv in mask) or "-"
        lines.append(f"trans {q} {_format_symbols(symbols)} -> {target} {letters}")

    text = "\n".join(lines) + "\n"
    if isinstance(out, (str, Path)):
        Path(out).write_text(text, encoding="utf8")
    elif out is not None:
        out.write(text)
    return text
