"""Stream files and trace files.

Stream file: whitespace-separated tokens ``a<i>`` / ``b<i>``, one stream per file.

Trace file: JSON Lines, one record per step describing the configuration the
step starts from:

    {"step": 1, "state": "Phase1(1)", "pos": [1, 1, 1, 1], "sym": ["a1", ...], "adv": [false, true, ...]}

The last line closes the file with the configuration after the final step:

    {"step": 12, "final": true, "state": "Scanning", "pos": [5, 5, 5, 5]}

END positions are |stream|+1 for forward heads and 0 for backward heads; END
symbols are written as "end".
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import IO, Iterator, List, Union

from src.automata.engine import Trace
from src.automata.model import END, END_TOKEN, Stream
from src.utils.errors import StreamFileError

_TOKEN = re.compile(r"^[ab][1-9][0-9]*$")


def parse_stream(text: str, source: str = "<text>") -> Stream:
    """Parse whitespace-separated disjointness tokens into a Stream.

    Raises:
        StreamFileError: If a token is not of the form a<i> or b<i>
    """
    tokens = text.split()
    for pos, token in enumerate(tokens, start=1):
        if not _TOKEN.match(token):
            raise StreamFileError(
                "invalid stream token",
                details={"source": source, "position": pos, "token": token},
            )
    return Stream(tuple(tokens))


def read_stream_file(path: Union[str, Path]) -> Stream:
    path = Path(path)
    if not path.exists():
        raise StreamFileError("stream file not found", details={"path": str(path)})
    return parse_stream(path.read_text(encoding="utf8"), source=str(path))


def format_stream(stream: Stream) -> str:
    return " ".join(stream.items) + "\n"


def write_stream_file(stream: Stream, path: Union[str, Path]) -> None:
    Path(path).write_text(format_stream(stream), encoding="utf8")


def trace_records(trace: Trace) -> Iterator[dict]:
    """JSON-ready dicts, one per step, then one closing record for the final configuration."""
    for record in trace.records:
        yield {
            "step": record.step,
            "state": str(record.before.state),
            "pos": list(record.before.positions),
            "sym": [END_TOKEN if sym is END else sym for sym in record.symbols],
            "adv": [bool(adv) for adv in record.mask],
        }
    yield {
        "step": len(trace.records),
        "final": True,
        "state": str(trace.final.state),
        "pos": list(trace.final.positions),
    }


def write_trace_jsonl(trace: Trace, out: Union[str, Path, IO[str]]) -> int:
    """Write a trace as JSON Lines; returns the number of records written."""
    lines: List[str] = [
        json.dumps(rec, separators=(",", ":")) for rec in trace_records(trace)
    ]
    payload = "".join(line + "\n" for line in lines)
    if isinstance(out, (str, Path)):
        Path(out).write_text(payload, encoding="utf8")
    else:
        out.write(payload)
    return len(lines)


def read_trace_jsonl(path: Union[str, Path]) -> List[dict]:
    """Read trace records back as dicts (for inspection and tests)."""
    records = []
    with Path(path).open("r", encoding="utf8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records
