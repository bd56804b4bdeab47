"""mp2s command line.

Exit codes: 0 success (accepted / verified / no witness), 1 informative
negative (rejected / disagreement / witness found), 2 usage or input error,
3 runtime error (stall and other simulation errors).

Usage:
    mp2s simulate --automaton builtin:sqrt:4 --s s.txt --t t.txt --trace out.jsonl
    mp2s fool --automaton builtin:crippled:4:1100 --n 4 --layout reversed --enum exhaustive
    mp2s bounds --mode forward --n 1024 --kf 1 --log2m 200
"""

from __future__ import annotations

import functools
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence

import click

from src.automata.engine import run
from src.automata.model import Automaton
from src.automata.streamio import format_stream, read_stream_file, write_stream_file, write_trace_jsonl
from src.automata.tablefile import load_automaton, random_table_automaton
from src.disjointness.builders import (
    build_crippled,
    build_sqrt,
    build_trivial,
    verify_against_oracle,
)
from src.disjointness.instances import (
    EnumerationKind,
    EnumerationSpec,
    Layout,
    LayoutKind,
    all_instances,
    build_instance,
)
from src.disjointness.problem import (
    IndexSet,
    all_stream_pairs,
    is_disjoint_oracle,
    sample_stream_pairs,
)
from src.lowerbound.bounds import (
    BoundMode,
    fifth_root_remark,
    lower_bound_inequality,
    remark_consistency,
)
from src.lowerbound.foolbox import fooling_search
from src.utils.config import Settings
from src.utils.errors import (
    EnumerationTooLargeError,
    InvalidParameterError,
    Mp2sError,
    exit_code_for,
)
from src.utils.logger import log_exception, setup_logger

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3

MAX_STREAM_PAIRS = 2_000_000


# === Helpers ===

def parse_automaton_spec(spec: str) -> Automaton:
    """Resolve ``builtin:<name>:<args>`` or ``file:<path>``.

    Builtins: ``trivial:<n>``, ``sqrt:<n>``, ``crippled:<n>:<mask>`` and
    ``random:<n>:<m>:<kf>:<kb>:<seed>``.

    Raises:
        InvalidParameterError: If the spec does not parse
    """
    kind, _, rest = spec.partition(":")
    if kind == "file" and rest:
        return load_automaton(rest)

    if kind == "builtin":
        name, *args = rest.split(":")
        try:
            if name == "trivial" and len(args) == 1:
                return build_trivial(int(args[0]))
            if name == "sqrt" and len(args) == 1:
                return build_sqrt(int(args[0]))
            if name == "crippled" and len(args) == 2:
                n = int(args[0])
                mask = IndexSet.from_mask(args[1])
                if mask.n != n:
                    raise InvalidParameterError(
                        "crippled mask length must equal n",
                        details={"n": n, "mask": args[1]},
                    )
                return build_crippled(n, mask)
            if name == "random" and len(args) == 5:
                n, m, kf, kb, seed = (int(x) for x in args)
                return random_table_automaton(n, m, kf, kb, seed)
        except ValueError:
            pass

    raise InvalidParameterError(
        "automaton spec must be builtin:trivial:<n>, builtin:sqrt:<n>, "
        "builtin:crippled:<n>:<mask>, builtin:random:<n>:<m>:<kf>:<kb>:<seed> or file:<path>",
        details={"spec": spec},
    )


def _emit_json(payload: Any, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf8")
        logger.info(f"Wrote {out}")
    else:
        click.echo(text, nl=False)


def _settings() -> Settings:
    ctx = click.get_current_context()
    root = ctx.find_root()
    if not isinstance(root.obj, Settings):
        root.obj = Settings.from_env()
    return root.obj


def handle_errors(func: Callable) -> Callable:
    """Turn library errors into a one-line diagnostic and the matching exit code."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            code = func(*args, **kwargs)
        except Mp2sError as e:
            click.echo(f"error: {e}", err=True)
            ctx.exit(exit_code_for(e))
        ctx.exit(EXIT_OK if code is None else code)

    return wrapper


# === Command group ===

@click.group()
@click.option("--log-level", default=None, help="Override MP2S_LOG_LEVEL")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]) -> None:
    """Simulate mp2s-automata, verify disjointness automata and search fooling pairs."""
    try:
        settings = Settings.from_env()
    except Mp2sError as e:
        click.echo(f"error: {e}", err=True)
        ctx.exit(exit_code_for(e))
    ctx.obj = settings
    setup_logger("src", log_file=settings.log_file, level=(log_level or settings.log_level).upper())


@cli.command()
@click.option("--automaton", "spec", required=True, help="builtin:<name>:<args> or file:<path>")
@click.option("--s", "s_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--t", "t_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--trace", "trace_path", default=None, type=click.Path(dir_okay=False), help="Write a JSONL trace")
@handle_errors
def simulate(spec: str, s_path: str, t_path: str, trace_path: Optional[str]) -> int:
    """Run an automaton on one stream pair."""
    a = parse_automaton_spec(spec)
    s, t = read_stream_file(s_path), read_stream_file(t_path)
    result = run(a, s, t, capture_trace=trace_path is not None)
    if trace_path:
        count = write_trace_jsonl(result.trace, trace_path)
        logger.info(f"Wrote {count} trace records to {trace_path}")
    click.echo("accepted" if result.accepted else "rejected")
    click.echo(f"steps={result.steps}")
    return EXIT_OK if result.accepted else EXIT_NEGATIVE


@cli.command()
@click.option("--s", "s_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--t", "t_path", required=True, type=click.Path(exists=True, dir_okay=False))
@handle_errors
def oracle(s_path: str, t_path: str) -> int:
    """Decide disjointness of two stream files by brute force."""
    disjoint = is_disjoint_oracle(read_stream_file(s_path), read_stream_file(t_path))
    click.echo("disjoint" if disjoint else "intersecting")
    return EXIT_OK if disjoint else EXIT_NEGATIVE


@cli.command("gen-instance")
@click.option("--n", "n", required=True, type=int)
@click.option("--i1", required=True, help="Index set: 0/1 mask of length n or comma-separated indices")
@click.option("--i2", default=None, help="Index set for T (default: complement of I1)")
@click.option("--layout", "layout_text", default="reversed", show_default=True, help="reversed | pi:<v1>")
@click.option("--s-out", default=None, type=click.Path(dir_okay=False))
@click.option("--t-out", default=None, type=click.Path(dir_okay=False))
@handle_errors
def gen_instance(n: int, i1: str, i2: Optional[str], layout_text: str, s_out: Optional[str], t_out: Optional[str]) -> int:
    """Write the streams of D(I1, I2)."""
    first = IndexSet.parse(i1, n)
    second = IndexSet.parse(i2, n) if i2 is not None else first.complement()
    instance = build_instance(first, second, n, Layout.parse(layout_text))
    for stream, path in ((instance.s, s_out), (instance.t, t_out)):
        if path:
            write_stream_file(stream, path)
        else:
            click.echo(format_stream(stream), nl=False)
    return EXIT_OK


@cli.command()
@click.option("--automaton", "spec", required=True)
@click.option("--n", "n", required=True, type=int)
@click.option(
    "--family",
    type=click.Choice(["streams", "subsets"]),
    default="streams",
    show_default=True,
    help="All length-n stream pairs over D_n, or all subset-family instances",
)
@click.option("--layout", "layout_text", default="reversed", show_default=True)
@click.option("--enum", "enum_text", default="exhaustive", show_default=True, help="exhaustive | sample:<count>[:<seed>] (streams only)")
@click.option("--states/--no-states", default=True, show_default=True, help="Count reachable states")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@handle_errors
def exhaustive(spec: str, n: int, family: str, layout_text: str, enum_text: str, states: bool, out: Optional[str]) -> int:
    """Compare an automaton with the oracle over a whole input family."""
    settings = _settings()
    a = parse_automaton_spec(spec)
    enumeration = EnumerationSpec.parse(enum_text, default_seed=settings.default_seed)

    if family == "subsets":
        if 2 * n > settings.exhaustive_limit:
            raise EnumerationTooLargeError(
                "subset family too large",
                details={"n": n, "limit": settings.exhaustive_limit // 2},
            )
        pairs, total = all_instances(n, Layout.parse(layout_text)), 4 ** n
    elif enumeration.kind is EnumerationKind.SAMPLE:
        pairs, total = sample_stream_pairs(n, enumeration.count, enumeration.seed), enumeration.count
    else:
        total = (2 * n) ** (2 * n)
        if total > MAX_STREAM_PAIRS:
            raise EnumerationTooLargeError(
                "too many stream pairs for exhaustive verification",
                details={"n": n, "pairs": total, "max": MAX_STREAM_PAIRS},
            )
        pairs = all_stream_pairs(n)

    report = verify_against_oracle(a, pairs, track_states=states, progress=settings.progress, total=total)
    payload = report.to_dict()
    payload["family"] = family
    payload["enumeration"] = enumeration.to_dict()
    _emit_json(payload, out)
    if out:
        verdict = "verified" if report.all_agree else "disagreement"
        click.echo(f"{verdict} {report.agreements}/{report.total}")
    return EXIT_OK if report.all_agree else EXIT_NEGATIVE


@cli.command()
@click.option("--automaton", "spec", required=True)
@click.option("--n", "n", required=True, type=int)
@click.option("--layout", type=click.Choice([k.value for k in LayoutKind]), default="reversed", show_default=True)
@click.option("--enum", "enum_text", default="exhaustive", show_default=True)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@handle_errors
def fool(spec: str, n: int, layout: str, enum_text: str, out: Optional[str]) -> int:
    """Search a fooling pair that makes the automaton falsely accept."""
    settings = _settings()
    a = parse_automaton_spec(spec)
    enumeration = EnumerationSpec.parse(enum_text, default_seed=settings.default_seed)
    outcome = fooling_search(
        a,
        n,
        LayoutKind(layout),
        enumeration,
        exhaustive_limit=settings.exhaustive_limit,
        progress=settings.progress,
    )
    _emit_json(outcome.to_report().model_dump(mode="json", by_alias=True), out)
    if outcome.witness:
        if out:
            click.echo(outcome.witness.summary())
        return EXIT_NEGATIVE
    if out:
        click.echo(f"no witness: {outcome.reason}")
    return EXIT_OK


@cli.command()
@click.option("--mode", type=click.Choice([m.value for m in BoundMode]), default="forward", show_default=True)
@click.option("--n", "n", required=True, type=int)
@click.option("--kf", required=True, type=int)
@click.option("--kb", default=0, show_default=True, type=int)
@click.option("--log2m", "log2_m", default=None, type=float, help="lg m (use for huge m)")
@click.option("--m", "m", default=None, type=int, help="State budget m")
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@handle_errors
def bounds(mode: str, n: int, kf: int, kb: int, log2_m: Optional[float], m: Optional[int], out: Optional[str]) -> int:
    """Evaluate the lower-bound parameter inequality."""
    report = lower_bound_inequality(n, kf, kb, BoundMode(mode), m=m, log2_m=log2_m)
    if out:
        _emit_json(report.model_dump(mode="json", by_alias=True), out)
    click.echo(report.summary())
    return EXIT_OK


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from None


@cli.command()
@click.option("--exponents", default="4,8,12,16,20,24", show_default=True, help="n = 2^e samples")
@click.option("--kf", "kf_text", default="1,2,3", show_default=True)
@click.option("--root-exponents", default="10,20,30,40,50,60,80,100,150,200", show_default=True)
@click.option("--out", default=None, type=click.Path(dir_okay=False))
@handle_errors
def remarks(exponents: str, kf_text: str, root_exponents: str, out: Optional[str]) -> int:
    """Check the remarks that follow the lower bounds."""
    samples = [(2 ** e, kf) for e in _int_list(exponents) for kf in _int_list(kf_text)]
    consistency = remark_consistency(samples)
    root = fifth_root_remark(_int_list(root_exponents))
    _emit_json(
        {
            "remark": consistency.model_dump(mode="json", by_alias=True),
            "rootHeads": root.model_dump(mode="json", by_alias=True),
        },
        out,
    )
    if out:
        click.echo(
            f"violations={len(consistency.violations)} smallestN={consistency.smallest_n} "
            f"rootHeadsRuledOutFrom=2^{root.ruled_out_from}"
        )
    return EXIT_OK if not consistency.violations else EXIT_NEGATIVE


# === Entry points ===

def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="mp2s", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except Mp2sError as e:
        click.echo(f"error: {e}", err=True)
        return exit_code_for(e)
    except Exception:
        log_exception(logger, "unexpected error")
        return EXIT_RUNTIME
    return rv if isinstance(rv, int) else EXIT_OK


def run_cli() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run_cli()
