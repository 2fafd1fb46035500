#!/usr/bin/env python3
"""
Collatz form analysis – CLI entry point.

Usage
─────
  # Everything about one number (forms, column, stopping time, MCS/PMCS)
  python main.py analyze 27
  python main.py analyze "10^142-10^6+1" --json

  # Traces
  python main.py cascade 27
  python main.py ladder 31 --primary
  python main.py columns 85
  python main.py stoptime 27

  # Forms
  python main.py seeds --count 5
  python main.py form 16.4.8
  python main.py shift 3 --window 18

  # Reference tables (text, csv, optional .xlsx sheet)
  python main.py table 17
  python main.py table 20 --format csv --xlsx

  # Principal-form scan, checkpointed and resumable
  python main.py scan 1 10^6 --out windows.csv --checkpoint scan.ckpt --jobs 4
  python main.py scan 1 10^6 --out windows.csv --checkpoint scan.ckpt --resume

Exit codes: 0 ok, 1 domain error, 2 bad expression or arguments,
3 step limit reached, 4 I/O or checkpoint error, 130 interrupted.
"""

from __future__ import annotations

import argparse
import json
import logging
import signal
import sys
from typing import Any, Callable

from scripts.cascades import (
    Mix,
    classify_form,
    is_seed,
    mcs,
    pmcs,
    run_cascade,
    seeds,
    symbolic_cascade_transform,
    transform_base_pattern,
)
from scripts.columns import column_of, column_trace
from scripts.config import (
    EXCEL_FILE_PATH,
    SCAN_BLOCK,
    SCAN_JOBS,
    SCAN_WINDOW,
    SEQUENCE_MAX_STEPS,
)
from scripts.core_sequence import (
    CollatzDomainError,
    NotFoundWithinLimit,
    StepLimitExceeded,
    stopping_time,
    total_stopping_time,
)
from scripts.expr import ExprError, evaluate
from scripts.forms import (
    SymbolicForm,
    decompose,
    dotted_label,
    expand_dotted,
    find_pattern_shift,
    form_pattern,
    parse_dotted,
)
from scripts.scan_engine import (
    CheckpointMismatch,
    ScanEngine,
    spinner,
    windows_csv,
    write_forms_csv,
    write_windows_csv,
)
from scripts.stopping_forms import (
    BlockSummary,
    IndeterminateAt,
    Stopped,
    min_base_for_offset,
    summarize_by_block,
    summarize_windows,
    symbolic_stopping_time,
)
from scripts.tables import UnknownTableError, available_tables, build_table, render_csv, render_text

# ── logging setup ────────────────────────────────────────────────────
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s  %(levelname)-8s  %(name)s  %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)
logger = logging.getLogger("collatz-forms")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_PARSE = 2
EXIT_LIMIT = 3
EXIT_IO = 4
EXIT_INTERRUPTED = 130

# ── graceful shutdown ────────────────────────────────────────────────
_shutdown = False


def _handle_signal(signum, frame):
    global _shutdown
    logger.info("Received signal %s – stopping after the current window", signum)
    _shutdown = True


def _shutdown_requested() -> bool:
    return _shutdown


def _lift_int_digit_limit() -> None:
    # values are read and printed in full decimal
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)


# ── CLI commands ─────────────────────────────────────────────────────


def _natural(text: str) -> int:
    value = evaluate(text)
    if value < 1:
        raise CollatzDomainError("argument", text, "expected a natural number >= 1")
    return value


def cmd_analyze(args: argparse.Namespace) -> int:
    c = _natural(args.expr)
    d = decompose(c)
    report: dict[str, Any] = {
        "value": str(c),
        "p": d.p,
        "n": str(d.n),
        "standard_base": str(d.base),
        "column": column_of(c),
        "seed": is_seed(c),
        "stopping_time": None,
        "even_steps": None,
        "stop_limit_reached": False,
        "principal": None,
        "mcs": str(mcs(c).mcs),
        "pmcs": None,
        "pmcs_note": None,
        "total_stopping_time": None,
    }

    if c >= 2:
        r = stopping_time(c)
        if isinstance(r, NotFoundWithinLimit):
            report["stop_limit_reached"] = True
        else:
            report["stopping_time"] = r.stopping_time
            report["even_steps"] = r.even_steps
            report["principal"] = c < (1 << r.even_steps)

    total = total_stopping_time(c)
    if isinstance(total, NotFoundWithinLimit):
        report["stop_limit_reached"] = True
    else:
        report["total_stopping_time"] = total

    if c % 3 == 0:
        report["pmcs_note"] = "multiple of 3: cannot result from an odd cascade"
    elif c == 1:
        report["pmcs_note"] = "1 is its own maximum cascade start (trivial cycle)"
    else:
        pr = pmcs(c)
        if isinstance(pr, NotFoundWithinLimit):
            report["pmcs_note"] = f"not reached within {pr.limit} iterations"
        else:
            report["pmcs"] = str(pr.value)

    if args.json:
        print(json.dumps(report))
        return EXIT_OK

    print(f"value:               {c}")
    print(f"standard form:       {d.notation()}  (p={d.p}, n={d.n})")
    print(f"standard base:       {d.base}")
    print(f"column:              {report['column']}")
    print(f"seed:                {'yes' if report['seed'] else 'no'}")
    if report["stopping_time"] is not None:
        print(f"stopping time:       S={report['stopping_time']}, E={report['even_steps']}")
        print(f"principal:           {'yes' if report['principal'] else 'no'}")
    elif c == 1:
        print("stopping time:       undefined for 1")
    else:
        print("stopping time:       step limit reached")
    if report["total_stopping_time"] is not None:
        print(f"total stopping time: {report['total_stopping_time']}")
    else:
        print("total stopping time: step limit reached")
    print(f"MCS:                 {report['mcs']}")
    print(f"PMCS:                {report['pmcs'] or report['pmcs_note']}")
    return EXIT_OK


def cmd_cascade(args: argparse.Namespace) -> int:
    trace = run_cascade(_natural(args.expr))
    for v in trace.values:
        print(f"{v}={decompose(v).notation()}")
    logger.debug("cascade of %d: %d steps, peak %d", trace.start, len(trace.steps), trace.peak)
    return EXIT_OK


def cmd_ladder(args: argparse.Namespace) -> int:
    c = _natural(args.expr)
    if not args.primary:
        for rung in mcs(c).rungs:
            print(f"{rung.value}={rung.notation()}")
        return EXIT_OK

    result = pmcs(c)
    if isinstance(result, NotFoundWithinLimit):
        raise StepLimitExceeded(result)
    for v, nxt in zip(result.chain, result.chain[1:]):
        print(f"{v} -> {nxt}={decompose(nxt).notation()}")
    print(f"PMCS: {result.value}")
    return EXIT_OK


def cmd_columns(args: argparse.Namespace) -> int:
    for step in column_trace(_natural(args.expr), args.steps):
        print(f"{step.value}={step.notation()}  column {step.column}")
    return EXIT_OK


def cmd_stoptime(args: argparse.Namespace) -> int:
    c = _natural(args.expr)
    r = stopping_time(c)
    if isinstance(r, NotFoundWithinLimit):
        print(f"stopping time of {c}: not found within {r.limit} steps")
        return EXIT_LIMIT
    print(f"stopping time S: {r.stopping_time}")
    print(f"even steps E:    {r.even_steps}")
    print(f"odd steps:       {r.odd_steps}")
    print(f"final value:     {r.final_value}")
    base = min_base_for_offset(c)
    if not isinstance(base, NotFoundWithinLimit):
        print(f"minimum base:    {base.form} (2^{base.even_steps})")
    print(f"principal:       {'yes' if c < (1 << r.even_steps) else 'no'}")
    total = total_stopping_time(c)
    if isinstance(total, NotFoundWithinLimit):
        print(f"total stopping time: not found within {total.limit} steps")
        return EXIT_LIMIT
    print(f"total stopping time: {total}")
    return EXIT_OK


def cmd_seeds(args: argparse.Namespace) -> int:
    for k in seeds(args.count):
        power = 3 * k + 1
        print(f"{k} => {power} = 2^{power.bit_length() - 1}")
    return EXIT_OK


def cmd_form(args: argparse.Namespace) -> int:
    components = parse_dotted(args.dotted)
    s = expand_dotted(components)
    cls = classify_form(s)
    print(f"form {dotted_label(components)} = {s}")
    print(f"standard base: {cls}" + (f" (min {cls.min_base})" if isinstance(cls, Mix) else ""))
    try:
        print(f"cascade result: {symbolic_cascade_transform(s)}")
    except CollatzDomainError as exc:
        print(f"cascade result: none ({exc.reason})")
    outcome = symbolic_stopping_time(s)
    if isinstance(outcome, Stopped):
        print(f"stopping time: {outcome.stopping_time} ({outcome.final})")
    elif isinstance(outcome, IndeterminateAt):
        print(f"indeterminate after {outcome.step} steps ({outcome.form})")
    else:
        raise StepLimitExceeded(outcome)
    return EXIT_OK


def cmd_shift(args: argparse.Namespace) -> int:
    if args.p < 1:
        raise CollatzDomainError("shift", args.p, "p must be >= 1")
    pattern = transform_base_pattern(args.p, args.window)
    naturals = form_pattern(1, args.search)
    start = SymbolicForm(1 << args.p, (1 << (args.p - 1)) - 1)
    s = find_pattern_shift(pattern, naturals, args.window)
    if s is None:
        print(f"no match for the {start} transform pattern among 1..{args.search}")
        return EXIT_LIMIT
    print(f"{start} transforms n=0..{args.window - 1} match the bases of {s + 1}..{s + args.window}")
    print("pattern: " + ", ".join(str(b) for b in pattern))
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    table = build_table(args.id)
    print(render_csv(table) if args.format == "csv" else render_text(table), end="")
    if args.xlsx:
        from scripts.excel_handler import write_table

        write_table(table, args.xlsx)
    return EXIT_OK


def _block_line(b: BlockSummary) -> str:
    s = b.summary
    return (
        f"block {b.index} [{b.start}..{b.end}]: windows {s.count}, mean {s.mean:.1f}, "
        f"std {s.pstdev:.1f}/{s.stdev:.1f}, max {s.maximum}, min {s.minimum}"
    )


def cmd_scan(args: argparse.Namespace) -> int:
    lo, hi = _natural(args.lo), _natural(args.hi)
    if args.resume and not args.checkpoint:
        raise CollatzDomainError("scan", "--resume", "needs --checkpoint")
    if args.resume and args.forms_out:
        raise CollatzDomainError("scan", "--forms-out", "cannot be combined with --resume")

    engine = ScanEngine(
        lo,
        hi,
        window=args.window,
        jobs=args.jobs,
        checkpoint_path=args.checkpoint,
        resume=args.resume,
        should_stop=_shutdown_requested,
    )
    if sys.stderr.isatty():
        with spinner("Scanning", total=engine.window_count) as progress:
            result = engine.run(progress)
    else:
        result = engine.run()

    if engine.interrupted:
        logger.warning("Interrupted – rerun with --resume to continue from %s", args.checkpoint)
        return EXIT_INTERRUPTED

    if args.out:
        write_windows_csv(args.out, result.windows)
        logger.info("Wrote %d windows to %s", len(result.windows), args.out)
    else:
        print(windows_csv(result.windows), end="")
    if args.forms_out:
        write_forms_csv(args.forms_out, result.forms)
        logger.info("Wrote %d principal forms to %s", len(result.forms), args.forms_out)

    summary = summarize_windows(result.windows)
    blocks = summarize_by_block(result.windows, args.block)
    if args.xlsx:
        from scripts.excel_handler import write_scan

        write_scan(lo, hi, result.windows, summary, args.xlsx, blocks=blocks)

    out = sys.stderr if not args.out else sys.stdout
    print(f"windows:          {summary.count}", file=out)
    print(f"mean:             {summary.mean:.1f}", file=out)
    print(f"max:              {summary.maximum}", file=out)
    print(f"min:              {summary.minimum}", file=out)
    print(f"std (population): {summary.pstdev:.1f}", file=out)
    print(f"std (sample):     {summary.stdev:.1f}", file=out)
    if len(blocks) > 1:
        for b in blocks:
            print(_block_line(b), file=out)
    if result.unresolved:
        print(f"unresolved:       {len(result.unresolved)} (step limit)", file=out)
        return EXIT_LIMIT
    return EXIT_OK


# ── main ─────────────────────────────────────────────────────────────


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Collatz form analysis")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="Forms, column, stopping data, MCS and PMCS of a number")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true", help="Machine-readable output")

    p = sub.add_parser("cascade", help="Trace the cascade starting at a number")
    p.add_argument("expr")

    p = sub.add_parser("ladder", help="Climb the reverse cascade to the MCS")
    p.add_argument("expr")
    p.add_argument("--primary", action="store_true", help="Iterate MCS up to the PMCS")

    p = sub.add_parser("columns", help="Sequence of a number in column form")
    p.add_argument("expr")
    p.add_argument("--steps", type=int, default=SEQUENCE_MAX_STEPS)

    p = sub.add_parser("stoptime", help="Stopping time, even steps and minimum base")
    p.add_argument("expr")

    p = sub.add_parser("seeds", help="List seeds")
    p.add_argument("--count", type=int, default=5)

    p = sub.add_parser("form", help="Analyze a dotted composite form such as 16.4.8")
    p.add_argument("dotted", help="Dotted powers of 2, e.g. 16.4.8")

    p = sub.add_parser("shift", help="Match a transform base pattern against the naturals")
    p.add_argument("p", type=int)
    p.add_argument("--window", type=int, default=18)
    p.add_argument("--search", type=int, default=100_000)

    p = sub.add_parser("table", help=f"Reproduce a table ({', '.join(map(str, available_tables()))})")
    p.add_argument("id", type=int)
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--xlsx", nargs="?", const=EXCEL_FILE_PATH, default=None, help="Also write a sheet")

    p = sub.add_parser("scan", help="Count principal forms per window")
    p.add_argument("lo")
    p.add_argument("hi")
    p.add_argument("--window", type=int, default=SCAN_WINDOW)
    p.add_argument("--out", help="Window CSV (default: stdout)")
    p.add_argument("--forms-out", help="Principal-form CSV")
    p.add_argument("--checkpoint", help="Checkpoint file (JSON lines)")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--jobs", type=int, default=SCAN_JOBS)
    p.add_argument("--block", type=int, default=SCAN_BLOCK, help="Numbers per summary row")
    p.add_argument("--xlsx", nargs="?", const=EXCEL_FILE_PATH, default=None, help="Also write a sheet")
    return parser


_COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "analyze": cmd_analyze,
    "cascade": cmd_cascade,
    "ladder": cmd_ladder,
    "columns": cmd_columns,
    "stoptime": cmd_stoptime,
    "seeds": cmd_seeds,
    "form": cmd_form,
    "shift": cmd_shift,
    "table": cmd_table,
    "scan": cmd_scan,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    _lift_int_digit_limit()

    previous = {s: signal.signal(s, _handle_signal) for s in (signal.SIGINT, signal.SIGTERM)}
    try:
        return _COMMANDS[args.command](args)
    except ExprError as exc:
        logger.error("Bad expression: %s", exc)
        return EXIT_PARSE
    except UnknownTableError as exc:
        logger.error("%s", exc)
        return EXIT_PARSE
    except CollatzDomainError as exc:
        logger.error("%s", exc)
        return EXIT_DOMAIN
    except StepLimitExceeded as exc:
        logger.error("%s", exc)
        return EXIT_LIMIT
    except (OSError, CheckpointMismatch) as exc:
        logger.error("%s", exc)
        return EXIT_IO
    finally:
        for s, handler in previous.items():
            signal.signal(s, handler)


if __name__ == "__main__":
    sys.exit(main())
