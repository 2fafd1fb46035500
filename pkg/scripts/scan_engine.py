"""
Checkpointed range scanner for principal forms.

Scan flow
─────────
1.  Split [lo, hi] into windows [k·W + 1, (k+1)·W] (clipped to the range).
2.  On ``resume``, read the checkpoint file and drop windows it already
    records; the header must match the requested (lo, hi, window).
3.  Group the remaining windows into contiguous chunks and scan each one
    with :func:`scan_principal_forms`, in-process or in a process pool.
4.  Append one checkpoint record per finished window.  Only this process
    writes the file, workers just return their results.
5.  Merge everything by window index, so the output is the same for any
    ``jobs`` value.

Checkpoint format: JSON lines, a header ``{"lo", "hi", "window"}`` then
``{"window_start", "principal_count"}`` records.  Big values are decimal
strings.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import sys
import threading
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Generator, Iterable, Iterator, TextIO

from .config import SCAN_JOBS, SCAN_STEP_LIMIT, SCAN_WINDOW
from .core_sequence import CollatzDomainError, require_natural
from .stopping_forms import (
    PrincipalForm,
    ScanResult,
    ScanWindowStats,
    merge_scan_results,
    scan_principal_forms,
    window_index,
    windows_in,
)

logger = logging.getLogger(__name__)

# numbers per task handed to a worker
_CHUNK_NUMBERS = 50_000


class CheckpointMismatch(RuntimeError):
    """The checkpoint on disk belongs to another scan or is unreadable."""

    def __init__(self, path: str | Path, reason: str):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"checkpoint {self.path}: {reason}")


_SPINNER_FRAMES = "⠋⠙⠹⠸⠼⠴⠦⠧⠇⠏"


@contextmanager
def spinner(
    message: str, total: int = 0, stream: TextIO | None = None
) -> Generator[dict[str, int], None, None]:
    """
    Spinner with a windows-done counter, percentage and elapsed time.

    The caller bumps ``progress["current"]``; the closing line is marked
    ``✓`` when all ``total`` windows finished and ``…`` otherwise.
    """
    out = stream or sys.stderr
    stop = threading.Event()
    progress = {"current": 0}
    started = time.monotonic()

    def _status() -> str:
        if total <= 0:
            return message
        done = progress["current"]
        elapsed = time.monotonic() - started
        return f"{message} {done}/{total} windows ({100 * done // total}%), {elapsed:.0f}s"

    def _spin() -> None:
        for frame in itertools.cycle(_SPINNER_FRAMES):
            out.write(f"\r  {frame} {_status()}  ")
            out.flush()
            if stop.wait(0.08):
                break
        mark = "✓" if total <= 0 or progress["current"] >= total else "…"
        out.write(f"\r  {mark} {_status()}  \n")
        out.flush()

    t = threading.Thread(target=_spin, daemon=True)
    t.start()
    try:
        yield progress
    finally:
        stop.set()
        t.join()


# ── checkpoint persistence ───────────────────────────────────────────


def _header(lo: int, hi: int, window: int) -> dict[str, str | int]:
    return {"lo": str(lo), "hi": str(hi), "window": window}


def _load_checkpoint(path: Path, lo: int, hi: int, window: int) -> dict[int, int]:
    """Completed windows as ``{window_start: principal_count}``."""
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise CheckpointMismatch(path, "empty file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise CheckpointMismatch(path, f"bad header: {exc}") from exc
    if header != _header(lo, hi, window):
        raise CheckpointMismatch(
            path, f"header {header} does not match lo={lo} hi={hi} window={window}"
        )

    done: dict[int, int] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            rec = json.loads(line)
            start = int(rec["window_start"])
            count = int(rec["principal_count"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CheckpointMismatch(path, f"bad record on line {lineno}: {exc}") from exc
        # replaying a window twice keeps a single entry
        done[start] = count
    return done


def _record(stats: ScanWindowStats) -> str:
    return json.dumps(
        {"window_start": str(stats.window_start), "principal_count": stats.principal_count}
    )


# ── CSV output ───────────────────────────────────────────────────────


def windows_csv(windows: Iterable[ScanWindowStats]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["window_start", "window_end", "principal_count"])
    for w in windows:
        writer.writerow([w.window_start, w.window_end, w.principal_count])
    return buf.getvalue()


def forms_csv(forms: Iterable[PrincipalForm]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["offset", "E", "stopping_time"])
    for pf in forms:
        writer.writerow([pf.offset, pf.even_steps, pf.stopping_time])
    return buf.getvalue()


def write_windows_csv(path: str | Path, windows: Iterable[ScanWindowStats]) -> None:
    Path(path).write_text(windows_csv(windows))


def write_forms_csv(path: str | Path, forms: Iterable[PrincipalForm]) -> None:
    Path(path).write_text(forms_csv(forms))


# ── chunking ─────────────────────────────────────────────────────────


def _chunks(
    pending: list[tuple[int, int]], per_chunk: int
) -> Iterator[list[tuple[int, int]]]:
    """Runs of consecutive windows, at most ``per_chunk`` windows each."""
    run: list[tuple[int, int]] = []
    for w in pending:
        if run and (run[-1][1] + 1 != w[0] or len(run) >= per_chunk):
            yield run
            run = []
        run.append(w)
    if run:
        yield run


def _scan_chunk(task: tuple[int, int, int, int]) -> ScanResult:
    lo, hi, window, max_steps = task
    return scan_principal_forms(lo, hi, window, max_steps)


# ── engine ───────────────────────────────────────────────────────────


class ScanEngine:
    def __init__(
        self,
        lo: int,
        hi: int,
        window: int = SCAN_WINDOW,
        jobs: int = SCAN_JOBS,
        max_steps: int = SCAN_STEP_LIMIT,
        checkpoint_path: str | Path | None = None,
        resume: bool = False,
        should_stop: Callable[[], bool] | None = None,
        chunk_numbers: int = _CHUNK_NUMBERS,
    ):
        require_natural("scan", lo)
        if hi < lo:
            raise CollatzDomainError("scan", (lo, hi), "empty range")
        require_natural("scan window", window)
        require_natural("scan jobs", jobs)
        self.lo, self.hi, self.window = lo, hi, window
        self.jobs = jobs
        self.max_steps = max_steps
        self.checkpoint_path = Path(checkpoint_path) if checkpoint_path else None
        self.resume = resume
        self.should_stop = should_stop or (lambda: False)
        self.chunk_numbers = chunk_numbers
        self.interrupted = False
        self.resumed_windows = 0

    @property
    def window_count(self) -> int:
        return window_index(self.hi, self.window) - window_index(self.lo, self.window) + 1

    # ── public entry point ───────────────────────────────────────────

    def run(self, progress: dict[str, Any] | None = None) -> ScanResult:
        done = self._open_checkpoint()
        self.resumed_windows = len(done)
        pending = [w for w in windows_in(self.lo, self.hi, self.window) if w[0] not in done]
        logger.info(
            "Scanning [%d, %d]: %d windows, %d already checkpointed, jobs=%d",
            self.lo, self.hi, self.window_count, len(done), self.jobs,
        )

        replayed = ScanResult(window=self.window)
        for start, count in sorted(done.items()):
            end = min(self.hi, (window_index(start, self.window) + 1) * self.window)
            replayed.windows.append(ScanWindowStats(start, end, count))
        if progress is not None:
            progress["current"] = len(done)

        per_chunk = max(1, self.chunk_numbers // self.window)
        tasks = [
            (run[0][0], run[-1][1], self.window, self.max_steps)
            for run in _chunks(pending, per_chunk)
        ]
        parts = [replayed]
        for part in self._execute(tasks):
            self._checkpoint(part.windows)
            parts.append(part)
            if progress is not None:
                progress["current"] += len(part.windows)

        result = merge_scan_results(parts)
        if self.interrupted:
            logger.warning(
                "Scan interrupted after %d of %d windows", len(result.windows), self.window_count
            )
        return result

    # ── internals ────────────────────────────────────────────────────

    def _execute(self, tasks: list[tuple[int, int, int, int]]) -> Iterator[ScanResult]:
        if self.jobs == 1 or len(tasks) <= 1:
            for task in tasks:
                if self.should_stop():
                    self.interrupted = True
                    return
                yield _scan_chunk(task)
            return

        pool = ProcessPoolExecutor(max_workers=self.jobs)
        try:
            for part in pool.map(_scan_chunk, tasks):
                yield part
                if self.should_stop():
                    self.interrupted = True
                    return
        finally:
            pool.shutdown(wait=True, cancel_futures=True)

    def _open_checkpoint(self) -> dict[int, int]:
        path = self.checkpoint_path
        if path is None:
            return {}
        if self.resume and path.exists():
            done = _load_checkpoint(path, self.lo, self.hi, self.window)
            logger.info("Resuming from %s (%d windows done)", path, len(done))
            return done
        path.write_text(json.dumps(_header(self.lo, self.hi, self.window)) + "\n")
        return {}

    def _checkpoint(self, windows: list[ScanWindowStats]) -> None:
        if self.checkpoint_path is None or not windows:
            return
        with open(self.checkpoint_path, "a") as fh:
            for w in windows:
                fh.write(_record(w) + "\n")
        logger.debug("Checkpointed windows %d..%d", windows[0].window_start, windows[-1].window_end)
