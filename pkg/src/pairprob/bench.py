"""Wall-clock timing of the engines on I=S schedules, summarised as min/mean/max.

Every replicate runs in a freshly forked worker process, so runs start cold
and a runaway naive recursion can be killed at the timeout.  The duration is
measured inside the worker around the engine call alone.
"""

from __future__ import annotations

import csv
import multiprocessing as mp
import statistics
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, TextIO

from .closedform import closed_form_P
from .model import Configuration, config
from .numerics import Backend, as_backend
from .recursion import MemoTable, memoized_P, recursive_P

ENGINES = {
    "recursive": lambda cfg, backend: recursive_P(cfg, backend),
    "memoized": lambda cfg, backend: memoized_P(cfg, backend, MemoTable(backend)),
    "closed": lambda cfg, backend: closed_form_P(cfg, backend),
}

SUMMARY_HEADER = ["engine", "I", "S", "min_s", "mean_s", "max_s", "timed_out"]
RECORD_HEADER = ["engine", "I", "S", "replicate", "seconds"]


@dataclass(frozen=True)
class BenchRecord:
    engine: str
    infected: int
    clean: int
    replicate: int
    seconds: float
    timed_out: bool = False


@dataclass(frozen=True)
class BenchSummary:
    engine: str
    infected: int
    clean: int
    min_s: Optional[float]
    mean_s: Optional[float]
    max_s: Optional[float]
    timed_out: bool = False

    def row(self) -> list:
        if self.timed_out:
            return [self.engine, self.infected, self.clean, "", "", "", "true"]
        return [self.engine, self.infected, self.clean,
                repr(self.min_s), repr(self.mean_s), repr(self.max_s), "false"]


def _context():
    try:
        return mp.get_context("fork")
    except ValueError:
        return mp.get_context("spawn")


def _timed_run(conn, engine: str, I: int, S: int, backend: str) -> None:
    fn = ENGINES[engine]
    cfg, be = Configuration(I, S), Backend(backend)
    start = time.perf_counter()
    fn(cfg, be)
    conn.send(time.perf_counter() - start)
    conn.close()


def _run_once(engine: str, cfg: Configuration, backend: Backend, timeout_s: float) -> Optional[float]:
    """Seconds taken by one cold run, or None if it exceeded ``timeout_s``."""
    ctx = _context()
    recv, send = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_timed_run, args=(send, engine, cfg.I, cfg.S, backend.value), daemon=True)
    proc.start()
    send.close()
    try:
        if recv.poll(timeout_s):
            return recv.recv()
        return None
    finally:
        if proc.is_alive():
            proc.kill()
        proc.join()
        recv.close()


def time_engine(engine: str, cfg: Configuration | tuple[int, int], replicates: int,
                timeout_s: float, backend: Backend | str = Backend.FLOAT) -> List[BenchRecord]:
    """Time ``replicates`` cold runs.  A run past ``timeout_s`` ends the cell.

    The timed-out run appears as a final record with ``timed_out=True`` and
    ``seconds`` set to the timeout, a lower bound on its true duration.
    """
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; expected one of {sorted(ENGINES)}")
    if replicates < 1:
        raise ValueError("replicates must be positive")
    cfg, backend = config(cfg), as_backend(backend)
    records = []
    for rep in range(1, replicates + 1):
        seconds = _run_once(engine, cfg, backend, timeout_s)
        if seconds is None:
            records.append(BenchRecord(engine, cfg.I, cfg.S, rep, float(timeout_s), timed_out=True))
            break
        records.append(BenchRecord(engine, cfg.I, cfg.S, rep, seconds))
    return records


def summarize(records: Sequence[BenchRecord]) -> BenchSummary:
    if not records:
        raise ValueError("nothing to summarize")
    first = records[0]
    if any(r.timed_out for r in records):
        return BenchSummary(first.engine, first.infected, first.clean, None, None, None, timed_out=True)
    secs = [r.seconds for r in records]
    return BenchSummary(first.engine, first.infected, first.clean, min(secs), statistics.fmean(secs), max(secs))


def bench_suite(sizes: Iterable[int], engines: Sequence[str], replicates: int, timeout_s: float,
                backend: Backend | str = Backend.FLOAT, records_out: Optional[list] = None) -> List[BenchSummary]:
    """Summaries for every (size, engine) cell, run strictly one after another.

    Once an engine times out at some size, its larger sizes are reported as
    timed out without being run.
    """
    summaries = []
    dead = set()
    for n in sizes:
        for engine in engines:
            if engine in dead:
                summaries.append(BenchSummary(engine, n, n, None, None, None, timed_out=True))
                continue
            records = time_engine(engine, (n, n), replicates, timeout_s, backend)
            if records_out is not None:
                records_out.extend(records)
            summary = summarize(records)
            if summary.timed_out:
                dead.add(engine)
            summaries.append(summary)
    return summaries


def write_summaries(summaries: Iterable[BenchSummary], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    for s in summaries:
        writer.writerow(s.row())


def write_records(records: Iterable[BenchRecord], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RECORD_HEADER)
    for r in records:
        if not r.timed_out:
            writer.writerow([r.engine, r.infected, r.clean, r.replicate, repr(r.seconds)])


def parse_sizes(text: str) -> List[int]:
    """``"5..50:5"`` -> [5, 10, ..., 50]; also accepts ``"5,10,20"`` and ``""``."""
    text = text.strip()
    if not text:
        return []
    if ".." in text:
        span, _, step = text.partition(":")
        lo, hi = (int(v) for v in span.split(".."))
        return list(range(lo, hi + 1, int(step) if step else 1))
    return [int(v) for v in text.split(",")]
