"""Per-worker workload traces.

One record per (worker, phase). ``end_ns - start_ns`` is the worker's busy
time in that phase, measured with ``time.perf_counter_ns``. Within a tile the
lanes advance in lockstep, so their work interleaves. For a lane, ``start_ns``
is when its tile began the phase and ``end_ns`` adds the lane's accumulated
busy time to that. Lanes that received no neighbours contribute zero.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

TRACE_HEADER = ("worker_id", "phase", "start_ns", "end_ns", "vertices", "pushes", "relabels")


class EmptyTraceError(ValueError):
    pass


class TraceRecord(NamedTuple):
    worker_id: int
    phase: int
    start_ns: int
    end_ns: int
    vertices: int
    pushes: int
    relabels: int

    @property
    def busy_ns(self) -> int:
        return self.end_ns - self.start_ns


@dataclass
class WorkloadTrace:
    records: list[TraceRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def busy_by_worker(self) -> dict[int, int]:
        busy: dict[int, int] = {}
        for r in self.records:
            busy[r.worker_id] = busy.get(r.worker_id, 0) + r.busy_ns
        return dict(sorted(busy.items()))

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        writer.writerows(self.records)
        return buf.getvalue()

    @classmethod
    def read_csv(cls, path: str | Path) -> "WorkloadTrace":
        with open(path, newline="") as fh:
            return cls.from_csv(fh.read())

    @classmethod
    def from_csv(cls, text: str) -> "WorkloadTrace":
        reader = csv.reader(io.StringIO(text))
        header = tuple(next(reader, ()))
        if header != TRACE_HEADER:
            raise ValueError(f"unexpected trace header {header!r}")
        return cls([TraceRecord(*map(int, row)) for row in reader if row])


@dataclass(frozen=True)
class WorkloadStats:
    mean: float
    stddev: float
    busy: dict[int, int]
    normalized: dict[int, float]

    @property
    def normalized_stddev(self) -> float:
        """Population stddev of the mean-normalised busy times."""
        return _pstdev(list(self.normalized.values()))


def _pstdev(xs: list[float]) -> float:
    mu = math.fsum(xs) / len(xs)
    return math.sqrt(math.fsum((x - mu) ** 2 for x in xs) / len(xs))


def workload_stats(trace: WorkloadTrace | Iterable[TraceRecord]) -> WorkloadStats:
    """Mean, population stddev and per-run mean-normalised busy times."""
    if not isinstance(trace, WorkloadTrace):
        trace = WorkloadTrace(list(trace))
    busy = trace.busy_by_worker()
    if not busy:
        raise EmptyTraceError("trace has no records")
    values = [float(b) for b in busy.values()]
    mean = math.fsum(values) / len(values)
    if mean == 0:
        raise EmptyTraceError("trace has no busy time")
    normalized = {w: b / mean for w, b in busy.items()}
    return WorkloadStats(mean=mean, stddev=_pstdev(values), busy=busy, normalized=normalized)
