"""Phase executors.

A phase is a list of per-worker tasks; :meth:`run` returns once every task has
finished, which is the barrier between phases.

``SerialExecutor`` runs the tasks one after another. That is one legal
interleaving of the lock-free kernels, it is deterministic, and each logical
worker's busy time can be timed in isolation.

``ThreadExecutor`` runs them on OS threads. Read-modify-write on shared cells
goes through striped locks, which play the role of hardware atomics. Plain
reads are unsynchronised, as in the lock-free design.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from typing import Callable, Sequence


class SerialExecutor:
    name = "serial"

    def __init__(self, workers: int = 1):
        self.workers = workers

    def run(self, tasks: Sequence[Callable[[], None]]) -> None:
        for task in tasks:
            task()

    @staticmethod
    def atomic_add(arr: list, i: int, d: int) -> int:
        old = arr[i]
        arr[i] = old + d
        return old

    @staticmethod
    def make_lock():
        return nullcontext()

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class ThreadExecutor(SerialExecutor):
    name = "threads"

    def __init__(self, workers: int = 1, stripes: int = 256):
        super().__init__(workers)
        self._pool = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="prflow-worker")
        self._locks = [threading.Lock() for _ in range(stripes)]
        self._mask = stripes - 1

    def run(self, tasks: Sequence[Callable[[], None]]) -> None:
        futures = [self._pool.submit(task) for task in tasks]
        for f in futures:
            f.result()

    def atomic_add(self, arr: list, i: int, d: int) -> int:
        with self._locks[((id(arr) >> 4) ^ i) & self._mask]:
            old = arr[i]
            arr[i] = old + d
        return old

    @staticmethod
    def make_lock():
        return threading.Lock()

    def close(self) -> None:
        self._pool.shutdown(wait=True)


def make_executor(kind: str, workers: int) -> SerialExecutor:
    if kind == "serial":
        return SerialExecutor(workers)
    if kind == "threads":
        return ThreadExecutor(workers)
    raise ValueError(f"unknown executor {kind!r} (expected 'serial' or 'threads')")
