"""Push-relabel building blocks and the two parallel kernels.

Ownership rules that make the lock-free kernels safe: within a phase a vertex
is handled by exactly one worker (thread-centric) or one tile
(vertex-centric). Only the owner lowers ``e(u)`` or ``cf(u, .)`` and writes
``h(u)``. Other workers may only raise them through atomic adds, so a push
amount read by the owner can never exceed what is actually available.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

from ..bench.trace import TraceRecord
from .executor import SerialExecutor
from .reduction import is_power_of_two, tree_reduce
from .state import PushRelabelState
from .views import INF, NO_ARC

Observer = Callable[..., None]
clock = time.perf_counter_ns


class IsolatedVertexError(RuntimeError):
    """An active vertex has no residual arc with positive capacity."""


class MinNeighbor(NamedTuple):
    vertex: int
    height: int
    slot: int


@dataclass
class WorkerCounters:
    vertices: int = 0
    pushes: int = 0
    relabels: int = 0

    def as_tuple(self) -> tuple[int, int, int]:
        return self.vertices, self.pushes, self.relabels


@dataclass
class KernelContext:
    """Execution resources shared by the kernels of one run."""

    executor: SerialExecutor = field(default_factory=SerialExecutor)
    observer: Optional[Observer] = None
    trace: Optional[list[TraceRecord]] = None
    phase: int = 0
    sweeps: int = 0
    global_relabels: int = 0
    counters: list[WorkerCounters] = field(default_factory=list)

    def __post_init__(self):
        if not self.counters:
            self.counters = [WorkerCounters() for _ in range(self.workers)]

    @property
    def workers(self) -> int:
        return self.executor.workers

    def totals(self) -> WorkerCounters:
        out = WorkerCounters()
        for c in self.counters:
            out.vertices += c.vertices
            out.pushes += c.pushes
            out.relabels += c.relabels
        return out

    def notify(self, event: str, state: PushRelabelState, **info) -> None:
        if self.observer is not None:
            self.observer(event, state, **info)


class ActiveVertexQueue:
    """Array filled by atomic append during a scan phase."""

    def __init__(self, capacity: int, lock=None):
        self.items = [0] * capacity
        self.count = 0
        self._lock = lock if lock is not None else SerialExecutor.make_lock()

    def append(self, u: int) -> None:
        with self._lock:
            pos = self.count
            self.count = pos + 1
        self.items[pos] = u

    def contents(self) -> list[int]:
        return self.items[: self.count]


def preflow(state: PushRelabelState, g, source: int | None = None) -> PushRelabelState:
    """Saturate every residual arc leaving the source."""
    s = state.source if source is None else source
    view = g.engine_view
    cf, e = state.cf, state.excess
    for v, slot in view.arcs(s):
        c = cf[slot]
        if c <= 0:
            continue
        cf[slot] = 0
        cf[view.pair(s, slot)] += c
        e[v] += c
        state.excess_total += c
    state.preflowed = True
    return state


def min_height_neighbor(g, u: int, state: PushRelabelState) -> MinNeighbor | None:
    """Lowest neighbour over arcs with ``cf > 0``; ties go to the smaller id."""
    h, v, slot = g.engine_view.scan_min(u, state.height, state.cf)
    if v == INF:
        return None
    return MinNeighbor(v, h, slot)


def push(state: PushRelabelState, g, u: int, slot: int, v: int, atomic_add=SerialExecutor.atomic_add) -> int:
    """Move ``min(e(u), cf(u, v))`` along the arc at ``slot``; returns the amount."""
    cf, e = state.cf, state.excess
    d = min(e[u], cf[slot])
    if d <= 0:
        return 0
    back = g.engine_view.pair(u, slot)
    atomic_add(cf, slot, -d)
    atomic_add(e, u, -d)
    atomic_add(cf, back, d)
    atomic_add(e, v, d)
    return d


def relabel(state: PushRelabelState, u: int, h_min: int) -> PushRelabelState:
    state.height[u] = h_min + 1
    return state


def _local_op(state, g, u, best, ctx: KernelContext, counter: WorkerCounters) -> None:
    bh, bv, slot = best
    if bv == INF:
        raise IsolatedVertexError(f"active vertex {u} has no residual arc with positive capacity")
    hu = state.height[u]
    if hu > bh:
        if ctx.observer is not None:
            ctx.notify("push", state, u=u, hu=hu, v=bv, hv=bh)
        push(state, g, u, slot, bv, ctx.executor.atomic_add)
        counter.pushes += 1
    else:
        relabel(state, u, bh)
        counter.relabels += 1
    counter.vertices += 1


def _record(ctx, worker, start, end, before, counter) -> None:
    after = counter.as_tuple()
    ctx.trace.append(
        TraceRecord(worker, ctx.phase, start, end, after[0] - before[0], after[1] - before[1], after[2] - before[2])
    )


def tc_kernel(state: PushRelabelState, g, cycles: int, ctx: KernelContext | None = None) -> PushRelabelState:
    """Thread-centric kernel: ``cycles`` sweeps, one worker per vertex.

    Worker ``w`` owns vertices ``w, w + W, w + 2W, ...`` and performs one push
    or relabel on each of them that is active. A sweep that finds no active
    vertex changes nothing, so the remaining sweeps are skipped.
    """
    ctx = ctx or KernelContext()
    view = g.engine_view
    n, W = view.n, ctx.workers
    s, t = state.source, state.sink
    e, h = state.excess, state.height

    def worker_task(w: int, found: list[int]):
        counter = ctx.counters[w]

        def task():
            tracing = ctx.trace is not None
            if tracing:
                before = counter.as_tuple()
                start = clock()
            hits = 0
            for u in range(w, n, W):
                if e[u] > 0 and h[u] < n and u != s and u != t:
                    hits += 1
                    _local_op(state, g, u, view.scan_min(u, h, state.cf), ctx, counter)
            found[w] = hits
            if tracing:
                _record(ctx, w, start, clock(), before, counter)

        return task

    for _ in range(cycles):
        found = [0] * W
        ctx.executor.run([worker_task(w, found) for w in range(W)])
        ctx.phase += 1
        ctx.sweeps += 1
        ctx.notify("barrier", state)
        if not any(found):
            break
    return state


def tile_lanes(tile_size: int, workers: int) -> int:
    """Lanes per tile: ``tile_size`` capped at the largest power of two <= workers."""
    if not is_power_of_two(tile_size):
        raise ValueError(f"tile_size must be a power of two, got {tile_size}")
    cap = 1 << (workers.bit_length() - 1)
    return min(tile_size, cap)


def vc_kernel(
    state: PushRelabelState,
    g,
    tile_size: int = 32,
    rounds: int | None = None,
    ctx: KernelContext | None = None,
) -> PushRelabelState:
    """Vertex-centric kernel with two-level parallelism.

    Each round scans for active vertices into the queue, then hands queue
    entries to tiles. A tile's lanes each fold a strided slice of the
    vertex's neighbours, a tree reduction picks the minimum, and lane 0 alone
    pushes or relabels. Stops early once a scan finds nothing.
    """
    ctx = ctx or KernelContext()
    view = g.engine_view
    n, W = view.n, ctx.workers
    rounds = n if rounds is None else rounds
    lanes = tile_lanes(tile_size, W)
    tiles = W // lanes
    s, t = state.source, state.sink
    e, h = state.excess, state.height

    def scan_task(w: int, avq: ActiveVertexQueue):
        def task():
            tracing = ctx.trace is not None
            if tracing:
                start = clock()
            for u in range(w, n, W):
                if e[u] > 0 and h[u] < n and u != s and u != t:
                    avq.append(u)
            if tracing:
                ctx.trace.append(TraceRecord(w, ctx.phase, start, clock(), 0, 0, 0))

        return task

    def tile_task(k: int, avq: ActiveVertexQueue):
        base = k * lanes
        delegate = ctx.counters[base]

        def task():
            tracing = ctx.trace is not None
            if tracing:
                before = delegate.as_tuple()
                busy = [0] * lanes
                start = clock()
            cf = state.cf
            for i in range(k, avq.count, tiles):
                u = avq.items[i]
                if not (e[u] > 0 and h[u] < n):
                    continue
                used = min(lanes, view.degree(u))
                partials = [NO_ARC] * lanes
                if tracing:
                    for j in range(used):
                        t0 = clock()
                        partials[j] = view.scan_min(u, h, cf, j, lanes)
                        busy[j] += clock() - t0
                    t0 = clock()
                    best = tree_reduce(partials)
                    dt = clock() - t0
                    for j in range(used):
                        busy[j] += dt
                    t0 = clock()
                    _local_op(state, g, u, best, ctx, delegate)
                    busy[0] += clock() - t0
                else:
                    for j in range(used):
                        partials[j] = view.scan_min(u, h, cf, j, lanes)
                    _local_op(state, g, u, tree_reduce(partials), ctx, delegate)
            if tracing:
                after = delegate.as_tuple()
                for j in range(lanes):
                    counts = (0, 0, 0) if j else tuple(a - b for a, b in zip(after, before))
                    ctx.trace.append(TraceRecord(base + j, ctx.phase, start, start + busy[j], *counts))

        return task

    for _ in range(rounds):
        avq = ActiveVertexQueue(n, ctx.executor.make_lock())
        ctx.executor.run([scan_task(w, avq) for w in range(W)])
        ctx.phase += 1
        ctx.notify("scan", state, avq=avq.contents())
        if avq.count == 0:
            break
        ctx.executor.run([tile_task(k, avq) for k in range(tiles)])
        if ctx.trace is not None:
            now = clock()
            for w in range(tiles * lanes, W):
                ctx.trace.append(TraceRecord(w, ctx.phase, now, now, 0, 0, 0))
        ctx.phase += 1
        ctx.sweeps += 1
        ctx.notify("barrier", state)
    return state


def global_relabel(
    state: PushRelabelState, g, sink: int | None = None, source: int | None = None, ctx: KernelContext | None = None
) -> PushRelabelState:
    """Reset heights to residual distance-to-sink and retire stranded excess.

    Breadth-first search from the sink over reversed residual arcs. Vertices
    that cannot reach the sink get height ``n``; any such vertex still holding
    excess has that excess removed from ``excess_total`` once.
    """
    t = state.sink if sink is None else sink
    s = state.source if source is None else source
    view = g.engine_view
    n = view.n
    cf = state.cf
    dist = [n] * n
    dist[t] = 0
    queue = deque([t])
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for u, slot in view.arcs(v):
            if dist[u] == n and u != s and cf[view.pair(v, slot)] > 0:
                dist[u] = dv
                queue.append(u)
    dist[s] = n
    state.height[:] = dist
    e, dead = state.excess, state.deactivated
    for v in range(n):
        if dist[v] == n and v != s and v != t and e[v] > 0 and not dead[v]:
            state.excess_total -= e[v]
            dead[v] = True
    if ctx is not None:
        ctx.global_relabels += 1
        ctx.notify("global_relabel", state)
    return state


def drain_excess(state: PushRelabelState, g) -> PushRelabelState:
    """Send excess stranded at non-terminals back toward the source.

    Undoes inflow along arcs that carry net flow into the vertex until
    conservation holds everywhere except at the terminals. The result is a
    flow of the same value. Every step lowers some arc's flow, so this
    terminates even when flow cycles are present.
    """
    view = g.engine_view
    cf, cap, e = state.cf, state.capacity, state.excess
    s, t = state.source, state.sink
    stack = [v for v in range(view.n) if v != s and v != t and e[v] > 0]
    while stack:
        v = stack.pop()
        if e[v] <= 0:
            continue
        for u, slot in view.arcs(v):
            inflow = cf[slot] - cap[slot]  # net flow u -> v
            if inflow <= 0:
                continue
            d = min(e[v], inflow)
            cf[slot] -= d
            cf[view.pair(v, slot)] += d
            e[v] -= d
            e[u] += d
            if u != s and u != t:
                stack.append(u)
            if e[v] == 0:
                break
    state.excess_total = sum(e)
    return state
