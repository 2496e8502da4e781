from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Literal, Optional

from ..bench.trace import WorkloadTrace
from ..network import FlowNetwork
from ..residual import Residual, build_residual
from .executor import make_executor
from .kernels import KernelContext, Observer, drain_excess, global_relabel, preflow, tc_kernel, vc_kernel
from .reduction import is_power_of_two
from .state import PushRelabelState

AUTO = "auto"


class NonTerminationError(RuntimeError):
    pass


@dataclass(frozen=True)
class EngineConfig:
    variant: Literal["tc", "vc"] = "vc"
    representation: Literal["rcsr", "bcsr"] = "bcsr"
    tile_size: int = 32
    cycles_per_kernel: int | str = AUTO
    worker_count: int = 1
    executor: Literal["serial", "threads"] = "serial"
    max_outer_iterations: Optional[int] = None  # None -> 10 * n
    trace: bool = False
    validate: bool = False

    def __post_init__(self):
        if self.variant not in ("tc", "vc"):
            raise ValueError(f"variant must be 'tc' or 'vc', got {self.variant!r}")
        if self.representation not in ("rcsr", "bcsr"):
            raise ValueError(f"representation must be 'rcsr' or 'bcsr', got {self.representation!r}")
        if not is_power_of_two(self.tile_size):
            raise ValueError(f"tile_size must be a positive power of two, got {self.tile_size}")
        if self.worker_count < 1:
            raise ValueError(f"worker_count must be positive, got {self.worker_count}")
        if self.cycles_per_kernel != AUTO and (not isinstance(self.cycles_per_kernel, int) or self.cycles_per_kernel < 1):
            raise ValueError(f"cycles_per_kernel must be a positive int or 'auto', got {self.cycles_per_kernel!r}")
        if self.executor not in ("serial", "threads"):
            raise ValueError(f"executor must be 'serial' or 'threads', got {self.executor!r}")

    @property
    def label(self) -> str:
        return f"{self.variant.upper()}+{self.representation.upper()}"

    def cycles_for(self, n: int) -> int:
        return n if self.cycles_per_kernel == AUTO else int(self.cycles_per_kernel)


@dataclass
class RunStats:
    flow: int = 0
    outer_iterations: int = 0
    kernel_invocations: int = 0
    sweeps: int = 0
    vertices_processed: int = 0
    pushes: int = 0
    relabels: int = 0
    global_relabels: int = 0
    wall_time_ns: int = 0
    kernel_time_ns: int = 0


@dataclass
class MaxFlowResult:
    flow: int
    source_side: frozenset[int]
    stats: RunStats
    residual: Residual
    state: PushRelabelState
    config: EngineConfig
    trace: Optional[WorkloadTrace] = None
    violations: list[str] = field(default_factory=list)

    @property
    def sink_side(self) -> frozenset[int]:
        return frozenset(range(self.state.n)) - self.source_side


def max_flow(net: FlowNetwork, config: EngineConfig | None = None, observer: Observer | None = None) -> MaxFlowResult:
    """Maximum flow and a minimum cut of ``net``.

    Runs preflow, then alternates kernel and global relabel until
    ``e(s) + e(t) >= excess_total``. Stranded excess is then returned to the
    source, leaving a genuine flow in the residual layout. The cut's source
    side is every vertex that cannot reach the sink, i.e. height ``n`` after a
    final global relabel.
    """
    config = config or EngineConfig()
    wall0 = time.perf_counter_ns()
    g = build_residual(net, config.representation)
    s, t, n = net.source, net.sink, net.n
    state = PushRelabelState.initial(g, s, t)

    validator = None
    if config.validate:
        from .validate import Validator

        validator = Validator(g, state, chain=observer)
        observer = validator

    executor = make_executor(config.executor, config.worker_count)
    ctx = KernelContext(executor=executor, observer=observer, trace=[] if config.trace else None)
    stats = RunStats()
    cap = config.max_outer_iterations or 10 * n
    cycles = config.cycles_for(n)
    try:
        preflow(state, g, s)
        ctx.notify("preflow", state)
        while state.excess[s] + state.excess[t] < state.excess_total:
            if stats.outer_iterations >= cap:
                raise NonTerminationError(
                    f"{config.label}: no convergence after {stats.outer_iterations} outer iterations "
                    f"(e(s)={state.excess[s]}, e(t)={state.excess[t]}, excess_total={state.excess_total}, "
                    f"active={len(state.active_vertices())})"
                )
            k0 = time.perf_counter_ns()
            if config.variant == "tc":
                tc_kernel(state, g, cycles, ctx)
            else:
                vc_kernel(state, g, config.tile_size, cycles, ctx)
            stats.kernel_time_ns += time.perf_counter_ns() - k0
            stats.kernel_invocations += 1
            global_relabel(state, g, t, s, ctx)
            stats.outer_iterations += 1
    finally:
        executor.close()

    drain_excess(state, g)
    global_relabel(state, g, t, s, ctx)
    state.sync_to(g)

    totals = ctx.totals()
    stats.flow = state.excess[t]
    stats.sweeps = ctx.sweeps
    stats.vertices_processed = totals.vertices
    stats.pushes = totals.pushes
    stats.relabels = totals.relabels
    stats.global_relabels = ctx.global_relabels
    stats.wall_time_ns = time.perf_counter_ns() - wall0
    return MaxFlowResult(
        flow=state.excess[t],
        source_side=frozenset(v for v in range(n) if state.height[v] >= n),
        stats=stats,
        residual=g,
        state=state,
        config=config,
        trace=WorkloadTrace(ctx.trace) if ctx.trace is not None else None,
        violations=validator.violations if validator else [],
    )
