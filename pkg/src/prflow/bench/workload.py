from __future__ import annotations

from dataclasses import dataclass, replace

from ..engine import EngineConfig, MaxFlowResult, max_flow
from ..network import FlowNetwork
from .trace import WorkloadStats, WorkloadTrace, workload_stats


@dataclass
class WorkloadRecording:
    trace: WorkloadTrace
    traced: MaxFlowResult
    untraced: MaxFlowResult

    @property
    def kernel_time_ns(self) -> int:
        """Kernel time from the untraced run, free of timestamping overhead."""
        return self.untraced.stats.kernel_time_ns

    def stats(self) -> WorkloadStats:
        return workload_stats(self.trace)


def record_workload(net: FlowNetwork, config: EngineConfig) -> WorkloadRecording:
    untraced = max_flow(net, replace(config, trace=False))
    traced = max_flow(net, replace(config, trace=True))
    return WorkloadRecording(traced.trace, traced, untraced)
