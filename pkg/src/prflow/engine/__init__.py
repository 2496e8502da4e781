from .executor import SerialExecutor, ThreadExecutor, make_executor
from .kernels import (
    ActiveVertexQueue,
    IsolatedVertexError,
    KernelContext,
    MinNeighbor,
    drain_excess,
    global_relabel,
    min_height_neighbor,
    preflow,
    push,
    relabel,
    tc_kernel,
    tile_lanes,
    vc_kernel,
)
from .maxflow import AUTO, EngineConfig, MaxFlowResult, NonTerminationError, RunStats, max_flow
from .reduction import tile_min_reduce, tree_reduce
from .reference import reference_max_flow
from .state import PushRelabelState
from .validate import Validator

__all__ = [
    "AUTO",
    "ActiveVertexQueue",
    "EngineConfig",
    "IsolatedVertexError",
    "KernelContext",
    "MaxFlowResult",
    "MinNeighbor",
    "NonTerminationError",
    "PushRelabelState",
    "RunStats",
    "SerialExecutor",
    "ThreadExecutor",
    "Validator",
    "drain_excess",
    "global_relabel",
    "make_executor",
    "max_flow",
    "min_height_neighbor",
    "preflow",
    "push",
    "reference_max_flow",
    "relabel",
    "tc_kernel",
    "tile_lanes",
    "tile_min_reduce",
    "tree_reduce",
    "vc_kernel",
]
