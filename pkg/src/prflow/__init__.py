"""Workload-balanced parallel push-relabel maximum flow on compact residual layouts."""

from .engine import EngineConfig, MaxFlowResult, max_flow, reference_max_flow
from .network import Edge, FlowNetwork
from .residual import ArcHandle, ResidualBCSR, ResidualRCSR, build_bcsr, build_forward_csr, build_rcsr

__version__ = "0.1.0"

__all__ = [
    "ArcHandle",
    "Edge",
    "EngineConfig",
    "FlowNetwork",
    "MaxFlowResult",
    "ResidualBCSR",
    "ResidualRCSR",
    "build_bcsr",
    "build_forward_csr",
    "build_rcsr",
    "max_flow",
    "reference_max_flow",
]
