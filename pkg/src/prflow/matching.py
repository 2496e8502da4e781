"""Maximum bipartite matching through a unit-capacity flow network.

Vertex numbering of the reduction: super-source 0, left vertices
``1..|L|``, right vertices ``|L|+1..|L|+|R|``, super-sink ``|L|+|R|+1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .engine import EngineConfig, MaxFlowResult, max_flow
from .network import FlowNetwork
from .residual import find_arc


class InconsistentStateError(RuntimeError):
    pass


@dataclass(frozen=True)
class BipartiteGraph:
    left_count: int
    right_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen: dict[tuple[int, int], None] = {}
        for l, r in self.edges:
            l, r = int(l), int(r)
            if not (0 <= l < self.left_count and 0 <= r < self.right_count):
                raise ValueError(f"edge ({l}, {r}) outside |L|={self.left_count}, |R|={self.right_count}")
            seen[(l, r)] = None
        object.__setattr__(self, "edges", tuple(seen))

    @classmethod
    def from_edges(cls, left_count: int, right_count: int, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        return cls(left_count, right_count, tuple(edges))


@dataclass(frozen=True)
class MatchingResult:
    size: int
    pairs: list[tuple[int, int]]
    flow: MaxFlowResult


def build_matching_network(b: BipartiteGraph) -> FlowNetwork:
    L, R = b.left_count, b.right_count
    sink = L + R + 1
    edges = [(0, 1 + l, 1) for l in range(L)]
    edges += [(1 + l, 1 + L + r, 1) for l, r in b.edges]
    edges += [(1 + L + r, sink, 1) for r in range(R)]
    return FlowNetwork(L + R + 2, tuple(edges), 0, sink)


def extract_matching(b: BipartiteGraph, result: MaxFlowResult) -> list[tuple[int, int]]:
    """Left-right pairs whose unit arc is saturated in the final residual."""
    g, L = result.residual, b.left_count
    pairs = [(l, r) for l, r in b.edges if g.cf[find_arc(g, 1 + l, 1 + L + r).fwd_pos] == 0]
    lefts = {l for l, _ in pairs}
    rights = {r for _, r in pairs}
    if len(pairs) != result.flow or len(lefts) != len(pairs) or len(rights) != len(pairs):
        raise InconsistentStateError(
            f"{len(pairs)} saturated left-right arcs ({len(lefts)} distinct left, {len(rights)} distinct right) "
            f"for flow value {result.flow}"
        )
    return sorted(pairs)


def maximum_matching(b: BipartiteGraph, config: EngineConfig | None = None) -> MatchingResult:
    net = build_matching_network(b)
    result = max_flow(net, config)
    pairs = extract_matching(b, result)
    return MatchingResult(len(pairs), pairs, result)
