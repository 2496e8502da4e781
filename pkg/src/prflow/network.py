"""Flow network container and arc-pair canonicalisation shared by every layout."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np


class Edge(NamedTuple):
    u: int
    v: int
    cap: int


@dataclass(frozen=True)
class FlowNetwork:
    """Immutable directed graph with integer capacities and two terminals.

    Parallel and antiparallel edges are allowed here; the residual layouts
    merge them into arc pairs (see :func:`arc_pairs`).
    """

    n: int
    edges: tuple[Edge, ...]
    source: int
    sink: int

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(Edge(int(u), int(v), int(c)) for u, v, c in self.edges))
        if self.n < 2:
            raise ValueError(f"a flow network needs at least 2 vertices, got n={self.n}")
        if not (0 <= self.source < self.n and 0 <= self.sink < self.n):
            raise ValueError(f"terminals out of range: source={self.source}, sink={self.sink}, n={self.n}")
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        u, v, c = self.edge_arrays()
        bad = np.flatnonzero((u < 0) | (u >= self.n) | (v < 0) | (v >= self.n))
        if bad.size:
            i = int(bad[0])
            raise ValueError(f"edge {i} ({u[i]}, {v[i]}) has an endpoint outside 0..{self.n - 1}")
        bad = np.flatnonzero(u == v)
        if bad.size:
            raise ValueError(f"edge {int(bad[0])} is a self-loop on vertex {u[bad[0]]}")
        bad = np.flatnonzero(c < 0)
        if bad.size:
            i = int(bad[0])
            raise ValueError(f"edge {i} ({u[i]}, {v[i]}) has negative capacity {c[i]}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]], source: int, sink: int) -> "FlowNetwork":
        return cls(n, tuple(edges), source, sink)

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy(), empty.copy()
        arr = np.asarray(self.edges, dtype=np.int64)
        return arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy()

    def cut_capacity(self, source_side: Iterable[int]) -> int:
        """Total capacity of edges leaving ``source_side``."""
        inside = np.zeros(self.n, dtype=bool)
        inside[list(source_side)] = True
        return sum(c for u, v, c in self.edges if inside[u] and not inside[v])


@dataclass(frozen=True)
class ArcPairs:
    """One entry per unordered vertex pair that carries at least one edge.

    ``tail[p] -> head[p]`` is the forward direction of pair ``p``; ``cap_fwd``
    and ``cap_bwd`` are the summed capacities in each direction.
    """

    n: int
    tail: np.ndarray
    head: np.ndarray
    cap_fwd: np.ndarray
    cap_bwd: np.ndarray

    @property
    def m(self) -> int:
        return int(self.tail.size)


def arc_pairs(net: FlowNetwork) -> ArcPairs:
    """Merge parallel edges and fold antiparallel ones into a single pair.

    A pair whose edges all point one way keeps that direction as forward.
    When both directions occur the forward direction is low id -> high id.
    """
    u, v, cap = net.edge_arrays()
    n = net.n
    if u.size == 0:
        z = np.zeros(0, dtype=np.int64)
        return ArcPairs(n, z, z.copy(), z.copy(), z.copy())

    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    key = lo * n + hi
    keys, inv = np.unique(key, return_inverse=True)
    upward = u < v  # edge runs lo -> hi
    k = keys.size
    cap_up = np.zeros(k, dtype=np.int64)
    cap_down = np.zeros(k, dtype=np.int64)
    np.add.at(cap_up, inv[upward], cap[upward])
    np.add.at(cap_down, inv[~upward], cap[~upward])
    has_up = np.bincount(inv[upward], minlength=k) > 0
    has_down = np.bincount(inv[~upward], minlength=k) > 0

    plo = keys // n
    phi = keys % n
    flip = has_down & ~has_up  # only hi -> lo edges exist
    tail = np.where(flip, phi, plo)
    head = np.where(flip, plo, phi)
    cap_fwd = np.where(flip, cap_down, cap_up)
    cap_bwd = np.where(flip, cap_up, cap_down)
    return ArcPairs(n, tail.astype(np.int64), head.astype(np.int64), cap_fwd, cap_bwd)
