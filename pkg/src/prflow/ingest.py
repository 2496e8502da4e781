"""Readers for DIMACS max-flow, SNAP edge lists and KONECT bipartite files,
plus terminal selection for networks that come without a source and sink.

Every parser accepts the file contents as text, tolerates CRLF line endings
and trailing whitespace, and reports bad input with a 1-based line number.
"""

from __future__ import annotations

import bz2
import gzip
import warnings
from collections import deque
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .matching import BipartiteGraph
from .network import FlowNetwork


class IngestError(ValueError):
    pass


class MalformedLineError(IngestError):
    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line.strip()!r}")
        self.lineno = lineno


class MissingProblemLineError(IngestError):
    pass


class MissingSourceOrSinkError(IngestError):
    pass


class OverlappingTerminalsError(IngestError):
    pass


class InsufficientPairsError(IngestError):
    pass


class ArcCountMismatchWarning(UserWarning):
    pass


class InsufficientPairsWarning(UserWarning):
    pass


class GraphFormat(str, Enum):
    DIMACS_MAX = "dimacs"
    SNAP_EDGELIST = "snap"
    KONECT_BIPARTITE = "konect"


_SUFFIXES = {
    ".max": GraphFormat.DIMACS_MAX,
    ".dimacs": GraphFormat.DIMACS_MAX,
    ".snap": GraphFormat.SNAP_EDGELIST,
    ".edges": GraphFormat.SNAP_EDGELIST,
    ".edgelist": GraphFormat.SNAP_EDGELIST,
    ".txt": GraphFormat.SNAP_EDGELIST,
    ".konect": GraphFormat.KONECT_BIPARTITE,
}


@dataclass(frozen=True)
class GraphFile:
    path: Path
    format: GraphFormat

    @classmethod
    def open(cls, path: str | Path, fmt: str | GraphFormat | None = None) -> "GraphFile":
        """Resolve the format from ``fmt`` or, failing that, from the file name."""
        path = Path(path)
        if fmt is not None:
            return cls(path, GraphFormat(fmt))
        name = path.name
        for ext in (".bz2", ".gz"):
            if name.endswith(ext):
                name = name[: -len(ext)]
        if name.startswith("out."):
            return cls(path, GraphFormat.KONECT_BIPARTITE)
        suffix = Path(name).suffix.lower()
        if suffix not in _SUFFIXES:
            raise IngestError(f"cannot tell the format of {path.name!r}; pass it explicitly")
        return cls(path, _SUFFIXES[suffix])

    def read_text(self) -> str:
        if self.path.name.endswith(".bz2"):
            return bz2.open(self.path, "rt").read()
        if self.path.name.endswith(".gz"):
            return gzip.open(self.path, "rt").read()
        return self.path.read_text()


@dataclass(frozen=True)
class EdgeList:
    """Directed graph with dense ids; ``labels[i]`` is vertex i's id in the file."""

    n: int
    edges: tuple[tuple[int, int, int], ...]
    labels: tuple[str, ...] = ()

    def out_adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].append(v)
        return adj


def _ints(parts: Sequence[str], lineno: int, line: str) -> list[int]:
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise MalformedLineError(lineno, line, "expected integers") from None


def parse_dimacs_max(text: str) -> FlowNetwork:
    n = m_declared = None
    source = sink = None
    edges: list[tuple[int, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise MalformedLineError(lineno, line, "second problem line")
            if len(parts) != 4 or parts[1] != "max":
                raise MalformedLineError(lineno, line, "expected 'p max N M'")
            n, m_declared = _ints(parts[2:], lineno, line)
            if n < 2 or m_declared < 0:
                raise MalformedLineError(lineno, line, "need N >= 2 and M >= 0")
        elif n is None:
            raise MalformedLineError(lineno, line, "descriptor before the problem line")
        elif tag == "n":
            if len(parts) != 3 or parts[2] not in ("s", "t"):
                raise MalformedLineError(lineno, line, "expected 'n ID s|t'")
            (vid,) = _ints(parts[1:2], lineno, line)
            if not 1 <= vid <= n:
                raise MalformedLineError(lineno, line, f"node id outside 1..{n}")
            if parts[2] == "s":
                source = vid - 1
            else:
                sink = vid - 1
        elif tag == "a":
            if len(parts) != 4:
                raise MalformedLineError(lineno, line, "expected 'a U V CAP'")
            u, v, cap = _ints(parts[1:], lineno, line)
            if not (1 <= u <= n and 1 <= v <= n):
                raise MalformedLineError(lineno, line, f"arc endpoint outside 1..{n}")
            if cap < 0:
                raise MalformedLineError(lineno, line, "negative capacity")
            if u == v:
                warnings.warn(f"line {lineno}: dropping self-loop on node {u}", stacklevel=2)
                continue
            edges.append((u - 1, v - 1, cap))
        else:
            raise MalformedLineError(lineno, line, f"unknown descriptor {tag!r}")
    if n is None:
        raise MissingProblemLineError("no 'p max N M' line found")
    if source is None or sink is None:
        raise MissingSourceOrSinkError(f"missing {'source' if source is None else 'sink'} node line")
    if len(edges) != m_declared:
        warnings.warn(f"problem line declares {m_declared} arcs, read {len(edges)}", ArcCountMismatchWarning, stacklevel=2)
    return FlowNetwork(n, tuple(edges), source, sink)


def write_dimacs(net: FlowNetwork, comment: str | None = None) -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p max {net.n} {net.m}")
    lines.append(f"n {net.source + 1} s")
    lines.append(f"n {net.sink + 1} t")
    lines.extend(f"a {u + 1} {v + 1} {c}" for u, v, c in net.edges)
    return "\n".join(lines) + "\n"


def parse_snap_edgelist(text: str, default_cap: int = 1) -> EdgeList:
    """Edge list with ids remapped densely in first-appearance order.

    Self-loops are dropped and repeated edges merged by summing capacity.
    """
    ids: dict[str, int] = {}
    caps: dict[tuple[int, int], int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if len(parts) < 2:
            raise MalformedLineError(lineno, line, "expected 'u v'")
        _ints(parts[:2], lineno, line)
        a, b = parts[0], parts[1]
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        if u == v:
            continue
        caps[(u, v)] = caps.get((u, v), 0) + default_cap
    return EdgeList(len(ids), tuple((u, v, c) for (u, v), c in caps.items()), tuple(ids))


def parse_konect_bipartite(text: str) -> BipartiteGraph:
    """KONECT ``out.*`` bipartite file; extra columns (weights, times) are ignored."""
    declared = (0, 0)
    edges: list[tuple[int, int]] = []
    left = right = 0
    header_lines = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if parts[0].startswith("%"):
            header_lines += 1
            fields = line.lstrip("%").split()
            # second header line carries "edges |L| |R|"
            if header_lines == 2 and len(fields) == 3 and all(f.isdigit() for f in fields):
                declared = (int(fields[1]), int(fields[2]))
            continue
        if len(parts) < 2:
            raise MalformedLineError(lineno, line, "expected 'left right [weight ...]'")
        l, r = _ints(parts[:2], lineno, line)
        if l < 1 or r < 1:
            raise MalformedLineError(lineno, line, "ids are 1-based")
        edges.append((l - 1, r - 1))
        left = max(left, l)
        right = max(right, r)
    return BipartiteGraph(max(left, declared[0]), max(right, declared[1]), tuple(edges))


def largest_weak_component(graph: EdgeList) -> list[int]:
    adj: list[list[int]] = [[] for _ in range(graph.n)]
    for u, v, _ in graph.edges:
        adj[u].append(v)
        adj[v].append(u)
    comp = [-1] * graph.n
    best: list[int] = []
    for root in range(graph.n):
        if comp[root] >= 0:
            continue
        comp[root] = root
        members = [root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if comp[y] < 0:
                    comp[y] = root
                    members.append(y)
                    queue.append(y)
        if len(members) > len(best):
            best = members
    return sorted(best)


def _farthest(adj: list[list[int]], start: int) -> tuple[int, list[int]]:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    depth = max(dist.values())
    return depth, sorted(v for v, d in dist.items() if d == depth)


def select_source_sink_pairs(graph: EdgeList, k: int = 20, seed: int = 0, sample: int = 256) -> list[tuple[int, int]]:
    """Pick ``k`` far-apart (source, sink) pairs with all endpoints distinct.

    BFS runs along edge direction from ``min(|C|, sample)`` start vertices
    drawn with ``seed`` from the largest weakly connected component ``C``.
    Each start is paired with the vertices at its greatest depth. Only starts
    whose depth reaches the 75th percentile of sampled depths are kept. Pairs
    are taken deepest first, and ties go to the smaller start id.
    """
    comp = largest_weak_component(graph)
    if len(comp) < 2 or k < 1:
        warnings.warn("graph has no component with two vertices", InsufficientPairsWarning, stacklevel=2)
        return []
    rng = np.random.default_rng(seed)
    starts = sorted(int(x) for x in rng.choice(comp, size=min(len(comp), sample), replace=False))
    adj = graph.out_adjacency()
    reach = [(start, *_farthest(adj, start)) for start in starts]
    reach = [r for r in reach if r[1] > 0]
    if not reach:
        warnings.warn("no sampled vertex reaches another vertex", InsufficientPairsWarning, stacklevel=2)
        return []
    threshold = float(np.percentile([d for _, d, _ in reach], 75))
    reach = sorted((r for r in reach if r[1] >= threshold), key=lambda r: (-r[1], r[0]))
    used: set[int] = set()
    pairs: list[tuple[int, int]] = []
    for start, _, ends in reach:
        if start in used:
            continue
        end = next((v for v in ends if v not in used), None)
        if end is None:
            continue
        pairs.append((start, end))
        used.update((start, end))
        if len(pairs) == k:
            break
    if len(pairs) < k:
        warnings.warn(f"only {len(pairs)} of {k} distinct pairs available", InsufficientPairsWarning, stacklevel=2)
    return pairs


def add_super_terminals(graph: EdgeList, sources: Sequence[int], sinks: Sequence[int]) -> FlowNetwork:
    """Join ``sources`` to a new super-source and ``sinks`` to a new super-sink.

    Super-source -> s carries s's total out-capacity and t -> super-sink
    carries t's total in-capacity, so neither ever limits the flow.
    """
    if not sources or not sinks:
        raise InsufficientPairsError("need at least one source and one sink")
    overlap = set(sources) & set(sinks)
    if overlap:
        raise OverlappingTerminalsError(f"vertices {sorted(overlap)} are both source and sink")
    n = graph.n
    out_cap = [0] * n
    in_cap = [0] * n
    for u, v, c in graph.edges:
        out_cap[u] += c
        in_cap[v] += c
    super_s, super_t = n, n + 1
    edges = list(graph.edges)
    edges += [(super_s, s, out_cap[s]) for s in sources]
    edges += [(t, super_t, in_cap[t]) for t in sinks]
    return FlowNetwork(n + 2, tuple(edges), super_s, super_t)


def load_network(path: str | Path, fmt: str | None = None, *, pairs: int = 20, seed: int = 0) -> FlowNetwork:
    """Read any supported file as a single-source single-sink network."""
    gf = GraphFile.open(path, fmt)
    text = gf.read_text()
    if gf.format is GraphFormat.DIMACS_MAX:
        return parse_dimacs_max(text)
    if gf.format is GraphFormat.SNAP_EDGELIST:
        graph = parse_snap_edgelist(text)
        chosen = select_source_sink_pairs(graph, pairs, seed)
        return add_super_terminals(graph, [s for s, _ in chosen], [t for _, t in chosen])
    from .matching import build_matching_network

    return build_matching_network(parse_konect_bipartite(text))
