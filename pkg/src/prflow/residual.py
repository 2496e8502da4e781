"""Compact residual-graph layouts.

Two layouts are provided on top of a plain forward CSR:

* :class:`ResidualRCSR` keeps the forward CSR and adds a reversed CSR whose
  entries point (``rev_flow_idx``) at the backward residual slot paired with a
  forward arc. Backward lookup is O(1) but a vertex's arcs live in two places.
* :class:`ResidualBCSR` stores, per vertex, one segment holding both out- and
  in-arcs sorted by column. Arcs are contiguous; the backward arc is found by
  binary search in the neighbour's segment.

Both address residual capacities through a single ``cf`` array of length
``2m`` (``m`` = number of arc pairs after merging parallel/antiparallel
edges), so an arc is identified by an integer *slot*.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, NamedTuple, Union

import numpy as np

from .network import FlowNetwork, arc_pairs


class ArcNotFoundError(LookupError):
    """A paired arc is missing; the layout was built or mutated incorrectly."""


class ArcHandle(NamedTuple):
    """Slots of an arc and of its paired reverse arc in a layout's ``cf``."""

    repr: str
    fwd_pos: int
    bwd_pos: int

    def reversed(self) -> "ArcHandle":
        return ArcHandle(self.repr, self.bwd_pos, self.fwd_pos)


class NeighborArc(NamedTuple):
    v: int
    cf: int
    handle: ArcHandle


def _csr_offsets(owner: np.ndarray, n: int) -> np.ndarray:
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(owner, minlength=n), out=offsets[1:])
    return offsets


def build_forward_csr(net: FlowNetwork) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Plain CSR over the directed edges, columns ascending within a row.

    Parallel edges are summed; antiparallel edges stay separate rows here,
    unlike the residual layouts. Returns ``(offsets, cols, cf)`` with ``cf``
    set to the capacities.
    """
    u, v, cap = net.edge_arrays()
    keys, inv = np.unique(u * net.n + v, return_inverse=True)
    summed = np.zeros(keys.size, dtype=np.int64)
    np.add.at(summed, inv, cap)
    tail, head = keys // net.n, keys % net.n  # keys are already row-major sorted
    return _csr_offsets(tail, net.n), head, summed


@dataclass(eq=False)
class ResidualRCSR:
    n: int
    m: int
    fwd_offsets: np.ndarray
    fwd_cols: np.ndarray
    rev_offsets: np.ndarray
    rev_cols: np.ndarray
    rev_flow_idx: np.ndarray
    cf: np.ndarray  # fwd_cf followed by bwd_cf

    kind = "rcsr"

    @property
    def fwd_cf(self) -> np.ndarray:
        return self.cf[: self.m]

    @property
    def bwd_cf(self) -> np.ndarray:
        return self.cf[self.m :]

    def pair_slot(self, slot: int) -> int:
        return slot + self.m if slot < self.m else slot - self.m

    def cell_count(self) -> int:
        arrays = (self.fwd_offsets, self.fwd_cols, self.rev_offsets, self.rev_cols, self.rev_flow_idx, self.cf)
        return sum(int(a.size) for a in arrays)

    @cached_property
    def engine_view(self):
        from .engine.views import RcsrView

        return RcsrView(self)


@dataclass(eq=False)
class ResidualBCSR:
    n: int
    m: int
    offsets: np.ndarray
    cols: np.ndarray
    cf: np.ndarray
    is_forward: np.ndarray

    kind = "bcsr"

    def cell_count(self) -> int:
        return sum(int(a.size) for a in (self.offsets, self.cols, self.cf, self.is_forward))

    @cached_property
    def engine_view(self):
        from .engine.views import BcsrView

        return BcsrView(self)


Residual = Union[ResidualRCSR, ResidualBCSR]


def build_rcsr(net: FlowNetwork) -> ResidualRCSR:
    pairs = arc_pairs(net)
    n, m = net.n, pairs.m
    order = np.lexsort((pairs.head, pairs.tail))
    tail, head = pairs.tail[order], pairs.head[order]
    cf = np.concatenate([pairs.cap_fwd[order], pairs.cap_bwd[order]])
    # reverse entries sorted by (head, tail); each points back at its forward position
    rev_order = np.lexsort((tail, head))
    return ResidualRCSR(
        n=n,
        m=m,
        fwd_offsets=_csr_offsets(tail, n),
        fwd_cols=head.copy(),
        rev_offsets=_csr_offsets(head, n),
        rev_cols=tail[rev_order],
        rev_flow_idx=rev_order.astype(np.int64),
        cf=cf,
    )


def build_bcsr(net: FlowNetwork) -> ResidualBCSR:
    pairs = arc_pairs(net)
    n, m = net.n, pairs.m
    owner = np.concatenate([pairs.tail, pairs.head])
    cols = np.concatenate([pairs.head, pairs.tail])
    cf = np.concatenate([pairs.cap_fwd, pairs.cap_bwd])
    fwd = np.concatenate([np.ones(m, dtype=np.int8), np.zeros(m, dtype=np.int8)])
    order = np.lexsort((cols, owner))
    return ResidualBCSR(
        n=n,
        m=m,
        offsets=_csr_offsets(owner, n),
        cols=cols[order],
        cf=cf[order],
        is_forward=fwd[order],
    )


def build_residual(net: FlowNetwork, representation: str) -> Residual:
    if representation == "rcsr":
        return build_rcsr(net)
    if representation == "bcsr":
        return build_bcsr(net)
    raise ValueError(f"unknown representation {representation!r} (expected 'rcsr' or 'bcsr')")


def search_sorted_segment(cols, lo: int, hi: int, key: int) -> tuple[int, int]:
    """Three-way binary search for ``key`` in ``cols[lo:hi]``.

    Returns ``(index, probes)``; ``index`` is -1 when absent.
    """
    probes = 0
    hi -= 1
    while lo <= hi:
        mid = (lo + hi) // 2
        probes += 1
        c = cols[mid]
        if c == key:
            return mid, probes
        if c < key:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1, probes


def backward_arc_bcsr(g: ResidualBCSR, u: int, v: int) -> int:
    """Slot of arc (v, u) given that (u, v) lives in u's segment."""
    idx, _ = search_sorted_segment(g.cols, int(g.offsets[v]), int(g.offsets[v + 1]), u)
    if idx < 0:
        raise ArcNotFoundError(f"arc ({v}, {u}) missing from vertex {v}'s segment")
    return idx


def find_arc(g: Residual, u: int, v: int) -> ArcHandle:
    """Handle of residual arc (u, v) in either layout."""
    if isinstance(g, ResidualBCSR):
        fwd, _ = search_sorted_segment(g.cols, int(g.offsets[u]), int(g.offsets[u + 1]), v)
        if fwd < 0:
            raise ArcNotFoundError(f"no arc ({u}, {v})")
        return ArcHandle("bcsr", fwd, backward_arc_bcsr(g, u, v))
    p, _ = search_sorted_segment(g.fwd_cols, int(g.fwd_offsets[u]), int(g.fwd_offsets[u + 1]), v)
    if p >= 0:
        return ArcHandle("rcsr", p, p + g.m)
    r, _ = search_sorted_segment(g.rev_cols, int(g.rev_offsets[u]), int(g.rev_offsets[u + 1]), v)
    if r < 0:
        raise ArcNotFoundError(f"no arc ({u}, {v})")
    q = int(g.rev_flow_idx[r])
    return ArcHandle("rcsr", q + g.m, q)


def residual_neighbors(g: Residual, u: int) -> Iterator[NeighborArc]:
    """Every residual arc leaving ``u``, including saturated ones.

    RCSR yields u's forward segment then its reverse segment; BCSR yields the
    single merged segment. Both are ascending by column within a segment.
    """
    if not 0 <= u < g.n:
        raise IndexError(f"vertex {u} out of range 0..{g.n - 1}")
    if isinstance(g, ResidualBCSR):
        for slot in range(int(g.offsets[u]), int(g.offsets[u + 1])):
            v = int(g.cols[slot])
            yield NeighborArc(v, int(g.cf[slot]), ArcHandle("bcsr", slot, backward_arc_bcsr(g, u, v)))
        return
    m = g.m
    for p in range(int(g.fwd_offsets[u]), int(g.fwd_offsets[u + 1])):
        yield NeighborArc(int(g.fwd_cols[p]), int(g.cf[p]), ArcHandle("rcsr", p, p + m))
    for r in range(int(g.rev_offsets[u]), int(g.rev_offsets[u + 1])):
        q = int(g.rev_flow_idx[r])
        yield NeighborArc(int(g.rev_cols[r]), int(g.cf[q + m]), ArcHandle("rcsr", q + m, q))


def apply_push(g: Residual, handle: ArcHandle, amount: int) -> None:
    """Move ``amount`` units of residual capacity across an arc pair."""
    g.cf[handle.fwd_pos] -= amount
    g.cf[handle.bwd_pos] += amount


def pair_totals(g: Residual) -> dict[tuple[int, int], int]:
    """``cf(u,v) + cf(v,u)`` keyed by the unordered pair ``(min, max)``."""
    totals: dict[tuple[int, int], int] = {}
    for u in range(g.n):
        for v, cf, _ in residual_neighbors(g, u):
            key = (min(u, v), max(u, v))
            totals[key] = totals.get(key, 0) + cf
    return totals
