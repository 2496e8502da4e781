"""List-backed mirrors of the residual layouts for the kernels' hot loops.

Index arrays are immutable after construction, so a view is built once per
layout and cached on it. Residual capacities are not part of the view; the
kernels read and write the working ``cf`` list held by the state.

A vertex's residual arcs form a *virtual neighbour sequence* of length
``degree(u)``. Lane ``j`` of a tile with ``stride`` lanes visits positions
``j, j + stride, ...`` of that sequence.
"""

from __future__ import annotations

import sys
from bisect import bisect_left

from ..residual import ArcNotFoundError

INF = sys.maxsize
# (height, vertex, slot); compares greater than any real candidate
NO_ARC = (INF, INF, -1)


class RcsrView:
    kind = "rcsr"

    def __init__(self, g):
        self.n = g.n
        self.m = g.m
        self.fo = g.fwd_offsets.tolist()
        self.fc = g.fwd_cols.tolist()
        self.ro = g.rev_offsets.tolist()
        self.rc = g.rev_cols.tolist()
        self.rfi = g.rev_flow_idx.tolist()

    @property
    def slot_count(self) -> int:
        return 2 * self.m

    def degree(self, u: int) -> int:
        return self.fo[u + 1] - self.fo[u] + self.ro[u + 1] - self.ro[u]

    def arcs(self, u: int) -> list[tuple[int, int]]:
        m, fc, rc, rfi = self.m, self.fc, self.rc, self.rfi
        out = [(fc[p], p) for p in range(self.fo[u], self.fo[u + 1])]
        out.extend((rc[r], m + rfi[r]) for r in range(self.ro[u], self.ro[u + 1]))
        return out

    def pair(self, u: int, slot: int) -> int:
        m = self.m
        return slot + m if slot < m else slot - m

    def slot_pairs(self) -> list[int]:
        m = self.m
        return list(range(m, 2 * m)) + list(range(m))

    def scan_min(self, u, h, cf, start=0, stride=1):
        best_h, best_v, best_s = NO_ARC
        a = self.fo[u]
        dout = self.fo[u + 1] - a
        fc = self.fc
        for s in range(a + start, a + dout, stride):
            if cf[s] > 0:
                v = fc[s]
                hv = h[v]
                if hv < best_h or (hv == best_h and v < best_v):
                    best_h, best_v, best_s = hv, v, s
        # carry the lane's stride across into the reverse segment
        if start >= dout:
            j = start - dout
        else:
            j = (stride - (dout - start) % stride) % stride
        m, rc, rfi = self.m, self.rc, self.rfi
        for r in range(self.ro[u] + j, self.ro[u + 1], stride):
            s = m + rfi[r]
            if cf[s] > 0:
                v = rc[r]
                hv = h[v]
                if hv < best_h or (hv == best_h and v < best_v):
                    best_h, best_v, best_s = hv, v, s
        return best_h, best_v, best_s


class BcsrView:
    kind = "bcsr"

    def __init__(self, g):
        self.n = g.n
        self.m = g.m
        self.o = g.offsets.tolist()
        self.cols = g.cols.tolist()

    @property
    def slot_count(self) -> int:
        return 2 * self.m

    def degree(self, u: int) -> int:
        return self.o[u + 1] - self.o[u]

    def arcs(self, u: int) -> list[tuple[int, int]]:
        cols = self.cols
        return [(cols[s], s) for s in range(self.o[u], self.o[u + 1])]

    def pair(self, u: int, slot: int) -> int:
        v = self.cols[slot]
        hi = self.o[v + 1]
        i = bisect_left(self.cols, u, self.o[v], hi)
        if i == hi or self.cols[i] != u:
            raise ArcNotFoundError(f"arc ({v}, {u}) missing from vertex {v}'s segment")
        return i

    def slot_pairs(self) -> list[int]:
        pairs = [0] * self.slot_count
        for u in range(self.n):
            for s in range(self.o[u], self.o[u + 1]):
                pairs[s] = self.pair(u, s)
        return pairs

    def scan_min(self, u, h, cf, start=0, stride=1):
        best_h, best_v, best_s = NO_ARC
        cols = self.cols
        for s in range(self.o[u] + start, self.o[u + 1], stride):
            if cf[s] > 0:
                v = cols[s]
                hv = h[v]
                if hv < best_h or (hv == best_h and v < best_v):
                    best_h, best_v, best_s = hv, v, s
        return best_h, best_v, best_s
