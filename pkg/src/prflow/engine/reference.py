"""Sequential Edmonds-Karp, used as ground truth for the parallel kernels.

Deliberately independent of the CSR layouts: it keeps its own dict-of-dicts
residual graph.
"""

from __future__ import annotations

from collections import defaultdict, deque

from ..network import FlowNetwork


def reference_max_flow(net: FlowNetwork) -> int:
    residual: dict[int, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for u, v, c in net.edges:
        residual[u][v] += c
        residual[v][u] += 0
    order = {u: sorted(nbrs) for u, nbrs in residual.items()}
    s, t = net.source, net.sink
    flow = 0
    while True:
        parent = {s: s}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in order.get(u, ()):
                if v not in parent and residual[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return flow
        bottleneck = None
        v = t
        while v != s:
            u = parent[v]
            c = residual[u][v]
            bottleneck = c if bottleneck is None else min(bottleneck, c)
            v = u
        v = t
        while v != s:
            u = parent[v]
            residual[u][v] -= bottleneck
            residual[v][u] += bottleneck
            v = u
        flow += bottleneck
