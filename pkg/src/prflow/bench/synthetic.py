"""Generated inputs for the benchmark and the acceptance checks."""

from __future__ import annotations

import random

from ..network import FlowNetwork


def random_network(rng: random.Random, max_n: int = 50, max_m: int = 300, max_cap: int = 20) -> FlowNetwork:
    n = rng.randint(2, max_n)
    edges = []
    for _ in range(rng.randint(0, max_m)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.append((u, v, rng.randint(1, max_cap)))
    s, t = rng.sample(range(n), 2)
    return FlowNetwork(n, tuple(edges), s, t)


def hub_network(leaves: int = 10_000, hub_supply: int = 64) -> FlowNetwork:
    """One hub adjacent to every leaf; each leaf has degree at most 4.

    Vertices: source 0, hub 1, leaves ``2..leaves+1``, sink ``leaves+2``.
    Every leaf gets one unit from the source and may forward two to the sink,
    so the hub's ``hub_supply`` units fan out one leaf at a time. Leaves are
    paired (2i, 2i+1) by a unit edge to bring their degree to 4.
    """
    s, hub, t = 0, 1, leaves + 2
    edges = [(s, hub, hub_supply)]
    for i in range(leaves):
        leaf = 2 + i
        edges += [(s, leaf, 1), (hub, leaf, 1), (leaf, t, 2)]
        if i % 2 == 0 and i + 1 < leaves:
            edges.append((leaf, leaf + 1, 1))
    return FlowNetwork(leaves + 3, tuple(edges), s, t)
