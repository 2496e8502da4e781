"""Tile-level minimum reduction.

Each lane first folds a strided slice of the neighbour list, then the lanes'
partial results are combined pairwise in ``log2(lanes)`` steps. Candidates are
``(height, vertex, slot)`` tuples, so ties on height go to the smaller vertex
id.
"""

from __future__ import annotations

from typing import Sequence

from .views import NO_ARC


def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


def tree_reduce(partials: Sequence[tuple]) -> tuple:
    """Fold ``partials`` (length a power of two) with a halving tree."""
    vals = list(partials)
    width = len(vals)
    if not is_power_of_two(width):
        raise ValueError(f"tree reduction needs a power-of-two width, got {width}")
    while width > 1:
        width //= 2
        for i in range(width):
            other = vals[i + width]
            if other < vals[i]:
                vals[i] = other
    return vals[0]


def lane_partial(cols: Sequence[int], heights: Sequence[int], eligible: Sequence[bool], lane: int, lanes: int) -> tuple:
    best = NO_ARC
    for i in range(lane, len(cols), lanes):
        if eligible[i]:
            cand = (heights[cols[i]], cols[i], i)
            if cand < best:
                best = cand
    return best


def tile_min_reduce(
    cols: Sequence[int],
    heights: Sequence[int],
    eligible: Sequence[bool] | None = None,
    tile_size: int = 32,
) -> tuple:
    """Minimum-height eligible neighbour of one vertex, found by a tile.

    ``cols`` lists the neighbour ids, ``heights`` is indexed by vertex id and
    ``eligible[i]`` says whether position ``i`` has positive residual capacity.
    Returns ``(height, vertex, position)`` or :data:`NO_ARC`.
    """
    if eligible is None:
        eligible = [True] * len(cols)
    partials = [lane_partial(cols, heights, eligible, j, tile_size) for j in range(tile_size)]
    return tree_reduce(partials)
