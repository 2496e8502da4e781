from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class PushRelabelState:
    """Mutable push-relabel state for one run.

    ``cf`` is the working copy of the layout's residual capacities and
    ``capacity`` the values at construction time (``cf`` before preflow).
    ``excess_total`` tracks live excess: ``e(s) + e(t)`` plus the excess of
    every non-terminal vertex that has not been deactivated.
    """

    source: int
    sink: int
    excess: list[int]
    height: list[int]
    cf: list[int]
    capacity: list[int]
    deactivated: list[bool]
    excess_total: int = 0
    preflowed: bool = field(default=False, repr=False)

    @classmethod
    def initial(cls, g, source: int, sink: int) -> "PushRelabelState":
        n = g.n
        height = [0] * n
        height[source] = n
        cf = g.cf.tolist()
        return cls(
            source=source,
            sink=sink,
            excess=[0] * n,
            height=height,
            cf=cf,
            capacity=list(cf),
            deactivated=[False] * n,
        )

    @property
    def n(self) -> int:
        return len(self.height)

    def is_active(self, u: int) -> bool:
        return self.excess[u] > 0 and self.height[u] < self.n and u != self.source and u != self.sink

    def active_vertices(self) -> list[int]:
        return [u for u in range(self.n) if self.is_active(u)]

    def live_excess(self) -> int:
        s, t = self.source, self.sink
        live = sum(
            e for v, e in enumerate(self.excess) if v != s and v != t and not self.deactivated[v]
        )
        return self.excess[s] + self.excess[t] + live

    def snapshot(self) -> tuple:
        return (tuple(self.excess), tuple(self.height), tuple(self.cf), self.excess_total, tuple(self.deactivated))

    def sync_to(self, g) -> None:
        """Write the working residual capacities back into the layout."""
        g.cf[:] = self.cf
