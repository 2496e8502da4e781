"""Barrier-time invariant checks for debug runs."""

from __future__ import annotations

from .state import PushRelabelState


class Validator:
    """Observer that records every invariant violation it sees.

    Checked at each barrier: ``cf >= 0``, capacity conservation per arc pair,
    ``e >= 0``, the ``excess_total`` identity and monotone heights since the
    last global relabel. Also checked: queue exactness after each scan,
    height validity after each global relabel, and ``h(u) > h(v)`` on every
    push.
    """

    def __init__(self, g, state: PushRelabelState, chain=None):
        self.view = g.engine_view
        self.pairs = self.view.slot_pairs()
        cap = state.capacity
        self.pair_total = [cap[i] + cap[j] for i, j in enumerate(self.pairs)]
        self.violations: list[str] = []
        self.checks = 0
        self._last_heights: list[int] | None = None
        self._chain = chain

    def __call__(self, event: str, state: PushRelabelState, **info) -> None:
        if event == "push":
            if not info["hu"] > info["hv"]:
                self._fail(f"push {info['u']}->{info['v']} with h(u)={info['hu']} <= h(v)={info['hv']}")
        elif event == "global_relabel":
            self.check_barrier(state)
            self.check_heights_valid(state)
            self._last_heights = list(state.height)
        else:
            self.check_barrier(state)
            self.check_monotone(state)
            if event == "scan":
                self.check_avq(state, info["avq"])
        if self._chain is not None:
            self._chain(event, state, **info)

    def _fail(self, msg: str) -> None:
        self.violations.append(msg)

    def check_barrier(self, state: PushRelabelState) -> None:
        self.checks += 1
        cf = state.cf
        for i, j in enumerate(self.pairs):
            if cf[i] < 0:
                self._fail(f"cf[{i}] = {cf[i]} < 0")
            if i < j and cf[i] + cf[j] != self.pair_total[i]:
                self._fail(f"capacity not conserved on slots {i}/{j}: {cf[i]} + {cf[j]} != {self.pair_total[i]}")
        for v, e in enumerate(state.excess):
            if e < 0:
                self._fail(f"e({v}) = {e} < 0")
        live = state.live_excess()
        if live != state.excess_total:
            self._fail(f"excess_total {state.excess_total} != live excess {live}")
        n = state.n
        for v, dead in enumerate(state.deactivated):
            if dead and state.height[v] < n:
                self._fail(f"deactivated vertex {v} has height {state.height[v]} < n")

    def check_monotone(self, state: PushRelabelState) -> None:
        if self._last_heights is None:
            self._last_heights = list(state.height)
            return
        for v, (old, new) in enumerate(zip(self._last_heights, state.height)):
            if new < old:
                self._fail(f"h({v}) decreased from {old} to {new} between global relabels")
        self._last_heights = list(state.height)

    def check_heights_valid(self, state: PushRelabelState) -> None:
        h, cf = state.height, state.cf
        for u in range(self.view.n):
            for v, slot in self.view.arcs(u):
                if cf[slot] > 0 and h[u] > h[v] + 1:
                    self._fail(f"invalid labelling on ({u}, {v}): h={h[u]} > {h[v]} + 1")

    def check_avq(self, state: PushRelabelState, avq: list[int]) -> None:
        if len(set(avq)) != len(avq):
            self._fail(f"active vertex queue has duplicates: {sorted(avq)}")
        expected = set(state.active_vertices())
        if set(avq) != expected:
            self._fail(f"active vertex queue {sorted(set(avq))} != active set {sorted(expected)}")
