import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from prflow.network import FlowNetwork

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ALL_CONFIGS = [(v, r) for v in ("tc", "vc") for r in ("rcsr", "bcsr")]


@st.composite
def flow_networks(draw, max_n=12, max_m=40, max_cap=10):
    n = draw(st.integers(2, max_n))
    vertex = st.integers(0, n - 1)
    raw = draw(st.lists(st.tuples(vertex, vertex, st.integers(0, max_cap)), max_size=max_m))
    edges = tuple((u, v, c) for u, v, c in raw if u != v)
    s = draw(vertex)
    t = draw(vertex.filter(lambda x: x != s))
    return FlowNetwork(n, edges, s, t)


@pytest.fixture
def diamond():
    # s=0, a=1, b=2, t=3
    return FlowNetwork.from_edges(4, [(0, 1, 4), (0, 2, 2), (1, 3, 3), (2, 3, 3), (1, 2, 1)], 0, 3)


@pytest.fixture
def rng():
    return random.Random(12345)


# ------------------------------------------------ acceptance line reporting

_ACCEPTANCE: dict[str, tuple[int, str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        title = marker.kwargs["title"]
        callspec = getattr(item, "callspec", None)
        if callspec is not None:
            title = f"{title} [{callspec.id}]"
        _ACCEPTANCE[item.nodeid] = (marker.kwargs["criterion"], title, status)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, title, status in sorted(_ACCEPTANCE.values()):
        terminalreporter.write_line(f"{status}  criterion {criterion}: {title}")
