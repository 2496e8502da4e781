import bz2
import gzip
import random
import warnings

import pytest
from hypothesis import given, strategies as st

from prflow.engine import max_flow, reference_max_flow
from prflow.ingest import (
    ArcCountMismatchWarning,
    EdgeList,
    GraphFile,
    GraphFormat,
    IngestError,
    InsufficientPairsError,
    InsufficientPairsWarning,
    MalformedLineError,
    MissingProblemLineError,
    MissingSourceOrSinkError,
    OverlappingTerminalsError,
    add_super_terminals,
    largest_weak_component,
    load_network,
    parse_dimacs_max,
    parse_konect_bipartite,
    parse_snap_edgelist,
    select_source_sink_pairs,
    write_dimacs,
)
from prflow.network import FlowNetwork

from .conftest import flow_networks

# ------------------------------------------------------------------ DIMACS


def test_dimacs_minimal():
    net = parse_dimacs_max("p max 2 1\nn 1 s\nn 2 t\na 1 2 5\n")
    assert (net.n, net.source, net.sink, net.edges) == (2, 0, 1, ((0, 1, 5),))
    assert max_flow(net).flow == 5


def test_dimacs_tolerates_crlf_and_trailing_space():
    net = parse_dimacs_max("c hi\r\np max 2 1  \r\nn 1 s\r\nn 2 t \r\na 1 2 5\t\r\n")
    assert net.edges == ((0, 1, 5),)


def test_dimacs_only_comments():
    with pytest.raises(MissingProblemLineError):
        parse_dimacs_max("c nothing\nc here\n")


@pytest.mark.parametrize("text", ["p max 2 1\nn 1 s\na 1 2 5\n", "p max 2 1\nn 2 t\na 1 2 5\n"])
def test_dimacs_missing_terminal(text):
    with pytest.raises(MissingSourceOrSinkError):
        parse_dimacs_max(text)


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("p max 2 1\nn 1 s\nn 2 t\na 1 2\n", 4),
        ("p max 2 1\nn 1 s\nn 2 t\na 1 3 5\n", 4),
        ("p max 2 1\nn 1 s\nn 2 x\n", 3),
        ("p max two 1\n", 1),
        ("a 1 2 5\n", 1),
        ("p max 2 1\nn 1 s\nn 2 t\nq 1 2\n", 4),
        ("p max 2 1\nn 1 s\nn 2 t\na 1 2 -4\n", 4),
    ],
)
def test_dimacs_malformed_reports_line(text, lineno):
    with pytest.raises(MalformedLineError) as info:
        parse_dimacs_max(text)
    assert info.value.lineno == lineno
    assert f"line {lineno}" in str(info.value)


def test_dimacs_arc_count_mismatch_only_warns():
    with pytest.warns(ArcCountMismatchWarning):
        net = parse_dimacs_max("p max 3 5\nn 1 s\nn 3 t\na 1 2 5\na 2 3 4\n")
    assert net.m == 2


def test_genrmf_style_counts_round_trip():
    # two 2x2 frames joined front to back, in the layered grid style
    rnd = random.Random(3)
    a, b = 2, 3
    vid = lambda f, i, j: f * a * a + i * a + j + 1
    arcs = []
    for f in range(b):
        for i in range(a):
            for j in range(a):
                if i + 1 < a:
                    arcs += [(vid(f, i, j), vid(f, i + 1, j)), (vid(f, i + 1, j), vid(f, i, j))]
                if j + 1 < a:
                    arcs += [(vid(f, i, j), vid(f, i, j + 1)), (vid(f, i, j + 1), vid(f, i, j))]
                if f + 1 < b:
                    arcs.append((vid(f, i, j), vid(f + 1, (i + 1) % a, j)))
    n = a * a * b
    text = f"c genrmf-like\np max {n} {len(arcs)}\nn 1 s\nn {n} t\n" + "".join(
        f"a {u} {v} {rnd.randint(1, 100)}\n" for u, v in arcs
    )
    net = parse_dimacs_max(text)
    assert (net.n, net.m) == (n, len(arcs))


@given(flow_networks(max_n=20, max_m=60))
def test_dimacs_round_trip(net):
    assert parse_dimacs_max(write_dimacs(net, "round trip")) == net


# -------------------------------------------------------------------- SNAP


def test_snap_two_vertices():
    g = parse_snap_edgelist("# hdr\n3 7\n7 3\n")
    assert g.n == 2 and g.edges == ((0, 1, 1), (1, 0, 1)) and g.labels == ("3", "7")


def test_snap_duplicates_merge_and_self_loops_drop():
    g = parse_snap_edgelist("3 7\n3 7\n5 5\n")
    assert g.edges == ((0, 1, 2),)


def test_snap_empty_file():
    g = parse_snap_edgelist("")
    assert g.n == 0 and g.edges == ()
    with pytest.warns(InsufficientPairsWarning):
        assert select_source_sink_pairs(g, 1) == []


@pytest.mark.parametrize("text", ["1\n", "1 x\n"])
def test_snap_malformed(text):
    with pytest.raises(MalformedLineError):
        parse_snap_edgelist("# c\n" + text)


@given(st.lists(st.tuples(st.integers(0, 10**9), st.integers(0, 10**9)), max_size=40))
def test_snap_id_remap_is_a_bijection(pairs):
    g = parse_snap_edgelist("".join(f"{u} {v}\n" for u, v in pairs))
    assert len(set(g.labels)) == g.n
    originals = {(g.labels[u], g.labels[v]) for u, v, _ in g.edges}
    assert originals == {(str(u), str(v)) for u, v in pairs if u != v}


# ------------------------------------------------------------------ KONECT


def test_konect_minimal():
    b = parse_konect_bipartite("% bip\n1 1\n2 1\n")
    assert (b.left_count, b.right_count, b.edges) == (2, 1, ((0, 0), (1, 0)))


def test_konect_weights_ignored_and_header_sizes_used():
    b = parse_konect_bipartite("% bip unweighted\n% 2 3 4\n1 2 5 1167609600\n1 2 1\n")
    assert b.edges == ((0, 1),)
    assert (b.left_count, b.right_count) == (3, 4)


def test_konect_malformed():
    with pytest.raises(MalformedLineError):
        parse_konect_bipartite("% bip\n0 1\n")
    with pytest.raises(MalformedLineError):
        parse_konect_bipartite("% bip\n7\n")


# ------------------------------------------------------------ pair choice


def path_graph(n):
    return EdgeList(n, tuple((i, i + 1, 1) for i in range(n - 1)) + tuple((i + 1, i, 1) for i in range(n - 1)))


def test_path_pair_is_in_top_quartile():
    g = path_graph(10)
    (s, t), = select_source_sink_pairs(g, k=1, seed=0)
    depth = lambda v: max(v, 9 - v)  # BFS depth from v on a path
    all_depths = sorted(depth(v) for v in range(10))
    assert abs(s - t) == depth(s)
    assert depth(s) >= all_depths[int(0.75 * (len(all_depths) - 1))]


def test_complete_graph_any_pair_qualifies():
    k5 = EdgeList(5, tuple((u, v, 1) for u in range(5) for v in range(5) if u != v))
    pairs = select_source_sink_pairs(k5, k=2, seed=1)
    assert len(pairs) == 2
    ends = [x for p in pairs for x in p]
    assert len(set(ends)) == 4


def test_pair_selection_is_deterministic():
    rnd = random.Random(5)
    edges = tuple({(rnd.randrange(1000), rnd.randrange(1000)) for _ in range(3000)})
    g = EdgeList(1000, tuple((u, v, 1) for u, v in edges if u != v))
    a = select_source_sink_pairs(g, k=20, seed=42)
    b = select_source_sink_pairs(g, k=20, seed=42)
    assert a == b and len(a) == 20
    assert len({x for p in a for x in p}) == 40


def test_too_few_pairs_warns_and_returns_what_exists():
    with pytest.warns(InsufficientPairsWarning):
        pairs = select_source_sink_pairs(path_graph(3), k=5, seed=0)
    assert 1 <= len(pairs) < 5


def test_largest_weak_component():
    g = EdgeList(6, ((0, 1, 1), (2, 1, 1), (3, 4, 1)))
    assert largest_weak_component(g) == [0, 1, 2]


# -------------------------------------------------------- super terminals


def test_single_pair_super_terminals_preserve_flow():
    g = EdgeList(4, ((0, 1, 3), (1, 2, 2), (0, 2, 1), (2, 3, 5)))
    net = add_super_terminals(g, [0], [3])
    assert net.n == 6 and (net.source, net.sink) == (4, 5)
    assert reference_max_flow(net) == reference_max_flow(FlowNetwork(4, g.edges, 0, 3)) == 3


def test_two_disjoint_paths_give_two():
    g = EdgeList(6, ((0, 1, 1), (1, 2, 1), (3, 4, 1), (4, 5, 1)))
    net = add_super_terminals(g, [0, 3], [2, 5])
    assert max_flow(net).flow == reference_max_flow(net) == 2


def test_overlapping_and_empty_terminals():
    g = path_graph(4)
    with pytest.raises(OverlappingTerminalsError):
        add_super_terminals(g, [0, 1], [1])
    with pytest.raises(InsufficientPairsError):
        add_super_terminals(g, [], [3])


# ----------------------------------------------------------------- files


def test_format_detection(tmp_path):
    assert GraphFile.open(tmp_path / "x.max").format is GraphFormat.DIMACS_MAX
    assert GraphFile.open(tmp_path / "web.txt.gz").format is GraphFormat.SNAP_EDGELIST
    assert GraphFile.open(tmp_path / "out.corporate-leadership").format is GraphFormat.KONECT_BIPARTITE
    assert GraphFile.open(tmp_path / "x.bin", "dimacs").format is GraphFormat.DIMACS_MAX
    with pytest.raises(IngestError):
        GraphFile.open(tmp_path / "mystery.bin")


def test_compressed_inputs(tmp_path):
    text = "p max 2 1\nn 1 s\nn 2 t\na 1 2 5\n"
    (tmp_path / "a.max.gz").write_bytes(gzip.compress(text.encode()))
    (tmp_path / "b.max.bz2").write_bytes(bz2.compress(text.encode()))
    assert load_network(tmp_path / "a.max.gz") == load_network(tmp_path / "b.max.bz2")


def test_load_snap_adds_super_terminals(tmp_path):
    f = tmp_path / "g.txt"
    f.write_text("# two paths\n10 11\n11 12\n20 21\n21 22\n")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InsufficientPairsWarning)
        net = load_network(f, pairs=2, seed=0)
    assert net.n == 8
    assert max_flow(net).flow >= 1
