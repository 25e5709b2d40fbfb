import pytest
from hypothesis import given, strategies as st

from oracles import xorshift64star_ref
from parcheck.graph import (
    ExplicitGraph,
    GraphFormatError,
    XorShift64Star,
    decode_index,
    dump_explicit_graph,
    encode_index,
    generate_random_graph,
    load_explicit_graph,
)


def test_load_single_self_loop():
    g = load_explicit_graph("STATES 1\nINIT 0\nACC 0\nEDGES\n0 0\n")
    assert (g.n, g.m, g.init) == (1, 1, 0)
    assert g.accepting == {0}
    assert g.successors(g.initial()) == [g.initial()]


def test_load_empty_acc_line():
    g = load_explicit_graph("STATES 2\nINIT 0\nACC\nEDGES\n0 1\n")
    assert (g.n, g.m) == (2, 1)
    assert g.accepting == frozenset()
    assert not g.has_accepting()


def test_dangling_endpoint_rejected():
    with pytest.raises(GraphFormatError, match="line 5"):
        load_explicit_graph("STATES 2\nINIT 0\nACC\nEDGES\n0 5\n")


def test_init_out_of_range():
    with pytest.raises(GraphFormatError):
        load_explicit_graph("STATES 2\nINIT 2\nACC\nEDGES\n")


@pytest.mark.parametrize("text", [
    "STATES x\nINIT 0\nACC\nEDGES\n",
    "INIT 0\nACC\nEDGES\n",
    "STATES 1\nINIT 0\nACC\nEDGES\n0\n",
    "STATES 1\nINIT 0\nACC 3\nEDGES\n",
])
def test_malformed_files(text):
    with pytest.raises(GraphFormatError):
        load_explicit_graph(text)


def test_comments_and_duplicate_edges_kept():
    g = load_explicit_graph("# header\nSTATES 2 # two\nINIT 0\nACC 1\nEDGES\n0 1\n0 1 # again\n1 0\n")
    assert g.m == 3
    assert g.adjacency[0] == (1, 1)


def test_dump_round_trip():
    g = generate_random_graph(60, 2.0, 0.2, 11)
    assert load_explicit_graph(dump_explicit_graph(g)) == g


def test_index_encoding():
    assert encode_index(1) == b"\x01\x00\x00\x00"
    assert decode_index(encode_index(123456)) == 123456


def test_generator_single_state():
    g = generate_random_graph(1, 0, 0, 7)
    assert (g.n, g.m, g.accepting) == (1, 0, frozenset())


def test_generator_deterministic():
    a = generate_random_graph(100, 2, 0.1, 42)
    b = generate_random_graph(100, 2, 0.1, 42)
    assert a == b
    assert a.m == 200


def test_generator_seed_matters():
    assert generate_random_graph(100, 2, 0.1, 1) != generate_random_graph(100, 2, 0.1, 2)


@given(st.integers(0, (1 << 64) - 1))
def test_xorshift_matches_reference(seed):
    rng = XorShift64Star(seed)
    assert [rng.next_u64() for _ in range(20)] == xorshift64star_ref(seed, 20)


def test_generator_draw_order():
    # acceptance draws come first (one per state), then u, v pairs
    ref = xorshift64star_ref(99, 3 + 2 * 6)
    g = generate_random_graph(3, 2.0, 0.5, 99)
    acc = {i for i in range(3) if (ref[i] >> 11) / float(1 << 53) < 0.5}
    edges = [(ref[3 + 2 * j] % 3, ref[4 + 2 * j] % 3) for j in range(6)]
    assert g.accepting == acc
    # adjacency groups by source but keeps draw order within a source
    assert list(g.edges()) == sorted(edges, key=lambda e: e[0])


def test_explicit_graph_validation():
    with pytest.raises(ValueError):
        ExplicitGraph.from_edges(2, [(0, 2)])
    with pytest.raises(ValueError):
        ExplicitGraph(1, 1, frozenset(), ((),))
