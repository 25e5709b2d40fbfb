import networkx as nx
from hypothesis import given, strategies as st

from oracles import brute_has_accepting_cycle
from parcheck.counterexample import validate_lasso
from parcheck.graph import ExplicitGraph, generate_random_graph
from parcheck.scc import strongly_connected_components, tarjan_oracle
from parcheck.verdict import Result


def test_accepting_self_loop():
    g = ExplicitGraph.from_edges(1, [(0, 0)], accepting=[0])
    v = tarjan_oracle(g)
    assert v.result is Result.COUNTEREXAMPLE
    assert validate_lasso(v.lasso, g) is None


def test_dag_holds():
    g = ExplicitGraph.from_edges(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)], accepting=[0, 1, 2, 3, 4])
    assert tarjan_oracle(g).result is Result.HOLDS


def test_three_cycle_lasso_length():
    g = ExplicitGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)], accepting=[1])
    v = tarjan_oracle(g)
    assert v.result is Result.COUNTEREXAMPLE
    assert len(v.lasso.cycle) == 3


def test_trivial_scc_without_loop_is_not_a_cycle():
    g = ExplicitGraph.from_edges(2, [(0, 1)], accepting=[1])
    assert tarjan_oracle(g).result is Result.HOLDS


def test_unreachable_cycle_ignored():
    g = ExplicitGraph.from_edges(3, [(1, 2), (2, 1)], accepting=[1])
    assert tarjan_oracle(g).result is Result.HOLDS


def test_deep_chain_no_recursion_limit():
    n = 200_000
    edges = [(i, i + 1) for i in range(n - 1)] + [(n - 1, n - 2)]
    g = ExplicitGraph.from_edges(n, edges, accepting=[n - 1])
    assert tarjan_oracle(g).result is Result.COUNTEREXAMPLE


@given(st.integers(1, 40), st.floats(0, 3), st.integers(0, 2**32))
def test_sccs_match_networkx(n, deg, seed):
    g = generate_random_graph(n, deg, 0.0, seed)
    ours = {frozenset(c) for c in strongly_connected_components(range(n), lambda u: g.adjacency[u])}
    ref = nx.DiGraph()
    ref.add_nodes_from(range(n))
    ref.add_edges_from(g.edges())
    assert ours == {frozenset(c) for c in nx.strongly_connected_components(ref)}


@given(st.integers(1, 12), st.floats(0, 2.5), st.floats(0, 0.5), st.integers(0, 2**32))
def test_oracle_matches_transitive_closure(n, deg, pacc, seed):
    g = generate_random_graph(n, deg, pacc, seed)
    expect = brute_has_accepting_cycle(n, g.init, g.accepting, list(g.edges()))
    v = tarjan_oracle(g)
    assert (v.result is Result.COUNTEREXAMPLE) == expect
    if expect:
        assert validate_lasso(v.lasso, g) is None
