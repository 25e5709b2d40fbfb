import pytest
from hypothesis import given, settings, strategies as st

from parcheck.algorithms import DISTRIBUTED_CYCLE_ALGORITHMS, run
from parcheck.algorithms.common import ownership_violations
from parcheck.algorithms.reach import ReachPhase
from parcheck.engine import (
    BLACK,
    WHITE,
    ConfigError,
    DeterministicDriver,
    Driver,
    Engine,
    EngineConfig,
    FlushReason,
    SafraState,
    Status,
    Token,
    Worker,
    detect_termination,
)
from parcheck.graph import ExplicitGraph, encode_index, generate_random_graph
from parcheck.partition import make_partition


class Owner:
    """Partition stand-in: owner is the first descriptor byte mod k."""

    def __init__(self, k):
        self.k = k

    def __call__(self, d):
        return d[0] % self.k


def make_worker(k=2, wid=0, capacity=4):
    g = ExplicitGraph.from_edges(8, [])
    w = Worker(wid, k, g, EngineConfig(workers=k, buffer_capacity=capacity), Owner(k))
    sent = []
    w.transmit = lambda dest, payload: sent.append((dest, list(payload)))
    return w, sent


def test_single_worker_dispatch_is_local():
    w, sent = make_worker(k=1)
    for i in range(5):
        w.dispatch(encode_index(i), None)
    assert len(w.queue) == 5 and w.stats.messages_sent == 0 and sent == []


def test_dispatch_to_peer_buffers():
    w, sent = make_worker(k=2)
    w.dispatch(encode_index(1), "m")
    assert w.out[1] == [(encode_index(1), "m")]
    assert w.stats.messages_sent == w.stats.cross_edges == 1
    assert sent == []


def test_full_buffer_flushes_at_capacity():
    w, sent = make_worker(k=2, capacity=4)
    for _ in range(3):
        w.dispatch(encode_index(1), None)
    assert w.stats.flushes_full == 0 and len(w.out[1]) == 3
    w.dispatch(encode_index(1), None)
    assert w.stats.flushes_full == 1 and w.out[1] == [] and len(sent[0][1]) == 4
    w.dispatch(encode_index(1), None)
    assert w.stats.flushes_full == 1 and len(w.out[1]) == 1


def test_empty_flush_is_silent():
    w, sent = make_worker(k=3)
    assert w.flush(FlushReason.IDLE) == 0
    assert sent == [] and w.stats.flushes_idle == 0


def test_idle_flush_sends_partial_batch():
    w, sent = make_worker(k=2, capacity=8)
    for _ in range(3):
        w.dispatch(encode_index(1), None)
    assert w.flush(FlushReason.IDLE) == 1
    assert sent == [(1, [(encode_index(1), None)] * 3)]
    assert w.stats.flushes_idle == 1 and w.stats.flushes_aged == 0


def test_flush_order_is_staggered():
    w, sent = make_worker(k=4, wid=2, capacity=8)
    for i in range(4):
        w.dispatch(encode_index(i), None)
    w.flush(FlushReason.EXPLICIT)
    assert [d for d, _ in sent] == [3, 0, 1]
    assert w.stats.flushes_explicit == 1


def test_config_validation():
    for kwargs in ({"workers": 0}, {"buffer_capacity": 0}, {"poll_interval": 0}):
        with pytest.raises(ConfigError):
            EngineConfig(**kwargs)


def test_workers_default_from_environment(monkeypatch):
    monkeypatch.setenv("PARCHECK_WORKERS", "3")
    assert EngineConfig().workers == 3


# termination detection

def test_single_worker_quiescent_immediately():
    s = SafraState(0, 1)
    assert detect_termination(s.initiate(), s) is Status.QUIESCENT


def test_in_flight_message_needs_second_pass():
    ring = [SafraState(i, 2) for i in range(2)]
    ring[0].on_send()  # batch to worker 1 still in flight
    tok = ring[1].forward(ring[0].initiate())
    assert ring[0].decide(tok) is Status.ACTIVE
    ring[1].on_receive()  # delivered: worker 1 turns black
    tok = ring[1].forward(ring[0].initiate())
    assert tok.color == BLACK
    assert ring[0].decide(tok) is Status.ACTIVE
    tok = ring[1].forward(ring[0].initiate())
    # the root adds its own balance (+1) when deciding
    assert tok == Token(WHITE, -1)
    assert ring[0].decide(tok) is Status.QUIESCENT


def test_root_receiving_blocks_decision():
    ring = [SafraState(i, 2) for i in range(2)]
    tok = ring[0].initiate()
    ring[1].on_send()
    tok = ring[1].forward(tok)
    ring[0].on_receive()
    assert ring[0].decide(tok) is Status.ACTIVE


@pytest.mark.parametrize("seed", range(1, 1001))
def test_termination_stress_never_early(seed):
    # the driver itself asserts quiet queues, buffers and channels at termination
    g = generate_random_graph(30 + seed % 40, 1.5, 0.1, seed)
    k = 2 + seed % 4
    config = EngineConfig(workers=k, buffer_capacity=1 + seed % 5, poll_interval=1 + seed % 7, det_seed=seed)
    drv = DeterministicDriver(g, config, make_partition(k))
    drv.phase(ReachPhase())
    assert drv.token_checks >= 1
    assert drv.in_flight() == 0
    assert all(not w.queue and not w.buffered() for w in drv.workers)


def test_determinism_of_stats():
    g = generate_random_graph(300, 2.0, 0.05, 9)
    for seed in (0, 17):
        cfg = EngineConfig(workers=4, buffer_capacity=5, poll_interval=3, det_seed=seed)
        a = run(g, "map-owcty", cfg).stats_json(wall_time=False)
        b = run(g, "map-owcty", cfg).stats_json(wall_time=False)
        assert a == b


def test_visited_tables_hold_only_owned_states():
    g = generate_random_graph(200, 2.0, 0.0, 4)
    with Engine(g, EngineConfig(workers=5, buffer_capacity=3)) as eng:
        eng.phase(ReachPhase())
        assert sum(eng.query(ownership_violations)) == 0
        keys = [d for part in eng.query(lambda w: list(w.visited)) for d in part]
        assert len(keys) == len(set(keys))


def test_empty_successor_init():
    g = ExplicitGraph.from_edges(1, [])
    v = run(g, "reach", EngineConfig(workers=3))
    assert v.result.value == "HOLDS" and v.stats.states_visited == 1


@pytest.mark.parametrize("driver", [Driver.DETERMINISTIC, Driver.PARALLEL])
def test_messaging_identities(driver):
    g = generate_random_graph(400, 2.0, 0.05, 21)
    for alg in ("reach",) + DISTRIBUTED_CYCLE_ALGORITHMS:
        cfg = EngineConfig(workers=3, buffer_capacity=7, poll_interval=5, driver=driver)
        st_ = run(g, alg, cfg).stats
        assert st_.messages_sent == st_.cross_edges == st_.batch_entries
        assert st_.max_batch <= 7
        assert st_.flushes_aged == 0


def test_cross_edges_vary_with_k_but_verdict_does_not():
    g = generate_random_graph(300, 1.8, 0.05, 5)
    seen = {}
    for k in (1, 2, 4, 8):
        v = run(g, "owcty", EngineConfig(workers=k))
        seen[k] = (v.result, v.stats.cross_edges)
    assert len({r for r, _ in seen.values()}) == 1
    assert seen[1][1] == 0 and len({c for _, c in seen.values()}) > 1


@settings(max_examples=25)
@given(st.integers(1, 6), st.integers(1, 9), st.integers(1, 9), st.integers(0, 50), st.integers(0, 2**32))
def test_verdict_independent_of_engine_parameters(k, b, p, det, seed):
    g = generate_random_graph(60, 1.5, 0.1, seed)
    ref = run(g, "owcty", EngineConfig(workers=1)).result
    for alg in DISTRIBUTED_CYCLE_ALGORITHMS:
        cfg = EngineConfig(workers=k, buffer_capacity=b, poll_interval=p, det_seed=det, hash_seed=seed)
        assert run(g, alg, cfg).result is ref
