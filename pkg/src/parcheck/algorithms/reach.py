"""Partitioned reachability with an optional error predicate."""
from __future__ import annotations

from parcheck.algorithms.common import Outcome, holds
from parcheck.counterexample import bfs_path
from parcheck.engine import Detected, Phase
from parcheck.verdict import Result


class ReachPhase(Phase):
    def __init__(self, predicate=None):
        self.predicate = predicate

    def start(self, w):
        w.seed_initial()

    def handle(self, w, state, _):
        visited = w.visited
        if state in visited:
            return
        visited[state] = None
        w.stats.states_visited += 1
        if self.predicate is not None and self.predicate(state):
            raise Detected(("reach", state))
        for s in w.successors(state):
            w.dispatch(s, None)


class ExprPredicate:
    """Picklable predicate: a boolean model expression over the system part."""

    def __init__(self, expr):
        self.expr = expr
        self._fn = None

    def __call__(self, state: bytes) -> bool:
        raise RuntimeError("bind() the predicate to a source first")

    def bind(self, source):
        sys = getattr(source, "sys", source)
        fn = sys.compile_predicate(self.expr)
        if sys is source:
            return fn
        n = sys.descriptor_len
        return lambda d: fn(d[:n])


class AcceptingPredicate:
    def bind(self, source):
        return source.is_accepting


class _BoundPhase(ReachPhase):
    """Binds a picklable predicate inside each worker."""

    def __init__(self, unbound):
        super().__init__(None)
        self.unbound = unbound

    def prepare(self, w):
        self.predicate = self.unbound.bind(w.source)

    def __getstate__(self):
        return {"unbound": self.unbound, "predicate": None}


def reach_procedure(engine, source, error_predicate=None) -> Outcome:
    if error_predicate is not None and hasattr(error_predicate, "bind"):
        ph = _BoundPhase(error_predicate)
    else:
        ph = ReachPhase(error_predicate)
    _, found = engine.probe(ph)
    if found is None:
        return holds()
    target = found[1]
    trace = bfs_path(source, source.initial(), lambda v: v == target)
    return Outcome(Result.COUNTEREXAMPLE, trace=trace)
