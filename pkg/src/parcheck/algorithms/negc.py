"""Negative-cycle detection with Bellman-Ford style relaxation.

Edges leaving an accepting state weigh -1, all others 0, so an accepting
cycle is exactly a negative cycle. Relaxation proceeds in synchronised
rounds: round r expands the states whose distance changed in round r-1.

Two detectors run side by side. When a worker improves a state it walks
the parent chain through its own states; reaching the improved state
closes a cycle on the spot. As a fallback, an update in round r with at
most r discovered states forces a parent-graph cycle, found afterwards by
walking parents from an updated state.
"""
from __future__ import annotations

from parcheck.algorithms.common import Outcome, holds
from parcheck.counterexample import ExtractionError, lasso_from_cycle
from parcheck.engine import Detected, Phase
from parcheck.verdict import Result


class NegcRound(Phase):
    # record: [distance, parent]

    def __init__(self, rnd: int):
        self.rnd = rnd

    def prepare(self, w):
        if self.rnd == 1:
            w.data["changed"] = {}
            if w.owns(w.initial):
                w.visited[w.initial] = [0, None]
                w.new_state()
                w.data["changed"][w.initial] = None
        w.data["frontier"] = w.data["changed"]
        w.data["changed"] = {}

    def start(self, w):
        acc = w.source.is_accepting
        visited = w.visited
        for d in w.data["frontier"]:
            dist = visited[d][0]
            if acc(d):
                dist -= 1
            for s in w.successors(d):
                w.dispatch(s, (dist, d))

    def handle(self, w, state, meta):
        dist, parent = meta
        rec = w.visited.get(state)
        if rec is None:
            w.visited[state] = [dist, parent]
            w.new_state()
            w.data["changed"][state] = None
            return
        if dist >= rec[0]:
            return
        _walk(w, state, parent)
        rec[0], rec[1] = dist, parent
        w.data["changed"][state] = None

    def finish(self, w):
        return len(w.data["changed"]), len(w.visited)


def _walk(w, state, parent):
    """Follow local parent pointers from ``parent``; raise if ``state`` is met."""
    visited = w.visited
    chain = []
    x = parent
    limit = len(visited)
    while x is not None and len(chain) <= limit:
        if x == state:
            raise Detected(("negc", [state] + chain[::-1]))
        rec = visited.get(x)
        if rec is None:
            return
        chain.append(x)
        x = rec[1]


def _parents(w) -> dict:
    return {d: rec[1] for d, rec in w.visited.items()}


def _changed(w) -> list:
    return list(w.data["changed"])


def _cycle_from_parents(engine, steps: int) -> list:
    parent = {}
    for part in engine.query(_parents):
        parent.update(part)
    changed = sorted(c for part in engine.query(_changed) for c in part)
    if not changed:
        raise ExtractionError("no updated state to walk from")
    x = changed[0]
    for _ in range(steps):
        x = parent.get(x)
        if x is None:
            raise ExtractionError("parent chain ended before closing a cycle")
    back = [x]
    y = parent[x]
    while y != x:
        if y is None or len(back) > len(parent):
            raise ExtractionError("parent chain does not close")
        back.append(y)
        y = parent[y]
    # parent edges point backwards along the graph
    return back[::-1]


def negc_procedure(engine, source) -> Outcome:
    rnd = 0
    while True:
        rnd += 1
        values, found = engine.probe(NegcRound(rnd))
        if found is not None:
            return Outcome(Result.COUNTEREXAMPLE, lasso=lasso_from_cycle(source, found[1]),
                           iterations=rnd)
        updates = sum(v[0] for v in values)
        discovered = sum(v[1] for v in values)
        if updates == 0:
            return holds(rnd)
        if rnd >= discovered:
            cycle = _cycle_from_parents(engine, discovered)
            return Outcome(Result.COUNTEREXAMPLE, lasso=lasso_from_cycle(source, cycle),
                           iterations=rnd)
