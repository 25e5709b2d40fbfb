"""Maximal accepting predecessors.

Accepting states are totally ordered by descriptor bytes (the empty string
is below all of them). Each pass propagates, for every state, the largest
active accepting state that can reach it. An accepting state that receives
its own identity lies on a cycle. Otherwise the states that showed up as
some state's maximum are deactivated and another pass starts.
"""
from __future__ import annotations

from parcheck.algorithms.common import Outcome, holds
from parcheck.algorithms.owcty import owcty_rounds, extract_from_set
from parcheck.counterexample import lasso_through
from parcheck.engine import Detected, Phase
from parcheck.verdict import Result

NONE = b""


class MapPass(Phase):
    # record: [map value, pass number, active, last propagated value]

    def __init__(self, iteration: int, deactivate=()):
        self.iteration = iteration
        self.deactivate = deactivate

    def prepare(self, w):
        for d in self.deactivate:
            rec = w.visited.get(d)
            if rec is not None:
                rec[2] = False

    def start(self, w):
        w.seed_initial(NONE)

    def handle(self, w, state, value):
        it = self.iteration
        rec = w.visited.get(state)
        if rec is None:
            rec = [value, it, w.source.is_accepting(state), None]
            w.visited[state] = rec
            w.new_state()
        elif rec[1] != it:
            rec[0], rec[1], rec[3] = value, it, None
        else:
            if rec[2] and value == state:
                raise Detected(("map", state))
            if value <= rec[0]:
                return
            rec[0] = value
        out = rec[0]
        if rec[2] and state > out:
            out = state
        if rec[3] is not None and out <= rec[3]:
            return
        rec[3] = out
        for s in w.successors(state):
            w.dispatch(s, out)

    def finish(self, w):
        it = self.iteration
        image = {rec[0] for rec in w.visited.values() if rec[1] == it and rec[0] != NONE}
        active = sum(1 for rec in w.visited.values() if rec[2])
        return sorted(image), active


def _map_to_owcty(w) -> None:
    for d in w.visited:
        w.visited[d] = [True, 0, 0]


def map_procedure(engine, source) -> Outcome:
    it = 0
    deactivate = ()
    while True:
        it += 1
        values, found = engine.probe(MapPass(it, deactivate))
        if found is not None:
            return Outcome(Result.COUNTEREXAMPLE, lasso=lasso_through(source, found[1]),
                           iterations=it)
        image = sorted(set().union(*(set(v[0]) for v in values)))
        active = sum(v[1] for v in values)
        if not image or active == len(image):
            return holds(it)
        deactivate = tuple(image)


def map_owcty_procedure(engine, source) -> Outcome:
    """One MAP pass (cheap early detection), then OWCTY on the explored space."""
    _, found = engine.probe(MapPass(1))
    if found is not None:
        return Outcome(Result.COUNTEREXAMPLE, lasso=lasso_through(source, found[1]), iterations=1)
    engine.query(_map_to_owcty)
    weak = bool(getattr(source, "weak", False))
    nonempty, rounds = owcty_rounds(engine, source, weak)
    if not nonempty:
        return holds(1 + rounds)
    return Outcome(Result.COUNTEREXAMPLE, lasso=extract_from_set(engine, source),
                   iterations=1 + rounds)
