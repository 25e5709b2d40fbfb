"""One-way-catch-them-young: repeated reachability and elimination.

Each worker keeps a record ``[in_set, pred_count, reach_round]`` per owned
state. A Reach round keeps only states reachable from accepting members of
the set (counting in-set predecessors on the way); Elim then peels states
whose count drops to zero. The set stops changing exactly when it is the
union of accepting cycles and whatever they reach.
"""
from __future__ import annotations

from parcheck.algorithms.common import InternalDiagnostic, Outcome, holds
from parcheck.counterexample import ExtractionError, lasso_through
from parcheck.engine import Phase
from parcheck.verdict import Result


class OwctyGenerate(Phase):
    def start(self, w):
        w.seed_initial()

    def handle(self, w, state, _):
        if state in w.visited:
            return
        w.visited[state] = [True, 0, 0]
        w.new_state()
        for s in w.successors(state):
            w.dispatch(s, None)


class OwctyReach(Phase):
    def __init__(self, rnd: int):
        self.rnd = rnd

    def start(self, w):
        rnd = self.rnd
        acc = w.source.is_accepting
        for d, rec in w.visited.items():
            if rec[0] and acc(d):
                rec[2] = rnd
                rec[1] = 0
                for s in w.successors(d):
                    w.dispatch(s, None)

    def handle(self, w, state, _):
        rec = w.visited[state]
        if not rec[0]:
            return
        if rec[2] != self.rnd:
            rec[2] = self.rnd
            rec[1] = 1
            for s in w.successors(state):
                w.dispatch(s, None)
        else:
            rec[1] += 1

    def finish(self, w):
        n = 0
        for rec in w.visited.values():
            if rec[0]:
                if rec[2] == self.rnd:
                    n += 1
                else:
                    rec[0] = False
        return n


class OwctyElim(Phase):
    def start(self, w):
        for d, rec in w.visited.items():
            if rec[0] and rec[1] == 0:
                rec[0] = False
                for s in w.successors(d):
                    w.dispatch(s, None)

    def handle(self, w, state, _):
        rec = w.visited[state]
        if not rec[0]:
            return
        rec[1] -= 1
        if rec[1] == 0:
            rec[0] = False
            for s in w.successors(state):
                w.dispatch(s, None)

    def finish(self, w):
        return sum(1 for rec in w.visited.values() if rec[0])


def _restrict_to_accepting(w) -> int:
    acc = w.source.is_accepting
    n = 0
    for d, rec in w.visited.items():
        rec[0] = acc(d)
        n += rec[0]
    return n


def _set_size(w) -> int:
    return sum(1 for rec in w.visited.values() if rec[0])


def _set_members(w) -> list:
    return [d for d, rec in w.visited.items() if rec[0]]


def owcty_rounds(engine, source, weak: bool) -> tuple[bool, int]:
    """Run Reach/Elim rounds on the current set; returns (nonempty, rounds)."""
    size = sum(engine.query(_restrict_to_accepting if weak else _set_size))
    rnd = 0
    while size:
        if weak and rnd == 2:
            raise InternalDiagnostic("weak property needed more than two rounds")
        rnd += 1
        engine.phase(OwctyReach(rnd))
        new = sum(engine.phase(OwctyElim()))
        if new == 0:
            return False, rnd
        if new == size:
            return True, rnd
        size = new
    return False, rnd


def extract_from_set(engine, source):
    members = []
    for part in engine.query(_set_members):
        members.extend(part)
    allowed = set(members)
    for s in sorted(members):
        if source.is_accepting(s):
            try:
                return lasso_through(source, s, allowed)
            except ExtractionError:
                continue
    raise ExtractionError("fixpoint set has no accepting cycle")


def owcty_procedure(engine, source) -> Outcome:
    engine.phase(OwctyGenerate())
    weak = bool(getattr(source, "weak", False))
    nonempty, rounds = owcty_rounds(engine, source, weak)
    if not nonempty:
        return holds(rounds)
    return Outcome(Result.COUNTEREXAMPLE, lasso=extract_from_set(engine, source), iterations=rounds)
