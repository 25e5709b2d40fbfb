"""Back-level edges: level-synchronous BFS with bounded nested searches.

Every cycle contains an edge u -> v with level(v) <= level(u). After each
BFS level the back-level edges found so far are checked in one batched
phase: from v, search states of level at most level(u) for u, carrying a
flag that turns on at the first accepting state. Reaching u with the flag
set closes an accepting cycle through that edge.
"""
from __future__ import annotations

from collections import deque

from parcheck.algorithms.common import Outcome, holds
from parcheck.counterexample import ExtractionError, lasso_from_cycle
from parcheck.engine import Detected, Phase
from parcheck.verdict import Result


class BledgeLevel(Phase):
    # record: BFS level

    def __init__(self, level: int):
        self.level = level

    def prepare(self, w):
        if self.level == 0:
            w.data["frontier"] = []
            if w.owns(w.initial):
                w.visited[w.initial] = 0
                w.new_state()
                w.data["frontier"].append(w.initial)
        w.data["expand"] = w.data["frontier"]
        w.data["frontier"] = []
        w.data["back"] = []

    def start(self, w):
        nxt = self.level + 1
        for d in w.data["expand"]:
            for s in w.successors(d):
                w.dispatch(s, (nxt, d))

    def handle(self, w, state, meta):
        lv, u = meta
        rec = w.visited.get(state)
        if rec is None:
            w.visited[state] = lv
            w.new_state()
            w.data["frontier"].append(state)
        elif rec < lv:
            w.data["back"].append((u, state))

    def finish(self, w):
        return len(w.data["frontier"]), w.data["back"]


class BledgeCheck(Phase):
    def __init__(self, level: int, edges: list):
        self.level = level
        self.edges = edges

    def prepare(self, w):
        w.data["nested"] = {}

    def start(self, w):
        for idx, (_, v) in enumerate(self.edges):
            if w.owns(v):
                w.queue.append((v, (idx, False)))

    def handle(self, w, state, meta):
        idx, flag = meta
        lv = w.visited.get(state)
        if lv is None or lv > self.level:
            return
        flag = flag or w.source.is_accepting(state)
        seen = w.data["nested"]
        key = (idx, state)
        mark = 2 if flag else 1
        if seen.get(key, 0) >= mark:
            return
        seen[key] = mark
        if flag and state == self.edges[idx][0]:
            raise Detected(("bledge", self.edges[idx]))
        for s in w.successors(state):
            w.dispatch(s, (idx, flag))

    def finish(self, w):
        w.data["nested"] = {}


def _levels(w, bound) -> list:
    return [d for d, lv in w.visited.items() if lv <= bound]


def _flagged_path(source, u, v, allowed) -> list:
    """Path v ~> u inside ``allowed`` that visits an accepting state."""
    acc = source.is_accepting
    start = (v, acc(v))
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        x, flag = node
        if x == u and flag:
            path = []
            while node is not None:
                path.append(node[0])
                node = parent[node]
            return path[::-1]
        for y in source.successors(x):
            if type(y) is not bytes or y not in allowed:
                continue
            nxt = (y, flag or acc(y))
            if nxt not in parent:
                parent[nxt] = node
                queue.append(nxt)
    raise ExtractionError("back-level edge does not close an accepting cycle")


def bledge_procedure(engine, source) -> Outcome:
    level = 0
    back_edges = 0
    checks = 0
    while True:
        values = engine.phase(BledgeLevel(level))
        grown = sum(v[0] for v in values)
        edges = [e for v in values for e in v[1]]
        if edges:
            back_edges += len(edges)
            checks += len(edges)
            _, found = engine.probe(BledgeCheck(level, edges))
            if found is not None:
                u, v = found[1]
                allowed = set(d for part in engine.query(_levels, level) for d in part)
                lasso = lasso_from_cycle(source, _flagged_path(source, u, v, allowed))
                return Outcome(Result.COUNTEREXAMPLE, lasso=lasso, iterations=level + 1,
                               extra={"back_level_edges": back_edges, "nested_searches": checks})
        if grown == 0:
            return holds(level + 1, back_level_edges=back_edges, nested_searches=checks)
        level += 1
