"""Iterative Tarjan SCC decomposition and the reachable-SCC emptiness oracle."""
from __future__ import annotations

import time
from typing import Callable, Hashable, Iterable, Iterator

from parcheck.counterexample import lasso_through
from parcheck.verdict import Result, Stats, Verdict


def strongly_connected_components(
    roots: Iterable[Hashable], successors: Callable[[Hashable], Iterable[Hashable]]
) -> Iterator[list]:
    """Yield SCCs reachable from ``roots`` in reverse topological order.

    Uses an explicit work stack, so depth is bounded by memory only.
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    counter = 0
    for root in roots:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    if low[v] < low[parent]:
                        low[parent] = low[v]
                if low[v] == index[v]:
                    component = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        component.append(w)
                        if w == v:
                            break
                    yield component


def tarjan_oracle(g) -> Verdict:
    """Ground truth: an accepting state in a nontrivial reachable SCC."""
    started = time.perf_counter()
    stats = Stats()
    self_loop: set = set()

    def succ(v):
        out = [s for s in g.successors(v) if type(s) is bytes]
        stats.edges_traversed += len(out)
        if v in out:
            self_loop.add(v)
        return out

    hit = None
    for comp in strongly_connected_components([g.initial()], succ):
        stats.states_visited += len(comp)
        if len(comp) == 1 and comp[0] not in self_loop:
            continue
        accepting = [s for s in comp if g.is_accepting(s)]
        if accepting:
            hit = (min(accepting), frozenset(comp))
            break
    stats.wall_time_ms = (time.perf_counter() - started) * 1000.0
    if hit is None:
        return Verdict(Result.HOLDS, stats)
    state, comp = hit
    return Verdict(Result.COUNTEREXAMPLE, stats, lasso=lasso_through(g, state, comp))
