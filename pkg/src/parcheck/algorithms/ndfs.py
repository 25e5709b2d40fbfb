"""Sequential nested depth-first search (blue/red), iterative."""
from __future__ import annotations

from parcheck.algorithms.common import Outcome, holds
from parcheck.counterexample import Lasso
from parcheck.engine import ModelErrorFound
from parcheck.verdict import Result, Stats


def nested_dfs_procedure(source, stats: Stats) -> Outcome:
    check = bool(getattr(source, "may_error", False))
    accepting = source.is_accepting

    def succ(d):
        out = source.successors(d)
        stats.edges_traversed += len(out)
        if check:
            for s in out:
                if type(s) is not bytes:
                    raise ModelErrorFound(s, d)
        return out

    blue = set()
    red = set()
    init = source.initial()
    blue.add(init)
    # blue stack frames: [state, successor list, next index]
    path = [init]
    frames = [[init, succ(init), 0]]
    nested = 0
    while frames:
        top = frames[-1]
        d, out, i = top
        if i < len(out):
            top[2] = i + 1
            s = out[i]
            if s not in blue:
                blue.add(s)
                path.append(s)
                frames.append([s, succ(s), 0])
            continue
        frames.pop()
        path.pop()
        if accepting(d):
            nested += 1
            cycle = _red_search(d, succ, red)
            if cycle is not None:
                stats.states_visited = len(blue)
                prefix = tuple(path)
                return Outcome(Result.COUNTEREXAMPLE, lasso=Lasso(prefix, tuple(cycle)).tightened(),
                               extra={"nested_searches": nested})
    stats.states_visited = len(blue)
    return holds(nested_searches=nested)


def _red_search(seed, succ, red):
    """Look for a path back to ``seed``; red marks persist across searches."""
    red.add(seed)
    stack = [seed]
    frames = [[seed, succ(seed), 0]]
    while frames:
        top = frames[-1]
        d, out, i = top
        if i < len(out):
            top[2] = i + 1
            s = out[i]
            if s == seed:
                return list(stack)
            if s not in red:
                red.add(s)
                stack.append(s)
                frames.append([s, succ(s), 0])
            continue
        frames.pop()
        stack.pop()
    return None
