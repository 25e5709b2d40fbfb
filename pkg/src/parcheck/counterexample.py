"""Lasso witnesses: extraction helpers, validation and JSON export.

Extraction runs on a single execution context after the engine has
quiesced. Validation looks at nothing but the graph source.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Collection, Optional


class ExtractionError(RuntimeError):
    """A detector reported a cycle that cannot be reconstructed."""


@dataclass(frozen=True)
class Lasso:
    prefix: tuple  # init (inclusive) .. cycle entry (exclusive)
    cycle: tuple   # cycle[0] is the entry; last element loops back to it

    def __len__(self):
        return len(self.prefix) + len(self.cycle)

    def tightened(self) -> "Lasso":
        """Same run, with the cycle entered as early as the prefix allows."""
        prefix, cycle = list(self.prefix), list(self.cycle)
        while prefix and cycle and prefix[-1] == cycle[-1]:
            cycle.insert(0, cycle.pop())
            prefix.pop()
        return Lasso(tuple(prefix), tuple(cycle))


def _real_successors(source, state):
    return [s for s in source.successors(state) if type(s) is bytes]


def bfs_path(source, start: bytes, goal: Callable[[bytes], bool],
             allowed: Optional[Collection[bytes]] = None,
             include_start: bool = True) -> Optional[list]:
    """Shortest path from ``start`` to a state satisfying ``goal``.

    With ``include_start=False`` the start state itself only counts as a goal
    when it is reached again, which is how cycles are found.
    """
    if include_start and goal(start):
        return [start]
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in _real_successors(source, u):
            if allowed is not None and v not in allowed:
                continue
            if goal(v):
                path = [v]
                while u is not None:
                    path.append(u)
                    u = parent[u]
                path.reverse()
                return path
            if v not in parent:
                parent[v] = u
                queue.append(v)
    return None


def cycle_through(source, state: bytes, allowed=None) -> Optional[list]:
    """States of a cycle starting and ending at ``state`` (closing edge implied)."""
    path = bfs_path(source, state, lambda v: v == state, allowed, include_start=False)
    return None if path is None else path[:-1]


def lasso_from_cycle(source, cycle: list) -> Lasso:
    """Attach the shortest stem from init to the given cycle, rotating it."""
    init = source.initial()
    on_cycle = {s: i for i, s in enumerate(cycle)}
    stem = bfs_path(source, init, lambda v: v in on_cycle)
    if stem is None:
        raise ExtractionError("cycle is not reachable from the initial state")
    entry = on_cycle[stem[-1]]
    return Lasso(tuple(stem[:-1]), tuple(cycle[entry:] + cycle[:entry]))


def lasso_through(source, state: bytes, allowed=None) -> Lasso:
    """Lasso whose cycle passes through ``state``, entered where the stem is shortest."""
    cycle = cycle_through(source, state, allowed)
    if cycle is None:
        raise ExtractionError(f"no cycle through {state.hex()}")
    return lasso_from_cycle(source, cycle)


def validate_lasso(lasso: Lasso, source) -> Optional[str]:
    """Re-check a lasso against ``source``; ``None`` means valid.

    Otherwise the return value names the first violated property.
    """
    prefix, cycle = list(lasso.prefix), list(lasso.cycle)
    if not cycle:
        return "empty cycle"
    n = source.descriptor_len
    for s in prefix + cycle:
        if type(s) is not bytes or len(s) != n:
            return f"malformed descriptor {s!r}"
    path = prefix + cycle
    if path[0] != source.initial():
        return "does not start at the initial state"
    for u, v in zip(path, path[1:]):
        if v not in _real_successors(source, u):
            return f"missing edge {u.hex()} -> {v.hex()}"
    if cycle[0] not in _real_successors(source, cycle[-1]):
        return f"missing edge {cycle[-1].hex()} -> {cycle[0].hex()}"
    if not any(source.is_accepting(s) for s in cycle):
        return "no accepting state on cycle"
    return None


def _render(source, state):
    describe = getattr(source, "describe", None)
    return describe(state) if describe is not None else None


def lasso_to_json(lasso: Lasso, source=None) -> dict:
    out = {
        "prefix": [s.hex() for s in lasso.prefix],
        "cycle": [s.hex() for s in lasso.cycle],
    }
    if source is not None and getattr(source, "describe", None) is not None:
        out["decoded"] = {
            "prefix": [_render(source, s) for s in lasso.prefix],
            "cycle": [_render(source, s) for s in lasso.cycle],
        }
    return out


def lasso_from_json(data: dict) -> Lasso:
    return Lasso(tuple(bytes.fromhex(h) for h in data["prefix"]),
                 tuple(bytes.fromhex(h) for h in data["cycle"]))


def trace_to_json(trace: list, source=None, error=None) -> dict:
    out = {"trace": [s.hex() for s in trace]}
    if source is not None and getattr(source, "describe", None) is not None:
        out["decoded"] = [_render(source, s) for s in trace]
    if error is not None:
        out["error"] = str(error)
    return out
