"""Pieces shared by the verification procedures."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from parcheck.counterexample import Lasso
from parcheck.verdict import Result


class InternalDiagnostic(AssertionError):
    """A procedure broke one of its own complexity guarantees."""


@dataclass
class Outcome:
    result: Result
    lasso: Optional[Lasso] = None
    trace: Optional[list] = None
    iterations: int = 0
    error: object = None
    extra: dict = field(default_factory=dict)


def holds(iterations=0, **extra) -> Outcome:
    return Outcome(Result.HOLDS, iterations=iterations, extra=extra)


# Query functions run inside each worker; they must be module-level so the
# parallel driver can ship them by reference.

def count_visited(w) -> int:
    return len(w.visited)


def visited_keys(w) -> list:
    return list(w.visited)


def ownership_violations(w) -> int:
    return sum(1 for d in w.visited if w.owner(d) != w.id)
