"""Verdicts and run statistics."""
from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

from parcheck.counterexample import Lasso


class Result(enum.Enum):
    HOLDS = "HOLDS"
    COUNTEREXAMPLE = "COUNTEREXAMPLE"
    MODEL_ERROR = "MODEL_ERROR"


# Key order of the stats JSON object. Extra keys follow these.
STATS_KEYS = (
    "states_visited",
    "edges_traversed",
    "cross_edges",
    "messages_sent",
    "flushes_explicit",
    "flushes_full",
    "flushes_idle",
    "flushes_aged",
    "outer_iterations",
    "wall_time_ms",
)


@dataclass
class Stats:
    states_visited: int = 0
    edges_traversed: int = 0
    cross_edges: int = 0
    messages_sent: int = 0
    flushes_explicit: int = 0
    flushes_full: int = 0
    flushes_idle: int = 0
    # There is no age-based flush; the counter stays at zero by construction.
    flushes_aged: int = 0
    outer_iterations: int = 0
    wall_time_ms: float = 0.0
    batches: int = 0
    batch_entries: int = 0
    max_batch: int = 0
    nested_searches: int = 0
    back_level_edges: int = 0

    @property
    def flushes(self) -> dict:
        return {
            "explicit": self.flushes_explicit,
            "full": self.flushes_full,
            "idle": self.flushes_idle,
            "aged": self.flushes_aged,
        }

    def add(self, other: "Stats") -> None:
        for f in fields(self):
            name = f.name
            if name == "max_batch":
                self.max_batch = max(self.max_batch, other.max_batch)
            else:
                setattr(self, name, getattr(self, name) + getattr(other, name))

    def to_dict(self, verdict: Optional[Result] = None) -> dict:
        raw = asdict(self)
        out = {key: raw.pop(key) for key in STATS_KEYS}
        out.update(raw)
        if verdict is not None:
            out["verdict"] = verdict.value
        return out


@dataclass
class Verdict:
    result: Result
    stats: Stats = field(default_factory=Stats)
    lasso: Optional[Lasso] = None
    # Finite witness: reachability hits and MODEL_ERROR paths (init first).
    trace: Optional[list] = None
    error: Optional[object] = None

    @property
    def holds(self) -> bool:
        return self.result is Result.HOLDS

    def stats_json(self, *, wall_time: bool = True) -> str:
        data = self.stats.to_dict(self.result)
        if not wall_time:
            del data["wall_time_ms"]
        return json.dumps(data, sort_keys=False)
