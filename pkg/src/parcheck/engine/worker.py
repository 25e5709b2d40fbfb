"""Worker contexts, engine configuration and the phase protocol."""
from __future__ import annotations

import enum
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from parcheck.engine.termination import SafraState
from parcheck.partition import FNV_OFFSET_BASIS, PartitionFn, SliceSpec
from parcheck.verdict import Stats


class Driver(enum.Enum):
    DETERMINISTIC = "det"
    PARALLEL = "par"


class FlushReason(enum.Enum):
    EXPLICIT = "explicit"
    FULL = "full"
    IDLE = "idle"


class ConfigError(ValueError):
    pass


def _default_workers() -> int:
    return int(os.environ.get("PARCHECK_WORKERS", "1"))


@dataclass(frozen=True)
class EngineConfig:
    workers: int = field(default_factory=_default_workers)
    buffer_capacity: int = 1024
    poll_interval: int = 64
    driver: Driver = Driver.DETERMINISTIC
    # 0: plain round-robin; otherwise seeds randomised interleavings
    det_seed: int = 0
    slice: SliceSpec = SliceSpec()
    hash_seed: int = FNV_OFFSET_BASIS

    def __post_init__(self):
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.buffer_capacity < 1:
            raise ConfigError("buffer capacity must be at least 1")
        if self.poll_interval < 1:
            raise ConfigError("poll interval must be at least 1")


class Detected(Exception):
    """Raised by a phase handler to stop the run with a finding."""

    def __init__(self, payload):
        super().__init__(payload)
        self.payload = payload


class ModelErrorFound(Detected):
    def __init__(self, marker, state: bytes):
        super().__init__(("model-error", marker, state))
        self.marker = marker
        self.state = state


class Phase:
    """One superstep of a distributed procedure.

    ``prepare`` runs on every worker, then a barrier, then ``start`` runs on
    every worker followed by message handling to global quiescence, then
    ``finish`` collects one value per worker.
    """

    def prepare(self, w: "Worker") -> None:
        pass

    def start(self, w: "Worker") -> None:
        pass

    def handle(self, w: "Worker", state: bytes, meta) -> None:
        raise NotImplementedError

    def finish(self, w: "Worker"):
        return None


class Worker:
    """Worker-private hash table, work pool and outgoing buffers."""

    def __init__(self, wid: int, k: int, source, config: EngineConfig, partition: PartitionFn):
        self.id = wid
        self.k = k
        self.source = source
        self.owner = partition
        self.capacity = config.buffer_capacity
        self.visited: dict = {}
        self.queue: deque = deque()
        self.out: list = [[] for _ in range(k)]
        self.data: dict = {}
        self.stats = Stats()
        self.safra = SafraState(wid, k)
        self.transmit = None  # set by the driver: transmit(dest, payload)
        self._check = bool(getattr(source, "may_error", False))
        self._init = source.initial()
        self._flush_order = [(wid + i) % k for i in range(1, k)]

    @property
    def initial(self) -> bytes:
        return self._init

    def owns(self, state: bytes) -> bool:
        return self.owner(state) == self.id

    def seed_initial(self, meta=None) -> None:
        if self.owner(self._init) == self.id:
            self.queue.append((self._init, meta))

    def successors(self, state: bytes):
        succ = self.source.successors(state)
        self.stats.edges_traversed += len(succ)
        if self._check:
            for s in succ:
                if type(s) is not bytes:
                    raise ModelErrorFound(s, state)
        return succ

    def new_state(self) -> None:
        self.stats.states_visited += 1

    def dispatch(self, state: bytes, meta) -> None:
        dest = self.owner(state)
        if dest == self.id:
            self.queue.append((state, meta))
            return
        buf = self.out[dest]
        buf.append((state, meta))
        st = self.stats
        st.cross_edges += 1
        st.messages_sent += 1
        if len(buf) >= self.capacity:
            self._send(dest)
            st.flushes_full += 1

    def _send(self, dest: int) -> None:
        payload = self.out[dest]
        self.out[dest] = []
        st = self.stats
        st.batches += 1
        st.batch_entries += len(payload)
        if len(payload) > st.max_batch:
            st.max_batch = len(payload)
        self.safra.on_send()
        self.transmit(dest, payload)

    def flush(self, reason: FlushReason) -> int:
        """Send every non-empty buffer, starting after our own id."""
        sent = 0
        for dest in self._flush_order:
            if self.out[dest]:
                self._send(dest)
                sent += 1
        if sent:
            if reason is FlushReason.IDLE:
                self.stats.flushes_idle += 1
            elif reason is FlushReason.EXPLICIT:
                self.stats.flushes_explicit += 1
            else:
                self.stats.flushes_full += 1
        return sent

    def buffered(self) -> int:
        return sum(len(b) for b in self.out)

    def receive(self, payload: list) -> None:
        self.safra.on_receive()
        self.queue.extend(payload)
