"""Partitioned multi-worker execution substrate."""
from __future__ import annotations

from parcheck.engine.deterministic import DeterministicDriver, TerminationError
from parcheck.engine.termination import BLACK, WHITE, SafraState, Status, Token, detect_termination
from parcheck.engine.worker import (
    ConfigError,
    Detected,
    Driver,
    EngineConfig,
    FlushReason,
    ModelErrorFound,
    Phase,
    Worker,
)
from parcheck.partition import make_partition
from parcheck.verdict import Stats


class Engine:
    """Runs phases over k workers under the configured driver.

    Construction is the init phase: every worker context is built (and, for
    the parallel driver, every process has reported ready) before the first
    phase is accepted.
    """

    def __init__(self, source, config: EngineConfig | None = None):
        self.config = config or EngineConfig()
        self.source = source
        self.partition = make_partition(self.config.workers, self.config.slice,
                                        self.config.hash_seed, source.descriptor_len)
        if self.config.driver is Driver.PARALLEL:
            from parcheck.engine.parallel import ParallelDriver

            self.driver = ParallelDriver(source, self.config, self.partition)
        else:
            self.driver = DeterministicDriver(source, self.config, self.partition)
        self.phases = 0
        self._final_stats = None

    @property
    def k(self) -> int:
        return self.config.workers

    def phase(self, ph: Phase) -> list:
        self.phases += 1
        try:
            return self.driver.phase(ph)
        except ModelErrorFound:
            raise
        except Detected as found:
            # the parallel driver forwards payloads only
            if found.payload[0] == "model-error":
                raise ModelErrorFound(found.payload[1], found.payload[2]) from None
            raise

    def probe(self, ph: Phase):
        """Run a phase; return ``(values, None)`` or ``(None, payload)`` on a finding."""
        try:
            return self.phase(ph), None
        except ModelErrorFound:
            raise
        except Detected as found:
            return None, found.payload

    def query(self, fn, *args) -> list:
        return self.driver.query(fn, *args)

    def stats(self) -> Stats:
        """Aggregate worker counters; for the parallel driver this also stops the workers."""
        if self._final_stats is None:
            if isinstance(self.driver, DeterministicDriver):
                per_worker = [w.stats for w in self.driver.workers]
            else:
                per_worker = self.driver.worker_stats()
            total = Stats()
            for st in per_worker:
                total.add(st)
            self._final_stats = total
        return self._final_stats

    def close(self) -> None:
        self.driver.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


__all__ = [
    "BLACK", "WHITE", "ConfigError", "Detected", "DeterministicDriver", "Driver", "Engine",
    "EngineConfig", "FlushReason", "ModelErrorFound", "Phase", "SafraState", "Status",
    "TerminationError", "Token", "Worker", "detect_termination",
]
