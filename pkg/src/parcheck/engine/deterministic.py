"""Single-context driver with reproducible scheduling.

With ``det_seed == 0`` workers are stepped round-robin, each processing up
to ``poll_interval`` states before polling its inbox, and batches are
delivered in send order. A non-zero seed randomises which worker steps,
how long it runs, and when in-flight batches arrive (per-pair FIFO kept);
runs remain reproducible for a fixed seed.
"""
from __future__ import annotations

import random
from collections import deque

from parcheck.engine.termination import Status
from parcheck.engine.worker import Detected, EngineConfig, FlushReason, Worker


class TerminationError(AssertionError):
    """Termination was declared while work remained."""


class DeterministicDriver:
    def __init__(self, source, config: EngineConfig, partition):
        k = config.workers
        self.k = k
        self.config = config
        self.rng = random.Random(config.det_seed) if config.det_seed else None
        self.workers = [Worker(i, k, source, config, partition) for i in range(k)]
        self.inbox = [deque() for _ in range(k)]
        self.channels = {}  # (src, dst) -> deque of in-flight batches
        for w in self.workers:
            w.transmit = self._transmitter(w.id)
        self.token_checks = 0

    def _transmitter(self, src):
        if self.rng is None:
            inbox = self.inbox

            def transmit(dest, payload):
                inbox[dest].append(payload)
        else:
            def transmit(dest, payload):
                self.channels.setdefault((src, dest), deque()).append(payload)
        return transmit

    def _deliver_some(self):
        for key in sorted(self.channels):
            chan = self.channels[key]
            if chan and self.rng.random() < 0.5:
                self.inbox[key[1]].append(chan.popleft())

    def in_flight(self) -> int:
        return sum(len(c) for c in self.channels.values()) + sum(len(b) for b in self.inbox)

    def phase(self, ph) -> list:
        workers = self.workers
        for w in workers:
            ph.prepare(w)
        for w in workers:
            w.safra.reset()
        try:
            for w in workers:
                ph.start(w)
                w.flush(FlushReason.EXPLICIT)
            self._run(ph)
        except Detected:
            self._abort()
            raise
        return [ph.finish(w) for w in workers]

    def _abort(self):
        # buffered messages still go out so batch accounting stays exact;
        # the next phase never sees them
        for w in self.workers:
            w.flush(FlushReason.EXPLICIT)
        for w, box in zip(self.workers, self.inbox):
            w.queue.clear()
            box.clear()
        self.channels.clear()

    def query(self, fn, *args) -> list:
        return [fn(w, *args) for w in self.workers]

    def _run(self, ph):
        workers, inbox, rng = self.workers, self.inbox, self.rng
        k = self.k
        quantum = self.config.poll_interval
        handle = ph.handle
        holder, token, token_out = 0, None, False
        order = list(range(k))
        while True:
            if rng is not None:
                rng.shuffle(order)
            for i in order:
                w = workers[i]
                q = w.queue
                budget = rng.randint(1, quantum) if rng is not None else quantum
                n = 0
                while q and n < budget:
                    state, meta = q.popleft()
                    handle(w, state, meta)
                    n += 1
                if rng is not None:
                    self._deliver_some()
                box = inbox[i]
                while box:
                    w.receive(box.popleft())
                if q:
                    continue
                w.flush(FlushReason.IDLE)
                if holder != i:
                    continue
                # passive token holder
                if i == 0:
                    if token_out:
                        self.token_checks += 1
                        if w.safra.decide(token) is Status.QUIESCENT:
                            self._assert_quiet()
                            return
                    token = w.safra.initiate()
                    token_out = True
                    if k == 1:
                        self.token_checks += 1
                        if w.safra.decide(token) is Status.QUIESCENT:
                            self._assert_quiet()
                            return
                        continue
                    holder = 1
                else:
                    token = w.safra.forward(token)
                    holder = w.safra.next

    def _assert_quiet(self):
        for w in self.workers:
            if w.queue or w.buffered():
                raise TerminationError(f"worker {w.id} still active at termination")
        if self.in_flight():
            raise TerminationError("messages in flight at termination")

    def close(self):
        pass
