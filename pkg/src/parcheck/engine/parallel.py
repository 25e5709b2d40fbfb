"""Multi-process driver: one OS process per worker.

Every worker owns an inbox queue. Batches, the termination token and
coordinator commands all travel through inboxes, so per-(sender, receiver)
order is FIFO. Nothing else is shared between workers.
"""
from __future__ import annotations

import multiprocessing as mp
import queue as queue_mod
import traceback

from parcheck.engine.termination import Status
from parcheck.engine.worker import Detected, EngineConfig, FlushReason, Worker

_RESULT_TIMEOUT = 1.0


class WorkerFailure(RuntimeError):
    pass


def _worker_main(wid, source, config, partition, inboxes, results):
    try:
        _WorkerProcess(wid, source, config, partition, inboxes, results).loop()
    except Exception:  # pragma: no cover - reported to the coordinator
        results.put(("error", wid, traceback.format_exc()))


class _WorkerProcess:
    def __init__(self, wid, source, config: EngineConfig, partition, inboxes, results):
        self.wid = wid
        self.k = config.workers
        self.poll = config.poll_interval
        self.inboxes = inboxes
        self.inbox = inboxes[wid]
        self.results = results
        self.epoch = 0
        self.phase = None
        self.early = []  # batches of the current epoch that beat the "run" command
        self.w = Worker(wid, self.k, source, config, partition)
        self.w.transmit = self._transmit
        results.put(("ready", wid))

    def _transmit(self, dest, payload):
        self.inboxes[dest].put(("B", self.epoch, payload))

    def loop(self):
        while True:
            msg = self.inbox.get()
            tag = msg[0]
            if tag == "prepare":
                self.epoch, self.phase = msg[1], msg[2]
                self.early = []
                self.phase.prepare(self.w)
                self.w.safra.reset()
                self.results.put(("ack", self.wid, self.epoch))
            elif tag == "run":
                self.run_phase()
            elif tag == "B":
                if msg[1] == self.epoch:
                    self.early.append(msg[2])
            elif tag == "T":
                if msg[1] == self.epoch:
                    self.early.append(msg[2])
            elif tag == "query":
                fn, args = msg[1], msg[2]
                self.results.put(("value", self.wid, fn(self.w, *args)))
            elif tag == "stop":
                self.results.put(("value", self.wid, self.w.stats))
                return

    def run_phase(self):
        w, ph, epoch, k = self.w, self.phase, self.epoch, self.k
        q = w.queue
        holder = self.wid == 0
        token = None
        token_out = declared = aborted = False
        try:
            ph.start(w)
        except Detected as found:
            self.results.put(("found", epoch, self.wid, found.payload))
            aborted = True
            q.clear()
        w.flush(FlushReason.EXPLICIT)
        for item in self.early:
            if isinstance(item, list):
                w.receive(item)
            else:
                holder, token = True, item
        self.early = []
        handle = ph.handle
        while True:
            n = 0
            if not aborted:
                try:
                    while q and n < self.poll:
                        state, meta = q.popleft()
                        handle(w, state, meta)
                        n += 1
                except Detected as found:
                    self.results.put(("found", epoch, self.wid, found.payload))
                    aborted = True
                    q.clear()
            idle = not q
            if idle and not aborted:
                w.flush(FlushReason.IDLE)
                if holder and not declared:
                    if self.wid == 0:
                        if token_out and w.safra.decide(token) is Status.QUIESCENT:
                            declared = True
                            self.results.put(("quiescent", epoch))
                        else:
                            token = w.safra.initiate()
                            token_out = True
                            if k == 1:
                                if w.safra.decide(token) is Status.QUIESCENT:
                                    declared = True
                                    self.results.put(("quiescent", epoch))
                            else:
                                holder = False
                                self.inboxes[1].put(("T", epoch, token))
                    else:
                        holder = False
                        token = w.safra.forward(token)
                        self.inboxes[w.safra.next].put(("T", epoch, token))
            while True:
                try:
                    msg = self.inbox.get() if idle else self.inbox.get_nowait()
                except queue_mod.Empty:
                    break
                idle = False
                tag = msg[0]
                if tag == "B":
                    if msg[1] == epoch and not aborted:
                        w.receive(msg[2])
                elif tag == "T":
                    if msg[1] == epoch:
                        holder, token = True, msg[2]
                elif tag == "finish":
                    self.results.put(("value", self.wid, ph.finish(w)))
                    return
                elif tag == "abort":
                    # stale batches are dropped by their epoch on arrival
                    w.flush(FlushReason.EXPLICIT)
                    q.clear()
                    self.results.put(("aborted", self.wid, epoch))
                    return


class ParallelDriver:
    def __init__(self, source, config: EngineConfig, partition):
        self.k = config.workers
        ctx = mp.get_context("fork")
        self.inboxes = [ctx.Queue() for _ in range(self.k)]
        self.results = ctx.Queue()
        self.epoch = 0
        self.procs = [
            ctx.Process(target=_worker_main,
                        args=(i, source, config, partition, self.inboxes, self.results),
                        daemon=True)
            for i in range(self.k)
        ]
        for p in self.procs:
            p.start()
        self.closed = False
        # barrier: every worker constructed before any computation
        ready = self._collect("ready", self.k)
        assert sorted(m[1] for m in ready) == list(range(self.k))

    def _get(self):
        while True:
            try:
                msg = self.results.get(timeout=_RESULT_TIMEOUT)
            except queue_mod.Empty:
                dead = [p.pid for p in self.procs if not p.is_alive()]
                if dead:
                    self.close()
                    raise WorkerFailure(f"worker processes died: {dead}")
                continue
            if msg[0] == "error":
                self.close()
                raise WorkerFailure(f"worker {msg[1]} failed:\n{msg[2]}")
            return msg

    def _collect(self, tag, count, epoch=None):
        got = []
        while len(got) < count:
            msg = self._get()
            if msg[0] == tag and (epoch is None or msg[-1] == epoch):
                got.append(msg)
        return got

    def _broadcast(self, msg):
        for box in self.inboxes:
            box.put(msg)

    def phase(self, ph) -> list:
        self.epoch += 1
        epoch = self.epoch
        self._broadcast(("prepare", epoch, ph))
        self._collect("ack", self.k, epoch)
        self._broadcast(("run", epoch))
        while True:
            msg = self._get()
            if msg[0] == "quiescent" and msg[1] == epoch:
                self._broadcast(("finish", epoch))
                values = self._collect("value", self.k)
                return [v for _, _, v in sorted(values, key=lambda m: m[1])]
            if msg[0] == "found" and msg[1] == epoch:
                self._broadcast(("abort", epoch))
                self._collect("aborted", self.k, epoch)
                raise Detected(msg[3])

    def query(self, fn, *args) -> list:
        self._broadcast(("query", fn, args))
        values = self._collect("value", self.k)
        return [v for _, _, v in sorted(values, key=lambda m: m[1])]

    def worker_stats(self) -> list:
        self._broadcast(("stop",))
        values = self._collect("value", self.k)
        self._join()
        return [v for _, _, v in sorted(values, key=lambda m: m[1])]

    def _join(self):
        for p in self.procs:
            p.join(timeout=5)
        self.closed = True

    def close(self):
        if self.closed:
            return
        for p in self.procs:
            if p.is_alive():
                p.terminate()
        for p in self.procs:
            p.join(timeout=5)
        self.closed = True
