"""Explicit Büchi graphs, the graph-source interface and the random generator."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Protocol, Sequence, runtime_checkable

# Explicit-graph states are encoded as 4-byte little-endian indices.
INDEX_WIDTH = 4


@runtime_checkable
class GraphSource(Protocol):
    """What every engine and algorithm needs from a graph.

    ``successors`` may return :class:`~parcheck.lang.interp.ModelErrorMarker`
    entries in place of descriptors; these are only produced when
    ``may_error`` is true.
    """

    descriptor_len: int
    weak: bool
    may_error: bool

    def initial(self) -> bytes: ...

    def successors(self, state: bytes) -> Sequence[bytes]: ...

    def is_accepting(self, state: bytes) -> bool: ...

    def has_accepting(self) -> bool: ...


class GraphFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def encode_index(i: int) -> bytes:
    return i.to_bytes(INDEX_WIDTH, "little")


def decode_index(d: bytes) -> int:
    return int.from_bytes(d, "little")


@dataclass(frozen=True, eq=True)
class ExplicitGraph:
    n: int
    init: int
    accepting: frozenset
    adjacency: tuple  # tuple of successor tuples, input order kept

    descriptor_len = INDEX_WIDTH
    weak = False
    may_error = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one state")
        if not 0 <= self.init < self.n:
            raise ValueError(f"init {self.init} out of range [0, {self.n})")
        if len(self.adjacency) != self.n:
            raise ValueError("adjacency must have one entry per state")
        for a in self.accepting:
            if not 0 <= a < self.n:
                raise ValueError(f"accepting state {a} out of range")
        for u, succ in enumerate(self.adjacency):
            for v in succ:
                if not 0 <= v < self.n:
                    raise ValueError(f"edge {u} {v}: endpoint out of range")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], accepting=(), init: int = 0):
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u} {v}: endpoint out of range")
            adj[u].append(v)
        return cls(n, init, frozenset(accepting), tuple(tuple(s) for s in adj))

    @property
    def m(self) -> int:
        return sum(len(s) for s in self.adjacency)

    def edges(self):
        for u, succ in enumerate(self.adjacency):
            for v in succ:
                yield u, v

    @cached_property
    def _desc(self) -> list:
        return [encode_index(i) for i in range(self.n)]

    @cached_property
    def _succ(self) -> dict:
        desc = self._desc
        return {desc[u]: [desc[v] for v in succ] for u, succ in enumerate(self.adjacency)}

    @cached_property
    def _acc(self) -> frozenset:
        return frozenset(self._desc[a] for a in self.accepting)

    # GraphSource
    def initial(self) -> bytes:
        return self._desc[self.init]

    def successors(self, state: bytes):
        return self._succ[state]

    def is_accepting(self, state: bytes) -> bool:
        return state in self._acc

    def has_accepting(self) -> bool:
        return bool(self.accepting)

    def describe(self, state: bytes) -> dict:
        return {"state": decode_index(state)}


def load_explicit_graph(text: str) -> ExplicitGraph:
    """Parse the line-oriented graph format (STATES, INIT, ACC, EDGES)."""
    n = init = None
    accepting: list[int] = []
    edges: list[tuple[int, int, int]] = []
    in_edges = False
    seen = set()

    def ints(tokens, lineno):
        try:
            return [int(t) for t in tokens]
        except ValueError:
            raise GraphFormatError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if in_edges:
            if len(tokens) != 2:
                raise GraphFormatError("edge lines hold exactly two indices", lineno)
            u, v = ints(tokens, lineno)
            edges.append((u, v, lineno))
            continue
        if head in seen:
            raise GraphFormatError(f"duplicate {head} section", lineno)
        if head == "STATES":
            if len(tokens) != 2:
                raise GraphFormatError("STATES takes one count", lineno)
            (n,) = ints(tokens[1:], lineno)
            if n < 1:
                raise GraphFormatError("STATES must be at least 1", lineno)
        elif head == "INIT":
            if len(tokens) != 2:
                raise GraphFormatError("INIT takes one index", lineno)
            (init,) = ints(tokens[1:], lineno)
        elif head == "ACC":
            accepting = ints(tokens[1:], lineno)
        elif head == "EDGES":
            if len(tokens) != 1:
                raise GraphFormatError("EDGES stands alone on its line", lineno)
            in_edges = True
        else:
            raise GraphFormatError(f"unknown section {head!r}", lineno)
        seen.add(head)

    if n is None:
        raise GraphFormatError("missing STATES")
    if init is None:
        raise GraphFormatError("missing INIT")
    if not 0 <= init < n:
        raise GraphFormatError(f"INIT {init} out of range [0, {n})")
    for a in accepting:
        if not 0 <= a < n:
            raise GraphFormatError(f"accepting state {a} out of range [0, {n})")
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v, lineno in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"dangling edge endpoint in {u} {v}", lineno)
        adj[u].append(v)
    return ExplicitGraph(n, init, frozenset(accepting), tuple(tuple(s) for s in adj))


def dump_explicit_graph(g: ExplicitGraph) -> str:
    lines = [f"STATES {g.n}", f"INIT {g.init}"]
    lines.append(" ".join(["ACC"] + [str(a) for a in sorted(g.accepting)]))
    lines.append("EDGES")
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


MASK64 = (1 << 64) - 1
XORSHIFT_MULT = 0x2545F4914F6CDD1D
# xorshift has an all-zero fixed point; seed 0 is remapped to this constant.
ZERO_SEED_STATE = 0x9E3779B97F4A7C15


class XorShift64Star:
    """xorshift64* (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D)."""

    def __init__(self, seed: int):
        seed &= MASK64
        self.state = seed if seed else ZERO_SEED_STATE

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * XORSHIFT_MULT) & MASK64

    def next_below(self, bound: int) -> int:
        # plain modulo; the bias is irrelevant for a test corpus
        return self.next_u64() % bound

    def next_unit(self) -> float:
        """Uniform in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) / 9007199254740992.0


def generate_random_graph(n: int, avg_deg: float, p_acc: float, seed: int) -> ExplicitGraph:
    """Random Büchi graph: init 0, ``round(n * avg_deg)`` uniform edges.

    Draw order: one acceptance draw per state (state order), then for each
    edge a source draw followed by a target draw.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if avg_deg < 0 or math.isnan(avg_deg):
        raise ValueError("avg_deg must be non-negative")
    if not 0.0 <= p_acc <= 1.0:
        raise ValueError("p_acc must lie in [0, 1]")
    rng = XorShift64Star(seed)
    accepting = frozenset(i for i in range(n) if rng.next_unit() < p_acc)
    m = int(math.floor(n * avg_deg + 0.5))
    adj: list[list[int]] = [[] for _ in range(n)]
    for _ in range(m):
        u = rng.next_below(n)
        v = rng.next_below(n)
        adj[u].append(v)
    return ExplicitGraph(n, 0, accepting, tuple(tuple(s) for s in adj))
