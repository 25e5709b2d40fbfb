"""Property Büchi automata, weakness classification and the product source."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from parcheck.scc import strongly_connected_components

# Property state field appended to every product descriptor.
QSTATE_WIDTH = 4


class WeaknessClass(enum.Enum):
    WEAK = "WEAK"
    GENERAL = "GENERAL"


@dataclass(frozen=True)
class PropertyAutomaton:
    q_count: int
    q_init: int
    q_accepting: frozenset
    transitions: tuple  # (q_from, guard Expr, q_to)

    def __post_init__(self):
        if self.q_count < 1:
            raise ValueError("property automaton needs at least one state")
        if not 0 <= self.q_init < self.q_count:
            raise ValueError(f"property init {self.q_init} out of range")
        for q in self.q_accepting:
            if not 0 <= q < self.q_count:
                raise ValueError(f"accepting property state {q} out of range")
        for src, _, dst in self.transitions:
            if not (0 <= src < self.q_count and 0 <= dst < self.q_count):
                raise ValueError(f"property transition {src} -> {dst} out of range")

    def successors(self, q: int) -> list:
        return [dst for src, _, dst in self.transitions if src == q]


def classify_weak(p: PropertyAutomaton) -> WeaknessClass:
    """WEAK iff no SCC of the transition graph mixes acceptance."""
    states = range(p.q_count)
    for comp in strongly_connected_components(states, p.successors):
        if len({q in p.q_accepting for q in comp}) > 1:
            return WeaknessClass.GENERAL
    return WeaknessClass.WEAK


class ProductSource:
    """Synchronous product of a model's system graph with a property automaton.

    A product step (s, q) -> (s', q') needs s -> s' in the system and a
    property transition (q, g, q') whose guard g holds in the source state s.
    """

    may_error = True

    def __init__(self, sys, prop: PropertyAutomaton):
        self.sys = sys
        self.prop = prop
        self.descriptor_len = sys.descriptor_len + QSTATE_WIDTH
        self.weak = classify_weak(prop) is WeaknessClass.WEAK
        self._qenc = [q.to_bytes(QSTATE_WIDTH, "little") for q in range(prop.q_count)]
        self._qdec = {b: q for q, b in enumerate(self._qenc)}
        # compile raises on undeclared variables
        compiled = [(src, sys.compile_predicate(guard), dst) for src, guard, dst in prop.transitions]
        self._moves = [[(g, self._qenc[dst]) for src, g, dst in compiled if src == q]
                       for q in range(prop.q_count)]
        self._acc = frozenset(self._qenc[q] for q in prop.q_accepting)
        self._split = sys.descriptor_len

    def initial(self) -> bytes:
        return self.sys.initial() + self._qenc[self.prop.q_init]

    def successors(self, state: bytes):
        k = self._split
        s = state[:k]
        targets = [qb for g, qb in self._moves[self._qdec[state[k:]]] if g(s)]
        out = []
        for s2 in self.sys.successors(s):
            if type(s2) is not bytes:
                out.append(s2)
                continue
            for qb in targets:
                out.append(s2 + qb)
        return out

    def is_accepting(self, state: bytes) -> bool:
        return state[self._split:] in self._acc

    def has_accepting(self) -> bool:
        return bool(self.prop.q_accepting)

    def split(self, state: bytes) -> tuple:
        return state[: self._split], self._qdec[state[self._split:]]

    def describe(self, state: bytes) -> dict:
        s, q = self.split(state)
        out = self.sys.describe(s)
        out["property"] = q
        return out


def product(sys, p: PropertyAutomaton) -> ProductSource:
    return ProductSource(sys, p)
