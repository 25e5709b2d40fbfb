"""Syntax tree of the guarded-command modelling language."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from parcheck.automaton import PropertyAutomaton

ARITH_OPS = ("+", "-", "*")
COMPARE_OPS = ("==", "!=", "<", "<=", ">", ">=")
LOGIC_OPS = ("&&", "||")


@dataclass(frozen=True)
class Lit:
    value: Union[int, bool]
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Unary:
    op: str  # "!" or "-"
    operand: "Expr"
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    pos: tuple = field(default=(0, 0), compare=False, repr=False)


Expr = Union[Lit, Var, Unary, Binary]


def variables_of(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Unary):
        return variables_of(e.operand)
    if isinstance(e, Binary):
        return variables_of(e.left) | variables_of(e.right)
    return set()


@dataclass(frozen=True)
class VarDecl:
    name: str
    lo: int
    hi: int
    init: int


@dataclass(frozen=True)
class Transition:
    src: str
    dst: str
    guard: Expr
    effects: tuple = ()  # (variable name, Expr); assignments are simultaneous


@dataclass(frozen=True)
class Process:
    name: str
    locations: tuple
    init: str
    transitions: tuple = ()


@dataclass(frozen=True)
class Model:
    variables: tuple
    processes: tuple
    property: PropertyAutomaton

    def variable(self, name: str) -> VarDecl:
        for v in self.variables:
            if v.name == name:
                return v
        raise KeyError(name)
