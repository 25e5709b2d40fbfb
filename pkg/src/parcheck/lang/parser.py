"""Recursive-descent parser and static checker for model files."""
from __future__ import annotations

import re
from dataclasses import dataclass

from parcheck.automaton import PropertyAutomaton
from parcheck.lang.ast import (
    ARITH_OPS,
    COMPARE_OPS,
    Binary,
    Lit,
    Model,
    Process,
    Transition,
    Unary,
    Var,
    VarDecl,
)

MAX_LOCATIONS = 256
KEYWORDS = {"var", "init", "process", "locations", "property", "states", "accepting", "true", "false"}


class ModelError(ValueError):
    """Base class for rejected model sources."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        self.detail = message
        super().__init__(f"line {line}, col {col}: {message}" if line else message)


class ModelSyntaxError(ModelError):
    pass


class UndeclaredIdentifier(ModelError):
    def __init__(self, name: str, line: int = 0, col: int = 0, kind: str = "variable"):
        self.name = name
        super().__init__(f"undeclared {kind} {name!r}", line, col)


class DuplicateDeclaration(ModelError):
    def __init__(self, name: str, line: int = 0, col: int = 0):
        self.name = name
        super().__init__(f"duplicate declaration of {name!r}", line, col)


class DomainError(ModelError):
    pass


class ModelTypeError(ModelError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>\.\.|->|:=|==|!=|<=|>=|&&|\|\||[:;{}\[\]/,()+\-*<>!])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "kw", "op", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ModelSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "name":
            word = m.group()
            tokens.append(Token("kw" if word in KEYWORDS else "name", word, line, col))
        elif kind in ("int", "op"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ModelSyntaxError(message, tok.line, tok.col)

    def at(self, text) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def expect(self, text) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def name(self) -> Token:
        if self.tok.kind != "name":
            raise self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def integer(self, signed=False) -> int:
        sign = 1
        if signed and self.at("-"):
            self.advance()
            sign = -1
        if self.tok.kind != "int":
            raise self.error(f"expected an integer, found {self.tok.text or 'end of input'!r}")
        return sign * int(self.advance().text)

    # grammar
    def model(self):
        variables = []
        while self.at("var"):
            variables.append(self.var())
        processes = []
        while self.at("process"):
            processes.append(self.process())
        if not processes:
            raise self.error("expected at least one process")
        prop = self.property()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r} after property section")
        return variables, processes, prop

    def var(self):
        self.expect("var")
        name = self.name()
        self.expect(":")
        lo = self.integer(signed=True)
        self.expect("..")
        hi = self.integer(signed=True)
        self.expect("init")
        init_tok = self.tok
        init = self.integer(signed=True)
        self.expect(";")
        return name, lo, hi, init, init_tok

    def process(self):
        self.expect("process")
        name = self.name()
        self.expect("{")
        self.expect("locations")
        locations = [self.name()]
        while self.tok.kind == "name":
            locations.append(self.name())
        self.expect(";")
        self.expect("init")
        init = self.name()
        self.expect(";")
        transitions = []
        while not self.at("}"):
            transitions.append(self.transition())
        self.expect("}")
        return name, locations, init, transitions

    def transition(self):
        src = self.name()
        self.expect("->")
        dst = self.name()
        self.expect("[")
        guard = self.expr()
        self.expect("]")
        effects = []
        if self.at("/"):
            self.advance()
            while True:
                target = self.name()
                self.expect(":=")
                effects.append((target, self.expr()))
                if not self.at(","):
                    break
                self.advance()
        self.expect(";")
        return src, dst, guard, effects

    def property(self):
        self.expect("property")
        self.expect("{")
        self.expect("states")
        count_tok = self.tok
        count = self.integer()
        self.expect(";")
        self.expect("init")
        init_tok = self.tok
        init = self.integer()
        self.expect(";")
        self.expect("accepting")
        accepting = []
        while self.tok.kind == "int":
            accepting.append((self.tok, self.integer()))
        self.expect(";")
        transitions = []
        while not self.at("}"):
            src_tok = self.tok
            src = self.integer()
            self.expect("->")
            dst_tok = self.tok
            dst = self.integer()
            self.expect("[")
            guard = self.expr()
            self.expect("]")
            self.expect(";")
            transitions.append((src_tok, src, guard, dst_tok, dst))
        self.expect("}")
        return count_tok, count, init_tok, init, accepting, transitions

    def expr(self):
        return self.disjunction()

    def _binary_chain(self, ops, operand):
        left = operand()
        while self.tok.kind == "op" and self.tok.text in ops:
            t = self.advance()
            left = Binary(t.text, left, operand(), (t.line, t.col))
        return left

    def disjunction(self):
        return self._binary_chain(("||",), self.conjunction)

    def conjunction(self):
        return self._binary_chain(("&&",), self.negation)

    def negation(self):
        if self.at("!"):
            t = self.advance()
            return Unary("!", self.negation(), (t.line, t.col))
        return self.comparison()

    def comparison(self):
        left = self.additive()
        if self.tok.kind == "op" and self.tok.text in COMPARE_OPS:
            t = self.advance()
            left = Binary(t.text, left, self.additive(), (t.line, t.col))
            if self.tok.kind == "op" and self.tok.text in COMPARE_OPS:
                raise self.error("comparisons do not chain; add parentheses")
        return left

    def additive(self):
        return self._binary_chain(("+", "-"), self.multiplicative)

    def multiplicative(self):
        return self._binary_chain(("*",), self.unary)

    def unary(self):
        if self.at("-"):
            t = self.advance()
            return Unary("-", self.unary(), (t.line, t.col))
        return self.atom()

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return Lit(int(t.text), (t.line, t.col))
        if t.kind == "kw" and t.text in ("true", "false"):
            self.advance()
            return Lit(t.text == "true", (t.line, t.col))
        if t.kind == "name":
            self.advance()
            return Var(t.text, (t.line, t.col))
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("/"):
            raise self.error("division is not part of the language")
        raise self.error(f"expected an expression, found {t.text or 'end of input'!r}")


def type_of(e, declared) -> str:
    """Return "int" or "bool", raising on ill-typed or undeclared uses."""
    if isinstance(e, Lit):
        return "bool" if isinstance(e.value, bool) else "int"
    if isinstance(e, Var):
        if e.name not in declared:
            raise UndeclaredIdentifier(e.name, *e.pos)
        return "int"
    if isinstance(e, Unary):
        inner = type_of(e.operand, declared)
        want = "bool" if e.op == "!" else "int"
        if inner != want:
            raise ModelTypeError(f"operator {e.op!r} needs a {want} operand", *e.pos)
        return want
    lt = type_of(e.left, declared)
    rt = type_of(e.right, declared)
    if e.op in ARITH_OPS:
        if lt != "int" or rt != "int":
            raise ModelTypeError(f"operator {e.op!r} needs integer operands", *e.pos)
        return "int"
    if e.op in ("==", "!="):
        if lt != rt:
            raise ModelTypeError(f"operator {e.op!r} compares {lt} with {rt}", *e.pos)
        return "bool"
    if e.op in COMPARE_OPS:
        if lt != "int" or rt != "int":
            raise ModelTypeError(f"operator {e.op!r} needs integer operands", *e.pos)
        return "bool"
    if lt != "bool" or rt != "bool":
        raise ModelTypeError(f"operator {e.op!r} needs boolean operands", *e.pos)
    return "bool"


def _expect_type(e, declared, want, what):
    got = type_of(e, declared)
    if got != want:
        line, col = getattr(e, "pos", (0, 0))
        raise ModelTypeError(f"{what} must be {want}, not {got}", line, col)


def parse_model(text: str) -> Model:
    """Parse and statically check a model source."""
    raw_vars, raw_procs, raw_prop = _Parser(text).model()

    variables = []
    declared: dict = {}
    for name_tok, lo, hi, init, init_tok in raw_vars:
        name = name_tok.text
        if name in declared:
            raise DuplicateDeclaration(name, name_tok.line, name_tok.col)
        if lo > hi:
            raise DomainError(f"empty domain {lo}..{hi} for {name!r}", name_tok.line, name_tok.col)
        if hi - lo >= 1 << 32:
            raise DomainError(f"domain of {name!r} does not fit in 4 bytes", name_tok.line, name_tok.col)
        if not lo <= init <= hi:
            raise DomainError(f"initial value {init} of {name!r} outside {lo}..{hi}",
                              init_tok.line, init_tok.col)
        declared[name] = (lo, hi)
        variables.append(VarDecl(name, lo, hi, init))

    processes = []
    proc_names = set()
    for name_tok, loc_toks, init_tok, raw_trans in raw_procs:
        if name_tok.text in proc_names:
            raise DuplicateDeclaration(name_tok.text, name_tok.line, name_tok.col)
        proc_names.add(name_tok.text)
        locations = []
        for t in loc_toks:
            if t.text in locations:
                raise DuplicateDeclaration(t.text, t.line, t.col)
            locations.append(t.text)
        if len(locations) > MAX_LOCATIONS:
            raise DomainError(f"process {name_tok.text!r} has more than {MAX_LOCATIONS} locations",
                              name_tok.line, name_tok.col)
        if init_tok.text not in locations:
            raise UndeclaredIdentifier(init_tok.text, init_tok.line, init_tok.col, "location")
        transitions = []
        for src, dst, guard, effects in raw_trans:
            for t in (src, dst):
                if t.text not in locations:
                    raise UndeclaredIdentifier(t.text, t.line, t.col, "location")
            _expect_type(guard, declared, "bool", "guard")
            targets = set()
            checked = []
            for target, value in effects:
                if target.text not in declared:
                    raise UndeclaredIdentifier(target.text, target.line, target.col)
                if target.text in targets:
                    raise DuplicateDeclaration(target.text, target.line, target.col)
                targets.add(target.text)
                _expect_type(value, declared, "int", "assigned value")
                checked.append((target.text, value))
            transitions.append(Transition(src.text, dst.text, guard, tuple(checked)))
        processes.append(Process(name_tok.text, tuple(locations), init_tok.text, tuple(transitions)))

    return Model(tuple(variables), tuple(processes), _check_property(raw_prop, declared))


def _check_property(raw_prop, declared) -> PropertyAutomaton:
    count_tok, count, init_tok, q_init, accepting, raw_ptrans = raw_prop
    if count < 1:
        raise DomainError("property needs at least one state", count_tok.line, count_tok.col)
    if q_init >= count:
        raise DomainError(f"property init {q_init} out of range", init_tok.line, init_tok.col)
    for tok, q in accepting:
        if q >= count:
            raise DomainError(f"accepting property state {q} out of range", tok.line, tok.col)
    ptrans = []
    for src_tok, src, guard, dst_tok, dst in raw_ptrans:
        for tok, q in ((src_tok, src), (dst_tok, dst)):
            if q >= count:
                raise DomainError(f"property state {q} out of range", tok.line, tok.col)
        _expect_type(guard, declared, "bool", "property guard")
        ptrans.append((src, guard, dst))
    return PropertyAutomaton(count, q_init, frozenset(q for _, q in accepting), tuple(ptrans))


def parse_property(text: str, model: Model) -> PropertyAutomaton:
    """Parse a stand-alone ``property { ... }`` section against ``model``'s variables."""
    p = _Parser(text)
    raw = p.property()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after property section")
    return _check_property(raw, {v.name: (v.lo, v.hi) for v in model.variables})


def parse_expression(text: str, model: Model, want: str = "bool") -> Expr:
    """Parse a stand-alone expression and type-check it against ``model``."""
    p = _Parser(text)
    e = p.expr()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after expression")
    _expect_type(e, {v.name: (v.lo, v.hi) for v in model.variables}, want, "expression")
    return e
