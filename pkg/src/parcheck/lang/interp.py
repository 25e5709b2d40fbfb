"""State layout and compiled successor generation for parsed models.

Expressions and transition relations are translated to Python source and
compiled once per model, so successor enumeration runs as straight-line
code over ``struct``-decoded descriptors.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Callable

from parcheck.lang.ast import Binary, Lit, Model, Unary, Var, variables_of
from parcheck.lang.parser import UndeclaredIdentifier, type_of

_FORMAT = {1: "B", 2: "H", 4: "I"}


def field_width(lo: int, hi: int) -> int:
    span = hi - lo
    if span < 1 << 8:
        return 1
    if span < 1 << 16:
        return 2
    return 4


@dataclass(frozen=True)
class Field:
    name: str
    offset: int
    width: int
    lo: int
    hi: int


@dataclass(frozen=True)
class Layout:
    """Variables first (value minus lower bound, little-endian), then one byte per process."""

    variables: tuple
    locations: tuple  # (process name, location names)
    size: int

    @classmethod
    def of(cls, model: Model) -> "Layout":
        fields = []
        offset = 0
        for v in model.variables:
            w = field_width(v.lo, v.hi)
            fields.append(Field(v.name, offset, w, v.lo, v.hi))
            offset += w
        locs = tuple((p.name, p.locations) for p in model.processes)
        return cls(tuple(fields), locs, offset + len(locs))

    @property
    def struct_format(self) -> str:
        return "<" + "".join(_FORMAT[f.width] for f in self.variables) + "B" * len(self.locations)

    def index(self, name: str) -> int:
        for i, f in enumerate(self.variables):
            if f.name == name:
                return i
        raise KeyError(name)

    def encode(self, values, locations) -> bytes:
        raw = [v - f.lo for v, f in zip(values, self.variables)]
        return struct.pack(self.struct_format, *raw, *locations)

    def decode(self, d: bytes) -> tuple:
        raw = struct.unpack(self.struct_format, d)
        nv = len(self.variables)
        values = tuple(r + f.lo for r, f in zip(raw[:nv], self.variables))
        return values, tuple(raw[nv:])


@dataclass(frozen=True)
class ModelErrorMarker:
    """Stands in for a successor whose effect left a variable's domain."""

    process: str
    transition: int
    src: str
    dst: str
    variable: str
    value: int
    lo: int
    hi: int
    state: bytes

    def __str__(self):
        return (f"process {self.process} transition #{self.transition} ({self.src} -> {self.dst}) "
                f"assigns {self.variable} := {self.value}, outside {self.lo}..{self.hi}")


_PY_OPS = {"&&": "and", "||": "or", "==": "==", "!=": "!=", "<": "<", "<=": "<=",
           ">": ">", ">=": ">=", "+": "+", "-": "-", "*": "*"}


def expr_to_python(e, names: dict) -> str:
    """Python source for ``e``; ``names`` maps model variables to local names."""
    if isinstance(e, Lit):
        return repr(e.value)
    if isinstance(e, Var):
        return names[e.name]
    if isinstance(e, Unary):
        inner = expr_to_python(e.operand, names)
        return f"(not {inner})" if e.op == "!" else f"(-{inner})"
    return f"({expr_to_python(e.left, names)} {_PY_OPS[e.op]} {expr_to_python(e.right, names)})"


def _decode_prelude(layout: Layout, used=None) -> tuple:
    """Lines unpacking a descriptor ``d`` into locals ``v<i>`` and ``l<j>``."""
    nv = len(layout.variables)
    raw = [f"r{i}" for i in range(nv)] + [f"l{j}" for j in range(len(layout.locations))]
    lines = []
    if raw:
        target = ", ".join(raw) + ("," if len(raw) == 1 else "")
        lines.append(f"{target} = _unpack(d)")
    names = {}
    for i, f in enumerate(layout.variables):
        names[f.name] = f"v{i}"
        if used is None or f.name in used:
            lines.append(f"v{i} = r{i} + {f.lo}" if f.lo else f"v{i} = r{i}")
    return lines, names


class ModelSource:
    """Graph source of a model's system (no acceptance)."""

    weak = False
    may_error = True

    def __init__(self, model: Model):
        self.model = model
        self.layout = Layout.of(model)
        self.descriptor_len = self.layout.size
        self._unpack = struct.Struct(self.layout.struct_format).unpack
        self._pack = struct.Struct(self.layout.struct_format).pack
        self._declared = {v.name: (v.lo, v.hi) for v in model.variables}
        self._initial = self.layout.encode(
            [v.init for v in model.variables],
            [p.locations.index(p.init) for p in model.processes],
        )
        self._succ = self._compile_successors()
        self._predicates: dict = {}

    def _namespace(self) -> dict:
        return {"_unpack": self._unpack, "_pack": self._pack,
                "_Marker": ModelErrorMarker}

    def _compile_successors(self) -> Callable:
        layout = self.layout
        nv = len(layout.variables)
        pre, names = _decode_prelude(layout)
        body = ["def _successors(d):"] + ["    " + ln for ln in pre] + ["    out = []"]
        for pi, proc in enumerate(self.model.processes):
            by_loc: dict = {}
            for ti, t in enumerate(proc.transitions):
                by_loc.setdefault(proc.locations.index(t.src), []).append((ti, t))
            for li, trans in sorted(by_loc.items()):
                body.append(f"    if l{pi} == {li}:")
                for ti, t in trans:
                    body.append(f"        if {expr_to_python(t.guard, names)}:")
                    ind = "            "
                    fields = [f"r{i}" for i in range(nv)] + [f"l{j}" for j in range(len(layout.locations))]
                    fields[nv + pi] = str(proc.locations.index(t.dst))
                    assigned = []
                    for name, value in t.effects:
                        i = layout.index(name)
                        body.append(f"{ind}n{i} = {expr_to_python(value, names)}")
                        assigned.append((i, layout.variables[i]))
                    for i, f in assigned:
                        fields[i] = f"n{i} - {f.lo}" if f.lo else f"n{i}"
                    packed = f"out.append(_pack({', '.join(fields)}))"
                    if assigned:
                        body.extend(self._marker_block(ind, assigned, proc, ti, t))
                        body.append(f"{ind}else:")
                        body.append(f"{ind}    {packed}")
                    else:
                        body.append(f"{ind}{packed}")
        body.append("    return out")
        ns = self._namespace()
        exec(compile("\n".join(body), f"<model successors>", "exec"), ns)
        self.source_code = "\n".join(body)
        return ns["_successors"]

    @staticmethod
    def _marker_block(ind, assigned, proc, ti, t) -> list:
        # first offending assignment in declaration order wins
        cond = " or ".join(f"not {f.lo} <= n{i} <= {f.hi}" for i, f in assigned)
        lines = [f"{ind}if {cond}:"]
        for k, (i, f) in enumerate(assigned):
            kw = "if" if k == 0 else "elif"
            lines.append(f"{ind}    {kw} not {f.lo} <= n{i} <= {f.hi}:")
            lines.append(
                f"{ind}        out.append(_Marker({proc.name!r}, {ti}, {t.src!r}, "
                f"{t.dst!r}, {f.name!r}, n{i}, {f.lo}, {f.hi}, d))")
        return lines

    # GraphSource
    def initial(self) -> bytes:
        return self._initial

    def successors(self, state: bytes) -> list:
        return self._succ(state)

    def is_accepting(self, state: bytes) -> bool:
        return False

    def has_accepting(self) -> bool:
        return False

    def compile_predicate(self, expr) -> Callable[[bytes], bool]:
        """Compile a boolean expression to a function of a system descriptor."""
        key = id(expr)
        hit = self._predicates.get(key)
        if hit is not None and hit[0] is expr:
            return hit[1]
        for name in sorted(variables_of(expr)):
            if name not in self._declared:
                line, col = getattr(expr, "pos", (0, 0))
                raise UndeclaredIdentifier(name, line, col)
        type_of(expr, self._declared)
        used = variables_of(expr)
        pre, names = _decode_prelude(self.layout, used)
        if not used:
            pre = []
        src = "\n".join(["def _pred(d):"] + ["    " + ln for ln in pre]
                        + [f"    return {expr_to_python(expr, names)}"])
        ns = self._namespace()
        exec(compile(src, "<model predicate>", "exec"), ns)
        fn = ns["_pred"]
        self._predicates[key] = (expr, fn)
        return fn

    def describe(self, state: bytes) -> dict:
        values, locs = self.layout.decode(state)
        out = {f.name: v for f, v in zip(self.layout.variables, values)}
        for (pname, names), li in zip(self.layout.locations, locs):
            out[pname] = names[li]
        return out


def initial_state(m: Model) -> bytes:
    return ModelSource(m).initial()


def successors(m, s: bytes) -> list:
    """Successor list of ``s``; ``m`` is a Model or an already built ModelSource."""
    src = m if isinstance(m, ModelSource) else ModelSource(m)
    return src.successors(s)


def evaluate(e, s: bytes, layout: Layout):
    """Value (int or bool) of ``e`` in the state encoded by ``s``."""
    used = variables_of(e)
    names = {f.name: f"v{i}" for i, f in enumerate(layout.variables)}
    for name in used:
        if name not in names:
            raise UndeclaredIdentifier(name, *getattr(e, "pos", (0, 0)))
    values, _ = layout.decode(s)
    env = {f"v{i}": v for i, v in enumerate(values)}
    return eval(compile(expr_to_python(e, names), "<expr>", "eval"), {"__builtins__": {}}, env)
