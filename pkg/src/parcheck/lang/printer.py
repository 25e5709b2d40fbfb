"""Canonical pretty-printer; ``parse_model(format_model(m)) == m``."""
from __future__ import annotations

from parcheck.lang.ast import Binary, Lit, Model, Unary, Var

_LEVEL = {"||": 1, "&&": 2, "==": 4, "!=": 4, "<": 4, "<=": 4, ">": 4, ">=": 4,
          "+": 5, "-": 5, "*": 6}
_NOT, _NEG, _ATOM = 3, 7, 8


def _level(e) -> int:
    if isinstance(e, Binary):
        return _LEVEL[e.op]
    if isinstance(e, Unary):
        return _NOT if e.op == "!" else _NEG
    return _ATOM


def format_expr(e, need: int = 0) -> str:
    if isinstance(e, Lit):
        if isinstance(e.value, bool):
            text = "true" if e.value else "false"
        else:
            text = str(e.value)
    elif isinstance(e, Var):
        text = e.name
    elif isinstance(e, Unary):
        # "!" binds looser than comparisons; parenthesise for readability anyway
        need_inner = _ATOM if (e.op == "!" and isinstance(e.operand, Binary)) else _level(e)
        text = e.op + format_expr(e.operand, need_inner)
    else:
        lv = _LEVEL[e.op]
        left_need = lv + 1 if lv == 4 else lv
        text = f"{format_expr(e.left, left_need)} {e.op} {format_expr(e.right, lv + 1)}"
    return f"({text})" if _level(e) < need else text


def format_model(m: Model) -> str:
    lines = []
    for v in m.variables:
        lines.append(f"var {v.name} : {v.lo} .. {v.hi} init {v.init};")
    if m.variables:
        lines.append("")
    for p in m.processes:
        lines.append(f"process {p.name} {{")
        lines.append(f"  locations {' '.join(p.locations)};")
        lines.append(f"  init {p.init};")
        for t in p.transitions:
            text = f"  {t.src} -> {t.dst} [{format_expr(t.guard)}]"
            if t.effects:
                text += " / " + ", ".join(f"{name} := {format_expr(e)}" for name, e in t.effects)
            lines.append(text + ";")
        lines.append("}")
        lines.append("")
    prop = m.property
    lines.append("property {")
    lines.append(f"  states {prop.q_count};")
    lines.append(f"  init {prop.q_init};")
    acc = " ".join(str(q) for q in sorted(prop.q_accepting))
    lines.append(f"  accepting {acc};" if acc else "  accepting;")
    for src, guard, dst in prop.transitions:
        lines.append(f"  {src} -> {dst} [{format_expr(guard)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
