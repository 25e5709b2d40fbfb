import pytest
from hypothesis import given, strategies as st

from oracles import brute_count, brute_initial, brute_layout_width, brute_successors, tree_eval
from parcheck.algorithms import run
from parcheck.engine import EngineConfig
from parcheck.lang import (
    DomainError,
    DuplicateDeclaration,
    Layout,
    ModelErrorMarker,
    ModelSource,
    ModelSyntaxError,
    ModelTypeError,
    UndeclaredIdentifier,
    evaluate,
    format_expr,
    format_model,
    initial_state,
    parse_expression,
    parse_model,
    parse_property,
    successors,
)
from parcheck.lang.ast import Binary, Lit, Unary, Var

MINIMAL = """
var x : 0..1 init 0;
process p { locations a; init a; }
property { states 1; init 0; accepting 0; 0 -> 0 [true]; }
"""


def model_with(var_decls, body, prop="property { states 1; init 0; accepting; 0 -> 0 [true]; }"):
    return parse_model(f"{var_decls}\nprocess p {{ {body} }}\n{prop}")


def test_minimal_model_has_one_state():
    m = parse_model(MINIMAL)
    src = ModelSource(m)
    assert src.successors(src.initial()) == []
    assert run(src, "reach", EngineConfig(workers=1)).stats.states_visited == 1


def test_undeclared_variable_names_it_and_its_line():
    text = "var x : 0..1 init 0;\nprocess p {\n locations a; init a;\n a -> a [y == 1];\n}\n" \
           "property { states 1; init 0; accepting; 0 -> 0 [true]; }"
    with pytest.raises(UndeclaredIdentifier) as err:
        parse_model(text)
    assert err.value.name == "y"
    assert err.value.line == 4
    assert "'y'" in str(err.value) and "line 4" in str(err.value)


@pytest.mark.parametrize("text, exc", [
    ("var x : 0..1 init 0; var x : 0..1 init 0; process p { locations a; init a; }", DuplicateDeclaration),
    ("var x : 0..1 init 5; process p { locations a; init a; }", DomainError),
    ("var x : 2..1 init 1; process p { locations a; init a; }", DomainError),
    ("var x : 0..1 init 0; process p { locations a; init b; }", UndeclaredIdentifier),
    ("var x : 0..1 init 0; process p { locations a; init a; a -> c [true]; }", UndeclaredIdentifier),
    ("var x : 0..1 init 0; process p { locations a a; init a; }", DuplicateDeclaration),
    ("var x : 0..1 init 0; process p { locations a; init a; a -> a [x]; }", ModelTypeError),
    ("var x : 0..1 init 0; process p { locations a; init a; a -> a [true] / x := x == 1; }", ModelTypeError),
    ("var x : 0..1 init 0; process p { locations a; init a; a -> a [true] / x := 0, x := 1; }",
     DuplicateDeclaration),
    ("var x : 0..1 init 0; process p { locations a; init a; a -> a [x / 2 == 0]; }", ModelSyntaxError),
    ("var x : 0..1 init 0; process p { locations a; init a; a -> a [1 < x < 2]; }", ModelSyntaxError),
    ("var x : 0..1 init 0;", ModelSyntaxError),
])
def test_static_checks(text, exc):
    if "property" not in text:
        text += " property { states 1; init 0; accepting; 0 -> 0 [true]; }"
    with pytest.raises(exc):
        parse_model(text)


def test_syntax_error_position():
    with pytest.raises(ModelSyntaxError) as err:
        parse_model("var x : 0..1 init 0;\nprocess p { locations a; init a;\n  a -> a [x == ] ; }")
    assert err.value.line == 3 and err.value.col > 0


def test_property_errors():
    with pytest.raises(DomainError):
        parse_model(MINIMAL.replace("init 0; accepting 0", "init 3; accepting 0"))
    with pytest.raises(UndeclaredIdentifier):
        parse_model(MINIMAL.replace("0 -> 0 [true]", "0 -> 0 [z == 1]"))


def test_external_property_section():
    m = parse_model(MINIMAL)
    p = parse_property("property { states 2; init 0; accepting 1; 0 -> 1 [x == 0]; 1 -> 1 [true]; }", m)
    assert p.q_count == 2 and p.q_accepting == {1}
    with pytest.raises(UndeclaredIdentifier):
        parse_property("property { states 1; init 0; accepting; 0 -> 0 [q == 0]; }", m)


def test_initial_descriptor_layout():
    m = model_with("var x : 0..255 init 3;", "locations a; init a;")
    assert initial_state(m) == bytes([3, 0])


def test_no_variables_descriptor_is_locations_only():
    m = parse_model("process p { locations a b; init b; } process q { locations c; init c; }"
                    "property { states 1; init 0; accepting; 0 -> 0 [true]; }")
    assert initial_state(m) == bytes([1, 0])


def test_layout_widths_and_offsets():
    m = model_with("var a : 0..255 init 0; var b : 0..256 init 256; var c : -5..70000 init -5;",
                   "locations l; init l;")
    lay = Layout.of(m)
    assert [f.width for f in lay.variables] == [1, 2, 4]
    assert lay.size == 1 + 2 + 4 + 1
    # stored value is the offset from the lower bound
    assert initial_state(m) == bytes([0]) + (256).to_bytes(2, "little") + (0).to_bytes(4, "little") + b"\0"
    assert lay.decode(initial_state(m)) == ((0, 256, -5), (0,))


def test_initial_deterministic():
    text = open("corpus/token_ring.model").read()
    assert initial_state(parse_model(text)) == initial_state(parse_model(text))


def test_token_ring_descriptor_length():
    m = parse_model(open("corpus/token_ring.model").read())
    widths = sum(brute_layout_width(v.lo, v.hi) for v in m.variables) + len(m.processes)
    assert len(initial_state(m)) == widths == 5


def test_deadlock_state_has_no_successors():
    m = model_with("var x : 0..1 init 0;", "locations a; init a; a -> a [x == 1];")
    assert successors(m, initial_state(m)) == []


def test_successor_order_is_declaration_order():
    m = model_with("var x : 0..3 init 0;",
                   "locations a; init a; a -> a [true] / x := 2; a -> a [true] / x := 1;")
    assert successors(m, initial_state(m)) == [bytes([2, 0]), bytes([1, 0])]


def test_process_order_then_transition_order():
    m = parse_model("var x : 0..9 init 0;"
                    "process p { locations a; init a; a -> a [true] / x := 1; a -> a [true] / x := 2; }"
                    "process q { locations a; init a; a -> a [true] / x := 3; }"
                    "property { states 1; init 0; accepting; 0 -> 0 [true]; }")
    assert [s[0] for s in successors(m, initial_state(m))] == [1, 2, 3]


def test_duplicates_not_removed():
    m = model_with("var x : 0..1 init 0;", "locations a; init a; a -> a [true]; a -> a [true];")
    assert successors(m, initial_state(m)) == [initial_state(m)] * 2


def test_simultaneous_effects():
    m = model_with("var x : 0..9 init 1; var y : 0..9 init 2;",
                   "locations a; init a; a -> a [true] / x := y, y := x;")
    assert successors(m, initial_state(m)) == [bytes([2, 1, 0])]


def test_domain_violation_marker():
    m = model_with("var x : 0..3 init 3;", "locations a; init a; a -> a [true] / x := x + 1;")
    (marker,) = successors(m, initial_state(m))
    assert isinstance(marker, ModelErrorMarker)
    assert (marker.variable, marker.value, marker.lo, marker.hi) == ("x", 4, 0, 3)
    assert "x := 4" in str(marker)


def test_model_error_verdict_with_trace():
    m = model_with("var x : 0..3 init 0;", "locations a; init a; a -> a [true] / x := x + 1;")
    src = ModelSource(m)
    for alg in ("reach",):
        v = run(src, alg, EngineConfig(workers=2))
        assert v.result.value == "MODEL_ERROR"
        assert [s[0] for s in v.trace] == [0, 1, 2, 3]
        assert v.error.variable == "x"


@pytest.mark.parametrize("text, value", [
    ("1+2*3", 7), ("(1+2)*3", 9), ("-2*-3", 6), ("1-2-3", -4), ("!(1 < 0)", True),
    ("true || false && false", True), ("2*3 == 6 && !false", True),
])
def test_eval_constants(text, value):
    m = model_with("var x : 0..1 init 1; var y : -3..3 init 0;", "locations a; init a;")
    want = "bool" if isinstance(value, bool) else "int"
    e = parse_expression(text, m, want)
    assert evaluate(e, initial_state(m), Layout.of(m)) == value


def test_eval_with_variables():
    m = model_with("var x : 0..1 init 1; var y : -3..3 init 0;", "locations a; init a;")
    e = parse_expression("x==1 && !(y<0)", m)
    assert evaluate(e, initial_state(m), Layout.of(m)) is True


def test_intermediate_values_unbounded():
    m = model_with("var x : 0..1 init 1;", "locations a; init a; a -> a [x * 1000 - 999 == 1] / x := 0;")
    assert successors(m, initial_state(m)) == [bytes([0, 0])]


# expressions over x in 0..5 and y in -3..3
_ATOM = st.one_of(st.integers(0, 9).map(Lit), st.sampled_from([Var("x"), Var("y")]))


def _ints(depth):
    if depth == 0:
        return _ATOM
    sub = _ints(depth - 1)
    return st.one_of(sub, st.builds(lambda a, b, op: Binary(op, a, b), sub, sub, st.sampled_from("+-*")),
                     st.builds(lambda a: Unary("-", a), sub))


def _bools(depth):
    cmp = st.builds(lambda a, b, op: Binary(op, a, b), _ints(2), _ints(2),
                    st.sampled_from(["==", "!=", "<", "<=", ">", ">="]))
    base = st.one_of(cmp, st.sampled_from([Lit(True), Lit(False)]))
    if depth == 0:
        return base
    sub = _bools(depth - 1)
    return st.one_of(base, st.builds(lambda a, b, op: Binary(op, a, b), sub, sub, st.sampled_from(["&&", "||"])),
                     st.builds(lambda a: Unary("!", a), sub))


EXPR_MODEL = model_with("var x : 0..5 init 0; var y : -3..3 init 0;", "locations a; init a;")


@given(_bools(2), st.integers(0, 5), st.integers(-3, 3))
def test_compiled_eval_matches_tree_walker(e, x, y):
    lay = Layout.of(EXPR_MODEL)
    d = lay.encode([x, y], [0])
    assert evaluate(e, d, lay) == tree_eval(e, {"x": x, "y": y})
    assert bool(ModelSource(EXPR_MODEL).compile_predicate(e)(d)) == tree_eval(e, {"x": x, "y": y})


@given(_bools(3))
def test_expression_print_parse_round_trip(e):
    assert parse_expression(format_expr(e), EXPR_MODEL) == e


def test_corpus_round_trip(corpus_paths):
    for path in corpus_paths:
        m = parse_model(path.read_text())
        text = format_model(m)
        assert parse_model(text) == m
        assert format_model(parse_model(text)) == text


def test_corpus_guards_match_tree_walker(corpus_paths):
    for path in corpus_paths:
        m = parse_model(path.read_text())
        src = ModelSource(m)
        lay = src.layout
        guards = [t.guard for p in m.processes for t in p.transitions] + [g for _, g, _ in m.property.transitions]
        init = brute_initial(m)
        seen, stack = {init}, [init]
        while stack:
            s = stack.pop()
            env = {v.name: s[i] for i, v in enumerate(m.variables)}
            d = lay.encode(s[:len(m.variables)],
                           [p.locations.index(loc) for p, loc in zip(m.processes, s[len(m.variables):])])
            for g in guards:
                assert evaluate(g, d, lay) == tree_eval(g, env)
            for t in brute_successors(m, s):
                if t is not None and t not in seen:
                    seen.add(t)
                    stack.append(t)


def test_corpus_successors_match_brute_force(corpus_paths):
    for path in corpus_paths:
        m = parse_model(path.read_text())
        src = ModelSource(m)
        nv = len(m.variables)

        def enc(s):
            return src.layout.encode(s[:nv], [p.locations.index(l) for p, l in zip(m.processes, s[nv:])])

        init = brute_initial(m)
        seen, stack = {init}, [init]
        while stack:
            s = stack.pop()
            succ = brute_successors(m, s)
            assert src.successors(enc(s)) == [enc(t) for t in succ]
            for t in succ:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        assert run(src, "reach", EngineConfig(workers=3)).stats.states_visited == brute_count(m) == len(seen)
