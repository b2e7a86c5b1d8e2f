import random

import pytest

from amrkit.graph import (
    AmrEdge,
    AmrNode,
    GraphError,
    NodeKind,
    PenmanError,
    isomorphic,
    make_graph,
    parse_penman,
    print_penman,
    triples,
)

from helpers import random_graph


def test_parse_two_node_graph():
    g = parse_penman("(r / run-01 :ARG0 (h / he))")
    assert {n.title for n in g.nodes} == {"run-01", "he"}
    assert g.node(g.root).title == "run-01"
    assert g.edges == (AmrEdge("r", "ARG0", "h"),)


def test_parse_single_node():
    g = parse_penman("(d / dog)")
    assert len(g) == 1
    assert g.node(g.root).title == "dog"


def test_parse_date_entity_constants():
    g = parse_penman("(d / date-entity :year 2008 :month 1 :day 1)")
    assert len(g) == 4
    kinds = [n.kind for n in g.nodes]
    assert kinds.count(NodeKind.NUMBER) == 3
    assert {(e.label, g.node(e.target).title) for e in g.edges} == {
        ("year", "2008"),
        ("month", "1"),
        ("day", "1"),
    }


def test_parse_string_constant_preserves_case():
    g = parse_penman('(n / name :op1 "Rover")')
    const = next(n for n in g.nodes if n.kind is NodeKind.STRING)
    assert const.title == "Rover"


def test_parse_reentrancy_single_node():
    g = parse_penman("(w / want-01 :ARG0 (b / boy) :ARG1 (w2 / win-01 :ARG0 b))")
    assert len(g) == 3
    assert sorted((e.source, e.label, e.target) for e in g.edges) == [
        ("w", "ARG0", "b"),
        ("w", "ARG1", "w2"),
        ("w2", "ARG0", "b"),
    ]


def test_parse_inverse_relation_normalized():
    g = parse_penman("(p / person :ARG0-of (s / sail-01))")
    assert g.edges == (AmrEdge("s", "ARG0", "p"),)
    assert g.node(g.root).title == "person"


def test_parse_forward_reference():
    g = parse_penman("(a / and :op1 (b / boy :poss g) :op2 (g / girl))")
    assert ("b", "poss", "g") in [(e.source, e.label, e.target) for e in g.edges]


def test_parse_numeric_concept_distinct_from_string():
    g = parse_penman('(t / thing :value 5 :label "5")')
    kinds = sorted(n.kind.value for n in g.nodes)
    assert kinds == ["concept", "number", "string"]


@pytest.mark.parametrize(
    "text",
    [
        "(r / run-01",  # unbalanced
        "(r / run-01))",  # trailing
        "(r / run-01 : (h / he))",  # empty relation
        "(a / dog :mod (a / cat))",  # conflicting redefinition
        "(r / )",
        "(r run-01)",
        "",
        "(r / run-01 :ARG0 )",
        '(n / name :op1 "Rover',
    ],
)
def test_parse_errors_carry_offset(text):
    with pytest.raises(PenmanError) as exc:
        parse_penman(text)
    assert isinstance(exc.value.offset, int)
    assert 0 <= exc.value.offset <= len(text)


def test_parse_same_title_redefinition_merges():
    g = parse_penman("(a / dog :mod (a / dog))")
    assert len(g) == 1
    assert g.edges == (AmrEdge("a", "mod", "a"),)


def test_print_round_trip_examples():
    assert print_penman(parse_penman("(r / run-01 :ARG0 (h / he))")) == "(r / run-01 :ARG0 (h / he))"
    assert print_penman(parse_penman('(n / name :op1 "Rover")')) == '(n / name :op1 "Rover")'


def test_print_reentrant_node_prints_once():
    g = parse_penman("(w / want-01 :ARG0 (b / boy) :ARG1 (w2 / win-01 :ARG0 b))")
    text = print_penman(g)
    assert text.count("/ boy") == 1
    assert isomorphic(parse_penman(text), g)


def test_print_deterministic_under_construction_order():
    a = make_graph(
        [("x", "dog"), ("y", "cat"), ("z", "run-01")],
        [("z", "ARG0", "x"), ("z", "ARG1", "y")],
        "z",
    )
    b = make_graph(
        [("z", "run-01"), ("y", "cat"), ("x", "dog")],
        [("z", "ARG1", "y"), ("z", "ARG0", "x")],
        "z",
    )
    assert print_penman(a) == print_penman(b)


def test_print_orders_children_by_label_then_title():
    g = make_graph(
        [("r", "run-01"), ("a", "zebra"), ("b", "ant")],
        [("r", "mod", "a"), ("r", "ARG0", "b")],
        "r",
    )
    text = print_penman(g)
    assert text.index(":ARG0") < text.index(":mod")


def test_print_rejects_constant_root():
    g = make_graph([("c", "5", NodeKind.NUMBER)], [], "c")
    with pytest.raises(GraphError):
        print_penman(g)


def test_print_rejects_shared_constant():
    g = make_graph(
        [("a", "dog"), ("b", "cat"), ("c", "5", NodeKind.NUMBER)],
        [("a", "quant", "c"), ("b", "quant", "c"), ("a", "mod", "b")],
        "a",
    )
    with pytest.raises(GraphError):
        print_penman(g)


def test_graph_requires_connectivity():
    with pytest.raises(GraphError):
        make_graph([("a", "dog"), ("b", "cat")], [], "a")


def test_graph_rejects_duplicate_ids():
    with pytest.raises(GraphError):
        make_graph([("a", "dog"), ("a", "cat")], [], "a")


def test_graph_rejects_foreign_root():
    with pytest.raises(GraphError):
        make_graph([("a", "dog")], [], "b")


def test_triples_single_node():
    g = parse_penman("(d / dog)")
    assert triples(g) == [("d", "instance", "dog"), ("TOP", "root", "d")]


def test_triples_fig1_relation():
    g = parse_penman("(r / run-01 :ARG0 (h / he))")
    assert ("r", "ARG0", "h") in triples(g)


def test_triples_constants_render_as_titles():
    g = parse_penman("(d / date-entity :year 2008)")
    assert ("d", "year", "2008") in triples(g)


def test_triples_count_invariant():
    rng = random.Random(7)
    for _ in range(50):
        g = random_graph(rng)
        assert len(triples(g)) == len(g) + len(g.edges) + 1


def test_round_trip_random_graphs():
    rng = random.Random(11)
    for _ in range(200):
        g = random_graph(rng)
        assert isomorphic(parse_penman(print_penman(g)), g)


def test_fuzzed_inputs_never_crash():
    rng = random.Random(5)
    base = '(r / run-01 :ARG0 (h / he) :mod (g / glee) :op1 "Rover" :quant 5)'
    alphabet = '()/:" abcdefgh012'
    for _ in range(300):
        chars = list(base)
        for _ in range(rng.randint(1, 6)):
            pos = rng.randrange(len(chars))
            chars[pos] = rng.choice(alphabet)
        text = "".join(chars)
        try:
            parse_penman(text)
        except (PenmanError, GraphError):
            pass


def test_isomorphic_respects_titles_and_labels():
    a = parse_penman("(r / run-01 :ARG0 (h / he))")
    assert not isomorphic(a, parse_penman("(r / run-01 :ARG0 (d / dog))"))
    assert not isomorphic(a, parse_penman("(r / run-01 :ARG1 (h / he))"))
    assert isomorphic(a, parse_penman("(x / run-01 :ARG0 (y / he))"))


def test_isomorphic_respects_root():
    a = make_graph([("a", "dog"), ("b", "dog")], [("a", "mod", "b")], "a")
    b = make_graph([("a", "dog"), ("b", "dog")], [("b", "mod", "a")], "a")
    assert not isomorphic(a, b)


def test_isomorphic_distinguishes_constant_kinds():
    a = parse_penman("(t / thing :value 5)")
    b = parse_penman('(t / thing :value "5")')
    assert not isomorphic(a, b)


def test_node_validation():
    with pytest.raises(GraphError):
        AmrNode("a", "")
    with pytest.raises(GraphError):
        AmrNode("a", "five", NodeKind.NUMBER)
    with pytest.raises(GraphError):
        AmrEdge("a", "", "b")
