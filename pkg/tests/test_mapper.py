from __future__ import annotations

import pytest
from hypothesis import given

from cpskg.mapper import (
    MalformedListError,
    MalformedNodeError,
    MappingContext,
    UnknownSymbolIriError,
    create_rdf_list,
    om_to_rdf,
    parse_symbol_iri,
    rdf_to_om,
    symbol_iri,
)
from cpskg.om.tree import Application, FloatLiteral, IntLiteral, Symbol, Variable, app, walk
from cpskg.rdf import RDF, Graph, Iri, Literal, Triple
from cpskg.vocab import CpsVocabulary
from strategies import trees_any_operator

BASE = "http://example.org/m"
PLUS = Symbol("arith1", "plus")
OM = CpsVocabulary.default().om
X, Y = Variable("x"), Variable("y")


def fragment_size(result) -> int:
    return len(result.graph) - 2  # minus the wrapper's two triples


def tree_stats(tree):
    """Independent count oracle: applications, total arguments, distinct
    variables, literal occurrences."""
    apps = args = lits = 0
    names = set()
    for node in walk(tree):
        if isinstance(node, Application):
            apps += 1
            args += len(node.arguments)
        elif isinstance(node, Variable):
            names.add(node.name)
        elif isinstance(node, (IntLiteral, FloatLiteral)):
            lits += 1
    return apps, args, len(names), lits


def test_variable_maps_to_two_triples():
    result = om_to_rdf(X, BASE, "e")
    assert fragment_size(result) == 2
    assert Triple(result.root, RDF.type, OM.Variable) in result.graph
    assert Triple(result.root, OM.name, Literal("x")) in result.graph


def test_two_distinct_variables_eleven_triples():
    assert fragment_size(om_to_rdf(app(PLUS, X, Y), BASE, "e")) == 11


def test_shared_variable_nine_triples():
    result = om_to_rdf(app(PLUS, X, X), BASE, "e")
    assert fragment_size(result) == 9
    assert list(result.variables) == ["x"]


def test_symbol_is_pure_iri():
    result = om_to_rdf(PLUS, BASE, "e")
    assert result.root == Iri("http://www.openmath.org/cd/arith1#plus")
    assert fragment_size(result) == 0


def test_int_literal_fragment():
    result = om_to_rdf(IntLiteral(0), BASE, "e")
    assert fragment_size(result) == 2
    assert Triple(result.root, OM.value, Literal("0", Iri("http://www.w3.org/2001/XMLSchema#integer"))) in result.graph


def test_wrapper_shape():
    result = om_to_rdf(X, BASE, "eq7")
    assert result.object_node == Iri(f"{BASE}/expr/eq7")
    assert Triple(result.object_node, RDF.type, OM.Object) in result.graph
    assert Triple(result.object_node, OM.root, result.root) in result.graph


def test_skolem_names_follow_traversal_order():
    result = om_to_rdf(app(PLUS, X, Y), BASE, "e")
    subjects = {t.subject.value for t in result.graph}
    # n0 application, n1/n2 variables, n3/n4 cons cells
    assert {f"{BASE}/expr/e/n{i}" for i in range(5)} <= subjects


def test_mapping_is_deterministic():
    tree = app(PLUS, app(Symbol("transc1", "sin"), X), IntLiteral(3))
    a, b = om_to_rdf(tree, BASE, "e"), om_to_rdf(tree, BASE, "e")
    assert a.graph == b.graph
    assert a.root == b.root


def test_create_rdf_list_counts():
    nodes = [Iri(f"{BASE}/a{i}") for i in range(3)]
    ctx = MappingContext(BASE, "e")

    g0 = Graph()
    assert create_rdf_list([], ctx, g0) == RDF.nil
    assert len(g0) == 0

    g1 = Graph()
    head = create_rdf_list(nodes[:1], ctx, g1)
    assert len(g1) == 2
    assert g1.objects(head, RDF.rest) == [RDF.nil]

    g3 = Graph()
    create_rdf_list(nodes, ctx, g3)
    assert len(g3) == 6


def test_argument_order_is_recoverable():
    forward = om_to_rdf(app(PLUS, X, Y), BASE, "e")
    assert rdf_to_om(forward.graph, forward.object_node) == app(PLUS, X, Y)

    backward = Graph()
    backward.update(forward.graph)
    # swap the two rdf:first links to reverse the argument list
    firsts = backward.triples(None, RDF.first)
    assert len(firsts) == 2
    for triple in firsts:
        backward.discard(triple)
    backward.add(Triple(firsts[0].subject, RDF.first, firsts[1].object))
    backward.add(Triple(firsts[1].subject, RDF.first, firsts[0].object))
    assert rdf_to_om(backward, forward.object_node) == app(PLUS, Y, X)


def test_cyclic_list_detected():
    result = om_to_rdf(app(PLUS, X, Y), BASE, "e")
    g = result.graph
    rests = g.triples(None, RDF.rest, RDF.nil)
    assert rests
    tail = rests[0]
    g.discard(tail)
    g.add(Triple(tail.subject, RDF.rest, tail.subject))
    with pytest.raises(MalformedListError):
        rdf_to_om(g, result.object_node)


def test_dangling_list_detected():
    result = om_to_rdf(app(PLUS, X, Y), BASE, "e")
    g = result.graph
    tail = g.triples(None, RDF.rest, RDF.nil)[0]
    g.discard(tail)
    with pytest.raises(MalformedListError):
        rdf_to_om(g, result.object_node)


def test_double_operator_detected():
    result = om_to_rdf(app(PLUS, X, Y), BASE, "e")
    g = result.graph
    g.add(Triple(result.root, OM.operator, symbol_iri(Symbol("arith1", "times"))))
    with pytest.raises(MalformedNodeError):
        rdf_to_om(g, result.object_node)


def test_unknown_symbol_iri_strict_vs_lenient():
    g = Graph()
    foreign = Iri("http://elsewhere.example/voc#thing")
    with pytest.raises(UnknownSymbolIriError):
        rdf_to_om(g, foreign, strict=True)
    assert rdf_to_om(g, foreign, strict=False) == Symbol("voc", "thing")


def test_parse_symbol_iri_round_trip():
    sym = Symbol("transc1", "sin")
    assert parse_symbol_iri(symbol_iri(sym)) == sym


def test_operator_position_may_be_any_expression():
    tree = Application(app(Symbol("stats1", "mean"), X), (Y,))
    result = om_to_rdf(tree, BASE, "e")
    assert rdf_to_om(result.graph, result.object_node) == tree


@given(trees_any_operator())
def test_round_trip_property(tree):
    result = om_to_rdf(tree, BASE, "e")
    assert rdf_to_om(result.graph, result.object_node) == tree
    assert rdf_to_om(result.graph, result.root) == tree


@given(trees_any_operator())
def test_triple_count_law(tree):
    apps, args, distinct_vars, lits = tree_stats(tree)
    result = om_to_rdf(tree, BASE, "e")
    assert fragment_size(result) == 3 * apps + 2 * args + 2 * distinct_vars + 2 * lits
