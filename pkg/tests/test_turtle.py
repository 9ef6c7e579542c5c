import pytest
from hypothesis import given, settings

from conftest import DATA
from genome_kit.errors import TurtleSyntaxError
from genome_kit.graph import Graph, graph_equal
from genome_kit.terms import BNode, Iri, Literal, Triple
from genome_kit.turtle import parse_turtle, serialize_turtle
from oracles import count_expanded_statements
from strategies import graphs


def test_empty_document():
    assert len(parse_turtle("")) == 0


def test_single_triple():
    g = parse_turtle("<http://e/a> <http://e/b> <http://e/c> .")
    assert list(g) == [Triple(Iri("http://e/a"), Iri("http://e/b"), Iri("http://e/c"))]


def test_mini_epic_count_matches_manual_expansion():
    doc = (DATA / "mini_epic.ttl").read_text()
    assert len(parse_turtle(doc)) == count_expanded_statements(doc)


def test_mini_epic_terms():
    g = parse_turtle((DATA / "mini_epic.ttl").read_text())
    karna = Iri("http://example.org/epic#Karna")
    labels = g.objects(karna, Iri("http://www.w3.org/2000/01/rdf-schema#label"))
    assert labels == [Literal('Karna "Radheya"')]
    comment = g.objects(karna, Iri("http://www.w3.org/2000/01/rdf-schema#comment"))[0]
    assert comment.lexical == "Born with\tarmour"
    assert Literal("42", "http://www.w3.org/2001/XMLSchema#integer") in g.objects(karna)
    assert Literal("1.5", "http://www.w3.org/2001/XMLSchema#decimal") in g.objects(karna)
    seen = g.objects(karna, Iri("http://example.org/epic#seenWith"))
    assert len(seen) == 2 and all(isinstance(x, BNode) for x in seen)
    # @base resolves <#notes>
    assert Iri("http://example.org/epic#notes") in g.terms()
    person = Iri("http://example.org/epic#Person")
    langs = {lit.lang for lit in g.objects(person, Iri("http://www.w3.org/2000/01/rdf-schema#label"))}
    assert langs == {"en", "hi"}


def test_prefix_map_retained():
    g = parse_turtle("@prefix ex: <http://e/> . ex:a ex:b ex:c .")
    assert g.prefixes.entries["ex"] == "http://e/"


def test_trailing_semicolon_allowed():
    g = parse_turtle("@prefix ex: <http://e/> . ex:a ex:b ex:c ; .")
    assert len(g) == 1


@pytest.mark.parametrize("doc,message,line,column", [
    ("<http://e/a> <http://e/b> ( 1 2 ) .", "collections", 1, 27),
    ("<< <http://e/a> <http://e/b> <http://e/c> >> <http://e/p> <http://e/o> .", "quoted triples", 1, 1),
    ("<http://e/a> <http://e/b> [ <http://e/c> 1 ] .", "nested property lists", 1, 27),
    ("x:a <http://e/b> <http://e/c> .", "undefined prefix 'x'", 1, 1),
    ("<a> <http://e/b> <http://e/c> .", "relative IRI <a> with no base", 1, 1),
    ("<http://e/a> <http://e/b>\n  \"oops .", "unterminated string", 2, 3),
    ("<http://e/a> \"x\" <http://e/c> .", "predicate must be an IRI", 1, 14),
    ("<http://e/a> <http://e/b> <http://e/c>", "unexpected end of document", 1, 39),
])
def test_syntax_errors_carry_position(doc, message, line, column):
    with pytest.raises(TurtleSyntaxError) as info:
        parse_turtle(doc)
    err = info.value
    assert message in err.message
    assert (err.line, err.column) == (line, column)


def test_error_names_source():
    with pytest.raises(TurtleSyntaxError, match=r"^onto.ttl:1:1:"):
        parse_turtle("bad:x <http://e/p> <http://e/o> .", source="onto.ttl")


def test_relative_iri_with_base():
    g = parse_turtle("<a> <http://e/b> <c> .", base="http://x.org/dir/")
    assert Iri("http://x.org/dir/a") in g.terms()


def test_duplicate_prefix_warns_last_wins():
    with pytest.warns(UserWarning, match="redeclared"):
        g = parse_turtle("@prefix e: <http://e/> . @prefix e: <http://f/> . e:a e:b e:c .")
    assert Iri("http://f/a") in g.terms()


def test_anonymous_nodes_do_not_clash_with_labels():
    g = parse_turtle("_:anon1 <http://e/p> [] . _:anon1 <http://e/q> [] .")
    nodes = {x for t in g for x in (t.subject, t.object)}
    assert len(nodes) == 3


def test_serialize_empty_has_only_prefixes():
    g = Graph()
    g.prefixes.bind("ex", "http://e/")
    out = serialize_turtle(g)
    assert out.strip() == "@prefix ex: <http://e/> ."


def test_serialize_single_statement():
    g = parse_turtle("<http://e/a> <http://e/b> <http://e/c> .")
    out = serialize_turtle(g)
    assert out == "<http://e/a> <http://e/b> <http://e/c> .\n"


def test_serialize_is_sorted_and_deterministic():
    doc = "@prefix e: <http://e/> . e:z e:p e:b, e:a . e:a e:q e:x ; e:p e:y ."
    out = serialize_turtle(parse_turtle(doc))
    assert out.index("e:a e:p") < out.index("e:z e:p")
    assert out.index("e:p e:y") < out.index("e:q e:x")
    assert "e:a, e:b" in out
    assert out == serialize_turtle(parse_turtle(out))


@pytest.mark.parametrize("path", sorted(DATA.rglob("*.ttl")), ids=lambda p: p.name)
def test_fixture_double_round_trip(path):
    g = parse_turtle(path.read_text())
    once = parse_turtle(serialize_turtle(g))
    assert graph_equal(once, g)
    assert graph_equal(parse_turtle(serialize_turtle(once)), g)


@settings(max_examples=150)
@given(graphs(max_size=30))
def test_round_trip_random_graphs(g):
    g.prefixes.bind("n", "http://example.org/n#")
    assert graph_equal(parse_turtle(serialize_turtle(g)), g)
