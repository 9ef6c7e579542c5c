import pytest
from hypothesis import given, settings

from conftest import DATA, MAHA, MAHA_NS
from genome_kit.errors import MatrixError
from genome_kit.schema import (ProfileKind, RelationshipMatrix, RigidityTag, build_schema_view, classify_profile,
                               default_matrix, parse_matrix)
from genome_kit.turtle import parse_turtle
from oracles import scan_schema_counts
from strategies import graphs

HEAD = """@prefix : <http://e.org/ns#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix genome: <http://genome-kit.org/ns#> .
@prefix skos: <http://www.w3.org/2004/02/skos/core#> .
"""
N = "http://e.org/ns#"


def view(body):
    return build_schema_view(parse_turtle(HEAD + body))


def test_empty_view():
    v = build_schema_view(parse_turtle(""))
    assert not (v.classes or v.properties or v.individuals or v.rigidity)


def test_subproperty_read_off():
    v = view(":Father rdfs:subPropertyOf :Parent .")
    assert v.property_parents == {N + "Father": {N + "Parent"}}
    assert {N + "Father", N + "Parent"} <= v.properties


def test_mahabharata_counts_match_triple_scan():
    doc = (MAHA / "ontology.ttl").read_text()
    v = build_schema_view(parse_turtle(doc))
    scan = scan_schema_counts(doc, MAHA_NS)
    assert v.classes == scan["classes"]
    assert v.properties == scan["properties"]


def test_classes_from_type_assertions():
    v = view(":Arjuna a :Warrior .")
    assert N + "Warrior" in v.classes and N + "Arjuna" in v.individuals
    assert v.types[N + "Arjuna"] == {N + "Warrior"}


def test_property_kind_inference():
    v = view(":age rdfs:range xsd:integer . :knows rdfs:range :Person .")
    assert N + "age" in v.data_properties and N + "knows" in v.object_properties


def test_rigidity_tags_and_labels():
    v = view(':Person a owl:Class ; genome:rigidity "rigid" ; rdfs:label "Vyakti"@hi, "Person"@en .'
             ':Role a owl:Class ; genome:rigidity "antiRigid" . :Thing a owl:Class .')
    assert v.rigidity_of(N + "Person") is RigidityTag.RIGID
    assert v.rigidity_of(N + "Role") is RigidityTag.ANTI_RIGID
    assert v.rigidity_of(N + "Thing") is RigidityTag.UNSPECIFIED
    assert v.label_of(N + "Person") == "Person"
    assert v.label_of(N + "Thing") == "Thing"


def test_untyped_subjects_become_individuals():
    v = view(":hasFather a owl:ObjectProperty . :Karna :hasFather :Surya .")
    assert N + "Karna" in v.individuals and N + "Karna" in v.untyped_individuals


def test_property_depth():
    v = view(":c rdfs:subPropertyOf :b . :b rdfs:subPropertyOf :a .")
    assert [v.property_depth(N + x) for x in "abc"] == [0, 1, 2]


@settings(max_examples=60)
@given(graphs(max_size=40))
def test_view_is_pure_and_idempotent(g):
    before = set(g)
    v1, v2 = build_schema_view(g), build_schema_view(g)
    assert v1 == v2
    assert set(g) == before
    assert set(v1.domains) | set(v1.ranges) <= v1.properties
    assert classify_profile(v1) == classify_profile(v2)


def test_profile_pure_taxonomy():
    p = classify_profile(view(":A rdfs:subClassOf :B . :B rdfs:subClassOf :C ."))
    assert p.value is ProfileKind.CLASSIFICATION and p.shares()["classification"] == 1.0


def test_profile_lexical_only():
    p = classify_profile(view(':A rdfs:label "a" ; rdfs:comment "b" ; skos:altLabel "c" .'))
    assert p.value is ProfileKind.DOMAIN_LINGUISTIC


def test_profile_descriptive():
    p = classify_profile(view(':age a owl:DatatypeProperty . :x :age 1 . :y :age 2 . :z :age 3 .'))
    assert p.value is ProfileKind.DESCRIPTIVE


def test_profile_mixed_and_empty():
    assert classify_profile(view(":A rdfs:subClassOf :B . :p rdfs:domain :A . :p rdfs:range :B .")).value \
        is ProfileKind.MIXED
    assert classify_profile(build_schema_view(parse_turtle(""))).value is ProfileKind.MIXED


def test_profile_threshold_is_configurable():
    v = view(":A rdfs:subClassOf :B . :p rdfs:domain :A . :p rdfs:range :B .")
    assert classify_profile(v, threshold=0.3).value is ProfileKind.CLASSIFICATION


def test_mo_iitm_like_is_classification_ontology():
    v = build_schema_view(parse_turtle((DATA / "mo_iitm_like.ttl").read_text()))
    assert classify_profile(v).value is ProfileKind.CLASSIFICATION


def test_matrix_parsing():
    m = parse_matrix((DATA / "relationship_matrix.txt").read_text())
    assert m.families[MAHA_NS + "hasSpouse"] == {MAHA_NS + "hasHusband", MAHA_NS + "hasWife"}
    assert m.family_of(MAHA_NS + "hasMother") == MAHA_NS + "hasParent"
    assert (MAHA_NS + "hasHusband", MAHA_NS + "hasWife") in m.inverse_pairs


def test_default_matrix_families():
    m = default_matrix(N)
    assert set(m.families) == {N + "hasParent", N + "hasSpouse", N + "hasSibling"}


@pytest.mark.parametrize("text,message", [
    ("@prefix : <http://e/> .\n:a = :b\n:c = :b", "belongs to both"),
    ("@prefix : <http://e/> .\n:a = :a, :b", "lists itself"),
    ("@prefix : <http://e/> .\n:a :b", "expected 'name = value'"),
    (":a = :b", "undefined prefix"),
])
def test_matrix_errors(text, message):
    with pytest.raises(MatrixError, match=message):
        parse_matrix(text)


def test_matrix_invariants_direct():
    with pytest.raises(MatrixError):
        RelationshipMatrix({"http://e/a": frozenset({"http://e/a"})})


def test_matrix_members_need_commas():
    from genome_kit.errors import MatrixError
    from genome_kit.schema import parse_matrix
    with pytest.raises(MatrixError, match="single name"):
        parse_matrix("@prefix : <http://e.org/ns#> .\n:hasSpouse = :hasHusband :hasWife\n")
