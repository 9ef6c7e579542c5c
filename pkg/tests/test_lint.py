import json

import pytest
from hypothesis import given, settings

from conftest import DATA, MAHA, MAHA_NS
from genome_kit.lint import LintConfig, RULE_IDS, apply_fix, rule_domain_range, rule_external_reuse, \
    rule_missing_link, rule_punning, rule_rigidity, rule_upper_alignment, run_lint
from genome_kit.schema import RelationshipMatrix, build_schema_view, default_matrix, parse_matrix
from genome_kit.turtle import parse_turtle
from strategies import graphs

HEAD = """@prefix : <http://e.org/ns#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix genome: <http://genome-kit.org/ns#> .
@prefix dolce: <http://www.loa-cnr.it/ontologies/DOLCE-Lite.owl#> .
@prefix foaf: <http://xmlns.com/foaf/0.1/> .
@prefix dc: <http://purl.org/dc/terms/> .
"""
N = "http://e.org/ns#"
DOLCE = "http://www.loa-cnr.it/ontologies/DOLCE-Lite.owl#"


def view(body):
    return build_schema_view(parse_turtle(HEAD + body))


def graph_of(name):
    return parse_turtle((DATA / name).read_text())


# DR01


def test_domain_and_range_present():
    assert rule_domain_range(view(":p a owl:ObjectProperty ; rdfs:domain :A ; rdfs:range :B .")) == []


def test_domain_only():
    (f,) = rule_domain_range(view(":p a owl:ObjectProperty ; rdfs:domain :A ."))
    assert f.severity.value == "error" and "range" in f.message and f.fix is None


def test_mo_iitm_four_domainless_properties():
    findings = rule_domain_range(build_schema_view(graph_of("mo_iitm_like.ttl")))
    assert len(findings) == 4
    assert all(f.details["missing"] == ["domain"] for f in findings)


def test_domain_range_fix_uses_defaults():
    v = view(":p a owl:ObjectProperty .")
    (f,) = rule_domain_range(v, N + "Thing", N + "Thing")
    assert len(f.fix.additions) == 2
    (partial,) = rule_domain_range(v, N + "Thing", None)
    assert partial.fix is None


# ML01

SPOUSE_CASE = """
:hasParent a owl:ObjectProperty ; rdfs:domain :Person ; rdfs:range :Person .
:hasFather rdfs:subPropertyOf :hasParent ; rdfs:domain :Person ; rdfs:range :Person .
:hasMother rdfs:subPropertyOf :hasParent ; rdfs:domain :Person ; rdfs:range :Person .
:hasHusband a owl:ObjectProperty ; rdfs:domain :Person ; rdfs:range :Person .
:hasWife a owl:ObjectProperty ; rdfs:domain :Person ; rdfs:range :Person .
"""


def test_free_floating_husband_and_wife():
    findings = rule_missing_link(view(SPOUSE_CASE), default_matrix(N))
    assert [(f.subject, f.severity.value) for f in findings] == [(N + "hasHusband", "warning"),
                                                               (N + "hasWife", "warning")]
    added = {(t.subject.value, t.predicate.value.split("#")[-1], t.object.value) for t in findings[0].fix.additions}
    assert (N + "hasSpouse", "type", "http://www.w3.org/2002/07/owl#ObjectProperty") in added
    assert (N + "hasHusband", "subPropertyOf", N + "hasSpouse") in added
    assert (N + "hasSpouse", "domain", N + "Person") in added


def test_all_modulated_no_findings():
    body = SPOUSE_CASE + ":hasSpouse a owl:ObjectProperty ; rdfs:domain :Person ; rdfs:range :Person .\n" \
        ":hasHusband rdfs:subPropertyOf :hasSpouse . :hasWife rdfs:subPropertyOf :hasSpouse ."
    assert rule_missing_link(view(body), default_matrix(N)) == []


def test_flat_outlier_heuristic():
    body = (":c rdfs:subPropertyOf :b . :b rdfs:subPropertyOf :a . :a a owl:ObjectProperty ."
            ":stray a owl:ObjectProperty ; rdfs:domain :X ; rdfs:range :Y .")
    findings = rule_missing_link(view(body), RelationshipMatrix())
    assert [(f.subject, f.severity.value) for f in findings] == [(N + "stray", "info")]


def test_flat_outlier_skips_matrix_members():
    body = ":c rdfs:subPropertyOf :b . :b rdfs:subPropertyOf :a . :hasHusband a owl:ObjectProperty ."
    m = RelationshipMatrix({N + "hasSpouse": frozenset({N + "hasHusband"})})
    assert [f.severity.value for f in rule_missing_link(view(body), m)] == ["warning"]


# RG01


def test_rigid_under_anti_rigid():
    body = ':Person genome:rigidity "rigid" ; rdfs:subClassOf :Charioteer . :Charioteer genome:rigidity "antiRigid" .'
    (f,) = rule_rigidity(view(body))
    assert (f.subject, f.severity.value) == (N + "Person", "error")


def test_anti_rigid_under_rigid_allowed():
    body = ':Charioteer genome:rigidity "antiRigid" ; rdfs:subClassOf :Person . :Person genome:rigidity "rigid" .'
    assert rule_rigidity(view(body)) == []


def test_untagged_no_subsumption_findings():
    body = ":Person rdfs:subClassOf :Agent . :Agent rdfs:subClassOf :Thing ."
    assert rule_rigidity(view(body)) == []


def test_role_lexicon_warning_and_fix():
    body = ':RoyalKing a owl:Class ; genome:rigidity "rigid" . :Teacher a owl:Class ; genome:rigidity "antiRigid" .'
    (f,) = rule_rigidity(view(body))
    assert f.subject == N + "RoyalKing" and f.severity.value == "warning"
    assert len(f.fix.additions) == 1 and len(f.fix.removals) == 1
    assert rule_rigidity(view(body), role_lexicon=("queen",)) == []


# PN01


def test_punning_two_triples():
    (f,) = rule_punning(view(":Pandavas a :Clan . :Arjuna a :Pandavas ."))
    assert f.subject == N + "Pandavas" and f.severity.value == "warning"


def test_class_only_not_punned():
    assert rule_punning(view(":Pandavas a owl:Class . :Arjuna a :Pandavas .")) == []


def test_clean_fixture_not_punned():
    assert rule_punning(build_schema_view(graph_of("clean.ttl"))) == []


# UA01


def test_alignment_detected():
    (f,) = rule_upper_alignment(view(":Event rdfs:subClassOf dolce:perdurant ."), [DOLCE])
    assert f.details["aligned"] is True and "aligned=true" in f.message


def test_alignment_skipped_without_namespaces():
    (f,) = rule_upper_alignment(view(":A rdfs:subClassOf :B ."), [])
    assert "alignment check skipped" in f.message


def test_mo_iitm_not_aligned():
    v = build_schema_view(graph_of("mo_iitm_like.ttl"))
    (f,) = rule_upper_alignment(v, [DOLCE])
    assert f.details["aligned"] is False and f.severity.value == "info"
    (g,) = rule_upper_alignment(v, [DOLCE], data_integration=True)
    assert g.severity.value == "warning"


# XR01


def test_single_namespace_no_reuse():
    assert rule_external_reuse(build_schema_view(graph_of("clean.ttl"))) == []


def test_two_external_vocabularies():
    body = (":A a owl:Class ; rdfs:subClassOf foaf:Person . :B a owl:Class ; rdfs:subClassOf dolce:perdurant ."
            ":C a owl:Class .")
    (f,) = rule_external_reuse(view(body))
    assert set(f.details["namespaces"]) == {"http://xmlns.com/foaf/0.1/", DOLCE}


def test_annotation_only_namespace_flagged():
    body = ':A a owl:Class ; dc:creator "PDT" . :B a owl:Class . :C a owl:Class ; rdfs:subClassOf foaf:Agent .'
    (f,) = rule_external_reuse(view(body))
    assert "http://purl.org/dc/terms/" in f.details["annotation_only"]
    assert "annotation-only" in f.message


# engine


def _matrix_for(ns):
    return parse_matrix((DATA / "relationship_matrix.txt").read_text().replace(MAHA_NS, ns))


def test_report_counts_tally():
    report = run_lint(build_schema_view(graph_of("seeded_defects.ttl")), _matrix_for("http://example.org/seeded#"))
    for sev, n in report.counts.items():
        assert n == sum(f.severity.value == sev for f in report.findings)
    order = [RULE_IDS.index(f.rule_id) for f in report.findings]
    assert order == sorted(order)
    assert report.profile is not None


def test_report_is_deterministic():
    g = parse_turtle((MAHA / "ontology.ttl").read_text())
    a = run_lint(build_schema_view(g), _matrix_for(MAHA_NS)).to_json()
    b = run_lint(build_schema_view(parse_turtle((MAHA / "ontology.ttl").read_text())), _matrix_for(MAHA_NS)).to_json()
    assert a == b
    assert json.loads(a)["counts"]["error"] == 2


def test_markdown_lists_findings():
    report = run_lint(build_schema_view(graph_of("seeded_defects.ttl")))
    md = report.to_markdown()
    assert "DR01" in md and "PN01" in md


def test_rule_selection_and_severity_override():
    v = build_schema_view(graph_of("seeded_defects.ttl"))
    report = run_lint(v, None, LintConfig(rules=("DR01",), severity_overrides={"DR01": "warning"}))
    assert {f.rule_id for f in report.findings} == {"DR01"}
    assert report.error_count == 0


def test_untyped_individual_note():
    report = run_lint(view(":p a owl:ObjectProperty ; rdfs:domain :A ; rdfs:range :A . :x :p :y ."))
    assert any(N + "x" in note for note in report.notes)


FIXPOINT_CASES = [
    ("seeded_defects.ttl", "http://example.org/seeded#"),
    ("mahabharata/ontology.ttl", MAHA_NS),
    ("mo_iitm_like.ttl", "http://example.org/moiitm#"),
    ("clean.ttl", "http://example.org/clean#"),
]


@pytest.mark.parametrize("name,ns", FIXPOINT_CASES)
def test_fix_fixpoint(name, ns):
    g = graph_of(name)
    cfg = LintConfig(default_domain=ns + "Person", default_range=ns + "Person")
    matrix = _matrix_for(ns)
    report = run_lint(build_schema_view(g), matrix, cfg)
    fixable = [f for f in report.findings if f.fix is not None]
    for f in fixable:
        fixed = apply_fix(g, f.fix)
        after = run_lint(build_schema_view(fixed), matrix, cfg)
        assert not [x for x in after.findings if (x.rule_id, x.subject) == (f.rule_id, f.subject)]
        touched = {t.subject.value for t in f.fix.additions + f.fix.removals}
        before_errors = {(x.rule_id, x.subject) for x in report.findings if x.severity.value == "error"}
        new_errors = {(x.rule_id, x.subject) for x in after.findings
                      if x.severity.value == "error" and x.subject in touched} - before_errors
        assert not new_errors, f"{f.rule_id} fix on {f.subject} introduced {new_errors}"


@settings(max_examples=40, deadline=None)
@given(graphs(max_size=40))
def test_lint_total_and_deterministic_on_random_graphs(g):
    v = build_schema_view(g)
    m = default_matrix("http://example.org/n#")
    assert run_lint(v, m).to_json() == run_lint(build_schema_view(g), m).to_json()
