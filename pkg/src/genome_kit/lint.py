"""Ontological review rules.

Catalog (stable ids, evaluated in this order):

    DR01  object property lacks a domain or a range
    ML01  missing link in a relation hierarchy (relationship matrix + flat outliers)
    RG01  rigidity: rigid class under an anti-rigid one; untagged role classes
    PN01  IRI punned as class and individual
    UA01  alignment to a configured upper ontology
    XR01  reuse of external vocabularies
"""

from __future__ import annotations

import enum
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable

from .graph import Graph
from .schema import (
    OntologyProfile,
    RelationshipMatrix,
    RigidityTag,
    SchemaView,
    classify_profile,
)
from .terms import BUILTIN_NAMESPACES, GENOME, OWL, RDF, RDFS, Iri, Literal, Triple, namespace_of

RULE_IDS = ("DR01", "ML01", "RG01", "PN01", "UA01", "XR01")
DEFAULT_ROLE_LEXICON = ("charioteer", "teacher", "king")


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


@dataclass(frozen=True)
class Fix:
    additions: tuple[Triple, ...] = ()
    removals: tuple[Triple, ...] = ()


@dataclass(frozen=True)
class LintFinding:
    rule_id: str
    severity: Severity
    subject: str
    message: str
    fix: Fix | None = None
    details: dict = field(default_factory=dict, compare=False, hash=False)

    def to_dict(self) -> dict:
        out = {
            "rule_id": self.rule_id,
            "severity": self.severity.value,
            "subject": self.subject,
            "message": self.message,
        }
        if self.details:
            out["details"] = self.details
        if self.fix is not None:
            out["fix"] = {
                "additions": [_triple_text(t) for t in self.fix.additions],
                "removals": [_triple_text(t) for t in self.fix.removals],
            }
        return out


def _triple_text(t: Triple) -> list[str]:
    def text(term) -> str:
        if isinstance(term, Literal):
            return json.dumps(term.lexical)
        return str(term)

    return [text(t.subject), text(t.predicate), text(t.object)]


@dataclass
class LintConfig:
    default_domain: str | None = None
    default_range: str | None = None
    role_lexicon: tuple[str, ...] = DEFAULT_ROLE_LEXICON
    upper_namespaces: tuple[str, ...] = ()
    data_integration: bool = False
    profile_threshold: float = 0.5
    rules: tuple[str, ...] = RULE_IDS
    severity_overrides: dict[str, str] = field(default_factory=dict)


def _iri_t(s: str, p: str, o: str) -> Triple:
    return Triple(Iri(s), Iri(p), Iri(o))


# DR01 ---------------------------------------------------------------------


def rule_domain_range(v: SchemaView, default_domain: str | None = None,
                      default_range: str | None = None) -> list[LintFinding]:
    findings = []
    for prop in sorted(v.object_properties):
        missing = [kind for kind, table in (("domain", v.domains), ("range", v.ranges)) if not table.get(prop)]
        if not missing:
            continue
        additions = []
        if "domain" in missing and default_domain:
            additions.append(_iri_t(prop, RDFS.domain, default_domain))
        if "range" in missing and default_range:
            additions.append(_iri_t(prop, RDFS.range, default_range))
        fix = Fix(tuple(additions)) if len(additions) == len(missing) else None
        findings.append(LintFinding(
            "DR01", Severity.ERROR, prop,
            f"object property {v.label_of(prop)} has no {' and no '.join(missing)}",
            fix, {"missing": missing},
        ))
    return findings


# ML01 ---------------------------------------------------------------------


def _common_class(v: SchemaView, classes: set[str]) -> str | None:
    """Most specific class that is (or subsumes) every class given."""
    if not classes:
        return None
    common = None
    for c in classes:
        up = {c} | v.class_ancestors(c)
        common = up if common is None else common & up
    if not common:
        return None
    # drop anything that is an ancestor of another candidate
    specific = {c for c in common if not any(c in v.class_ancestors(o) for o in common if o != c)}
    return min(specific)


def _hypernym_bounds(v: SchemaView, family: str, members: list[str], default: str | None,
                     table: dict[str, set[str]]) -> str:
    found: set[str] = set()
    for m in members:
        found |= table.get(m, set())
    return _common_class(v, found) or default or OWL.Thing


def rule_missing_link(v: SchemaView, m: RelationshipMatrix, default_domain: str | None = None,
                      default_range: str | None = None) -> list[LintFinding]:
    findings = []
    props = v.properties
    for family in sorted(m.families):
        present = sorted(p for p in m.families[family] if p in props)
        if not present:
            continue
        hypernym_missing = family not in props
        header = []
        if hypernym_missing:
            header.append(_iri_t(family, RDF.type, OWL.ObjectProperty))
        if not v.domains.get(family):
            header.append(_iri_t(family, RDFS.domain,
                                 _hypernym_bounds(v, family, present, default_domain, v.domains)))
        if not v.ranges.get(family):
            header.append(_iri_t(family, RDFS.range,
                                 _hypernym_bounds(v, family, present, default_range, v.ranges)))
        for member in present:
            if family in v.property_parents.get(member, set()):
                continue
            why = "is absent" if hypernym_missing else "is not its parent"
            findings.append(LintFinding(
                "ML01", Severity.WARNING, member,
                f"{v.label_of(member)} is free-floating: family hypernym {v.label_of(family)} {why}",
                Fix(tuple(header) + (_iri_t(member, RDFS.subPropertyOf, family),)),
                {"family": family, "hypernym_absent": hypernym_missing},
            ))

    depths = {p: v.property_depth(p) for p in props}
    max_depth = max(depths.values(), default=0)
    if max_depth >= 2:
        children = v.property_children()
        in_matrix = m.all_properties()
        for p in sorted(props):
            if depths[p] == 0 and not children.get(p) and p not in in_matrix:
                findings.append(LintFinding(
                    "ML01", Severity.INFO, p,
                    f"{v.label_of(p)} sits flat at the root while the property hierarchy "
                    f"reaches depth {max_depth}",
                    None, {"max_depth": max_depth},
                ))
    return findings


# RG01 ---------------------------------------------------------------------


def _words(text: str) -> set[str]:
    spaced = re.sub(r"(?<=[a-z0-9])(?=[A-Z])", " ", text)
    return {w.lower() for w in re.split(r"[^A-Za-z0-9]+", spaced) if w}


def rule_rigidity(v: SchemaView, role_lexicon: tuple[str, ...] = DEFAULT_ROLE_LEXICON) -> list[LintFinding]:
    findings = []
    for cls in sorted(v.class_parents):
        if v.rigidity_of(cls) is not RigidityTag.RIGID:
            continue
        for parent in sorted(v.class_parents[cls]):
            if v.rigidity_of(parent) is RigidityTag.ANTI_RIGID:
                findings.append(LintFinding(
                    "RG01", Severity.ERROR, cls,
                    f"rigid class {v.label_of(cls)} is subsumed by anti-rigid {v.label_of(parent)}",
                    None, {"parent": parent},
                ))
    lexicon = {w.lower() for w in role_lexicon}
    rigidity = GENOME.rigidity
    for cls in sorted(v.classes):
        hits = _words(v.label_of(cls)) & lexicon
        if not hits or v.rigidity_of(cls) is RigidityTag.ANTI_RIGID:
            continue
        removals = ()
        if v.rigidity_of(cls) is RigidityTag.RIGID:
            removals = (Triple(Iri(cls), Iri(rigidity), Literal("rigid")),)
        findings.append(LintFinding(
            "RG01", Severity.WARNING, cls,
            f"{v.label_of(cls)} names a role ({', '.join(sorted(hits))}) but is not tagged anti-rigid",
            Fix((Triple(Iri(cls), Iri(rigidity), Literal("antiRigid")),), removals),
            {"role_words": sorted(hits)},
        ))
    return findings


# PN01 ---------------------------------------------------------------------


def rule_punning(v: SchemaView) -> list[LintFinding]:
    findings = []
    for iri in sorted(v.classes & set(v.types)):
        findings.append(LintFinding(
            "PN01", Severity.WARNING, iri,
            f"{v.label_of(iri)} is used as a class and as an instance of "
            f"{', '.join(sorted(v.label_of(t) for t in v.types[iri]))}",
            None, {"types": sorted(v.types[iri])},
        ))
    return findings


# UA01 ---------------------------------------------------------------------


def _report_subject(v: SchemaView) -> str:
    if v.ontology_iri:
        return v.ontology_iri
    return v.local_namespaces[0] if v.local_namespaces else ""


def rule_upper_alignment(v: SchemaView, upper_namespaces: tuple[str, ...] | list[str],
                         data_integration: bool = False) -> list[LintFinding]:
    subject = _report_subject(v)
    if not upper_namespaces:
        return [LintFinding("UA01", Severity.INFO, subject,
                            "alignment check skipped: no upper-ontology namespaces configured",
                            None, {"aligned": None})]
    edges = sorted(
        (c, p) for c, parents in v.class_parents.items() for p in parents
        if any(p.startswith(ns) for ns in upper_namespaces)
    )
    aligned = bool(edges)
    severity = Severity.WARNING if data_integration and not aligned else Severity.INFO
    msg = (f"aligned=true: {len(edges)} subclass edge(s) into an upper ontology" if aligned
           else "aligned=false: no class is subsumed by an upper-ontology class")
    return [LintFinding("UA01", severity, subject, msg, None,
                        {"aligned": aligned, "edges": [list(e) for e in edges]})]


# XR01 ---------------------------------------------------------------------


def rule_external_reuse(v: SchemaView) -> list[LintFinding]:
    def external(ns: str) -> bool:
        return ns not in BUILTIN_NAMESPACES and ns not in v.local_namespaces

    schema_ns: Counter = Counter()
    for iri, n in v.schema_iri_usage.items():
        ns = namespace_of(iri)
        if external(ns):
            schema_ns[ns] += n
    annotation_ns: Counter = Counter()
    for iri, n in v.annotation_usage.items():
        ns = namespace_of(iri)
        if external(ns) and ns not in schema_ns:
            annotation_ns[ns] += n
    if not schema_ns and not annotation_ns:
        return []
    parts = [f"{ns} ({n})" for ns, n in sorted(schema_ns.items())]
    parts += [f"{ns} ({n}, annotation-only)" for ns, n in sorted(annotation_ns.items())]
    return [LintFinding(
        "XR01", Severity.INFO, _report_subject(v),
        "reuses external namespaces: " + ", ".join(parts), None,
        {"namespaces": dict(sorted(schema_ns.items())),
         "annotation_only": dict(sorted(annotation_ns.items()))},
    )]


# engine -------------------------------------------------------------------


@dataclass
class LintReport:
    findings: list[LintFinding]
    counts: dict[str, int]
    profile: OntologyProfile
    notes: list[str] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def error_count(self) -> int:
        return self.counts.get("error", 0)

    def by_rule(self, rule_id: str) -> list[LintFinding]:
        return [f for f in self.findings if f.rule_id == rule_id]

    def to_dict(self) -> dict:
        return {
            "counts": self.counts,
            "profile": self.profile.to_dict(),
            "stats": self.stats,
            "findings": [f.to_dict() for f in self.findings],
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_markdown(self) -> str:
        lines = ["# Ontological review", ""]
        p = self.profile
        lines.append(f"Profile: **{p.value.value}** (share threshold {p.threshold:g}; "
                     f"{p.subclass_axioms} subclass / {p.data_assertions} data-property / "
                     f"{p.lexical_annotations} lexical of {p.total_axioms} schema axioms)")
        lines.append("")
        lines.append(" | ".join(f"{k}: {self.counts[k]}" for k in ("error", "warning", "info")))
        if "rigidity_untagged_pct" in self.stats:
            lines.append("")
            lines.append(f"Rigidity untagged: {self.stats['rigidity_untagged_pct']:.2f}% "
                         f"of {self.stats['class_count']} classes")
        lines += ["", "| Rule | Severity | Subject | Message | Fix |", "|---|---|---|---|---|"]
        for f in self.findings:
            fix = "yes" if f.fix is not None else ""
            lines.append(f"| {f.rule_id} | {f.severity.value} | {f.subject} | {f.message} | {fix} |")
        if self.notes:
            lines += ["", "Notes:", ""]
            lines += [f"- {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


def run_lint(v: SchemaView, m: RelationshipMatrix | None = None, config: LintConfig | None = None) -> LintReport:
    cfg = config or LintConfig()
    m = m or RelationshipMatrix()
    rules: dict[str, Callable[[], list[LintFinding]]] = {
        "DR01": lambda: rule_domain_range(v, cfg.default_domain, cfg.default_range),
        "ML01": lambda: rule_missing_link(v, m, cfg.default_domain, cfg.default_range),
        "RG01": lambda: rule_rigidity(v, cfg.role_lexicon),
        "PN01": lambda: rule_punning(v),
        "UA01": lambda: rule_upper_alignment(v, cfg.upper_namespaces, cfg.data_integration),
        "XR01": lambda: rule_external_reuse(v),
    }
    findings: list[LintFinding] = []
    for rule_id in RULE_IDS:
        if rule_id not in cfg.rules:
            continue
        out = rules[rule_id]()
        override = cfg.severity_overrides.get(rule_id)
        if override:
            sev = Severity(override)
            out = [LintFinding(f.rule_id, sev, f.subject, f.message, f.fix, f.details) for f in out]
        findings.extend(out)
    order = {r: i for i, r in enumerate(RULE_IDS)}
    findings.sort(key=lambda f: (order[f.rule_id], f.subject, f.message))
    counts = Counter(f.severity.value for f in findings)
    classes = sorted(v.classes)
    tagged = sum(1 for c in classes if v.rigidity_of(c) is not RigidityTag.UNSPECIFIED)
    stats = {
        "class_count": len(classes),
        "object_property_count": len(v.object_properties),
        "data_property_count": len(v.data_properties),
        "individual_count": len(v.individuals),
        "rigidity_tagged": tagged,
        "rigidity_untagged_pct": round(100.0 * (len(classes) - tagged) / len(classes), 4) if classes else 0.0,
    }
    notes = [f"{iri} has no rdf:type; counted as an individual" for iri in sorted(v.untyped_individuals)]
    return LintReport(
        findings,
        {s.value: counts.get(s.value, 0) for s in Severity},
        classify_profile(v, cfg.profile_threshold),
        notes,
        stats,
    )


def apply_fix(g: Graph, fix: Fix) -> Graph:
    out = g.copy()
    for t in fix.removals:
        out.remove(t)
    out.update(fix.additions)
    return out
