"""Ontology-level view of a graph: hierarchies, domains/ranges, individuals,
rigidity tags, plus the relationship matrix and profile classifier."""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import MatrixError
from .graph import Graph, PrefixMap
from .terms import (
    BUILTIN_NAMESPACES,
    GENOME,
    OWL,
    RDF,
    RDFS,
    SKOS,
    XSD,
    Iri,
    Literal,
    local_name,
    namespace_of,
)


class RigidityTag(str, enum.Enum):
    RIGID = "rigid"
    ANTI_RIGID = "anti_rigid"
    UNSPECIFIED = "unspecified"


_RIGIDITY_LITERALS = {
    "rigid": RigidityTag.RIGID,
    "antirigid": RigidityTag.ANTI_RIGID,
    "anti_rigid": RigidityTag.ANTI_RIGID,
    "anti-rigid": RigidityTag.ANTI_RIGID,
}

CLASS_TYPES = frozenset({OWL.Class, RDFS.Class})
OBJECT_PROPERTY_TYPES = frozenset({
    OWL.ObjectProperty, OWL.TransitiveProperty, OWL.SymmetricProperty, OWL.AsymmetricProperty,
    OWL.FunctionalProperty, OWL.InverseFunctionalProperty, OWL.ReflexiveProperty,
    OWL.IrreflexiveProperty,
})
DATA_PROPERTY_TYPES = frozenset({OWL.DatatypeProperty})
# Types that never make their subject an individual of a domain class.
METAMODEL_TYPES = frozenset(
    CLASS_TYPES | OBJECT_PROPERTY_TYPES | DATA_PROPERTY_TYPES
    | {OWL.AnnotationProperty, OWL.Ontology, RDF.Property, OWL.Restriction, RDFS.Datatype,
       OWL.AllDisjointClasses, OWL.NamedIndividual}
)
LEXICAL_PREDICATES = frozenset({
    RDFS.label, RDFS.comment, SKOS.prefLabel, SKOS.altLabel, SKOS.hiddenLabel,
    SKOS.definition, SKOS.note, SKOS.scopeNote, SKOS.example,
})
SCHEMA_PREDICATES = frozenset({
    RDFS.subClassOf, RDFS.subPropertyOf, RDFS.domain, RDFS.range, OWL.equivalentClass,
    OWL.equivalentProperty, OWL.disjointWith, OWL.inverseOf, OWL.propertyDisjointWith,
})
STRUCTURAL_PREDICATES = SCHEMA_PREDICATES | {RDF.type}


@dataclass
class SchemaView:
    classes: set[str] = field(default_factory=set)
    class_parents: dict[str, set[str]] = field(default_factory=dict)
    object_properties: set[str] = field(default_factory=set)
    data_properties: set[str] = field(default_factory=set)
    property_parents: dict[str, set[str]] = field(default_factory=dict)
    domains: dict[str, set[str]] = field(default_factory=dict)
    ranges: dict[str, set[str]] = field(default_factory=dict)
    individuals: set[str] = field(default_factory=set)
    types: dict[str, set[str]] = field(default_factory=dict)
    rigidity: dict[str, RigidityTag] = field(default_factory=dict)
    labels: dict[str, str] = field(default_factory=dict)
    # bookkeeping the lint rules and profile classifier need
    ontology_iri: str | None = None
    local_namespaces: tuple[str, ...] = ()
    untyped_individuals: set[str] = field(default_factory=set)
    axiom_counts: dict[str, int] = field(default_factory=dict)
    schema_iri_usage: Counter = field(default_factory=Counter)
    annotation_usage: Counter = field(default_factory=Counter)
    prefixes: PrefixMap = field(default_factory=PrefixMap)

    @property
    def properties(self) -> set[str]:
        return self.object_properties | self.data_properties

    def rigidity_of(self, iri: str) -> RigidityTag:
        return self.rigidity.get(iri, RigidityTag.UNSPECIFIED)

    def label_of(self, iri: str) -> str:
        return self.labels.get(iri) or local_name(iri)

    def property_children(self) -> dict[str, set[str]]:
        out: dict[str, set[str]] = {}
        for child, parents in self.property_parents.items():
            for parent in parents:
                out.setdefault(parent, set()).add(child)
        return out

    def property_depth(self, prop: str) -> int:
        """Longest subproperty chain from ``prop`` up to a root (roots are 0)."""
        memo: dict[str, int] = {}

        def depth(p: str, trail: frozenset) -> int:
            if p in memo:
                return memo[p]
            parents = [q for q in self.property_parents.get(p, ()) if q not in trail]
            d = 0 if not parents else 1 + max(depth(q, trail | {p}) for q in parents)
            memo[p] = d
            return d

        return depth(prop, frozenset())

    def class_ancestors(self, cls: str) -> set[str]:
        seen: set[str] = set()
        stack = [cls]
        while stack:
            c = stack.pop()
            for parent in self.class_parents.get(c, ()):
                if parent not in seen:
                    seen.add(parent)
                    stack.append(parent)
        return seen


def _iri(term) -> str | None:
    return term.value if isinstance(term, Iri) else None


def _add(multimap: dict[str, set[str]], key: str, value: str) -> None:
    multimap.setdefault(key, set()).add(value)


def _is_datatype(iri: str) -> bool:
    return iri.startswith(str(XSD)) or iri in (RDFS.Literal, RDF.langString, RDF.PlainLiteral)


def build_schema_view(g: Graph) -> SchemaView:
    """Derive the schema-level view of ``g`` without modifying it."""
    v = SchemaView(prefixes=g.prefixes.copy())
    typ = RDF.type
    counts = Counter()

    declared_object: set[str] = set()
    declared_data: set[str] = set()
    declared_generic: set[str] = set()
    ontology_headers: list[str] = []

    for t in g.match(None, Iri(typ), None):
        s, o = _iri(t.subject), _iri(t.object)
        if s is None or o is None:
            continue
        if o in CLASS_TYPES:
            v.classes.add(s)
        elif o in OBJECT_PROPERTY_TYPES:
            declared_object.add(s)
        elif o in DATA_PROPERTY_TYPES:
            declared_data.add(s)
        elif o in (RDF.Property,):
            declared_generic.add(s)
        elif o == OWL.Ontology:
            ontology_headers.append(s)
        elif o == OWL.NamedIndividual:
            v.individuals.add(s)
        elif o not in METAMODEL_TYPES:
            v.individuals.add(s)
            v.classes.add(o)
            _add(v.types, s, o)

    for t in g.match(None, Iri(RDFS.subClassOf), None):
        s, o = _iri(t.subject), _iri(t.object)
        counts["subclass"] += 1
        if s is not None:
            v.classes.add(s)
        if o is not None:
            v.classes.add(o)
        if s is not None and o is not None:
            _add(v.class_parents, s, o)

    sub_props = g.match(None, Iri(RDFS.subPropertyOf), None)
    for t in sub_props:
        s, o = _iri(t.subject), _iri(t.object)
        if s is not None and o is not None:
            _add(v.property_parents, s, o)

    for pred, target in ((RDFS.domain, v.domains), (RDFS.range, v.ranges)):
        for t in g.match(None, Iri(pred), None):
            s, o = _iri(t.subject), _iri(t.object)
            if s is not None and o is not None:
                _add(target, s, o)

    # Property kinds: declarations first, then range datatypes, else object.
    data_props = set(declared_data)
    object_props = set(declared_object)
    undeclared = (declared_generic | set(v.domains) | set(v.ranges)
                  | set(v.property_parents) | {p for ps in v.property_parents.values() for p in ps})
    undeclared -= data_props | object_props
    changed = True
    pending = set(undeclared)
    while changed:
        changed = False
        for p in sorted(pending):
            rng = v.ranges.get(p, set())
            related = v.property_parents.get(p, set()) | {c for c, ps in v.property_parents.items() if p in ps}
            datatype_range = bool(rng) and all(_is_datatype(r) for r in rng)
            if datatype_range or related & data_props:
                data_props.add(p)
                pending.discard(p)
                changed = True
            elif related & object_props or (rng and not datatype_range):
                object_props.add(p)
                pending.discard(p)
                changed = True
    object_props |= pending
    v.object_properties = object_props
    v.data_properties = data_props

    for t in g.match(None, GENOME.term("rigidity"), None):
        s = _iri(t.subject)
        if s is None or not isinstance(t.object, Literal):
            continue
        tag = _RIGIDITY_LITERALS.get(t.object.lexical.strip().lower())
        if tag is not None:
            v.rigidity[s] = tag

    candidates: dict[str, list[tuple]] = {}
    for t in g.match(None, Iri(RDFS.label), None):
        s = _iri(t.subject)
        if s is not None and isinstance(t.object, Literal):
            # English or untagged labels win, then lexicographic order
            candidates.setdefault(s, []).append((t.object.lang not in (None, "en"), t.object.lexical))
    v.labels = {s: min(c)[1] for s, c in candidates.items()}

    schema_entities = v.classes | v.object_properties | v.data_properties | set(ontology_headers)
    subjects_seen: set[str] = set()
    for t in g:
        s, p, o = t.subject, t.predicate.value, t.object
        s_iri = _iri(s)
        if s_iri is not None:
            subjects_seen.add(s_iri)
        if p in SCHEMA_PREDICATES:
            counts["schema_other"] += p != RDFS.subClassOf
            for term in (s, o):
                iri = _iri(term)
                if iri is not None:
                    v.schema_iri_usage[iri] += 1
        elif p == RDF.type:
            o_iri = _iri(o)
            # the ontology's own header IRI is not a reused term
            if o_iri in METAMODEL_TYPES and s_iri is not None and o_iri != OWL.Ontology:
                v.schema_iri_usage[s_iri] += 1
            elif o_iri is not None and o_iri not in METAMODEL_TYPES:
                v.schema_iri_usage[o_iri] += 1
        elif p in LEXICAL_PREDICATES:
            counts["lexical"] += 1
            v.annotation_usage[p] += 1
        elif p in v.data_properties:
            counts["data_assertion"] += 1
        elif p in v.object_properties:
            counts["object_assertion"] += 1
        elif s_iri in schema_entities and namespace_of(p) != str(GENOME):
            v.annotation_usage[p] += 1

    used_as_schema = v.classes | v.object_properties | v.data_properties | set(ontology_headers)
    for s in subjects_seen:
        if s in used_as_schema or s in v.individuals or namespace_of(s) == str(GENOME):
            continue
        v.individuals.add(s)
        v.untyped_individuals.add(s)

    v.axiom_counts = {
        "subclass": counts["subclass"],
        "data_assertion": counts["data_assertion"],
        "lexical": counts["lexical"],
        "schema_other": counts["schema_other"],
    }
    v.ontology_iri = min(ontology_headers) if ontology_headers else None
    v.local_namespaces = _local_namespaces(g, v, ontology_headers)
    return v


def _local_namespaces(g: Graph, v: SchemaView, headers: list[str]) -> tuple[str, ...]:
    found: set[str] = set()
    for h in headers:
        found.add(h if h.endswith(("#", "/")) else h + "#")
        found.add(h if h.endswith(("#", "/")) else h + "/")
    empty = g.prefixes.entries.get("")
    if empty:
        found.add(empty)
    entities = (v.classes | v.object_properties | v.data_properties | v.individuals)
    ns_counts = Counter(namespace_of(e) for e in entities if namespace_of(e) not in BUILTIN_NAMESPACES)
    if ns_counts:
        top = max(ns_counts.values())
        found.update(sorted(ns for ns, n in ns_counts.items() if n == top)[:1])
    return tuple(sorted(found))


# -- relationship matrix ---------------------------------------------------


@dataclass
class RelationshipMatrix:
    """Hypernym families of relation properties, e.g. hasParent over
    hasFather and hasMother."""

    families: dict[str, frozenset[str]] = field(default_factory=dict)
    inverse_pairs: set[tuple[str, str]] = field(default_factory=set)

    def __post_init__(self) -> None:
        owner: dict[str, str] = {}
        for family, members in self.families.items():
            if family in members:
                raise MatrixError(f"family {family} lists itself as a member")
            for m in members:
                if m in owner:
                    raise MatrixError(f"{m} belongs to both {owner[m]} and {family}")
                owner[m] = family

    def family_of(self, member: str) -> str | None:
        for family, members in self.families.items():
            if member in members:
                return family
        return None

    def all_properties(self) -> set[str]:
        out = set(self.families)
        for members in self.families.values():
            out |= members
        return out


_COMMENT = re.compile(r"(?:^|\s)#.*$")


def _strip_comment(line: str) -> str:
    """Drop a ``#`` comment; a ``#`` inside an IRI such as ``<http://e/ns#x>`` is kept."""
    return _COMMENT.sub("", line)


def read_prefixed_assignments(text: str, source: str = "<string>") -> tuple[PrefixMap, list[tuple[int, str, str]]]:
    """Read ``@prefix`` lines and ``key = value`` lines, skipping ``#`` comments.

    Returns the prefix map and ``(line_number, key, value)`` triples with the
    raw (unexpanded) key and value text.
    """
    prefixes = PrefixMap()
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("@prefix"):
            body = line[len("@prefix"):].strip().rstrip(".").strip()
            label, _, iri = body.partition(":")
            iri = iri.strip()
            if not (iri.startswith("<") and iri.endswith(">")):
                raise MatrixError(f"{source}:{lineno}: malformed @prefix line")
            prefixes.bind(label.strip(), iri[1:-1])
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip() or not value.strip():
            raise MatrixError(f"{source}:{lineno}: expected 'name = value'")
        rows.append((lineno, key.strip(), value.strip()))
    return prefixes, rows


def resolve_name(name: str, prefixes: PrefixMap, where: str) -> str:
    if not name or any(ch.isspace() for ch in name):
        raise MatrixError(f"{where}: {name!r} is not a single name (separate members with ',')")
    if name.startswith("<") and name.endswith(">"):
        return name[1:-1]
    if ":" not in name:
        raise MatrixError(f"{where}: {name!r} is neither a prefixed name nor an <iri>")
    try:
        return prefixes.expand(name)
    except KeyError as exc:
        raise MatrixError(f"{where}: {exc.args[0]}") from None


def parse_matrix(text: str, source: str = "<matrix>") -> RelationshipMatrix:
    """Parse ``family = member, member`` lines; ``a <-> b`` declares an inverse pair."""
    plain_lines, inverse_lines = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if "<->" in _strip_comment(raw):
            inverse_lines.append((lineno, _strip_comment(raw)))
            plain_lines.append("")
        else:
            plain_lines.append(raw)
    prefixes, rows = read_prefixed_assignments("\n".join(plain_lines), source)
    families: dict[str, frozenset[str]] = {}
    for lineno, key, value in rows:
        where = f"{source}:{lineno}"
        family = resolve_name(key, prefixes, where)
        members = [resolve_name(m.strip(), prefixes, where) for m in value.split(",") if m.strip()]
        if family in families:
            raise MatrixError(f"{where}: family {key} declared twice")
        families[family] = frozenset(members)
    inverses = set()
    for lineno, line in inverse_lines:
        a, _, b = line.partition("<->")
        where = f"{source}:{lineno}"
        inverses.add((resolve_name(a.strip(), prefixes, where), resolve_name(b.strip(), prefixes, where)))
    return RelationshipMatrix(families, inverses)


def default_matrix(namespace: str) -> RelationshipMatrix:
    """Kinship families; parent and spouse come from the case study, sibling is a tool default."""
    n = namespace
    return RelationshipMatrix({
        n + "hasParent": frozenset({n + "hasFather", n + "hasMother"}),
        n + "hasSpouse": frozenset({n + "hasHusband", n + "hasWife"}),
        n + "hasSibling": frozenset({n + "hasBrother", n + "hasSister"}),
    })


# -- profile ---------------------------------------------------------------


class ProfileKind(str, enum.Enum):
    CLASSIFICATION = "classification"
    DESCRIPTIVE = "descriptive"
    DOMAIN_LINGUISTIC = "domain_linguistic"
    MIXED = "mixed"


@dataclass(frozen=True)
class OntologyProfile:
    value: ProfileKind
    subclass_axioms: int
    data_assertions: int
    lexical_annotations: int
    total_axioms: int
    threshold: float = 0.5

    def shares(self) -> dict[str, float]:
        total = self.total_axioms or 1
        return {
            "classification": self.subclass_axioms / total,
            "descriptive": self.data_assertions / total,
            "domain_linguistic": self.lexical_annotations / total,
        }

    def to_dict(self) -> dict:
        return {
            "value": self.value.value,
            "threshold": self.threshold,
            "metrics": {
                "subclass_axioms": self.subclass_axioms,
                "data_property_assertions": self.data_assertions,
                "lexical_annotations": self.lexical_annotations,
                "total_axioms": self.total_axioms,
            },
        }


def classify_profile(v: SchemaView, threshold: float = 0.5) -> OntologyProfile:
    """Classify by the dominant share among schema-level axioms.

    The denominator counts subclass axioms, other schema axioms
    (subproperty, domain, range, equivalence, disjointness, inverses),
    data-property assertions and lexical annotations.  Declarations and
    object-property assertions between individuals are not counted.
    """
    c = v.axiom_counts
    sub, data, lex = c.get("subclass", 0), c.get("data_assertion", 0), c.get("lexical", 0)
    total = sub + data + lex + c.get("schema_other", 0)
    kind = ProfileKind.MIXED
    if total:
        for value, n in ((ProfileKind.CLASSIFICATION, sub), (ProfileKind.DESCRIPTIVE, data),
                         (ProfileKind.DOMAIN_LINGUISTIC, lex)):
            if n / total >= threshold:
                kind = value
                break
    return OntologyProfile(kind, sub, data, lex, total, threshold)
