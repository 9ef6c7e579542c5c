"""Map KR-template rows into a graph as individuals and assertions."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MatrixError, PopulateError
from .graph import Graph
from .schema import build_schema_view, read_prefixed_assignments, resolve_name
from .template import KRRow, slug
from .terms import GENOME, OWL, RDF, Iri, Triple, local_name


@dataclass
class PopulateConfig:
    base_namespace: str
    character_class: str
    strict: bool = False
    predicate_map: dict[str, str] = field(default_factory=dict)
    auto_declare: bool = True
    # object name -> class IRI, for objects that are not plain individuals
    class_hints: dict[str, str] = field(default_factory=dict)
    record_primary: bool = True

    def __post_init__(self) -> None:
        if ":" not in self.base_namespace:
            raise PopulateError(f"base namespace is not absolute: {self.base_namespace!r}")


@dataclass
class PopulationReport:
    individuals_created: int = 0
    assertions_added: int = 0
    predicates_auto_declared: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "individuals_created": self.individuals_created,
            "assertions_added": self.assertions_added,
            "predicates_auto_declared": self.predicates_auto_declared,
            "warnings": self.warnings,
        }


def mint_iri(name: str, ns: str) -> str:
    if not name or not name.strip():
        raise PopulateError("cannot mint an IRI from an empty name")
    s = slug(name)
    if not s:
        raise PopulateError(f"name {name!r} has no alphanumeric characters to mint an IRI from")
    return ns + s


def parse_predicate_map(text: str, source: str = "<predicate map>") -> dict[str, str]:
    """Read ``phraseToken = prefixed:property`` lines (with an ``@prefix`` block)."""
    try:
        prefixes, rows = read_prefixed_assignments(text, source)
        return {key: resolve_name(value, prefixes, f"{source}:{lineno}") for lineno, key, value in rows}
    except MatrixError as exc:
        raise PopulateError(str(exc)) from None


def populate_graph(g: Graph, rows: list[KRRow], cfg: PopulateConfig) -> tuple[Graph, PopulationReport]:
    """Return a populated copy of ``g`` and a report of what changed.

    Re-running with the same rows on the result adds nothing.
    """
    out = g.copy()
    report = PopulationReport()
    if not rows:
        return out, report
    view = build_schema_view(out)
    if cfg.strict and cfg.character_class not in view.classes:
        raise PopulateError(f"character class {cfg.character_class} is not declared in the schema")

    by_local: dict[str, str] = {}
    by_folded: dict[str, str] = {}
    for prop in sorted(view.properties):
        by_local.setdefault(local_name(prop), prop)
        by_folded.setdefault(local_name(prop).casefold(), prop)

    resolved: dict[str, str | None] = {}

    def resolve(token: str, row: KRRow) -> str | None:
        if token in resolved:
            return resolved[token]
        iri = cfg.predicate_map.get(token)
        if iri is None:
            key = slug(token)
            iri = by_local.get(key) or by_folded.get(key.casefold())
        if iri is None:
            if cfg.auto_declare:
                iri = mint_iri(token, cfg.base_namespace)
                out.add(Triple(Iri(iri), Iri(RDF.type), Iri(OWL.ObjectProperty)))
                report.predicates_auto_declared.append(iri)
                report.warnings.append(f"row {row.row_number}: relation {token!r} auto-declared as object property {iri}")
            elif cfg.strict:
                raise PopulateError(f"row {row.row_number}: relation {token!r} does not resolve to a declared property")
            else:
                report.warnings.append(f"row {row.row_number}: relation {token!r} unresolved; skipped")
        resolved[token] = iri
        return iri

    existing = {t for triple in out for t in (triple.subject, triple.object) if isinstance(t, Iri)}
    before = len(out)
    characters = {slug(r.character) for r in rows}
    minted: dict[str, None] = {}
    typ = Iri(RDF.type)

    for row in rows:
        subject = Iri(mint_iri(row.character, cfg.base_namespace))
        minted[subject.value] = None
        out.add(Triple(subject, typ, Iri(cfg.character_class)))
        for phrase in row.phrases:
            prop = resolve(phrase.predicate, row)
            if prop is None:
                continue
            if phrase is row.primary and cfg.record_primary:
                out.add(Triple(subject, GENOME.term("primaryDefinition"), Iri(prop)))
            for name in phrase.objects:
                obj = Iri(mint_iri(name, cfg.base_namespace))
                minted[obj.value] = None
                out.add(Triple(subject, Iri(prop), obj))
                if slug(name) not in characters:
                    out.add(Triple(obj, typ, Iri(cfg.class_hints.get(name, OWL.NamedIndividual))))
                    if name not in cfg.class_hints:
                        report.warnings.append(f"row {row.row_number}: object {name!r} is not an enumerated character")

    report.individuals_created = sum(1 for iri in minted if Iri(iri) not in existing)
    report.assertions_added = len(out) - before
    report.warnings = list(dict.fromkeys(report.warnings))
    return out, report
