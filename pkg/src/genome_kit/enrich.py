"""Patches, the evaluate/enrich iteration loop, and FEKR export."""

from __future__ import annotations

import datetime as _dt
import enum
import logging
import sys
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .cq import CQ, Decision, DecisionKind, decide_satisfaction, evaluate_corpus, DEFAULT_LOWER, DEFAULT_UPPER
from .errors import GuardError, PatchError, TurtleSyntaxError
from .graph import Graph
from .lint import LintConfig, LintReport, run_lint
from .schema import RelationshipMatrix, build_schema_view
from .terms import GENOME, OWL, RDF, XSD, Iri, Literal, Triple, namespace_of
from .turtle import parse_turtle, serialize_turtle

log = logging.getLogger(__name__)


class Provenance(str, enum.Enum):
    EXTERNAL = "external"
    INTERNAL = "internal"


@dataclass
class Patch:
    additions: Graph = field(default_factory=Graph)
    removals: Graph = field(default_factory=Graph)
    provenance: Provenance = Provenance.EXTERNAL
    note: str = ""

    def __post_init__(self) -> None:
        self.provenance = Provenance(self.provenance)
        overlap = [t for t in self.removals if t in self.additions]
        if overlap:
            raise PatchError(f"{len(overlap)} triple(s) appear in both additions and removals, e.g. {overlap[0]}")

    def __len__(self) -> int:
        return len(self.additions) + len(self.removals)


def parse_patch(add_doc: str, remove_doc: str, provenance: str | Provenance = Provenance.EXTERNAL,
                note: str = "") -> Patch:
    try:
        additions = parse_turtle(add_doc, source="add.ttl")
        removals = parse_turtle(remove_doc, source="remove.ttl")
    except TurtleSyntaxError as exc:
        raise PatchError(f"patch does not parse: {exc}") from exc
    return Patch(additions, removals, Provenance(provenance), note)


def load_patch_dir(path: str | Path) -> Patch:
    """Read ``add.ttl``, ``remove.ttl`` and ``patch.toml`` (each optional)."""
    path = Path(path)
    if not path.is_dir():
        raise FileNotFoundError(f"patch directory not found: {path}")

    def read(name: str) -> str:
        p = path / name
        return p.read_text(encoding="utf-8") if p.exists() else ""

    meta = {}
    if (path / "patch.toml").exists():
        try:
            meta = tomllib.loads(read("patch.toml"))
        except tomllib.TOMLDecodeError as exc:
            raise PatchError(f"{path / 'patch.toml'}: {exc}") from None
    try:
        return parse_patch(read("add.ttl"), read("remove.ttl"),
                           meta.get("provenance", "external"), meta.get("note", path.name))
    except ValueError as exc:
        if isinstance(exc, PatchError):
            raise
        raise PatchError(f"{path}: {exc}") from None


@dataclass
class PatchReport:
    added: int = 0
    removed: int = 0
    warnings: list[str] = field(default_factory=list)


def apply_patch(g: Graph, p: Patch) -> tuple[Graph, PatchReport]:
    """Removals first, then additions, on a copy of ``g``."""
    out = g.copy()
    report = PatchReport()
    for t in p.removals:
        if out.remove(t):
            report.removed += 1
        else:
            report.warnings.append(f"removal of absent triple ignored: {t.subject} {t.predicate} {t.object}")
    for t in p.additions:
        report.added += out.add(t)
    for label, ns in p.additions.prefixes.entries.items():
        out.prefixes.entries.setdefault(label, ns)
    return out, report


def suggest_internal_fixes(report: LintReport) -> Patch:
    additions, removals = Graph(), Graph()
    unfixable = []
    for f in report.findings:
        if f.fix is None:
            if f.severity.value != "info":
                unfixable.append(f"{f.rule_id} {f.subject}")
            continue
        additions.update(f.fix.additions)
        removals.update(f.fix.removals)
    for t in list(removals):
        if t in additions:
            removals.remove(t)
    note = f"internal fixes for {sum(f.fix is not None for f in report.findings)} finding(s)"
    if unfixable:
        note += "; not auto-fixable: " + ", ".join(unfixable)
    return Patch(additions, removals, Provenance.INTERNAL, note)


# -- iteration -------------------------------------------------------------


@dataclass
class IterationRecord:
    index: int
    coverage: Decimal
    decision: Decision
    patches_applied: list[str]
    lint_error_count: int
    answered: int = 0

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "coverage": float(self.coverage),
            "decision": self.decision.to_dict(),
            "patches_applied": self.patches_applied,
            "lint_error_count": self.lint_error_count,
            "answered": self.answered,
        }


@dataclass
class IterationResult:
    graph: Graph
    records: list[IterationRecord]
    decision: Decision
    truncated: bool = False

    def __iter__(self):
        # allows ``graph, records, decision = run_iteration(...)``
        return iter((self.graph, self.records, self.decision))

    def to_dict(self) -> dict:
        return {
            "records": [r.to_dict() for r in self.records],
            "decision": self.decision.to_dict(),
            "truncated": self.truncated,
        }


def run_iteration(g: Graph, corpus: Sequence[CQ], matrix: RelationshipMatrix | None,
                  patch_queue: Sequence[Patch], thresholds: tuple[float, float] = (DEFAULT_LOWER, DEFAULT_UPPER),
                  max_iters: int = 10, *, internal_fixes: bool = False,
                  lint_config: LintConfig | None = None) -> IterationResult:
    """Evaluate, decide, and enrich until satisfactory, unsatisfactory or out of patches.

    Each pass applies the next queued patch and, with ``internal_fixes``,
    the auto-fix patch suggested by lint on the patched graph.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    lower, upper = thresholds
    queue = list(patch_queue)
    records: list[IterationRecord] = []
    applied: list[str] = []
    graph = g
    for index in range(max_iters):
        table = evaluate_corpus(graph, corpus)
        decision = decide_satisfaction(table, lower, upper)
        report = run_lint(build_schema_view(graph), matrix, lint_config)
        records.append(IterationRecord(index, table.coverage, decision, applied,
                                       report.error_count, table.considered.answered))
        log.info("pass %d: coverage %s -> %s", index, table.considered.pct_answered, decision.value.value)
        if decision.value is not DecisionKind.NEEDS_ENRICHMENT or not queue:
            return IterationResult(graph, records, decision)
        if index == max_iters - 1:
            break
        patch = queue.pop(0)
        graph, _ = apply_patch(graph, patch)
        applied = [patch.note or patch.provenance.value]
        if internal_fixes:
            fixes = suggest_internal_fixes(run_lint(build_schema_view(graph), matrix, lint_config))
            if len(fixes):
                graph, _ = apply_patch(graph, fixes)
                applied.append(fixes.note)
    return IterationResult(graph, records, decision, truncated=True)


# -- FEKR export -------------------------------------------------------------

PROVENANCE_PREDICATES = (GENOME.coveragePercent, GENOME.iterationCount, GENOME.exportedAt)


@dataclass(frozen=True)
class FekrMetadata:
    coverage: Decimal
    iterations: int
    timestamp: str
    status: str = "FEKR"

    def __post_init__(self) -> None:
        if self.status != "FEKR":
            raise GuardError(f"metadata status must be 'FEKR', got {self.status!r}")


def fekr_metadata(decision: Decision, iterations: int, timestamp: str | None = None) -> FekrMetadata:
    """Metadata for export; refuses anything short of a satisfactory decision."""
    if not decision.satisfactory:
        raise GuardError(
            f"cannot export FEKR: coverage {decision.coverage * 100:.4f}% is "
            f"{decision.value.value} (satisfactory needs >= {decision.upper * 100:g}%)"
        )
    if timestamp is None:
        timestamp = _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()
    return FekrMetadata(decision.coverage, iterations, timestamp)


def ontology_header(g: Graph) -> Iri | None:
    heads = sorted(t.subject.value for t in g.match(None, Iri(RDF.type), Iri(OWL.Ontology))
                   if isinstance(t.subject, Iri))
    return Iri(heads[0]) if heads else None


def provenance_triples(g: Graph, meta: FekrMetadata) -> list[Triple]:
    header = ontology_header(g)
    extra = []
    if header is None:
        ns = g.prefixes.entries.get("") or (g.namespaces_used().most_common(1) or [("urn:genome:ontology", 0)])[0][0]
        header = Iri(ns.rstrip("#/") or ns)
        extra.append(Triple(header, Iri(RDF.type), Iri(OWL.Ontology)))
    pct = (Decimal(meta.coverage) * 100).quantize(Decimal("0.0001"))
    return extra + [
        Triple(header, Iri(GENOME.coveragePercent), Literal(str(pct), XSD.decimal)),
        Triple(header, Iri(GENOME.iterationCount), Literal(str(meta.iterations), XSD.integer)),
        Triple(header, Iri(GENOME.exportedAt), Literal(meta.timestamp, XSD.dateTime)),
    ]


def export_fekr(g: Graph, meta: FekrMetadata) -> str:
    """Serialize ``g`` with coverage provenance on its ontology header node."""
    if not isinstance(meta, FekrMetadata) or meta.status != "FEKR":
        raise GuardError("export requires FEKR metadata from a satisfactory decision")
    out = g.copy()
    for pred in PROVENANCE_PREDICATES:
        for t in out.match(None, Iri(pred), None):
            out.remove(t)
    out.update(provenance_triples(out, meta))
    out.prefixes.entries.setdefault("genome", str(GENOME))
    out.prefixes.entries.setdefault("xsd", str(XSD))
    return serialize_turtle(out)


__all__ = [
    "FekrMetadata", "IterationRecord", "IterationResult", "Patch", "PatchReport", "Provenance",
    "apply_patch", "export_fekr", "fekr_metadata", "load_patch_dir", "parse_patch",
    "provenance_triples", "run_iteration", "suggest_internal_fixes", "namespace_of",
]
