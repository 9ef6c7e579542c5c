"""Competency-question corpus, basic-graph-pattern evaluation and coverage tables."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterator, Sequence, Union

from .errors import ConfigError, CorpusError, TurtleSyntaxError
from .graph import Graph, PrefixMap
from .terms import RDF_TYPE, XSD, BNode, Iri, Literal, Term
from .turtle import Lexer

# -- patterns --------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("variable name must be non-empty")

    def __str__(self) -> str:
        return f"?{self.name}"


PatternTerm = Union[Var, Iri, Literal, BNode]


@dataclass(frozen=True)
class BGP:
    patterns: tuple[tuple[PatternTerm, PatternTerm, PatternTerm], ...]

    def __post_init__(self) -> None:
        if not self.patterns:
            raise ValueError("a basic graph pattern needs at least one triple pattern")

    @property
    def variables(self) -> list[str]:
        seen: dict[str, None] = {}
        for pat in self.patterns:
            for term in pat:
                if isinstance(term, Var):
                    seen[term.name] = None
        return list(seen)


def parse_pattern(text: str, prefixes: PrefixMap | None = None) -> BGP:
    """Parse ``term term term .`` sequences (the final ``.`` is optional)."""
    prefixes = prefixes or PrefixMap()
    toks = Lexer(text, allow_variables=True).tokens()
    terms: list[PatternTerm] = []
    patterns = []
    i = 0
    while i < len(toks):
        tok = toks[i]
        i += 1
        if tok.kind == "PUNCT" and tok.text == ".":
            if len(terms) != 3:
                raise TurtleSyntaxError("triple pattern needs exactly three terms", tok.line, tok.column)
            patterns.append(tuple(terms))
            terms = []
            continue
        if tok.kind == "VAR":
            term: PatternTerm = Var(tok.value)
        elif tok.kind == "IRIREF":
            if ":" not in tok.value:
                raise TurtleSyntaxError(f"relative IRI <{tok.value}> in pattern", tok.line, tok.column)
            term = Iri(tok.value)
        elif tok.kind == "PNAME":
            try:
                term = Iri(prefixes.expand(tok.value))
            except KeyError as exc:
                raise TurtleSyntaxError(exc.args[0], tok.line, tok.column) from None
        elif tok.kind == "A":
            term = RDF_TYPE
        elif tok.kind == "STRING":
            nxt = toks[i] if i < len(toks) else None
            if nxt is not None and nxt.kind == "LANGTAG":
                i += 1
                term = Literal(tok.value, lang=nxt.value)
            else:
                term = Literal(tok.value)
        elif tok.kind == "INTEGER":
            term = Literal(tok.text, XSD.integer)
        elif tok.kind == "DECIMAL":
            term = Literal(tok.text, XSD.decimal)
        elif tok.kind == "BNODE":
            term = BNode(tok.value)
        else:
            raise TurtleSyntaxError(f"unexpected {tok.text!r} in pattern", tok.line, tok.column)
        if len(terms) == 3:
            raise TurtleSyntaxError("missing '.' between triple patterns", tok.line, tok.column)
        if len(terms) == 1 and not isinstance(term, (Var, Iri)):
            raise TurtleSyntaxError("predicate must be a variable or IRI", tok.line, tok.column)
        terms.append(term)
    if terms:
        if len(terms) != 3:
            raise TurtleSyntaxError("incomplete triple pattern", 1, len(text))
        patterns.append(tuple(terms))
    return BGP(tuple(patterns))


Binding = dict[str, Term]


def _resolve(term: PatternTerm, binding: Binding) -> Term | None:
    if isinstance(term, Var):
        return binding.get(term.name)
    return term


def _bound_count(pat, binding: Binding) -> int:
    return sum(_resolve(t, binding) is not None for t in pat)


def _solutions(g: Graph, patterns: list, binding: Binding) -> Iterator[Binding]:
    if not patterns:
        yield binding
        return
    # most constrained pattern first
    idx = max(range(len(patterns)), key=lambda k: (_bound_count(patterns[k], binding), -k))
    pat = patterns[idx]
    rest = patterns[:idx] + patterns[idx + 1:]
    s, p, o = (_resolve(t, binding) for t in pat)
    if p is not None and not isinstance(p, Iri):
        return
    if s is not None and isinstance(s, Literal):
        return
    for triple in g.match(s, p, o):
        new = dict(binding)
        ok = True
        for term, value in zip(pat, triple):
            if isinstance(term, Var):
                prev = new.get(term.name)
                if prev is None:
                    new[term.name] = value
                elif prev != value:
                    ok = False
                    break
        if ok:
            yield from _solutions(g, rest, new)


def eval_pattern(g: Graph, q: BGP) -> list[Binding]:
    """All solutions of the conjunctive pattern, duplicates removed, in discovery order."""
    seen = set()
    out = []
    for sol in _solutions(g, list(q.patterns), {}):
        key = frozenset(sol.items())
        if key not in seen:
            seen.add(key)
            out.append(sol)
    return out


def has_solution(g: Graph, q: BGP) -> bool:
    return next(_solutions(g, list(q.patterns), {}), None) is not None


# -- corpus ----------------------------------------------------------------


class CQKind(str, enum.Enum):
    FACTUAL = "factual"
    DESCRIPTIVE = "descriptive"


@dataclass(frozen=True)
class CQ:
    id: str
    asker: str
    text: str
    kind: CQKind = CQKind.FACTUAL
    dup_of: str | None = None
    pattern: BGP | None = None
    line: int | None = field(default=None, compare=False)

    @property
    def needs_pattern(self) -> bool:
        """Factual, non-duplicate and unformalized: counted unanswered and flagged."""
        return self.kind is CQKind.FACTUAL and self.dup_of is None and self.pattern is None


def parse_cq_corpus(document: str) -> list[CQ]:
    """Parse the tab-separated corpus format.

    Fields: ``id, asker, kind, dup_of, text, pattern`` with ``-`` for an
    absent dup_of or pattern.  ``@prefix p: <iri>`` lines may precede the
    records; ``#`` lines and blank lines are ignored, as is a header row
    whose first field is ``id``.
    """
    prefixes = PrefixMap()
    cqs: list[CQ] = []
    ids: dict[str, int] = {}
    for lineno, raw in enumerate(document.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("@prefix"):
            m = re.fullmatch(r"@prefix\s+([^\s:]*):\s*<([^>]*)>\s*\.?", stripped)
            if not m:
                raise CorpusError("malformed @prefix line", lineno)
            try:
                prefixes.bind(m.group(1), m.group(2))
            except ValueError as exc:
                raise CorpusError(str(exc), lineno) from None
            continue
        fields = [f.strip() for f in line.split("\t")]
        if fields[0].lower() == "id" and not cqs:
            continue
        if len(fields) != 6:
            raise CorpusError(f"expected 6 tab-separated fields, found {len(fields)}", lineno)
        cq_id, asker, kind, dup_of, text, pattern_text = fields
        if not cq_id or not asker or not text:
            raise CorpusError("id, asker and text must be non-empty", lineno)
        try:
            cq_kind = CQKind(kind.lower())
        except ValueError:
            raise CorpusError(f"kind must be 'factual' or 'descriptive', got {kind!r}", lineno) from None
        if cq_id in ids:
            raise CorpusError(f"duplicate id {cq_id!r} (first defined on line {ids[cq_id]})", lineno)
        ids[cq_id] = lineno
        pattern = None
        if pattern_text and pattern_text != "-":
            try:
                pattern = parse_pattern(pattern_text, prefixes)
            except (TurtleSyntaxError, ValueError) as exc:
                detail = exc.message if isinstance(exc, TurtleSyntaxError) else str(exc)
                raise CorpusError(f"bad pattern for {cq_id}: {detail}", lineno) from None
        cqs.append(CQ(cq_id, asker, text, cq_kind, None if dup_of in ("", "-") else dup_of, pattern, lineno))
    for cq in cqs:
        if cq.dup_of is not None:
            if cq.dup_of not in ids:
                raise CorpusError(f"{cq.id} is marked dup_of unknown id {cq.dup_of!r}", cq.line)
            if cq.dup_of == cq.id:
                raise CorpusError(f"{cq.id} is marked as a duplicate of itself", cq.line)
    return cqs


def normalize_question(text: str) -> str:
    text = re.sub(r"[^\w\s]", "", text.casefold())
    return " ".join(text.split())


def dedup_corpus(cqs: Sequence[CQ]) -> list[CQ]:
    """Mark exact duplicates (after normalization) of earlier questions.

    Manually set ``dup_of`` values are kept; the first occurrence of a text
    is canonical.
    """
    canonical: dict[str, str] = {}
    out = []
    for cq in cqs:
        key = normalize_question(cq.text)
        if cq.dup_of is None and key in canonical:
            cq = replace(cq, dup_of=canonical[key])
        elif cq.dup_of is None:
            canonical[key] = cq.id
        out.append(cq)
    return out


# -- coverage --------------------------------------------------------------

_FOUR_PLACES = Decimal("0.0001")


def percent(answered: int, unique: int) -> Decimal:
    """``100 * answered / unique`` rounded half-up to four places; 0 when unique is 0."""
    if unique == 0:
        return Decimal(0).quantize(_FOUR_PLACES)
    return (Decimal(100 * answered) / Decimal(unique)).quantize(_FOUR_PLACES, rounding=ROUND_HALF_UP)


@dataclass(frozen=True)
class CoverageRow:
    asker: str
    asked: int
    repeats: int
    unique: int
    answered: int
    pct_answered: Decimal
    unanswered: int

    @classmethod
    def from_counts(cls, asker: str, asked: int, repeats: int, answered: int) -> "CoverageRow":
        if min(asked, repeats, answered) < 0:
            raise ValueError(f"{asker}: counts must be non-negative")
        unique = asked - repeats
        if unique < 0:
            raise ValueError(f"{asker}: repeats ({repeats}) exceed questions asked ({asked})")
        if answered > unique:
            raise ValueError(f"{asker}: answered ({answered}) exceeds unique questions ({unique})")
        return cls(asker, asked, repeats, unique, answered, percent(answered, unique), unique - answered)

    def cells(self) -> list:
        return [self.asker, self.asked, self.repeats, self.unique, self.answered, self.pct_answered, self.unanswered]

    def to_dict(self) -> dict:
        return {
            "asker": self.asker,
            "asked": self.asked,
            "repeats": self.repeats,
            "unique": self.unique,
            "answered": self.answered,
            "pct_answered": float(self.pct_answered),
            "unanswered": self.unanswered,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CoverageRow":
        return cls(d["asker"], d["asked"], d["repeats"], d["unique"], d["answered"],
                   Decimal(str(d["pct_answered"])).quantize(_FOUR_PLACES), d["unanswered"])


@dataclass(frozen=True)
class CoverageTable:
    rows: tuple[CoverageRow, ...]
    total: CoverageRow
    descriptive_count: int
    considered: CoverageRow
    answered_ids: tuple[str, ...] = ()
    no_pattern_ids: tuple[str, ...] = ()

    @property
    def descriptive(self) -> CoverageRow:
        n = self.descriptive_count
        return CoverageRow("Descriptive Questions", n, 0, n, 0, percent(0, n), n)

    @property
    def coverage(self) -> Decimal:
        return self.considered.pct_answered / 100

    def to_dict(self) -> dict:
        return {
            "rows": [r.to_dict() for r in self.rows],
            "total": self.total.to_dict(),
            "descriptive_count": self.descriptive_count,
            "considered": self.considered.to_dict(),
            "answered_ids": list(self.answered_ids),
            "no_pattern_ids": list(self.no_pattern_ids),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CoverageTable":
        return cls(
            tuple(CoverageRow.from_dict(r) for r in d["rows"]),
            CoverageRow.from_dict(d["total"]),
            d["descriptive_count"],
            CoverageRow.from_dict(d["considered"]),
            tuple(d.get("answered_ids", ())),
            tuple(d.get("no_pattern_ids", ())),
        )


def coverage_from_counts(rows: Sequence[tuple[str, int, int, int]], descriptive_count: int,
                         answered_ids: Sequence[str] = (), no_pattern_ids: Sequence[str] = ()) -> CoverageTable:
    """Build the table from per-asker ``(asker, asked, repeats, answered)`` counts."""
    built = tuple(CoverageRow.from_counts(*r) for r in rows)
    asked = sum(r.asked for r in built)
    repeats = sum(r.repeats for r in built)
    answered = sum(r.answered for r in built)
    total = CoverageRow.from_counts("Total", asked, repeats, answered)
    if descriptive_count < 0 or descriptive_count > total.unique:
        raise ValueError("descriptive count must lie between 0 and the total unique questions")
    considered = CoverageRow.from_counts("Considered", asked - descriptive_count, repeats, answered)
    return CoverageTable(built, total, descriptive_count, considered, tuple(answered_ids), tuple(no_pattern_ids))


def evaluate_corpus(g: Graph, cqs: Sequence[CQ]) -> CoverageTable:
    """Score a deduplicated corpus against ``g``.

    Rows follow first-appearance order of askers.  Descriptive questions
    count towards asked totals and are excluded from the Considered row.
    """
    counts: dict[str, list[int]] = {}
    descriptive = 0
    answered_ids = []
    no_pattern = []
    for cq in cqs:
        row = counts.setdefault(cq.asker, [0, 0, 0])
        row[0] += 1
        if cq.dup_of is not None:
            row[1] += 1
            continue
        if cq.kind is CQKind.DESCRIPTIVE:
            descriptive += 1
            continue
        if cq.pattern is None:
            no_pattern.append(cq.id)
            continue
        if has_solution(g, cq.pattern):
            row[2] += 1
            answered_ids.append(cq.id)
    return coverage_from_counts(
        [(asker, *c) for asker, c in counts.items()], descriptive, answered_ids, no_pattern
    )


# -- decision --------------------------------------------------------------


class DecisionKind(str, enum.Enum):
    SATISFACTORY = "satisfactory"
    NEEDS_ENRICHMENT = "needs_enrichment"
    UNSATISFACTORY = "unsatisfactory"


DEFAULT_LOWER = 0.30
DEFAULT_UPPER = 0.85


@dataclass(frozen=True)
class Decision:
    value: DecisionKind
    coverage: Decimal
    lower: float
    upper: float

    @property
    def satisfactory(self) -> bool:
        return self.value is DecisionKind.SATISFACTORY

    def to_dict(self) -> dict:
        return {"value": self.value.value, "coverage": float(self.coverage),
                "lower": self.lower, "upper": self.upper}


def check_thresholds(lower: float, upper: float) -> None:
    if not (0 <= lower < upper <= 1):
        raise ConfigError(f"thresholds must satisfy 0 <= lower < upper <= 1 (got {lower}, {upper})")


def decide_satisfaction(t: CoverageTable, lower: float = DEFAULT_LOWER, upper: float = DEFAULT_UPPER) -> Decision:
    check_thresholds(lower, upper)
    coverage = t.coverage
    if coverage >= Decimal(str(upper)):
        kind = DecisionKind.SATISFACTORY
    elif coverage < Decimal(str(lower)):
        kind = DecisionKind.UNSATISFACTORY
    else:
        kind = DecisionKind.NEEDS_ENRICHMENT
    return Decision(kind, coverage, lower, upper)


NEXT_ACTION = {
    DecisionKind.SATISFACTORY: "rechristen the model as FEKR and export it",
    DecisionKind.NEEDS_ENRICHMENT: "enrich the model (external and internal patches) and re-run the examination",
    DecisionKind.UNSATISFACTORY: "return to conceptual analysis and model the epic afresh from the KR template",
}
