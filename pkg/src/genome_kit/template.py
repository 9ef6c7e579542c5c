"""KR template parsing: one row per character, one primary definition,
any number of secondary relations.

Phrase grammar (one cell): ``predicate object ( and object )*``.  The first
token is the predicate, ``X of`` is folded into ``XOf`` and multi-word object
names are joined after capitalising each word, so ``brother of Duryodhana``
and ``performed Vaishnava Sacrifice`` become ``brotherOf [Duryodhana]`` and
``performed [VaishnavaSacrifice]``.  A cell may hold several phrases
separated by ``;``, which is an error in the primary-definition column.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass

from .errors import TemplateError

_PREDICATE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_NAME_WORD = re.compile(r"[\w'\-.]+\Z")


@dataclass(frozen=True)
class RelationPhrase:
    predicate: str
    objects: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.predicate:
            raise ValueError("relation predicate must be non-empty")
        if not self.objects:
            raise ValueError("relation needs at least one object")


@dataclass(frozen=True)
class KRRow:
    serial: int
    character: str
    primary: RelationPhrase
    secondary: tuple[RelationPhrase, ...] = ()
    row_number: int = 0

    @property
    def phrases(self) -> tuple[RelationPhrase, ...]:
        return (self.primary, *self.secondary)


def slug(name: str) -> str:
    """Drop every non-alphanumeric character, keeping case."""
    return "".join(ch for ch in name if ch.isalnum())


def _join_name(words: list[str]) -> str:
    return "".join(w[:1].upper() + w[1:] for w in words)


def parse_phrase(cell: str) -> RelationPhrase:
    words = cell.split()
    if len(words) >= 2 and words[1].lower() == "of" and not words[0].endswith("Of"):
        words = [words[0] + "Of", *words[2:]]
    if not words:
        raise ValueError("empty relation phrase")
    predicate, rest = words[0], words[1:]
    if not _PREDICATE.match(predicate):
        raise ValueError(f"relation name {predicate!r} is not an identifier")
    if not rest:
        raise ValueError(f"relation {predicate!r} has no object")
    objects: list[str] = []
    current: list[str] = []
    for w in rest + ["and"]:
        if w == "and":
            if not current:
                raise ValueError(f"empty object name around 'and' in {cell!r}")
            objects.append(_join_name(current))
            current = []
        elif not _NAME_WORD.match(w):
            raise ValueError(f"unexpected token {w!r} in {cell!r}")
        else:
            current.append(w)
    return RelationPhrase(predicate, tuple(objects))


def expand_relation(r: RelationPhrase) -> list[tuple[str, str]]:
    return [(r.predicate, obj) for obj in r.objects]


def _is_header(cells: list[str]) -> bool:
    first = cells[0].strip().lower() if cells else ""
    return first.startswith("sl") or first in ("serial", "no", "#")


def parse_kr_template(csv_document: str) -> list[KRRow]:
    """Parse a KR template CSV; raises :class:`TemplateError` listing every bad row."""
    rows: list[KRRow] = []
    errors: list[tuple[int, str]] = []
    serials: dict[int, int] = {}
    reader = csv.reader(io.StringIO(csv_document))
    for index, cells in enumerate(reader, start=1):
        cells = [c.strip() for c in cells]
        while cells and not cells[-1]:
            cells.pop()
        if not cells:
            continue
        if index == 1 and _is_header(cells):
            continue
        row_errors = []
        serial = None
        try:
            serial = int(cells[0])
        except ValueError:
            row_errors.append(f"serial number {cells[0]!r} is not an integer")
        if serial is not None:
            if serial in serials:
                row_errors.append(f"duplicate serial {serial} (first used on row {serials[serial]})")
            else:
                serials[serial] = index
        character = cells[1] if len(cells) > 1 else ""
        if not character:
            row_errors.append("missing character name")
        primary_cell = cells[2] if len(cells) > 2 else ""
        primary = None
        if not primary_cell:
            row_errors.append("missing primary definition")
        elif ";" in primary_cell:
            row_errors.append("multiple primary definitions (only one is allowed)")
        else:
            try:
                primary = parse_phrase(primary_cell)
            except ValueError as exc:
                row_errors.append(f"primary definition: {exc}")
        secondary = []
        for cell in cells[3:]:
            for part in filter(None, (p.strip() for p in cell.split(";"))):
                try:
                    secondary.append(parse_phrase(part))
                except ValueError as exc:
                    row_errors.append(f"secondary relation: {exc}")
        if row_errors:
            errors.extend((index, msg) for msg in row_errors)
            continue
        rows.append(KRRow(serial, character, primary, tuple(secondary), index))
    if errors:
        raise TemplateError(errors)
    return rows


def unknown_object_names(rows: list[KRRow]) -> list[str]:
    """Objects that are not themselves enumerated characters (warnings, not errors)."""
    characters = {slug(r.character) for r in rows}
    seen: dict[str, None] = {}
    for r in rows:
        for phrase in r.phrases:
            for obj in phrase.objects:
                if slug(obj) not in characters:
                    seen[obj] = None
    return list(seen)
