"""Reader and writer for the Turtle subset used by ontology, patch and export files.

Supported: ``@prefix``/``@base``, ``;`` and ``,`` lists, the ``a`` keyword,
``<iri>``, prefixed names, ``_:label`` and ``[]`` blank nodes, quoted
literals with ``@lang`` or ``^^datatype``, bare integers/decimals and ``#``
comments.  Collections and quoted triples are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urljoin

from .errors import TurtleSyntaxError
from .graph import Graph, PrefixMap
from .terms import RDF_TYPE, XSD, BNode, Iri, Literal, Term, Triple, triple_key

_PN_CHARS_BASE = r"A-Za-z\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF\u200C-\u200D\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF\uFDF0-\uFFFD"
_PN_CHARS = _PN_CHARS_BASE + r"_0-9\-\u00B7"
_PREFIX = rf"(?:[{_PN_CHARS_BASE}](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)?"
_LOCAL = rf"(?:[{_PN_CHARS_BASE}_0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)?"

_TOKEN_RES = [
    ("WS", re.compile(r"[ \t\r\n]+")),
    ("COMMENT", re.compile(r"#[^\n]*")),
    ("IRIREF", re.compile(r"<([^<>\"{}|^`\\\x00-\x20]*)>")),
    ("DIRECTIVE", re.compile(r"@(prefix|base)\b")),
    ("LANGTAG", re.compile(r"@([A-Za-z]+(?:-[A-Za-z0-9]+)*)")),
    ("DTMARK", re.compile(r"\^\^")),
    ("STRING", re.compile(r'"((?:[^"\\\n\r]|\\.)*)"')),
    ("DECIMAL", re.compile(r"[+-]?[0-9]*\.[0-9]+(?![eE])")),
    ("INTEGER", re.compile(r"[+-]?[0-9]+(?![0-9])")),
    ("BNODE", re.compile(rf"_:([{_PN_CHARS_BASE}_0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)")),
    ("VAR", re.compile(r"\?([A-Za-z_][A-Za-z0-9_]*)")),
    ("PNAME", re.compile(rf"({_PREFIX}):({_LOCAL})")),
    ("ANON", re.compile(r"\[[ \t\r\n]*\]")),
    ("A", re.compile(r"a(?=[ \t\r\n<\[\"_?:]|$)")),
    ("PUNCT", re.compile(r"[.;,]")),
    ("OPEN", re.compile(r"<<|\(|\[")),
]

_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\", "'": "'"}


@dataclass
class Token:
    kind: str
    text: str
    value: str
    line: int
    column: int


class Lexer:
    """Turns a document into tokens, tracking 1-based line and column."""

    def __init__(self, text: str, source: str | None = None, allow_variables: bool = False):
        self.text = text
        self.source = source
        self.allow_variables = allow_variables
        self.pos = 0
        self.line = 1
        self.line_start = 0

    def error(self, message: str, line: int | None = None, column: int | None = None) -> TurtleSyntaxError:
        return TurtleSyntaxError(
            message,
            self.line if line is None else line,
            self.pos - self.line_start + 1 if column is None else column,
            self.source,
        )

    def tokens(self) -> list[Token]:
        out = []
        text = self.text
        while self.pos < len(text):
            for kind, rx in _TOKEN_RES:
                m = rx.match(text, self.pos)
                if m:
                    break
            else:
                if text[self.pos] == '"':
                    raise self.error("unterminated string literal")
                raise self.error(f"unexpected character {text[self.pos]!r}")
            col = self.pos - self.line_start + 1
            if kind == "VAR" and not self.allow_variables:
                raise self.error("variables are not allowed here")
            if kind == "OPEN":
                what = {"(": "collections '( ... )'", "<<": "quoted triples '<< ... >>'", "[": "nested property lists '[ ... ]'"}
                raise self.error(f"{what[m.group(0)]} are not supported in this Turtle subset")
            if kind not in ("WS", "COMMENT"):
                value = m.group(1) if m.groups() else m.group(0)
                if kind == "STRING":
                    value = self._unescape(value, col)
                elif kind == "PNAME":
                    value = m.group(0)
                out.append(Token(kind, m.group(0), value, self.line, col))
            chunk = m.group(0)
            newlines = chunk.count("\n")
            if newlines:
                self.line += newlines
                self.line_start = self.pos + chunk.rindex("\n") + 1
            self.pos = m.end()
        return out

    def _unescape(self, raw: str, col: int) -> str:
        if "\\" not in raw:
            return raw
        out = []
        i = 0
        while i < len(raw):
            ch = raw[i]
            if ch == "\\":
                nxt = raw[i + 1]
                if nxt in _ESCAPES:
                    out.append(_ESCAPES[nxt])
                    i += 2
                    continue
                if nxt in "uU":
                    width = 4 if nxt == "u" else 8
                    hexdigits = raw[i + 2 : i + 2 + width]
                    if len(hexdigits) == width and all(c in "0123456789abcdefABCDEF" for c in hexdigits):
                        out.append(chr(int(hexdigits, 16)))
                        i += 2 + width
                        continue
                raise self.error(f"invalid escape sequence '\\{nxt}'", column=col + i + 1)
            out.append(ch)
            i += 1
        return "".join(out)


class _Parser:
    def __init__(self, text: str, base: str | None, source: str | None):
        self.lexer = Lexer(text, source)
        self.toks = self.lexer.tokens()
        self.i = 0
        self.graph = Graph(prefixes=PrefixMap(base=base))
        self.base = base
        self.source = source
        # anonymous nodes must not collide with labels written in the document
        self.taken = {t.value for t in self.toks if t.kind == "BNODE"}
        self.anon_counter = 0

    def err(self, message: str, tok: Token | None = None) -> TurtleSyntaxError:
        if tok is None:
            tok = self.toks[-1] if self.toks else None
            if tok is None:
                return TurtleSyntaxError(message, 1, 1, self.source)
            return TurtleSyntaxError(message, tok.line, tok.column + len(tok.text), self.source)
        return TurtleSyntaxError(message, tok.line, tok.column, self.source)

    def peek(self) -> Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self, what: str) -> Token:
        tok = self.peek()
        if tok is None:
            raise self.err(f"unexpected end of document, expected {what}")
        self.i += 1
        return tok

    def expect_punct(self, ch: str) -> None:
        tok = self.next(f"'{ch}'")
        if tok.kind != "PUNCT" or tok.text != ch:
            raise self.err(f"expected '{ch}', found {tok.text!r}", tok)

    def parse(self) -> Graph:
        while self.peek() is not None:
            tok = self.peek()
            if tok.kind == "DIRECTIVE":
                self.directive()
            else:
                self.statement()
        return self.graph

    def directive(self) -> None:
        tok = self.next("directive")
        if tok.value == "prefix":
            name = self.next("prefix name")
            if name.kind != "PNAME" or not name.text.endswith(":"):
                raise self.err("expected a prefix label such as 'ex:'", name)
            iri_tok = self.next("namespace IRI")
            if iri_tok.kind != "IRIREF":
                raise self.err("expected a namespace IRI in <>", iri_tok)
            ns = self.resolve(iri_tok.value, iri_tok)
            self.graph.prefixes.bind(name.text[:-1], ns)
        else:
            iri_tok = self.next("base IRI")
            if iri_tok.kind != "IRIREF":
                raise self.err("expected a base IRI in <>", iri_tok)
            self.base = self.resolve(iri_tok.value, iri_tok)
            self.graph.prefixes.base = self.base
        self.expect_punct(".")

    def resolve(self, iri: str, tok: Token) -> str:
        if re.match(r"[A-Za-z][A-Za-z0-9+.\-]*:", iri):
            return iri
        if self.base is None:
            raise self.err(f"relative IRI <{iri}> with no base", tok)
        return urljoin(self.base, iri)

    def statement(self) -> None:
        subject = self.term(self.next("subject"), position="subject")
        while True:
            ptok = self.next("predicate")
            predicate = self.term(ptok, position="predicate")
            while True:
                obj = self.term(self.next("object"), position="object")
                self.graph.add(Triple(subject, predicate, obj))
                tok = self.peek()
                if tok is not None and tok.kind == "PUNCT" and tok.text == ",":
                    self.i += 1
                    continue
                break
            tok = self.next("';' or '.'")
            if tok.kind == "PUNCT" and tok.text == ";":
                # trailing ';' before '.' is legal Turtle
                nxt = self.peek()
                if nxt is not None and nxt.kind == "PUNCT" and nxt.text == ".":
                    self.i += 1
                    return
                continue
            if tok.kind == "PUNCT" and tok.text == ".":
                return
            raise self.err(f"expected ',', ';' or '.', found {tok.text!r}", tok)

    def term(self, tok: Token, position: str) -> Term:
        kind = tok.kind
        if kind == "IRIREF":
            return Iri(self.resolve(tok.value, tok))
        if kind == "PNAME":
            try:
                return Iri(self.graph.prefixes.expand(tok.value))
            except KeyError as exc:
                raise self.err(exc.args[0], tok) from None
        if kind == "A":
            if position != "predicate":
                raise self.err("keyword 'a' is only allowed in predicate position", tok)
            return RDF_TYPE
        if position == "predicate":
            raise self.err(f"predicate must be an IRI, found {tok.text!r}", tok)
        if kind == "BNODE":
            return BNode(tok.value)
        if kind == "ANON":
            return self.fresh_bnode()
        if position == "subject":
            raise self.err(f"subject must be an IRI or blank node, found {tok.text!r}", tok)
        if kind == "STRING":
            nxt = self.peek()
            if nxt is not None and nxt.kind == "LANGTAG":
                self.i += 1
                return Literal(tok.value, lang=nxt.value)
            if nxt is not None and nxt.kind == "DTMARK":
                self.i += 1
                dt_tok = self.next("datatype IRI")
                dt = self.term(dt_tok, position="predicate")
                return Literal(tok.value, datatype=dt.value)
            return Literal(tok.value)
        if kind == "INTEGER":
            return Literal(tok.text, datatype=XSD.integer)
        if kind == "DECIMAL":
            return Literal(tok.text, datatype=XSD.decimal)
        raise self.err(f"unexpected token {tok.text!r}", tok)

    def fresh_bnode(self) -> BNode:
        while True:
            self.anon_counter += 1
            label = f"anon{self.anon_counter}"
            if label not in self.taken:
                self.taken.add(label)
                return BNode(label)


def parse_turtle(document: str, base: str | None = None, *, source: str | None = None) -> Graph:
    """Parse a Turtle-subset document into a new :class:`Graph`.

    Raises :class:`TurtleSyntaxError` (carrying line and column) on syntax
    errors, undefined prefixes and relative IRIs that have no base.
    Redeclaring a prefix emits a :class:`UserWarning`; the last binding wins.
    """
    return _Parser(document, base, source).parse()


_BARE_INTEGER = re.compile(r"[+-]?[0-9]+\Z")
_BARE_DECIMAL = re.compile(r"[+-]?[0-9]*\.[0-9]+\Z")
_SAFE_LOCAL = re.compile(rf"(?:[{_PN_CHARS_BASE}_0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)?\Z")


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t").replace("\r", "\\r")


def _iri_text(iri: str, prefixes: PrefixMap) -> str:
    hit = prefixes.compact(iri)
    if hit is not None and _SAFE_LOCAL.match(hit[1]):
        return f"{hit[0]}:{hit[1]}"
    return f"<{iri}>"


def format_term(term: Term, prefixes: PrefixMap) -> str:
    if isinstance(term, Iri):
        return _iri_text(term.value, prefixes)
    if isinstance(term, BNode):
        return f"_:{term.label}"
    if term.datatype == XSD.integer and _BARE_INTEGER.match(term.lexical):
        return term.lexical
    if term.datatype == XSD.decimal and _BARE_DECIMAL.match(term.lexical):
        return term.lexical
    text = f'"{_escape(term.lexical)}"'
    if term.lang:
        return f"{text}@{term.lang}"
    if term.datatype != XSD.string:
        return f"{text}^^{_iri_text(term.datatype, prefixes)}"
    return text


def serialize_turtle(g: Graph) -> str:
    """Deterministic serialization: subjects, predicates and objects sorted."""
    prefixes = g.prefixes
    lines = [f"@prefix {label}: <{ns}> ." for label, ns in sorted(prefixes.entries.items())]
    by_subject: dict = {}
    for t in sorted(g, key=triple_key):
        by_subject.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)
    if lines and by_subject:
        lines.append("")
    for subject, preds in by_subject.items():
        parts = []
        for pred, objs in preds.items():
            ptext = "a" if pred == RDF_TYPE else format_term(pred, prefixes)
            parts.append(f"{ptext} " + ", ".join(format_term(o, prefixes) for o in objs))
        head = format_term(subject, prefixes)
        if len(parts) == 1:
            lines.append(f"{head} {parts[0]} .")
        else:
            lines.append(f"{head} {parts[0]} ;")
            for part in parts[1:-1]:
                lines.append(f"    {part} ;")
            lines.append(f"    {parts[-1]} .")
    return "\n".join(lines) + "\n" if lines else ""


__all__ = ["Lexer", "Token", "format_term", "parse_turtle", "serialize_turtle"]
