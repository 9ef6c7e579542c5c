"""RDF terms, triples and the vocabularies genome-kit understands."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if ":" not in self.value:
            raise ValueError(f"IRI is not absolute: {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class BNode:
    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("blank node label must be non-empty")

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str = ""
    lang: str | None = None

    def __post_init__(self) -> None:
        if self.lang:
            object.__setattr__(self, "lang", self.lang.lower())
            if not self.datatype:
                object.__setattr__(self, "datatype", RDF.langString)
            elif self.datatype != RDF.langString:
                raise ValueError("language tag requires the rdf:langString datatype")
        else:
            object.__setattr__(self, "lang", None)
            if not self.datatype:
                object.__setattr__(self, "datatype", XSD.string)
            elif self.datatype == RDF.langString:
                raise ValueError("rdf:langString literal needs a language tag")

    def __str__(self) -> str:
        return self.lexical


Term = Union[Iri, BNode, Literal]


class Triple(NamedTuple):
    subject: Iri | BNode
    predicate: Iri
    object: Term


def make_triple(s: Term, p: Term, o: Term) -> Triple:
    if not isinstance(s, (Iri, BNode)):
        raise ValueError(f"triple subject must be an IRI or blank node, got {s!r}")
    if not isinstance(p, Iri):
        raise ValueError(f"triple predicate must be an IRI, got {p!r}")
    if not isinstance(o, (Iri, BNode, Literal)):
        raise ValueError(f"not an RDF term: {o!r}")
    return Triple(s, p, o)


def term_key(t: Term) -> tuple:
    """Total order over terms: IRIs, then blank nodes, then literals."""
    if isinstance(t, Iri):
        return (0, t.value, "", "")
    if isinstance(t, BNode):
        return (1, t.label, "", "")
    return (2, t.lexical, t.datatype, t.lang or "")


def triple_key(t: Triple) -> tuple:
    return (term_key(t.subject), term_key(t.predicate), term_key(t.object))


def namespace_of(iri: str) -> str:
    """Split point is the last ``#``, else the last ``/``, else the last ``:``."""
    for sep in ("#", "/", ":"):
        idx = iri.rfind(sep)
        if idx >= 0 and idx < len(iri) - 1:
            return iri[: idx + 1]
    return iri


def local_name(iri: str) -> str:
    return iri[len(namespace_of(iri)):]


class Namespace(str):
    """Namespace string whose attribute access mints IRI strings."""

    def __getattr__(self, name: str) -> str:
        if name.startswith("__"):
            raise AttributeError(name)
        return str(self) + name

    def term(self, name: str) -> Iri:
        return Iri(str(self) + name)


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
SKOS = Namespace("http://www.w3.org/2004/02/skos/core#")
DCTERMS = Namespace("http://purl.org/dc/terms/")
GENOME = Namespace("http://genome-kit.org/ns#")

RDF_TYPE = Iri(RDF.type)

BUILTIN_NAMESPACES = frozenset({str(RDF), str(RDFS), str(OWL), str(XSD), str(GENOME)})

STANDARD_PREFIXES = {
    "rdf": str(RDF),
    "rdfs": str(RDFS),
    "owl": str(OWL),
    "xsd": str(XSD),
    "genome": str(GENOME),
}
