"""Indexed in-memory triple store.

Three nested indexes (subject, predicate and object keyed) are kept in step
with the triple set.  Dicts stand in for ordered sets so iteration order is
insertion order and therefore reproducible.
"""

from __future__ import annotations

import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .terms import BNode, Iri, Term, Triple, make_triple, namespace_of

_Index = dict  # term -> term -> {term: None}


@dataclass
class PrefixMap:
    entries: dict[str, str] = field(default_factory=dict)
    base: str | None = None

    def bind(self, prefix: str, namespace: str, *, warn: bool = True) -> None:
        if ":" not in namespace:
            raise ValueError(f"namespace IRI is not absolute: {namespace!r}")
        old = self.entries.get(prefix)
        if warn and old is not None and old != namespace:
            warnings.warn(
                f"prefix {prefix!r} redeclared: <{old}> replaced by <{namespace}>",
                stacklevel=3,
            )
        self.entries[prefix] = namespace

    def expand(self, pname: str) -> str:
        prefix, _, local = pname.partition(":")
        try:
            return self.entries[prefix] + local
        except KeyError:
            raise KeyError(f"undefined prefix {prefix!r}") from None

    def compact(self, iri: str) -> tuple[str, str] | None:
        """Return ``(prefix, local)`` for the longest matching namespace."""
        best = None
        for prefix, ns in self.entries.items():
            if iri.startswith(ns) and (best is None or len(ns) > len(best[1])):
                best = (prefix, ns)
        if best is None:
            return None
        return best[0], iri[len(best[1]):]

    def copy(self) -> "PrefixMap":
        return PrefixMap(dict(self.entries), self.base)


class Graph:
    def __init__(self, triples: Iterable[Triple] = (), prefixes: PrefixMap | None = None):
        self.prefixes = prefixes if prefixes is not None else PrefixMap()
        self._triples: dict[Triple, None] = {}
        self._spo: _Index = {}
        self._pos: _Index = {}
        self._osp: _Index = {}
        for t in triples:
            self.add(t)

    # mutation

    def add(self, triple: Triple | tuple) -> bool:
        t = triple if isinstance(triple, Triple) else make_triple(*triple)
        if t in self._triples:
            return False
        self._triples[t] = None
        s, p, o = t
        self._spo.setdefault(s, {}).setdefault(p, {})[o] = None
        self._pos.setdefault(p, {}).setdefault(o, {})[s] = None
        self._osp.setdefault(o, {}).setdefault(s, {})[p] = None
        return True

    def remove(self, triple: Triple | tuple) -> bool:
        t = triple if isinstance(triple, Triple) else Triple(*triple)
        if t not in self._triples:
            return False
        del self._triples[t]
        s, p, o = t
        _unlink(self._spo, s, p, o)
        _unlink(self._pos, p, o, s)
        _unlink(self._osp, o, s, p)
        return True

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(self.add(t) for t in triples)

    def copy(self) -> "Graph":
        return Graph(self._triples, self.prefixes.copy())

    # queries

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: object) -> bool:
        return triple in self._triples

    def __repr__(self) -> str:
        return f"<Graph with {len(self)} triples>"

    def match(self, s: Term | None = None, p: Term | None = None, o: Term | None = None) -> list[Triple]:
        if s is not None and p is not None and o is not None:
            t = Triple(s, p, o)  # type: ignore[arg-type]
            return [t] if t in self._triples else []
        if s is not None:
            by_p = self._spo.get(s, {})
            if p is not None:
                return [Triple(s, p, obj) for obj in by_p.get(p, ())]
            if o is not None:
                return [Triple(s, pred, o) for pred in self._osp.get(o, {}).get(s, ())]
            return [Triple(s, pred, obj) for pred, objs in by_p.items() for obj in objs]
        if o is not None:
            by_s = self._osp.get(o, {})
            if p is not None:
                return [Triple(subj, p, o) for subj in self._pos.get(p, {}).get(o, ())]
            return [Triple(subj, pred, o) for subj, preds in by_s.items() for pred in preds]
        if p is not None:
            return [Triple(subj, p, obj) for obj, subjs in self._pos.get(p, {}).items() for subj in subjs]
        return list(self._triples)

    def objects(self, s: Term | None = None, p: Term | None = None) -> list[Term]:
        return [t.object for t in self.match(s, p, None)]

    def subjects(self, p: Term | None = None, o: Term | None = None) -> list[Term]:
        return [t.subject for t in self.match(None, p, o)]

    def terms(self) -> set[Term]:
        out: set[Term] = set()
        for s, p, o in self._triples:
            out.update((s, p, o))
        return out

    def namespaces_used(self) -> Counter:
        counts: Counter = Counter()
        for t in self._triples:
            for term in t:
                if isinstance(term, Iri):
                    counts[namespace_of(term.value)] += 1
        return counts


def _unlink(index: _Index, a, b, c) -> None:
    inner = index[a]
    leaf = inner[b]
    del leaf[c]
    if not leaf:
        del inner[b]
        if not inner:
            del index[a]


def match_triples(g: Graph, s: Term | None = None, p: Term | None = None, o: Term | None = None) -> list[Triple]:
    return g.match(s, p, o)


def _bnodes(triples: Iterable[Triple]) -> set[BNode]:
    return {term for t in triples for term in (t.subject, t.object) if isinstance(term, BNode)}


def _signature(b: BNode, triples: list[Triple]) -> tuple:
    """Label-independent fingerprint of how a blank node is used."""
    sig = []
    for t in triples:
        for pos, term in (("s", t.subject), ("o", t.object)):
            if term == b:
                other = t.object if pos == "s" else t.subject
                other_key = "*" if isinstance(other, BNode) else repr(other)
                sig.append((pos, t.predicate.value, other_key))
    return tuple(sorted(sig))


def graph_equal(g1: Graph, g2: Graph) -> bool:
    """Isomorphism up to a bijection of blank-node labels."""
    if len(g1) != len(g2):
        return False
    ground1 = {t for t in g1 if not _bnodes([t])}
    ground2 = {t for t in g2 if not _bnodes([t])}
    if ground1 != ground2:
        return False
    rest1 = [t for t in g1 if t not in ground1]
    rest2 = [t for t in g2 if t not in ground2]
    nodes1 = sorted(_bnodes(rest1), key=lambda b: b.label)
    nodes2 = _bnodes(rest2)
    if len(nodes1) != len(nodes2):
        return False
    if not nodes1:
        return True

    sig2: dict[tuple, list[BNode]] = {}
    for b in nodes2:
        sig2.setdefault(_signature(b, rest2), []).append(b)
    candidates = {}
    for b in nodes1:
        cands = sig2.get(_signature(b, rest1))
        if not cands:
            return False
        candidates[b] = cands
    nodes1.sort(key=lambda b: len(candidates[b]))
    target = set(rest2)

    def mapped(term: Term, mapping: dict) -> Term:
        return mapping.get(term, term) if isinstance(term, BNode) else term

    def consistent(mapping: dict) -> bool:
        for t in rest1:
            s, o = t.subject, t.object
            if (isinstance(s, BNode) and s not in mapping) or (isinstance(o, BNode) and o not in mapping):
                continue
            if Triple(mapped(s, mapping), t.predicate, mapped(o, mapping)) not in target:
                return False
        return True

    def search(i: int, mapping: dict, used: set) -> bool:
        if i == len(nodes1):
            return True
        b = nodes1[i]
        for c in candidates[b]:
            if c in used:
                continue
            mapping[b] = c
            used.add(c)
            if consistent(mapping) and search(i + 1, mapping, used):
                return True
            del mapping[b]
            used.discard(c)
        return False

    return search(0, {}, set())

