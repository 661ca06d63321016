"""RDF terms as rdflib identifiers, plus their canonical N-Triples text."""

import re
from collections.abc import Iterable
from functools import lru_cache
from typing import TypeAlias

from rdflib.plugins.serializers.nt import _quoteLiteral
from rdflib.term import BNode, Literal, URIRef

Term: TypeAlias = URIRef | BNode | Literal
ObjectTuple: TypeAlias = tuple[Term, ...]

_IRI_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
# characters rdflib refuses to write inside <...>
_IRI_UNWRITABLE = frozenset('<>" {}|\\^`')


def is_absolute_iri(text: str) -> bool:
    """True when text is non-empty and starts with a URI scheme."""
    return bool(text) and _IRI_SCHEME.match(text) is not None


def is_writable_iri(text: str) -> bool:
    """Absolute IRI that N-Triples can carry unescaped."""
    return is_absolute_iri(text) and not any(ch in _IRI_UNWRITABLE or ord(ch) < 0x20 for ch in text)


def iri(text: str) -> URIRef:
    """Build an IRI term, rejecting relative or empty IRIs."""
    if not is_absolute_iri(text):
        raise ValueError(f"not an absolute IRI: {text!r}")
    return URIRef(text)


def make_literal(
    lexical: str,
    datatype: str | None = None,
    language: str | None = None,
) -> Literal:
    """Build a literal that keeps its lexical form (no value normalization)."""
    if datatype is not None and language is not None:
        raise ValueError("a literal carries either a datatype or a language tag, not both")
    return Literal(
        lexical,
        lang=language,
        datatype=URIRef(datatype) if datatype is not None else None,
        normalize=False,
    )


@lru_cache(maxsize=1 << 16)
def term_to_nt(term: Term) -> str:
    """N-Triples text of a term as rdflib's nt serializer writes it; also the canonical sort key."""
    if isinstance(term, Literal):
        return _quoteLiteral(term)
    return term.n3()


def canonical_properties(properties: Iterable[Term | str]) -> tuple[URIRef, ...]:
    """Deduplicate properties and order them lexicographically by IRI."""
    seen: set[URIRef] = set()
    for prop in properties:
        if isinstance(prop, (BNode, Literal)):
            raise ValueError(f"properties must be IRIs, got {prop!r}")
        seen.add(prop if isinstance(prop, URIRef) else iri(prop))
    return tuple(sorted(seen, key=str))
