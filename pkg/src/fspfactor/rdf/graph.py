"""Triple store for one RDF graph: an rdflib Graph with type-predicate class lookups."""

from collections.abc import Iterable, Iterator, Mapping, Sequence
from collections.abc import Set as AbstractSet
from typing import NamedTuple

from rdflib import Graph
from rdflib.term import Literal, URIRef

from ..errors import FunctionalityViolationError, InvalidTripleError
from ..settings import get_settings
from .terms import ObjectTuple, Term, is_writable_iri, term_to_nt

PropertyRows = Mapping[Term, Mapping[URIRef, AbstractSet[Term]]]


class Triple(NamedTuple):
    """Directed labeled edge (subject predicate object)."""

    subject: Term
    predicate: URIRef
    object: Term


def _validated(triple: Triple | tuple[Term, Term, Term]) -> Triple:
    subject, predicate, obj = triple
    if isinstance(subject, Literal):
        raise InvalidTripleError(f"literal {subject!r} in subject position")
    if not isinstance(predicate, URIRef):
        raise InvalidTripleError(f"predicate {predicate!r} is not an IRI")
    for term in (subject, predicate, obj):
        if isinstance(term, URIRef) and not is_writable_iri(term):
            raise InvalidTripleError(f"<{term}> is not an absolute IRI that N-Triples can carry")
    if isinstance(triple, Triple):
        return triple
    return Triple(subject, predicate, obj)


class RDFGraph:
    """Duplicate-free set of triples backed by an rdflib Graph.

    rdflib's store keeps the subject, predicate and object indexes; the
    class lookups go through its (type predicate, class) index. Graphs are
    treated as read-only once loaded; only the factorize/expand builders
    mutate the private graphs they create.
    """

    __hash__ = None  # type: ignore[assignment]

    def __init__(
        self,
        triples: Iterable[Triple | tuple[Term, Term, Term]] = (),
        *,
        type_predicate: URIRef | str | None = None,
    ) -> None:
        self.type_predicate = URIRef(type_predicate or get_settings().type_predicate)
        self._graph = Graph()
        self.add_all(triples)

    @property
    def graph(self) -> Graph:
        """The backing rdflib Graph; mutate through RDFGraph only."""
        return self._graph

    def add(self, triple: Triple | tuple[Term, Term, Term]) -> bool:
        """Insert a triple. Returns False when it was already present."""
        t = _validated(triple)
        if t in self._graph:
            return False
        self._graph.add(t)
        return True

    def add_all(self, triples: Iterable[Triple | tuple[Term, Term, Term]]) -> int:
        """Insert many triples; returns how many were new."""
        return sum(1 for t in triples if self.add(t))

    def discard(self, triple: Triple | tuple[Term, Term, Term]) -> bool:
        """Remove a triple if present."""
        t = Triple(*triple)
        if t not in self._graph:
            return False
        self._graph.remove(t)
        return True

    def __len__(self) -> int:
        return len(self._graph)

    def __iter__(self) -> Iterator[Triple]:
        return (Triple(s, p, o) for s, p, o in self._graph)

    def __contains__(self, triple: object) -> bool:
        if not isinstance(triple, tuple) or len(triple) != 3:
            return False
        return triple in self._graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RDFGraph):
            return NotImplemented
        return len(self) == len(other) and self.triple_set() == other.triple_set()

    def __repr__(self) -> str:
        return f"RDFGraph({len(self)} triples, {len(self.subjects())} subjects)"

    def copy(self) -> "RDFGraph":
        """Independent graph with the same triples and type predicate."""
        out = RDFGraph(type_predicate=self.type_predicate)
        out._graph += self._graph
        return out

    def triple_set(self) -> frozenset[Triple]:
        return frozenset(self)

    def subjects(self) -> set[Term]:
        return set(self._graph.subjects())

    def nodes(self) -> set[Term]:
        """All subjects and objects (the node set V)."""
        return set(self._graph.all_nodes())

    def molecule(self, subject: Term) -> list[Triple]:
        """The RDF molecule of subject: every triple it is the subject of."""
        return [Triple(subject, p, o) for p, o in self._graph.predicate_objects(subject)]

    def predicates_of(self, subject: Term) -> set[URIRef]:
        return set(self._graph.predicates(subject))

    def objects(self, subject: Term, predicate: URIRef) -> frozenset[Term]:
        return frozenset(self._graph.objects(subject, predicate))

    def subjects_with(self, predicate: URIRef, obj: Term) -> frozenset[Term]:
        """Subjects s with (s predicate obj) in the graph."""
        return frozenset(self._graph.subjects(predicate, obj))

    def triples_with_predicate(self, predicate: URIRef) -> list[Triple]:
        return [Triple(s, p, o) for s, p, o in self._graph.triples((None, predicate, None))]

    def instances(self, class_iri: Term) -> frozenset[Term]:
        return frozenset(self._graph.subjects(self.type_predicate, class_iri))

    def classes(self) -> list[Term]:
        """Classes with at least one instance, in canonical order."""
        return sorted(set(self._graph.objects(None, self.type_predicate)), key=term_to_nt)


def entities_of_class(g: RDFGraph, class_iri: Term) -> frozenset[Term]:
    """All s with (s type class_iri); its size is the class multiplicity."""
    if not isinstance(class_iri, URIRef):
        raise ValueError(f"class must be an IRI, got {class_iri!r}")
    return g.instances(class_iri)


def class_properties(g: RDFGraph, class_iri: Term) -> tuple[URIRef, ...]:
    """Predicates other than the type predicate used by any instance of the class."""
    found: set[URIRef] = set()
    for entity in g.instances(class_iri):
        found.update(g.predicates_of(entity))
    found.discard(g.type_predicate)
    return tuple(sorted(found, key=str))


def property_rows(
    g: RDFGraph,
    entities: Iterable[Term],
    properties: Sequence[URIRef],
) -> dict[Term, dict[URIRef, frozenset[Term]]]:
    """Objects of every entity under every property, read from the graph once."""
    return {entity: {p: g.objects(entity, p) for p in properties} for entity in entities}


def tuple_from_row(
    subject: Term,
    row: Mapping[URIRef, AbstractSet[Term]],
    properties: Sequence[URIRef],
) -> ObjectTuple | None:
    """Object tuple of one property row; None when a property has no object."""
    objects: list[Term] = []
    complete = True
    for prop in properties:
        found = row.get(prop, ())
        if len(found) > 1:
            raise FunctionalityViolationError(subject, prop, len(found))
        if not found:
            complete = False
            continue
        objects.append(next(iter(found)))
    return tuple(objects) if complete else None


def object_tuple(
    g: RDFGraph,
    subject: Term,
    properties: Sequence[URIRef],
) -> ObjectTuple | None:
    """Objects of subject under properties, or None when any property is missing.

    Raises FunctionalityViolationError when subject has several objects for
    one of the properties.
    """
    if not properties:
        raise ValueError("object_tuple needs at least one property")
    return tuple_from_row(subject, property_rows(g, (subject,), properties)[subject], properties)
