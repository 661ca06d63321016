"""RDF model: terms, the indexed graph and the N-Triples codec."""

from .graph import RDFGraph, Triple, class_properties, entities_of_class, object_tuple, property_rows, tuple_from_row
from .ntriples import parse_ntriples, read_graph, serialize_ntriples, write_atomic, write_ntriples
from .terms import ObjectTuple, Term, canonical_properties, iri, make_literal, term_to_nt

__all__ = [
    "ObjectTuple",
    "RDFGraph",
    "Term",
    "Triple",
    "canonical_properties",
    "class_properties",
    "entities_of_class",
    "iri",
    "make_literal",
    "object_tuple",
    "parse_ntriples",
    "property_rows",
    "read_graph",
    "serialize_ntriples",
    "term_to_nt",
    "tuple_from_row",
    "write_atomic",
    "write_ntriples",
]
