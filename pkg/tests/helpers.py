"""Graph builders shared by the test modules."""

import random

from rdflib.namespace import XSD
from rdflib.term import BNode, URIRef

from fspfactor.rdf import RDFGraph, Triple, make_literal
from fspfactor.settings import RDF_TYPE

EX = "urn:ex:"
TYPE = URIRef(RDF_TYPE)
C = URIRef(EX + "C")
P1, P2, P3, P4 = (URIRef(f"{EX}p{i}") for i in range(1, 5))
E1, E2, E3, E4, E5, E6 = (URIRef(f"{EX}e{i}") for i in range(1, 7))
C1, C2, C3, C4 = (URIRef(f"{EX}c{i}") for i in range(1, 5))

# Four entities of class C sharing p1..p3, with p4 values e4, e4, e5, e6.
EXAMPLE_NT = "\n".join(
    [f"<{c}> <{RDF_TYPE}> <{C}> ." for c in (C1, C2, C3, C4)]
    + [f"<{c}> <{p}> <{e}> ." for c in (C1, C2, C3, C4) for p, e in ((P1, E1), (P2, E2), (P3, E3))]
    + [f"<{c}> <{P4}> <{e}> ." for c, e in ((C1, E4), (C2, E4), (C3, E5), (C4, E6))]
) + "\n"


def ex(name: str) -> URIRef:
    return URIRef(EX + name)


def star_graph(rows: dict[str, dict[str, object]], class_iri: URIRef = C) -> RDFGraph:
    """Entities typed class_iri with the given property -> object rows; plain values become literals."""
    g = RDFGraph()
    for entity, props in rows.items():
        s = ex(entity)
        g.add(Triple(s, TYPE, class_iri))
        for prop, value in props.items():
            values = value if isinstance(value, list) else [value]
            for v in values:
                obj = v if isinstance(v, URIRef) else make_literal(str(v))
                g.add(Triple(s, ex(prop), obj))
    return g


def random_complete_graph(
    rng: random.Random,
    *,
    num_entities: int,
    num_properties: int,
    pool_size: int,
    value_cardinality: int = 3,
    extra: bool = False,
) -> tuple[RDFGraph, tuple[URIRef, ...]]:
    """Complete, functional instances of C whose full tuples come from a pool of pool_size tuples.

    With ``extra`` the graph also carries unrelated triples and a second class.
    """
    props = tuple(ex(f"q{j}") for j in range(num_properties))
    pool = [
        tuple(rng.randrange(value_cardinality) for _ in range(num_properties)) for _ in range(max(1, pool_size))
    ]
    g = RDFGraph()
    for i in range(num_entities):
        s = ex(f"m{i}")
        g.add(Triple(s, TYPE, C))
        row = rng.choice(pool)
        for prop, v in zip(props, row):
            g.add(Triple(s, prop, make_literal(str(v), datatype=str(XSD.integer))))
    if extra:
        for i in range(rng.randrange(1, 6)):
            other = ex(f"o{i}")
            g.add(Triple(other, TYPE, ex("Other")))
            g.add(Triple(other, props[0], ex(f"v{i}")))
            g.add(Triple(ex(f"m{i % num_entities}"), ex("link"), other))
    return g, props


_LITERAL_CHARS = 'ab "\\\n\r\t\b\fçé€\U0001f600\x0b '


def random_rdf_graph(rng: random.Random, num_triples: int = 40) -> RDFGraph:
    """Arbitrary graph mixing IRIs, blank nodes and all literal forms."""

    def node():
        if rng.random() < 0.2:
            return BNode(f"b{rng.randrange(10)}")
        return ex(f"n{rng.randrange(20)}")

    def obj():
        roll = rng.random()
        if roll < 0.4:
            return node()
        text = "".join(rng.choice(_LITERAL_CHARS) for _ in range(rng.randrange(0, 8)))
        if roll < 0.6:
            return make_literal(text)
        if roll < 0.8:
            return make_literal(text, language=rng.choice(["en", "de-ch", "fr"]))
        return make_literal(text, datatype=rng.choice([str(XSD.string), EX + "dt"]))

    g = RDFGraph()
    for _ in range(num_triples):
        g.add(Triple(node(), ex(f"p{rng.randrange(6)}"), obj()))
    return g
