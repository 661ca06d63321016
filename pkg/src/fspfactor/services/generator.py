"""Seeded synthetic sensor-style datasets with controllable tuple repetition."""

import logging

import numpy as np
from rdflib.namespace import XSD
from rdflib.term import URIRef

from ..errors import GeneratorSpecError
from ..models import GeneratorSpec
from ..rdf.graph import RDFGraph, Triple
from ..rdf.terms import make_literal

logger = logging.getLogger(__name__)

GEN_NS = "urn:fsp:gen:"

# Above this many possible tuples, distinct tuples are drawn by rejection instead of numpy's choice.
_CHOICE_LIMIT = 2**62


def entity_iri(i: int) -> URIRef:
    return URIRef(f"{GEN_NS}m{i}")


def property_iri(j: int) -> URIRef:
    return URIRef(f"{GEN_NS}p{j}")


def distinct_tuple_count(spec: GeneratorSpec) -> int:
    """K = 1 + round((1 - skew)·(N - 1)), clipped to the number of possible tuples."""
    wanted = 1 + round((1.0 - spec.repetition_skew) * (spec.num_entities - 1))
    varying = spec.num_properties - spec.shared_properties
    possible = spec.value_cardinality**varying
    if wanted <= possible:
        return wanted
    if spec.repetition_skew == 0.0:
        raise GeneratorSpecError(
            f"{spec.num_entities} unique tuples requested but only {possible} exist "
            f"({spec.value_cardinality} values over {varying} varying properties)"
        )
    logger.warning("Distinct tuple count clipped from %d to %d", wanted, possible)
    return possible


def _distinct_codes(rng: np.random.Generator, k: int, cardinality: int, width: int) -> np.ndarray:
    """k distinct value tuples of the given width, as a (k, width) integer array."""
    if width == 0:
        return np.zeros((k, 0), dtype=np.int64)
    possible = cardinality**width
    if possible <= _CHOICE_LIMIT:
        codes = rng.choice(possible, size=k, replace=False)
        return np.stack(np.unravel_index(codes, (cardinality,) * width), axis=1)
    seen: set[tuple[int, ...]] = set()
    rows: list[tuple[int, ...]] = []
    while len(rows) < k:
        for row in map(tuple, rng.integers(0, cardinality, size=(k - len(rows), width)).tolist()):
            if row not in seen:
                seen.add(row)
                rows.append(row)
    return np.asarray(rows, dtype=np.int64)


def _spread_codes(k: int, cardinality: int, width: int) -> np.ndarray:
    """k distinct tuples from a sheared mixed-radix counter over range(k).

    Column 0 is the lowest digit; every other column adds it to its own digit
    modulo cardinality, so each property cycles through all values and the
    per-property counts differ by at most one.
    """
    t = np.arange(k, dtype=np.int64)
    columns = []
    place = 1
    for _ in range(width):
        columns.append((t // place) % cardinality if place <= k else np.zeros(k, dtype=np.int64))
        place *= cardinality
    digits = np.stack(columns, axis=1)
    digits[:, 1:] = (digits[:, 1:] + digits[:, :1]) % cardinality
    return digits


def generate(spec: GeneratorSpec, seed: int = 0) -> RDFGraph:
    """Build a complete, functional graph of spec.num_entities measurements.

    The first ``shared_properties`` properties carry one constant value. The
    remaining ones take K distinct tuples: entity i < K gets tuple i, the rest
    draw tuples with weights proportional to 1/rank. With no repetition the
    tuples come from a counter, so every property spreads its values evenly.
    """
    rng = np.random.default_rng(seed)
    n_entities, n_props = spec.num_entities, spec.num_properties
    varying = n_props - spec.shared_properties
    k = distinct_tuple_count(spec)

    if spec.repetition_skew == 0.0 and varying:
        codes = _spread_codes(k, spec.value_cardinality, varying)
    else:
        codes = _distinct_codes(rng, k, spec.value_cardinality, varying)
    assignment = np.arange(n_entities) % max(k, 1)
    if n_entities > k:
        weights = 1.0 / np.arange(1, k + 1)
        assignment[k:] = rng.choice(k, size=n_entities - k, p=weights / weights.sum())

    class_iri = URIRef(spec.class_iri)
    props = [property_iri(j) for j in range(1, n_props + 1)]
    values = [make_literal(str(v), datatype=str(XSD.integer)) for v in range(spec.value_cardinality)]
    g = RDFGraph()
    for i in range(n_entities):
        entity = entity_iri(i)
        g.add(Triple(entity, g.type_predicate, class_iri))
        row = codes[assignment[i]]
        for j, prop in enumerate(props):
            v = 0 if j < spec.shared_properties else int(row[j - spec.shared_properties])
            g.add(Triple(entity, prop, values[v]))
    logger.info(
        "Generated %d entities x %d properties with %d distinct tuples (seed %d)",
        n_entities,
        n_props,
        k,
        seed,
    )
    return g
