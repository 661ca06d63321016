"""Rewrite frequent star patterns into compact molecules around surrogate entities, and back."""

import hashlib
import logging
from collections.abc import Iterable, Sequence

from rdflib.term import URIRef

from ..errors import (
    DanglingSurrogateError,
    InstanceOfFunctionalityError,
    SurrogateCollisionError,
    UndefinedSavingsError,
)
from ..models import EdgeConvention, EntityMapping, FactorizationReport, StarPatternTable
from ..rdf.graph import RDFGraph, Triple, entities_of_class
from ..rdf.terms import ObjectTuple, Term, canonical_properties, term_to_nt
from ..settings import get_settings
from .stats import build_star_table, class_edges

logger = logging.getLogger(__name__)


def surrogate_iri(
    class_iri: Term,
    properties: Sequence[URIRef],
    objects: ObjectTuple,
    *,
    prefix: str | None = None,
    digits: int | None = None,
) -> URIRef:
    """Deterministic surrogate name: prefix + truncated sha256 of class and property/object pairs."""
    settings = get_settings()
    payload = "\n".join(
        [term_to_nt(class_iri)] + [f"{term_to_nt(p)} {term_to_nt(o)}" for p, o in zip(properties, objects)]
    )
    digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
    return URIRef((prefix or settings.surrogate_prefix) + digest[: digits or settings.surrogate_hash_hex_digits])


def build_mapping(
    g: RDFGraph,
    c: Term,
    sp: Iterable[URIRef],
    *,
    table: StarPatternTable | None = None,
) -> EntityMapping:
    """One surrogate per distinct object tuple; entities without a full tuple stay unmapped."""
    properties = canonical_properties(sp)
    if not properties:
        raise ValueError("factorization needs at least one property")
    if table is None:
        table = build_star_table(g, c, properties)
    mapping = EntityMapping(class_iri=c, properties=properties)
    for key in sorted(table.groups, key=lambda t: tuple(map(term_to_nt, t))):
        sg = surrogate_iri(c, properties, key)
        if sg in mapping.surrogates:
            raise SurrogateCollisionError(f"surrogate {sg} minted for two different object tuples")
        mapping.surrogates[sg] = key
        for entity in table.groups[key]:
            mapping.pairs[entity] = sg
    if table.skipped:
        logger.warning("%d instances of %s left unfactorized (incomplete tuples)", len(table.skipped), c)
    return mapping


def factorize(
    g: RDFGraph,
    c: Term,
    sp: Iterable[URIRef],
    *,
    instance_of: URIRef | str | None = None,
    table: StarPatternTable | None = None,
) -> tuple[RDFGraph, EntityMapping]:
    """Materialize the factorized graph: type edges become instanceOf links, sp edges move to surrogates."""
    properties = canonical_properties(sp)
    if not properties:
        raise ValueError("factorization needs at least one property")
    if not entities_of_class(g, c):
        logger.warning("Class %s has no instances; returning the graph unchanged", c)
        return g.copy(), EntityMapping(class_iri=c, properties=properties)

    inst = URIRef(instance_of or get_settings().instance_of_predicate)
    mapping = build_mapping(g, c, properties, table=table)
    moved = set(properties)
    out = RDFGraph(type_predicate=g.type_predicate)
    for t in g:
        sg = mapping.pairs.get(t.subject)
        if sg is None:
            out.add(t)
        elif t.predicate == g.type_predicate and t.object == c:
            out.add(Triple(t.subject, inst, sg))
            out.add(Triple(sg, t.predicate, t.object))
        elif t.predicate in moved:
            out.add(Triple(sg, t.predicate, t.object))
        else:
            out.add(t)
    logger.info(
        "Factorized %d entities of %s into %d surrogates (%d -> %d triples)",
        len(mapping),
        c,
        len(mapping.surrogates),
        len(g),
        len(out),
    )
    return out, mapping


def expand(
    g_prime: RDFGraph,
    mapping_hint: EntityMapping | RDFGraph | None = None,
    *,
    instance_of: URIRef | str | None = None,
) -> RDFGraph:
    """Apply the instanceOf axioms and drop every surrogate and instanceOf triple."""
    inst = URIRef(instance_of or get_settings().instance_of_predicate)
    work = g_prime
    if mapping_hint is not None:
        work = g_prime.copy()
        extra = mapping_hint.to_graph(inst) if isinstance(mapping_hint, EntityMapping) else mapping_hint
        work.add_all(extra)

    targets: dict[Term, Term] = {}
    for s, _, sg in work.triples_with_predicate(inst):
        if s in targets and targets[s] != sg:
            raise InstanceOfFunctionalityError(f"{s} is an instance of more than one surrogate")
        targets[s] = sg
    molecules = {sg: work.molecule(sg) for sg in set(targets.values())}
    for sg, molecule in molecules.items():
        if not molecule:
            raise DanglingSurrogateError(f"surrogate {sg} has no triples")

    out = RDFGraph(type_predicate=work.type_predicate)
    out.add_all(t for t in work if t.predicate != inst and t.subject not in molecules)
    for s, sg in targets.items():
        out.add_all(Triple(s, t.predicate, t.object) for t in molecules[sg])
    if targets:
        logger.info("Expanded %d entities from %d surrogates", len(targets), len(molecules))
    return out


def _percent(before: int, after: int) -> float:
    return 100.0 * (before - after) / before


def report(
    original: RDFGraph,
    factorized: RDFGraph,
    c: Term,
    s: Iterable[URIRef],
    convention: EdgeConvention | str | None = None,
    *,
    sp: Iterable[URIRef] | None = None,
    instance_of: URIRef | str | None = None,
) -> FactorizationReport:
    """NN, NLE per convention and signed savings of factorized against original."""
    chosen = EdgeConvention(convention or get_settings().default_convention)
    properties = canonical_properties(s)
    counts: dict[tuple[str, EdgeConvention], tuple[int, int]] = {}
    surrogates: set[Term] = set()
    mapped: set[Term] = set()
    for label, graph in (("before", original), ("after", factorized)):
        for conv in EdgeConvention:
            entities, sgs, edges = class_edges(graph, c, properties, conv, instance_of=instance_of)
            nodes = len(entities | sgs | {t.object for t in edges})
            counts[(label, conv)] = (nodes, len(edges))
            if label == "after":
                surrogates = sgs
                mapped = {t.subject for t in edges if t.object in sgs}
    nn_before, nle_before = counts[("before", chosen)]
    nn_after, nle_after = counts[("after", chosen)]
    if nle_before == 0:
        raise UndefinedSavingsError(f"class {c} has no labeled edges in the original graph")
    size_before, size_after = nn_before + nle_before, nn_after + nle_after
    return FactorizationReport(
        class_iri=str(c),
        properties=[str(p) for p in properties],
        factorized_properties=[str(p) for p in canonical_properties(sp or ())],
        convention=chosen,
        nn_before=nn_before,
        nn_after=nn_after,
        nle_before=nle_before,
        nle_after=nle_after,
        nle_before_by_convention={str(conv): counts[("before", conv)][1] for conv in EdgeConvention},
        nle_after_by_convention={str(conv): counts[("after", conv)][1] for conv in EdgeConvention},
        percent_savings=_percent(nle_before, nle_after),
        size_before=size_before,
        size_after=size_after,
        percent_size_savings=_percent(size_before, size_after),
        surrogates=len(surrogates),
        mapped_entities=len(mapped),
    )
