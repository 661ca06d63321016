"""Star pattern grouping, multiplicities, AMI, the edge-count objectives and NLE/NN metrics."""

import logging
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from fractions import Fraction

from rdflib.term import URIRef

from ..errors import IncompleteMoleculeError, UndefinedInverseError
from ..models import EdgeConvention, Objective, PropertySet, StarPatternTable
from ..rdf.graph import (
    PropertyRows,
    RDFGraph,
    Triple,
    class_properties,
    entities_of_class,
    property_rows,
    tuple_from_row,
)
from ..rdf.terms import ObjectTuple, Term, canonical_properties, term_to_nt
from ..settings import get_settings

logger = logging.getLogger(__name__)


def build_star_table(
    g: RDFGraph,
    c: Term,
    sp: Iterable[URIRef],
    *,
    strict: bool = False,
    rows: PropertyRows | None = None,
) -> StarPatternTable:
    """Group the instances of c by their object tuple over sp.

    Instances without a full tuple go to ``skipped``; with ``strict`` they
    raise IncompleteMoleculeError instead. ``rows`` (from property_rows over
    a superset of sp) saves the graph lookups when many subsets are grouped.
    """
    properties = canonical_properties(sp)
    if not properties:
        raise ValueError("star pattern needs at least one property")
    groups: dict[ObjectTuple, set[Term]] = {}
    skipped: set[Term] = set()
    if rows is None:
        rows = property_rows(g, entities_of_class(g, c), properties)
    for entity, row in rows.items():
        key = tuple_from_row(entity, row, properties)
        if key is None:
            skipped.add(entity)
        else:
            groups.setdefault(key, set()).add(entity)
    if skipped:
        if strict:
            raise IncompleteMoleculeError(skipped)
        logger.debug("%d instances of %s lack a full tuple over %d properties", len(skipped), c, len(properties))
    return StarPatternTable(
        class_iri=c,
        properties=properties,
        groups={key: frozenset(members) for key, members in groups.items()},
        skipped=frozenset(skipped),
    )


def project_table(table: StarPatternTable, prop: URIRef) -> StarPatternTable:
    """Table over table.properties minus prop, derived by merging the parent's groups.

    Only exact when the parent skipped nobody; a parent with skipped entities
    must be rebuilt from the graph.
    """
    if table.skipped:
        raise ValueError("cannot project a table with skipped entities")
    if prop not in table.properties:
        raise ValueError(f"{prop} is not one of the table properties")
    if len(table.properties) < 2:
        raise ValueError("projection would leave an empty property set")
    drop = table.properties.index(prop)
    merged: dict[ObjectTuple, set[Term]] = {}
    for key, members in table.groups.items():
        merged.setdefault(key[:drop] + key[drop + 1 :], set()).update(members)
    return StarPatternTable(
        class_iri=table.class_iri,
        properties=table.properties[:drop] + table.properties[drop + 1 :],
        groups={key: frozenset(members) for key, members in merged.items()},
    )


def multiplicity(table: StarPatternTable, t: ObjectTuple) -> int:
    return len(table.groups.get(tuple(t), ()))


def multiplicity_inverse(table: StarPatternTable, t: ObjectTuple) -> Fraction:
    m = multiplicity(table, t)
    if m == 0:
        raise UndefinedInverseError(f"no entity of {table.class_iri} matches the tuple")
    return Fraction(1, m)


def ami(table: StarPatternTable) -> int:
    """Ceiling of the summed multiplicity inverses over all matched entities.

    Summed group by group in exact arithmetic; equals the group count.
    """
    total = sum(
        (multiplicity_inverse(table, key) * len(members) for key, members in table.groups.items()),
        Fraction(0),
    )
    value = math.ceil(total)
    if value != table.num_groups:
        logger.warning(
            "AMI %s diverges from the group count %d for %s", value, table.num_groups, table.class_iri
        )
    return table.num_groups


def class_multiplicity(g: RDFGraph, c: Term) -> int:
    return len(entities_of_class(g, c))


def _check_subset(s: PropertySet, sp: PropertySet) -> None:
    if not sp:
        raise ValueError("property subset must not be empty")
    missing = set(sp) - set(s)
    if missing:
        raise ValueError(f"properties {sorted(map(str, missing))} are not in the full property set")


def compute_objective(
    g: RDFGraph,
    c: Term,
    s: Iterable[URIRef],
    sp: Iterable[URIRef],
    table: StarPatternTable | None = None,
) -> Objective:
    """Both edge-count objectives of sp; reuses table when given.

    Instances the table skipped keep their sp edges, so each adds |sp| to
    both counts.
    """
    full = canonical_properties(s)
    subset = canonical_properties(sp)
    _check_subset(full, subset)
    if table is None:
        table = build_star_table(g, c, subset)
    am = class_multiplicity(g, c)
    a = ami(table)
    rest = len(full) - len(subset)
    untouched = len(table.skipped) * len(subset)
    return Objective(
        property_set=subset,
        ami=a,
        star_edges=a * (len(subset) + 1) + am * rest + untouched,
        factorized_edge_count=a * len(subset) + am + am * rest + untouched,
    )


def star_edge_count(g: RDFGraph, c: Term, s: Iterable[URIRef], sp: Iterable[URIRef]) -> int:
    """AMI(sp)·(|sp|+1) + AM·|s−sp|, plus |sp| per instance lacking a full tuple."""
    return compute_objective(g, c, s, sp).star_edges


def edges_factorized_count(g: RDFGraph, c: Term, s: Iterable[URIRef], sp: Iterable[URIRef]) -> int:
    """AMI(sp)·|sp| + AM + AM·|s−sp| + |sp| per unmatched instance: surrogate, instanceOf and untouched edges."""
    return compute_objective(g, c, s, sp).factorized_edge_count


def class_edges(
    g: RDFGraph,
    c: Term,
    props: Iterable[URIRef],
    convention: EdgeConvention | str,
    *,
    instance_of: URIRef | str | None = None,
) -> tuple[set[Term], set[Term], list[Triple]]:
    """Entities, surrogates and counted labeled edges of class c.

    Entities are the direct instances of c plus the subjects linked by
    instanceOf to a surrogate typed c. Surrogate edges are counted once.
    """
    inst = URIRef(instance_of or get_settings().instance_of_predicate)
    with_type = EdgeConvention(convention) == EdgeConvention.WITH_TYPE
    prop_set = set(canonical_properties(props))
    direct = entities_of_class(g, c)
    links = [t for t in g.triples_with_predicate(inst) if t.object in direct]
    surrogates = {t.object for t in links}
    entities = (set(direct) - surrogates) | {t.subject for t in links}

    entity_preds = prop_set | {inst}
    surrogate_preds = set(prop_set)
    if with_type:
        entity_preds.add(g.type_predicate)
        surrogate_preds.add(g.type_predicate)

    edges: list[Triple] = []
    for owners, preds in ((entities, entity_preds), (surrogates, surrogate_preds)):
        for owner in owners:
            edges.extend(t for t in g.molecule(owner) if t.predicate in preds)
    return entities, surrogates, edges


def nle(
    g: RDFGraph,
    c: Term,
    props: Iterable[URIRef],
    convention: EdgeConvention | str,
    *,
    instance_of: URIRef | str | None = None,
) -> int:
    """Number of labeled edges of class c under the given edge convention."""
    return len(class_edges(g, c, props, convention, instance_of=instance_of)[2])


def nn(
    g: RDFGraph,
    c: Term,
    props: Iterable[URIRef],
    convention: EdgeConvention | str,
    *,
    instance_of: URIRef | str | None = None,
) -> int:
    """Number of nodes: class entities, surrogates and the objects of their counted edges."""
    entities, surrogates, edges = class_edges(g, c, props, convention, instance_of=instance_of)
    return len(entities | surrogates | {t.object for t in edges})


def repetition_histogram(g: RDFGraph, c: Term, p: URIRef) -> dict[Term, float]:
    """Share (in percent) of the p-edges of c's instances that point at each object."""
    counts: Counter[Term] = Counter()
    for entity in entities_of_class(g, c):
        counts.update(g.objects(entity, p))
    total = sum(counts.values())
    if not total:
        return {}
    ordered = sorted(counts.items(), key=lambda kv: (-kv[1], term_to_nt(kv[0])))
    return {obj: 100.0 * n / total for obj, n in ordered}


def full_property_set(g: RDFGraph, c: Term, properties: Sequence[URIRef] | None = None) -> PropertySet:
    """Explicit properties in canonical order, or every property used by the class."""
    if properties:
        return canonical_properties(properties)
    return class_properties(g, c)
