"""Materialize and score a factorization for every property subset of a class."""

import logging
from collections.abc import Iterable, Sequence
from itertools import combinations

from rdflib.term import URIRef

from ..errors import PatternSpaceTooLargeError
from ..models import EdgeConvention, PropertySet, SweepRow
from ..rdf.graph import RDFGraph
from ..rdf.terms import Term, canonical_properties
from ..settings import get_settings
from .factorization import factorize, report
from .stats import build_star_table, compute_objective, full_property_set

logger = logging.getLogger(__name__)


def _all_subsets(properties: PropertySet) -> list[PropertySet]:
    cap = get_settings().efsp_max_properties
    if len(properties) > cap:
        raise PatternSpaceTooLargeError(len(properties), cap)
    return [sub for k in range(len(properties), 0, -1) for sub in combinations(properties, k)]


def evaluate_subsets(
    g: RDFGraph,
    c: Term,
    s: Sequence[URIRef] | None = None,
    subsets: Iterable[Iterable[URIRef]] | None = None,
    convention: EdgeConvention | str | None = None,
) -> list[SweepRow]:
    """Materialize a factorization per property subset and report its objectives and savings.

    Defaults to every non-empty subset of s. Rows are sorted by star_edge_count value,
    then by the canonical subset order.
    """
    chosen = EdgeConvention(convention or get_settings().default_convention)
    properties = full_property_set(g, c, s)
    candidates = _all_subsets(properties) if subsets is None else [canonical_properties(x) for x in subsets]
    order = {sub: i for i, sub in enumerate(sorted(candidates, key=lambda x: [str(p) for p in x]))}
    rows: list[tuple[int, int, SweepRow]] = []
    for subset in candidates:
        table = build_star_table(g, c, subset)
        objective = compute_objective(g, c, properties, subset, table)
        factorized, _ = factorize(g, c, subset, table=table)
        rep = report(g, factorized, c, properties, chosen, sp=subset)
        row = SweepRow(
            properties=[str(p) for p in subset],
            ami=objective.ami,
            star_edges=objective.star_edges,
            factorized_edge_count=objective.factorized_edge_count,
            nle_before=rep.nle_before,
            nle_after=rep.nle_after,
            percent_savings=rep.percent_savings,
            nn_before=rep.nn_before,
            nn_after=rep.nn_after,
        )
        rows.append((objective.star_edges, order[subset], row))
    rows.sort(key=lambda r: (r[0], r[1]))
    logger.info("Evaluated %d property subsets of %s", len(rows), c)
    return [row for _, _, row in rows]
