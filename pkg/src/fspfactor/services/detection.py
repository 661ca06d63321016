"""Frequent star pattern detection: exhaustive (efsp) and greedy (gfsp) search."""

import logging
import time
from collections.abc import Iterable, Sequence
from dataclasses import replace
from itertools import combinations

from rdflib.term import URIRef

from ..errors import NoCandidateError, PatternSpaceTooLargeError, SubsetChainError
from ..models import (
    Algorithm,
    AssumptionReport,
    DetectionResult,
    Objective,
    PatternSpace,
    PropertySet,
    StarPatternTable,
    TraceEntry,
    Violation,
)
from ..rdf.graph import PropertyRows, RDFGraph, entities_of_class, property_rows
from ..rdf.terms import Term, canonical_properties, term_to_nt
from ..settings import get_settings
from .stats import build_star_table, compute_objective, full_property_set, project_table, star_edge_count

logger = logging.getLogger(__name__)


def enumerate_pattern_space(
    g: RDFGraph,
    c: Term,
    s: Iterable[URIRef],
    *,
    cap: int | None = None,
) -> PatternSpace:
    """Build one star pattern table for every subset of s with at least two properties."""
    properties = canonical_properties(s)
    limit = cap if cap is not None else get_settings().efsp_max_properties
    if len(properties) > limit:
        raise PatternSpaceTooLargeError(len(properties), limit)
    space = PatternSpace(class_iri=c, properties=properties)
    rows = property_rows(g, entities_of_class(g, c), properties)
    for k in range(len(properties), 1, -1):
        for subset in combinations(properties, k):
            space.tables[subset] = build_star_table(g, c, subset, rows=rows)
    logger.debug("Enumerated %d star pattern tables over %d properties", len(space), len(properties))
    return space


def efsp(space: PatternSpace, g: RDFGraph, c: Term, s: Iterable[URIRef]) -> DetectionResult:
    """Scan the pattern space by decreasing cardinality for the smallest factorized edge count.

    Ties keep the first subset visited in canonical order.
    """
    properties = canonical_properties(s)
    if not len(space):
        raise NoCandidateError(f"no property subset of size >= 2 to evaluate for {c}")
    started = time.perf_counter()
    trace: list[TraceEntry] = []
    best: tuple[Objective, StarPatternTable] | None = None
    for k in range(len(properties), 1, -1):
        for subset in combinations(properties, k):
            try:
                table = space[subset]
            except KeyError:
                raise ValueError(f"pattern space lacks the subset {[str(p) for p in subset]}") from None
            objective = compute_objective(g, c, properties, subset, table)
            trace.append(TraceEntry(subset, objective.factorized_edge_count, objective.ami))
            logger.debug("efsp %s -> %d", [str(p) for p in subset], objective.factorized_edge_count)
            if best is None or objective.factorized_edge_count < best[0].factorized_edge_count:
                best = (objective, table)
    if best is None:
        raise NoCandidateError(f"no property subset of size >= 2 to evaluate for {c}")
    objective, table = best
    return DetectionResult(
        best_properties=objective.property_set,
        frequent_star_patterns=table,
        objective=objective,
        trace=tuple(trace),
        algorithm=Algorithm.EFSP,
        ps_iterations=len(trace),
        evaluations=len(space),
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
    )


def _child_table(
    g: RDFGraph,
    c: Term,
    parent: StarPatternTable,
    prop: URIRef,
    rows: PropertyRows,
) -> StarPatternTable:
    if parent.skipped:
        return build_star_table(g, c, tuple(p for p in parent.properties if p != prop), rows=rows)
    return project_table(parent, prop)


def gfsp(
    g: RDFGraph,
    c: Term,
    s: Iterable[URIRef],
    *,
    early_stop: bool | None = None,
) -> DetectionResult:
    """Greedy descent over property subsets guided by the star edge count.

    Each round evaluates every child obtained by dropping one property and
    moves to the smallest; a child whose star patterns collapse to a single
    tuple (AMI = 1) and skips no instance is returned immediately unless
    ``early_stop`` is off.
    The search stops when the best child is worse than the current set.
    """
    properties = canonical_properties(s)
    if len(properties) < 2:
        raise NoCandidateError(f"greedy detection needs at least two properties, got {len(properties)}")
    stop_on_single = get_settings().gfsp_early_stop if early_stop is None else early_stop
    started = time.perf_counter()
    evaluations = 0

    current = properties
    rows = property_rows(g, entities_of_class(g, c), properties)
    table = build_star_table(g, c, current, rows=rows)
    objective = compute_objective(g, c, properties, current, table)
    trace = [TraceEntry(current, objective.star_edges, objective.ami)]

    def done(sp: PropertySet, tbl: StarPatternTable, obj: Objective) -> DetectionResult:
        return DetectionResult(
            best_properties=sp,
            frequent_star_patterns=tbl,
            objective=obj,
            trace=tuple(trace),
            algorithm=Algorithm.GFSP,
            ps_iterations=len(trace),
            evaluations=evaluations,
            elapsed_ms=(time.perf_counter() - started) * 1000.0,
        )

    if stop_on_single and objective.ami == 1 and not table.skipped:
        return done(current, table, objective)

    while len(current) > 2:
        best: tuple[Objective, StarPatternTable] | None = None
        best_value = float("inf")
        for prop in current:
            child_table = _child_table(g, c, table, prop, rows)
            child = compute_objective(g, c, properties, child_table.properties, child_table)
            evaluations += 1
            trace.append(TraceEntry(child.property_set, child.star_edges, child.ami))
            logger.debug("gfsp %s -> %d", [str(p) for p in child.property_set], child.star_edges)
            if stop_on_single and child.ami == 1 and not child_table.skipped:
                return done(child.property_set, child_table, child)
            if child.star_edges < best_value:
                best_value = child.star_edges
                best = (child, child_table)
        if best is None or best_value > objective.star_edges:
            break
        objective, table = best
        current = objective.property_set
    return done(current, table, objective)


def detect(
    g: RDFGraph,
    c: Term,
    s: Sequence[URIRef] | None = None,
    *,
    algorithm: Algorithm | str | None = None,
    early_stop: bool | None = None,
) -> DetectionResult:
    """Run one detection algorithm over s (default: all properties of c), timing the whole run."""
    chosen = Algorithm(algorithm or get_settings().default_algorithm)
    properties = full_property_set(g, c, s)
    started = time.perf_counter()
    if chosen == Algorithm.EFSP:
        space = enumerate_pattern_space(g, c, properties)
        result = efsp(space, g, c, properties)
    else:
        result = gfsp(g, c, properties, early_stop=early_stop)
    result = replace(result, elapsed_ms=(time.perf_counter() - started) * 1000.0)
    logger.info(
        "%s chose %d of %d properties for %s (AMI %d) in %.1f ms",
        chosen,
        len(result.best_properties),
        len(properties),
        c,
        result.objective.ami,
        result.elapsed_ms,
    )
    return result


def check_assumptions(g: RDFGraph, c: Term, s: Iterable[URIRef]) -> AssumptionReport:
    """List completeness and functionality violations among the instances of c."""
    properties = canonical_properties(s)
    report = AssumptionReport(class_iri=c, properties=properties)
    for entity in sorted(entities_of_class(g, c), key=term_to_nt):
        for prop in properties:
            count = len(g.objects(entity, prop))
            if count == 0:
                report.violations.append(Violation("completeness", entity, prop, 0))
            elif count > 1:
                report.violations.append(Violation("functionality", entity, prop, count))
    return report


def pruning_rule_holds(
    g: RDFGraph,
    c: Term,
    s: Iterable[URIRef],
    sp: Iterable[URIRef],
    sp_prime: Iterable[URIRef],
    sp_double_prime: Iterable[URIRef],
) -> bool:
    """Check the pruning rule on one chain sp'' ⊂ sp' ⊂ sp ⊆ s.

    False only when star_edge_count(sp') > star_edge_count(sp) while
    star_edge_count(sp'') < star_edge_count(sp).
    """
    full, outer, middle, inner = (set(canonical_properties(x)) for x in (s, sp, sp_prime, sp_double_prime))
    if not inner:
        raise SubsetChainError("the innermost property set must not be empty")
    if not (inner < middle < outer <= full):
        raise SubsetChainError("property sets must form a strictly nested chain inside s")
    base = star_edge_count(g, c, full, outer)
    if star_edge_count(g, c, full, middle) <= base:
        return True
    return star_edge_count(g, c, full, inner) >= base
