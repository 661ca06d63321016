import random
from dataclasses import replace

import pytest
from rdflib.term import URIRef

from fspfactor.errors import NoCandidateError, PatternSpaceTooLargeError, SubsetChainError
from fspfactor.models import Algorithm, EdgeConvention, PatternSpace
from fspfactor.rdf import RDFGraph, class_properties
from fspfactor.services.detection import (
    check_assumptions,
    detect,
    efsp,
    enumerate_pattern_space,
    gfsp,
    pruning_rule_holds,
)
from fspfactor.services.factorization import factorize, report
from fspfactor.services.stats import build_star_table, nle, star_edge_count
from fspfactor.settings import reset_settings

from .helpers import C, P1, P2, P3, P4, ex, random_complete_graph, star_graph

S = (P1, P2, P3, P4)


def _values(result) -> dict[tuple[URIRef, ...], int]:
    return {entry.properties: entry.value for entry in result.trace}


def test_enumerate_pattern_space(example: RDFGraph) -> None:
    """Four properties give 6 + 4 + 1 = 11 subsets of size two or more."""
    space = enumerate_pattern_space(example, C, S)
    assert len(space) == 11
    assert all(len(subset) >= 2 for subset in space)
    assert space[(P1, P2, P3)].num_groups == 1


def test_enumerate_pattern_space_small(example: RDFGraph) -> None:
    """Two properties give one subset and one property gives none."""
    assert len(enumerate_pattern_space(example, C, [P1, P2])) == 1
    assert len(enumerate_pattern_space(example, C, [P1])) == 0


def test_enumerate_pattern_space_cap(example: RDFGraph) -> None:
    """Exceeding the cap is refused with the subset count."""
    with pytest.raises(PatternSpaceTooLargeError) as excinfo:
        enumerate_pattern_space(example, C, S, cap=3)
    assert excinfo.value.subset_count == 11
    assert excinfo.value.exit_code == 2


def test_efsp_four_entity_example(example: RDFGraph) -> None:
    """E.FSP picks p1..p3 with 11 edges; the trace holds 16, 17 and the 14/18 pairs."""
    result = efsp(enumerate_pattern_space(example, C, S), example, C, S)
    assert result.best_properties == (P1, P2, P3)
    assert result.objective.factorized_edge_count == 11
    values = _values(result)
    assert values[S] == 16
    for subset in ((P1, P2, P4), (P1, P3, P4), (P2, P3, P4)):
        assert values[subset] == 17
    assert values[(P1, P2)] == 14
    assert values[(P1, P4)] == 18
    assert len(result.trace) == 11
    assert [len(e.properties) for e in result.trace] == sorted((len(e.properties) for e in result.trace), reverse=True)
    assert result.frequent_star_patterns == build_star_table(example, C, (P1, P2, P3))
    assert result.algorithm == Algorithm.EFSP


def test_efsp_empty_space(example: RDFGraph) -> None:
    """An empty pattern space has no candidate."""
    with pytest.raises(NoCandidateError) as excinfo:
        efsp(PatternSpace(class_iri=C, properties=(P1,)), example, C, [P1])
    assert excinfo.value.exit_code == 4


def test_efsp_overhead_case() -> None:
    """With unique tuples everywhere the best candidate still costs more than the original edges."""
    g = star_graph({"a": {"x": 1, "y": 2}, "b": {"x": 3, "y": 4}})
    props = (ex("x"), ex("y"))
    result = efsp(enumerate_pattern_space(g, C, props), g, C, props)
    assert result.best_properties == props
    assert result.objective.factorized_edge_count >= nle(g, C, props, EdgeConvention.WITHOUT_TYPE)


def test_efsp_tie_keeps_first_canonical_subset() -> None:
    """Equal subsets resolve to the first one in canonical order."""
    rows = {f"m{i}": {"a": 1, "b": i % 2, "c": i % 2, "d": i} for i in range(6)}
    g = star_graph(rows)
    props = tuple(ex(p) for p in "abcd")
    result = efsp(enumerate_pattern_space(g, C, props), g, C, props)
    best_value = result.objective.factorized_edge_count
    first = next(e for e in result.trace if e.value == best_value)
    assert result.best_properties == first.properties
    assert _values(result)[(ex("a"), ex("b"))] == _values(result)[(ex("a"), ex("c"))]


def test_efsp_returns_minimum_of_trace() -> None:
    """The chosen objective is the minimum over a rescan of the pattern space."""
    rng = random.Random(21)
    for _ in range(15):
        g, props = random_complete_graph(rng, num_entities=rng.randrange(2, 40), num_properties=5, pool_size=6)
        space = enumerate_pattern_space(g, C, props)
        result = efsp(space, g, C, props)
        am = len(g.instances(C))
        rescan = min(
            table.num_groups * len(sub) + am + am * (len(props) - len(sub)) for sub, table in space.tables.items()
        )
        assert result.objective.factorized_edge_count == rescan


def test_gfsp_four_entity_example(example: RDFGraph) -> None:
    """G.FSP evaluates 15 at the root, 16 at three children and stops on the single-pattern child."""
    result = gfsp(example, C, S)
    assert result.best_properties == (P1, P2, P3)
    assert [e.value for e in result.trace] == [15, 16, 16, 16, 8]
    assert [e.properties for e in result.trace[1:4]] == [(P2, P3, P4), (P1, P3, P4), (P1, P2, P4)]
    assert result.objective.ami == 1
    assert result.objective.star_edges == 8
    assert result.ps_iterations == 5
    assert result.evaluations == 4
    assert result.frequent_star_patterns == build_star_table(example, C, (P1, P2, P3))


def test_gfsp_without_early_stop(example: RDFGraph) -> None:
    """With the early stop off the search descends once more, then stops on worse children."""
    result = gfsp(example, C, S, early_stop=False)
    assert result.best_properties == (P1, P2, P3)
    assert [e.value for e in result.trace] == [15, 16, 16, 16, 8, 11, 11, 11]
    assert result.evaluations == 7 <= 4 * 5 // 2


def test_gfsp_root_single_pattern() -> None:
    """When the full set already has one pattern it is returned without descending."""
    g = star_graph({f"m{i}": {"a": 1, "b": 2, "c": 3} for i in range(5)})
    props = tuple(ex(p) for p in "abc")
    result = gfsp(g, C, props)
    assert result.best_properties == props
    assert len(result.trace) == 1
    assert result.evaluations == 0


def test_gfsp_needs_two_properties(example: RDFGraph) -> None:
    """Fewer than two properties is a precondition error."""
    with pytest.raises(NoCandidateError):
        gfsp(example, C, [P1])


def test_gfsp_settings_disable_early_stop(example: RDFGraph, monkeypatch: pytest.MonkeyPatch) -> None:
    """FSP_GFSP_EARLY_STOP=false turns the single-pattern shortcut off."""
    monkeypatch.setenv("FSP_GFSP_EARLY_STOP", "false")
    reset_settings()
    assert len(gfsp(example, C, S).trace) == 8


def test_gfsp_never_beats_efsp_and_respects_bound() -> None:
    """On random 6-property graphs G.FSP's factorized count is at least E.FSP's optimum."""
    rng = random.Random(22)
    for _ in range(25):
        g, props = random_complete_graph(
            rng, num_entities=rng.randrange(2, 60), num_properties=6, pool_size=rng.randrange(1, 15)
        )
        greedy = gfsp(g, C, props)
        exhaustive = efsp(enumerate_pattern_space(g, C, props), g, C, props)
        assert greedy.objective.factorized_edge_count >= exhaustive.objective.factorized_edge_count
        assert greedy.evaluations <= 6 * 7 // 2
        lengths = [len(e.properties) for e in greedy.trace]
        assert lengths == sorted(lengths, reverse=True)


def test_gfsp_skipped_entities_rebuild() -> None:
    """Incomplete entities force child tables to be rebuilt from the graph."""
    rows = {f"m{i}": {"a": 1, "b": 2, "c": i} for i in range(4)}
    rows["x"] = {"a": 1, "b": 2}
    g = star_graph(rows)
    props = tuple(ex(p) for p in "abc")
    result = gfsp(g, C, props)
    assert result.best_properties == (ex("a"), ex("b"))
    assert len(result.frequent_star_patterns.matched) == 5


def test_detection_is_deterministic() -> None:
    """Identical inputs give identical results apart from timing."""
    rng = random.Random(23)
    g, props = random_complete_graph(rng, num_entities=40, num_properties=5, pool_size=7)
    for algorithm in Algorithm:
        one = replace(detect(g, C, props, algorithm=algorithm), elapsed_ms=0.0)
        two = replace(detect(g, C, props, algorithm=algorithm), elapsed_ms=0.0)
        assert one == two


def test_detect_defaults_to_class_properties(example: RDFGraph) -> None:
    """Without explicit properties detect uses every property of the class."""
    result = detect(example, C, algorithm="efsp")
    assert result.best_properties == (P1, P2, P3)
    assert result.elapsed_ms >= 0.0


def test_check_assumptions_hold(example: RDFGraph) -> None:
    """The four-entity example is complete and functional."""
    report = check_assumptions(example, C, S)
    assert report.holds
    assert report.violations == []


def test_check_assumptions_completeness() -> None:
    """An entity missing p2 is one completeness violation."""
    g = star_graph({"a": {"p1": 1, "p2": 2}, "b": {"p1": 1}})
    report = check_assumptions(g, C, [ex("p1"), ex("p2")])
    assert [(v.kind, v.entity, v.property) for v in report.violations] == [("completeness", ex("b"), ex("p2"))]
    assert not report.holds


def test_check_assumptions_functionality() -> None:
    """An entity with two p1 objects is one functionality violation."""
    g = star_graph({"a": {"p1": [1, 2], "p2": 2}})
    report = check_assumptions(g, C, [ex("p1"), ex("p2")])
    assert len(report.functionality) == 1
    assert report.functionality[0].count == 2
    assert report.completeness == []


def test_pruning_rule_on_example(example: RDFGraph) -> None:
    """The pruning rule holds on a chain where its premise fires."""
    assert star_edge_count(example, C, S, [P1, P2]) > star_edge_count(example, C, S, [P1, P2, P3])
    assert pruning_rule_holds(example, C, S, [P1, P2, P3], [P1, P2], [P1])


def test_pruning_rule_vacuous(example: RDFGraph) -> None:
    """A false premise makes the implication true."""
    assert star_edge_count(example, C, S, [P1, P2]) <= star_edge_count(example, C, S, [P1, P2, P4])
    assert pruning_rule_holds(example, C, S, [P1, P2, P4], [P1, P2], [P1])


def test_pruning_rule_counterexample() -> None:
    """The pruning rule fails on unrestricted data: star edges 46, 47 and 32 along the chain."""
    rows = {f"m{i}": {"a": 0, "b": min(i, 8), "c": 0, "d": 0} for i in range(10)}
    g = star_graph(rows)
    s = tuple(ex(p) for p in "abcd")
    sp, sp1, sp2 = (ex("a"), ex("b"), ex("c")), (ex("a"), ex("b")), (ex("a"),)
    assert [star_edge_count(g, C, s, x) for x in (sp, sp1, sp2)] == [46, 47, 32]
    assert pruning_rule_holds(g, C, s, sp, sp1, sp2) is False


def test_pruning_rule_chain_validation(example: RDFGraph) -> None:
    """Sets that are not strictly nested are rejected."""
    with pytest.raises(SubsetChainError):
        pruning_rule_holds(example, C, S, [P1, P2], [P1, P2], [P1])
    with pytest.raises(SubsetChainError):
        pruning_rule_holds(example, C, S, [P1, P2, P3], [P1, P4], [P1])
    with pytest.raises(SubsetChainError):
        pruning_rule_holds(example, C, S, [P1, P2, P3], [P1, P2], [])


def test_pruning_rule_random_chains() -> None:
    """10,000 chains on graphs with few distinct tuples never violate the pruning rule."""
    rng = random.Random(24)
    violations = 0
    checked = 0
    while checked < 10_000:
        num_props = rng.randrange(3, 7)
        am = rng.randrange(2, 30)
        g, props = random_complete_graph(
            rng,
            num_entities=am,
            num_properties=num_props,
            pool_size=max(1, 2 * am // (num_props + 1)),
            value_cardinality=rng.randrange(2, 5),
        )
        for _ in range(50):
            sp = rng.sample(props, rng.randrange(3, num_props + 1))
            sp1 = rng.sample(sp, rng.randrange(2, len(sp)))
            sp2 = rng.sample(sp1, rng.randrange(1, len(sp1)))
            if not pruning_rule_holds(g, C, props, sp, sp1, sp2):
                violations += 1
            checked += 1
    assert violations == 0


def test_detect_unknown_property_is_skipped(example: RDFGraph) -> None:
    """Detection over a property nobody has skips every entity."""
    result = gfsp(example, C, [P1, ex("zz")])
    assert result.frequent_star_patterns.skipped == example.instances(C)


def test_incomplete_entities_do_not_make_a_subset_look_cheap() -> None:
    """One entity with an extra property must not pull detection onto the property nobody else has."""
    rows = {f"c{i}": {"p1": 1, "p2": 2, "p3": 3} for i in range(1, 5)}
    rows["c5"] = {"p1": 1, "p2": 2, "p3": 3, "p5": 9}
    g = star_graph(rows)
    s = class_properties(g, C)
    assert s == (P1, P2, P3, ex("p5"))
    shared = (P1, P2, P3)
    assert star_edge_count(g, C, s, s) == 1 * 5 + 4 * 4
    for algorithm in Algorithm:
        result = detect(g, C, s, algorithm=algorithm)
        assert result.best_properties == shared
        factorized, _ = factorize(g, C, result.best_properties, table=result.frequent_star_patterns)
        rep = report(g, factorized, C, s, EdgeConvention.WITHOUT_TYPE)
        assert (rep.nle_before, rep.nle_after) == (16, 9)
        assert rep.percent_savings > 0
