import argparse
import json
import logging
import sys
from collections.abc import Sequence
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ValidationError
from rdflib.term import URIRef

from .errors import (
    EmptyInputError,
    FSPError,
    FunctionalityViolationError,
    IncompleteMoleculeError,
    NoCandidateError,
)
from .models import (
    Algorithm,
    ClassStats,
    DetectionRecord,
    EdgeConvention,
    GeneratorSpec,
    HistogramEntry,
    RunConfig,
    StatsRecord,
    TraceRecord,
)
from .rdf.graph import RDFGraph, entities_of_class
from .rdf.ntriples import read_graph, write_ntriples
from .rdf.terms import canonical_properties, term_to_nt
from .services.detection import check_assumptions, detect
from .services.factorization import expand, factorize, report
from .services.generator import distinct_tuple_count, generate
from .services.stats import full_property_set, nle, repetition_histogram
from .services.sweep import evaluate_subsets
from .settings import get_settings

logger = logging.getLogger(__name__)


def setup_logging(level: str | None = None) -> logging.Logger:
    """Configure and return the package logger (stderr, plus a rotating file when configured)."""
    settings = get_settings()
    logger = logging.getLogger("fspfactor")
    logger.setLevel(level or settings.log_level)
    if logger.handlers:
        return logger

    fmt = logging.Formatter("%(asctime)s %(levelname)s %(name)s - %(message)s")

    ch = logging.StreamHandler()
    ch.setFormatter(fmt)
    logger.addHandler(ch)

    if settings.log_file is not None:
        settings.log_file.parent.mkdir(parents=True, exist_ok=True)
        fh = RotatingFileHandler(
            settings.log_file,
            maxBytes=settings.log_max_bytes,
            backupCount=settings.log_backup_count,
        )
        fh.setFormatter(fmt)
        logger.addHandler(fh)

    return logger


def _names(properties: Sequence[Any]) -> list[str]:
    return [str(p) for p in properties]


def _emit(command: str, lines: list[str], record: BaseModel | dict[str, Any]) -> None:
    """Human report on stdout followed by one JSON line."""
    for line in lines:
        print(line)
    payload = record.model_dump(mode="json") if isinstance(record, BaseModel) else record
    print(json.dumps({"command": command, **payload}, sort_keys=False))


def _load(path: Path | None) -> RDFGraph:
    if path is None:
        raise EmptyInputError("--input is required")
    g = read_graph(path)
    if not len(g):
        raise EmptyInputError(f"{path} contains no triples")
    return g


def _require_class(g: RDFGraph, config: RunConfig) -> URIRef:
    if config.class_iri is None:
        raise NoCandidateError("--class is required")
    c = URIRef(config.class_iri)
    if not entities_of_class(g, c):
        raise NoCandidateError(f"class {c} has no instances")
    return c


def _check(g: RDFGraph, c: URIRef, s: Sequence[URIRef], strict: bool) -> None:
    diagnostics = check_assumptions(g, c, s)
    if diagnostics.holds:
        return
    if strict:
        if diagnostics.functionality:
            v = diagnostics.functionality[0]
            raise FunctionalityViolationError(v.entity, v.property, v.count)
        raise IncompleteMoleculeError({v.entity for v in diagnostics.completeness})
    logger.warning(
        "Assumptions do not hold for %s: %d completeness and %d functionality violations",
        c,
        len(diagnostics.completeness),
        len(diagnostics.functionality),
    )


def cmd_detect(config: RunConfig) -> int:
    g = _load(config.input_path)
    c = _require_class(g, config)
    s = full_property_set(g, c, config.properties)
    _check(g, c, s, config.strict_assumptions)
    result = detect(g, c, s, algorithm=config.algorithm)
    objective = result.objective
    lines = [
        f"class: {c}",
        f"algorithm: {result.algorithm}",
        f"properties: {', '.join(_names(s))}",
        f"frequent star pattern properties: {', '.join(_names(result.best_properties))}",
        f"frequent star patterns (AMI): {objective.ami}",
        f"star edges: {objective.star_edges}",
        f"factorized edges: {objective.factorized_edge_count}",
        "trace:",
        *(f"  {{{', '.join(_names(e.properties))}}} {e.value} (AMI {e.ami})" for e in result.trace),
        f"property sets evaluated: {result.ps_iterations}",
        f"elapsed ms: {result.elapsed_ms:.3f}",
    ]
    record = DetectionRecord(
        class_iri=str(c),
        algorithm=result.algorithm,
        properties=_names(s),
        best_properties=_names(result.best_properties),
        ami=objective.ami,
        star_edges=objective.star_edges,
        factorized_edge_count=objective.factorized_edge_count,
        trace=[TraceRecord(properties=_names(e.properties), value=e.value, ami=e.ami) for e in result.trace],
        ps_iterations=result.ps_iterations,
        evaluations=result.evaluations,
        elapsed_ms=result.elapsed_ms,
        skipped=len(result.frequent_star_patterns.skipped),
    )
    _emit("detect", lines, record)
    return 0


def cmd_factorize(config: RunConfig) -> int:
    if config.output_path is None:
        raise EmptyInputError("--output is required")
    g = _load(config.input_path)
    c = _require_class(g, config)
    s = full_property_set(g, c)
    if config.properties:
        sp = canonical_properties(config.properties)
        _check(g, c, sp, config.strict_assumptions)
    else:
        _check(g, c, s, config.strict_assumptions)
        sp = detect(g, c, s, algorithm=config.algorithm).best_properties
    factorized, mapping = factorize(g, c, sp)
    write_ntriples(factorized, config.output_path)
    if config.mapping_path is not None:
        write_ntriples(mapping.to_graph(), config.mapping_path)
    rep = report(g, factorized, c, s, config.convention, sp=sp)
    lines = [
        f"class: {c}",
        f"factorized properties: {', '.join(_names(sp))}",
        f"surrogates: {rep.surrogates}, mapped entities: {rep.mapped_entities}",
        f"NN: {rep.nn_before} -> {rep.nn_after}",
        f"NLE ({rep.convention}): {rep.nle_before} -> {rep.nle_after}",
        f"savings: {rep.percent_savings:+.1f}%",
        f"NN+NLE: {rep.size_before} -> {rep.size_after} ({rep.percent_size_savings:+.1f}%)",
        f"written: {config.output_path}",
    ]
    _emit("factorize", lines, rep)
    return 0


def cmd_expand(config: RunConfig) -> int:
    if config.output_path is None:
        raise EmptyInputError("--output is required")
    g = _load(config.input_path)
    hint = read_graph(config.mapping_path) if config.mapping_path is not None else None
    expanded = expand(g, hint)
    write_ntriples(expanded, config.output_path)
    lines = [f"triples: {len(g)} -> {len(expanded)}", f"written: {config.output_path}"]
    _emit("expand", lines, {"triples_before": len(g), "triples_after": len(expanded)})
    return 0


def cmd_stats(config: RunConfig, top_k: int | None = None) -> int:
    g = _load(config.input_path)
    k = top_k or get_settings().histogram_top_k
    if config.class_iri is not None:
        classes = [_require_class(g, config)]
    else:
        classes = [c for c in g.classes() if isinstance(c, URIRef)]
    lines: list[str] = []
    per_class: list[ClassStats] = []
    for c in classes:
        s = full_property_set(g, c, config.properties)
        am = len(entities_of_class(g, c))
        histograms: dict[str, list[HistogramEntry]] = {}
        lines.append(f"class: {c}  AM={am}")
        for p in s:
            top = list(repetition_histogram(g, c, p).items())[:k]
            histograms[str(p)] = [HistogramEntry(object=term_to_nt(o), percent=pct) for o, pct in top]
            shown = ", ".join(f"{term_to_nt(o)} {pct:.1f}%" for o, pct in top)
            lines.append(f"  {p}: {shown}")
        counts = {str(conv): nle(g, c, s, conv) for conv in EdgeConvention}
        lines.append("  NLE: " + ", ".join(f"{conv} {n}" for conv, n in counts.items()))
        per_class.append(
            ClassStats(class_iri=str(c), am=am, properties=_names(s), histograms=histograms, nle=counts)
        )
    _emit("stats", lines, StatsRecord(classes=per_class))
    return 0


def cmd_sweep(config: RunConfig) -> int:
    g = _load(config.input_path)
    c = _require_class(g, config)
    s = full_property_set(g, c, config.properties)
    rows = evaluate_subsets(g, c, s, convention=config.convention)
    lines = [f"class: {c}  convention: {config.convention}"]
    lines += [
        f"  {{{', '.join(r.properties)}}} AMI={r.ami} edges={r.star_edges} "
        f"NLE {r.nle_before}->{r.nle_after} savings {r.percent_savings:+.1f}%"
        for r in rows
    ]
    _emit("sweep", lines, {"class_iri": str(c), "rows": [r.model_dump(mode="json") for r in rows]})
    return 0


def cmd_generate(spec: GeneratorSpec, seed: int, output: Path) -> int:
    g = generate(spec, seed)
    write_ntriples(g, output)
    k = distinct_tuple_count(spec)
    lines = [
        f"entities: {spec.num_entities}, properties: {spec.num_properties}, distinct tuples: {k}",
        f"triples: {len(g)}",
        f"written: {output}",
    ]
    record = {**spec.model_dump(mode="json"), "seed": seed, "distinct_tuples": k, "triples": len(g)}
    _emit("generate", lines, record)
    return 0


def _property_list(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsp",
        description="Detect frequent star patterns in RDF graphs and factorize them.",
    )
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, output: bool = False, mapping: bool = False) -> None:
        p.add_argument("--input", type=Path, required=True, help="N-Triples input file")
        if output:
            p.add_argument("--output", type=Path, required=True, help="N-Triples output file")
        if mapping:
            p.add_argument("--mapping", type=Path, default=None, help="instanceOf mapping file")

    def selection(p: argparse.ArgumentParser, *, class_required: bool = True) -> None:
        p.add_argument("--class", dest="class_iri", required=class_required, default=None)
        p.add_argument("--properties", type=_property_list, default=None, help="comma-separated IRIs")
        p.add_argument("--algorithm", choices=[a.value for a in Algorithm], default=None)
        p.add_argument("--convention", choices=[c.value for c in EdgeConvention], default=None)
        p.add_argument("--strict", action="store_true", default=None)
        p.add_argument("--seed", type=int, default=0)

    p_detect = sub.add_parser("detect", help="find the frequent star pattern properties of a class")
    common(p_detect)
    selection(p_detect)

    p_fact = sub.add_parser("factorize", help="rewrite frequent star patterns into surrogate molecules")
    common(p_fact, output=True, mapping=True)
    selection(p_fact)

    p_expand = sub.add_parser("expand", help="restore the original graph from a factorized one")
    common(p_expand, output=True, mapping=True)

    p_stats = sub.add_parser("stats", help="per-class multiplicity, repetition histograms and NLE")
    common(p_stats)
    selection(p_stats, class_required=False)
    p_stats.add_argument("--top-k", type=int, default=None)

    p_sweep = sub.add_parser("sweep", help="factorize every property subset and compare savings")
    common(p_sweep)
    selection(p_sweep)

    p_gen = sub.add_parser("generate", help="write a synthetic sensor-style dataset")
    p_gen.add_argument("--output", type=Path, required=True)
    p_gen.add_argument("--num-entities", type=int, required=True)
    p_gen.add_argument("--num-properties", type=int, required=True)
    p_gen.add_argument("--skew", type=float, required=True, help="repetition skew in [0, 1]")
    p_gen.add_argument("--value-cardinality", type=int, default=100)
    p_gen.add_argument("--shared-properties", type=int, default=0)
    p_gen.add_argument("--class", dest="class_iri", default="urn:fsp:gen:Measurement")
    p_gen.add_argument("--seed", type=int, default=0)

    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    values: dict[str, Any] = {
        "input_path": getattr(args, "input", None),
        "output_path": getattr(args, "output", None),
        "mapping_path": getattr(args, "mapping", None),
        "class_iri": getattr(args, "class_iri", None),
        "properties": getattr(args, "properties", None),
        "seed": getattr(args, "seed", 0),
    }
    for key, attr in (("algorithm", "algorithm"), ("convention", "convention"), ("strict_assumptions", "strict")):
        value = getattr(args, attr, None)
        if value is not None:
            values[key] = value
    return RunConfig(**values)


def run(args: argparse.Namespace) -> int:
    if args.command == "generate":
        spec = GeneratorSpec(
            num_entities=args.num_entities,
            num_properties=args.num_properties,
            repetition_skew=args.skew,
            value_cardinality=args.value_cardinality,
            shared_properties=args.shared_properties,
            class_iri=args.class_iri,
        )
        return cmd_generate(spec, args.seed, args.output)
    config = _run_config(args)
    if args.command == "detect":
        return cmd_detect(config)
    if args.command == "factorize":
        return cmd_factorize(config)
    if args.command == "expand":
        return cmd_expand(config)
    if args.command == "stats":
        return cmd_stats(config, args.top_k)
    return cmd_sweep(config)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        return run(args)
    except ValidationError as e:
        logger.error("Invalid arguments: %s", e)
        return 2
    except FSPError as e:
        logger.error("%s", e)
        return e.exit_code
    except OSError as e:
        logger.error("I/O error: %s", e)
        return 5
    except Exception as e:
        logger.exception("Unexpected error: %s", e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
