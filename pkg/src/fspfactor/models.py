from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator
from rdflib.term import URIRef

from .rdf.graph import RDFGraph
from .rdf.terms import ObjectTuple, Term, is_writable_iri
from .settings import get_settings

PropertySet = tuple[URIRef, ...]


class EdgeConvention(StrEnum):
    """Whether rdf:type edges count as labeled edges in NLE."""

    WITH_TYPE = "with-type"
    WITHOUT_TYPE = "without-type"


class Algorithm(StrEnum):
    EFSP = "efsp"
    GFSP = "gfsp"


@dataclass(frozen=True)
class StarPatternTable:
    """Entities of one class grouped by their object tuple over a property set.

    ``groups`` partition the matched entities; entities lacking an object for
    some property are listed in ``skipped`` instead.
    """

    class_iri: Term
    properties: PropertySet
    groups: Mapping[ObjectTuple, frozenset[Term]]
    skipped: frozenset[Term] = frozenset()

    @property
    def matched(self) -> frozenset[Term]:
        return frozenset(e for members in self.groups.values() for e in members)

    @property
    def num_groups(self) -> int:
        return len(self.groups)

    def __len__(self) -> int:
        return sum(len(members) for members in self.groups.values())


@dataclass(frozen=True)
class Objective:
    """Edge-count objectives of one property subset."""

    property_set: PropertySet
    ami: int
    star_edges: int
    factorized_edge_count: int


@dataclass(frozen=True)
class TraceEntry:
    properties: PropertySet
    value: int
    ami: int


@dataclass(frozen=True)
class DetectionResult:
    best_properties: PropertySet
    frequent_star_patterns: StarPatternTable
    objective: Objective
    trace: tuple[TraceEntry, ...]
    algorithm: Algorithm
    ps_iterations: int = 0
    evaluations: int = 0
    elapsed_ms: float = 0.0


@dataclass
class PatternSpace:
    """Star pattern tables keyed by canonical property subset."""

    class_iri: Term
    properties: PropertySet
    tables: dict[PropertySet, StarPatternTable] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.tables)

    def __iter__(self) -> Iterator[PropertySet]:
        return iter(self.tables)

    def __getitem__(self, subset: PropertySet) -> StarPatternTable:
        return self.tables[subset]


@dataclass(frozen=True)
class Violation:
    kind: Literal["completeness", "functionality"]
    entity: Term
    property: URIRef
    count: int


@dataclass
class AssumptionReport:
    """Completeness and functionality diagnostics for one class."""

    class_iri: Term
    properties: PropertySet
    violations: list[Violation] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations

    @property
    def completeness(self) -> list[Violation]:
        return [v for v in self.violations if v.kind == "completeness"]

    @property
    def functionality(self) -> list[Violation]:
        return [v for v in self.violations if v.kind == "functionality"]


@dataclass
class EntityMapping:
    """Partial map from original entities to their surrogate entities."""

    class_iri: Term | None
    properties: PropertySet
    pairs: dict[Term, URIRef] = field(default_factory=dict)
    surrogates: dict[URIRef, ObjectTuple] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.pairs)

    def to_graph(self, instance_of: URIRef | str | None = None) -> RDFGraph:
        """The mapping as instanceOf triples, the on-disk mapping format."""
        predicate = URIRef(instance_of or get_settings().instance_of_predicate)
        return RDFGraph((entity, predicate, sg) for entity, sg in self.pairs.items())


class FactorizationReport(BaseModel):
    """NN / NLE before and after factorization and the signed savings."""

    class_iri: str
    properties: list[str]
    factorized_properties: list[str]
    convention: EdgeConvention
    nn_before: int
    nn_after: int
    nle_before: int
    nle_after: int
    nle_before_by_convention: dict[str, int]
    nle_after_by_convention: dict[str, int]
    percent_savings: float
    size_before: int
    size_after: int
    percent_size_savings: float
    surrogates: int = 0
    mapped_entities: int = 0


class RunConfig(BaseModel):
    """Validated options of one CLI run."""

    input_path: Path | None = None
    output_path: Path | None = None
    mapping_path: Path | None = None
    class_iri: str | None = None
    properties: list[str] | None = None
    algorithm: Algorithm = Field(default_factory=lambda: Algorithm(get_settings().default_algorithm))
    convention: EdgeConvention = Field(
        default_factory=lambda: EdgeConvention(get_settings().default_convention)
    )
    strict_assumptions: bool = Field(default_factory=lambda: get_settings().strict_assumptions)
    seed: int = 0

    @field_validator("class_iri")
    @classmethod
    def _absolute_class(cls, value: str | None) -> str | None:
        if value is not None and not is_writable_iri(value):
            raise ValueError(f"class must be an absolute IRI, got {value!r}")
        return value

    @field_validator("properties")
    @classmethod
    def _absolute_properties(cls, value: list[str] | None) -> list[str] | None:
        if value is None:
            return None
        if not value:
            raise ValueError("properties must not be empty")
        bad = [p for p in value if not is_writable_iri(p)]
        if bad:
            raise ValueError(f"properties must be absolute IRIs, got {bad}")
        return value

    @model_validator(mode="after")
    def _efsp_cap(self) -> "RunConfig":
        cap = get_settings().efsp_max_properties
        if self.algorithm == Algorithm.EFSP and self.properties and len(set(self.properties)) > cap:
            raise ValueError(f"efsp accepts at most {cap} properties, got {len(set(self.properties))}")
        return self


class GeneratorSpec(BaseModel):
    """Shape of a synthetic sensor-style dataset."""

    num_entities: int = Field(ge=1)
    num_properties: int = Field(ge=1)
    repetition_skew: float = Field(ge=0.0, le=1.0)
    value_cardinality: int = Field(default=100, ge=1)
    shared_properties: int = Field(default=0, ge=0)
    class_iri: str = "urn:fsp:gen:Measurement"

    @model_validator(mode="after")
    def _shared_within_properties(self) -> "GeneratorSpec":
        if self.shared_properties > self.num_properties:
            raise ValueError("shared_properties cannot exceed num_properties")
        if not is_writable_iri(self.class_iri):
            raise ValueError(f"class must be an absolute IRI, got {self.class_iri!r}")
        return self


class TraceRecord(BaseModel):
    properties: list[str]
    value: int
    ami: int


class DetectionRecord(BaseModel):
    class_iri: str
    algorithm: Algorithm
    properties: list[str]
    best_properties: list[str]
    ami: int
    star_edges: int
    factorized_edge_count: int
    trace: list[TraceRecord]
    ps_iterations: int
    evaluations: int
    elapsed_ms: float
    skipped: int = 0


class HistogramEntry(BaseModel):
    object: str
    percent: float


class ClassStats(BaseModel):
    class_iri: str
    am: int
    properties: list[str]
    histograms: dict[str, list[HistogramEntry]]
    nle: dict[str, int]


class StatsRecord(BaseModel):
    classes: list[ClassStats]


class SweepRow(BaseModel):
    properties: list[str]
    ami: int
    star_edges: int
    factorized_edge_count: int
    nle_before: int
    nle_after: int
    percent_savings: float
    nn_before: int
    nn_after: int
