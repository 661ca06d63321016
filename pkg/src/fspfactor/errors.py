"""Exception hierarchy shared by the library and the CLI.

Every error carries the process exit code the ``fsp`` command reports for it.
"""

from collections.abc import Iterable
from typing import Any


class FSPError(Exception):
    """Base class for all fspfactor errors."""

    exit_code: int = 1


class NTriplesParseError(FSPError, ValueError):
    """Malformed N-Triples input."""

    exit_code = 2

    def __init__(self, message: str, line: int, column: int | None = None) -> None:
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")


class InvalidTripleError(FSPError, ValueError):
    """A triple violating the RDF term-position rules."""

    exit_code = 2


class AssumptionViolationError(FSPError):
    """Completeness or functionality assumption does not hold."""

    exit_code = 3


class FunctionalityViolationError(AssumptionViolationError):
    """An entity has more than one object for a property."""

    def __init__(self, subject: Any, predicate: Any, count: int) -> None:
        self.subject = subject
        self.predicate = predicate
        self.count = count
        super().__init__(
            f"{subject} has {count} objects for functional property {predicate}"
        )


class IncompleteMoleculeError(AssumptionViolationError):
    """Entities lack an object for at least one considered property."""

    def __init__(self, entities: Iterable[Any]) -> None:
        self.entities = sorted(str(e) for e in entities)
        preview = ", ".join(self.entities[:5])
        more = "" if len(self.entities) <= 5 else f" (+{len(self.entities) - 5} more)"
        super().__init__(f"incomplete RDF molecules: {preview}{more}")


class UndefinedInverseError(FSPError, ZeroDivisionError):
    """Multiplicity inverse of a tuple nobody matches."""


class NoCandidateError(FSPError):
    """Detection has no property subset to evaluate."""

    exit_code = 4


class PatternSpaceTooLargeError(FSPError, ValueError):
    """Exhaustive enumeration refused because of the property cap."""

    exit_code = 2

    def __init__(self, num_properties: int, cap: int) -> None:
        self.num_properties = num_properties
        self.cap = cap
        self.subset_count = 2**num_properties - num_properties - 1
        super().__init__(
            f"{num_properties} properties exceed the exhaustive cap of {cap}; "
            f"enumeration would build {self.subset_count} star pattern tables"
        )


class SubsetChainError(FSPError, ValueError):
    """Property sets do not form a strictly nested chain."""

    exit_code = 2


class IntegrityError(FSPError):
    """A factorized graph cannot be expanded consistently."""

    exit_code = 6


class InstanceOfFunctionalityError(IntegrityError):
    """An entity points at more than one surrogate."""


class DanglingSurrogateError(IntegrityError):
    """An instanceOf edge targets a surrogate without triples."""


class SurrogateCollisionError(IntegrityError):
    """Two distinct object tuples minted the same surrogate IRI."""


class UndefinedSavingsError(FSPError, ZeroDivisionError):
    """Savings requested for a graph with no labeled edges for the class."""


class OutputWriteError(FSPError):
    """An output file could not be written."""

    exit_code = 5


class GeneratorSpecError(FSPError, ValueError):
    """The synthetic dataset parameters are unsatisfiable."""

    exit_code = 2


class EmptyInputError(FSPError, ValueError):
    """The input document holds no triples."""

    exit_code = 2
