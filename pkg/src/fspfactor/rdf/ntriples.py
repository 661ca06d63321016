"""N-Triples line format on rdflib's parser and serializer, plus atomic file writes."""

import logging
import os
import tempfile
from collections.abc import Iterable
from pathlib import Path
from typing import BinaryIO

from rdflib.exceptions import ParserError
from rdflib.plugins.parsers.ntriples import W3CNTriplesParser, r_literal, unquote
from rdflib.term import Literal, Node, URIRef

from ..errors import InvalidTripleError, NTriplesParseError, OutputWriteError
from .graph import RDFGraph, Triple
from .terms import make_literal

logger = logging.getLogger(__name__)


class _KeepLabels(dict):
    """Blank node context that maps every label to itself instead of a fresh id."""

    def get(self, key, default=None):  # type: ignore[override]
        return key


class _GraphSink:
    def __init__(self, graph: RDFGraph) -> None:
        self.graph = graph

    def triple(self, s: Node, p: Node, o: Node) -> None:
        self.graph.add(Triple(s, p, o))


class _LexicalParser(W3CNTriplesParser):
    """W3C N-Triples parser that keeps literal lexical forms as written."""

    def literal(self) -> Literal | bool:
        if not self.peek('"'):
            return False
        lexical, lang, dtype = self.eat(r_literal).groups()
        if lang and dtype:
            raise ParserError("a literal carries either a datatype or a language tag, not both")
        return make_literal(unquote(lexical), datatype=unquote(dtype) if dtype else None, language=lang or None)


def _lines(source: bytes | BinaryIO) -> Iterable[bytes]:
    if isinstance(source, (bytes, bytearray, memoryview)):
        return bytes(source).split(b"\n")
    return source


def parse_ntriples(
    source: bytes | BinaryIO,
    *,
    type_predicate: URIRef | str | None = None,
) -> RDFGraph:
    """Parse UTF-8 N-Triples into a graph; duplicate lines collapse to one triple.

    Lines are fed to the parser one at a time so errors carry their line number.
    """
    graph = RDFGraph(type_predicate=type_predicate)
    parser = _LexicalParser(sink=_GraphSink(graph), bnode_context=_KeepLabels())
    line_no = 0
    for line_no, raw in enumerate(_lines(source), start=1):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise NTriplesParseError("input is not valid UTF-8", line_no, exc.start + 1) from exc
        if line_no == 1:
            text = text.removeprefix("\ufeff")
        text = text.rstrip("\r\n")
        if text.lstrip(" \t").startswith('"'):
            raise NTriplesParseError("literal in subject position", line_no)
        parser.line = text
        try:
            parser.parseline()
        except ParserError as exc:
            column = len(text) - len(parser.line or "") + 1
            raise NTriplesParseError(f"malformed triple: {exc}", line_no, column) from exc
        except InvalidTripleError as exc:
            raise NTriplesParseError(str(exc), line_no) from exc
    logger.debug("Parsed %d triples from %d lines", len(graph), line_no)
    return graph


def serialize_ntriples(g: RDFGraph) -> bytes:
    """One LF-terminated line per triple, sorted by canonical (subject, predicate, object)."""
    lines = g.graph.serialize(format="nt", encoding="utf-8").split(b"\n")
    return b"".join(line + b"\n" for line in sorted(lines) if line.strip())


def read_graph(path: str | Path, *, type_predicate: URIRef | str | None = None) -> RDFGraph:
    """Load an N-Triples file. OSError propagates to the caller."""
    with open(path, "rb") as fh:
        graph = parse_ntriples(fh, type_predicate=type_predicate)
    logger.info("Loaded %d triples from %s", len(graph), path)
    return graph


def write_atomic(path: str | Path, data: bytes) -> None:
    """Write data to path through a temporary file in the same directory and a rename."""
    target = Path(path)
    tmp_name: str | None = None
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(
            "wb", dir=target.parent, prefix=f".{target.name}.", suffix=".tmp", delete=False
        ) as fh:
            tmp_name = fh.name
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, target)
    except OSError as exc:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise OutputWriteError(f"cannot write {target}: {exc}") from exc


def write_ntriples(g: RDFGraph, path: str | Path) -> None:
    """Serialize g and write it atomically."""
    write_atomic(path, serialize_ntriples(g))
    logger.info("Wrote %d triples to %s", len(g), path)
