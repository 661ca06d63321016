import logging
import os
import sys
from pathlib import Path

import pytest

_root = Path(__file__).resolve().parents[1]
_src = _root / "src"
if _src.exists() and str(_src) not in sys.path:
    sys.path.insert(0, str(_src))

from fspfactor.rdf import RDFGraph, parse_ntriples  # noqa: E402
from fspfactor.settings import reset_settings  # noqa: E402

from .helpers import EXAMPLE_NT  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch: pytest.MonkeyPatch):
    """Settings re-read from a clean FSP_ environment for every test."""
    for key in [k for k in os.environ if k.startswith("FSP_")]:
        monkeypatch.delenv(key, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(autouse=True)
def package_logger():
    """The fspfactor logger, stripped of handlers added during the test."""
    logger = logging.getLogger("fspfactor")
    saved, level = list(logger.handlers), logger.level
    yield logger
    for handler in logger.handlers:
        if handler not in saved:
            handler.close()
    logger.handlers[:] = saved
    logger.setLevel(level)


@pytest.fixture
def example() -> RDFGraph:
    """Four entities of class C: p1..p3 shared, p4 split 2/1/1."""
    return parse_ntriples(EXAMPLE_NT.encode("utf-8"))


@pytest.fixture
def example_file(tmp_path: Path) -> Path:
    """The four-entity example written to an N-Triples file."""
    path = tmp_path / "example.nt"
    path.write_text(EXAMPLE_NT, encoding="utf-8")
    return path

