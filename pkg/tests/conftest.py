import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from begriff.kernel.script import read_header, run_script  # noqa: E402

CORPUS = Path(__file__).resolve().parents[1] / "src" / "begriff" / "corpus"
SCRIPTS = sorted(p.name for p in CORPUS.glob("*.cs") if read_header(p.read_text(encoding="utf-8")).kind == "script")


@functools.lru_cache(maxsize=None)
def replay(name: str, mode: str = "classical"):
    return run_script(str(CORPUS / name), mode)


@pytest.fixture
def corpus_dir():
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "_results", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
