from pathlib import Path

import pytest

from lexiforge import compile_base, parse_source, parse_wf_rules

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def spanish_base():
    result = parse_source(str(FIXTURES / "spanish.lex"))
    assert result.ok, [d.render() for d in result.diagnostics]
    return result.base


@pytest.fixture(scope="session")
def spanish_dict(spanish_base):
    compiled = compile_base(spanish_base)
    assert compiled.ok, [d.render() for d in compiled.diagnostics]
    assert compiled.dictionary is not None
    return compiled.dictionary


@pytest.fixture(scope="session")
def wf_rules():
    text = (FIXTURES / "wf.rules").read_text(encoding="utf-8")
    return parse_wf_rules(text, str(FIXTURES / "wf.rules"))
