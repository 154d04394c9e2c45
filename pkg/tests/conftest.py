from pathlib import Path

import pytest

from bloomclf.datagen import generate
from bloomclf.dataset import save_corpus

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"
REFERENCE_CSV = FIXTURES / "reference_distribution.csv"


@pytest.fixture(scope="session")
def generated_corpus():
    return generate(100, seed=2024)


@pytest.fixture(scope="session")
def generated_csv(tmp_path_factory, generated_corpus):
    path = tmp_path_factory.mktemp("corpus") / "generated.csv"
    save_corpus(generated_corpus, path)
    return path


_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid] = report.outcome
    elif "test_acceptance.py::" in report.nodeid and report.failed:
        _acceptance[report.nodeid] = "failed"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _acceptance.items():
        name = nodeid.split("::", 1)[1]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
