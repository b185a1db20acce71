from datetime import datetime, timezone

import pytest

from x402guard.corpus import GeneratorConfig, generate
from x402guard.pii import PiiEngine


@pytest.fixture(scope="session")
def default_corpus():
    samples, meta = generate(GeneratorConfig())
    return samples, meta


@pytest.fixture(scope="session")
def engine():
    return PiiEngine()


@pytest.fixture
def t0():
    return datetime(2026, 3, 1, 12, 0, tzinfo=timezone.utc)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
