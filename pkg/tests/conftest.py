import pytest

from cadlagity.corpus import CorpusSpec, generate_corpus
from cadlagity.paths import constant_path, make_step_path

# criterion number -> (passed, detail); filled by test_acceptance.py
CRITERIA: dict[int, tuple[bool, str]] = {}


def record(number: int, passed: bool, detail: str) -> None:
    CRITERIA[number] = (bool(passed), detail)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="run tests marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        passed, detail = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def f1():
    return make_step_path(1, [0.5], [0.0, 1.0])


@pytest.fixture
def f2():
    return make_step_path(1, [1 / 3, 2 / 3], [0.0, 1.0, 0.0])


@pytest.fixture
def const():
    return constant_path(2.5)


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus(CorpusSpec(count=1000, seed=0))


@pytest.fixture(scope="session")
def small_corpus():
    return generate_corpus(CorpusSpec(count=60, seed=7, law="rademacher"))
