import pytest

from lpmkit.fixtures import reference_lpms, running_example

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def db():
    return running_example()


@pytest.fixture(scope="session")
def lpms(db):
    """Evaluated LPMs a, b, c of the running example."""
    return reference_lpms(db)


@pytest.fixture(scope="session")
def nets(lpms):
    return [l.net for l in lpms]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (len(k), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
