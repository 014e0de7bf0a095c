import pytest

from ddwl import Construction, wl_close
from ddwl.srings import SRing, structure_constants

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)


@pytest.fixture(scope="session")
def acceptance_log():
    return record_acceptance


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cons3():
    return Construction(3)


@pytest.fixture(scope="session")
def cons5():
    return Construction(5)


@pytest.fixture(scope="session")
def cons7():
    return Construction(7)


@pytest.fixture(scope="session")
def cons9():
    return Construction(9)


@pytest.fixture(scope="session")
def cons11():
    return Construction(11)


def _closures(cons):
    return {i: wl_close(cons.build_cayley(i)) for i in cons.generators_I()}


@pytest.fixture(scope="session")
def closures3(cons3):
    return _closures(cons3)


@pytest.fixture(scope="session")
def closures5(cons5):
    return _closures(cons5)


@pytest.fixture(scope="session")
def closures7(cons7):
    return _closures(cons7)


@pytest.fixture(scope="session")
def closure9_first(cons9):
    i = cons9.generators_I()[0]
    return i, wl_close(cons9.build_cayley(i))


@pytest.fixture(scope="session")
def ring3(cons3):
    return SRing.from_construction(cons3)


@pytest.fixture(scope="session")
def ring5(cons5):
    return SRing.from_construction(cons5)


@pytest.fixture(scope="session")
def ring7(cons7):
    return SRing.from_construction(cons7)


@pytest.fixture(scope="session")
def ring9(cons9):
    return SRing.from_construction(cons9)


@pytest.fixture(scope="session")
def tensor3(ring3):
    return structure_constants(ring3)


@pytest.fixture(scope="session")
def tensor5(ring5):
    return structure_constants(ring5)


@pytest.fixture(scope="session")
def tensor7(ring7):
    return structure_constants(ring7)


@pytest.fixture(scope="session")
def tensor9(ring9):
    return structure_constants(ring9)
