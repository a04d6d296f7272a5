import numpy as np
import pytest

from parktheory.lattice import chain, diamond


@pytest.fixture(scope="session")
def B():
    return chain(2, "B")


@pytest.fixture(scope="session")
def C3():
    return chain(3, "C3")


@pytest.fixture(scope="session")
def M():
    return diamond("M")


@pytest.fixture(scope="session")
def lattices(B, C3, M):
    return [B, C3, M]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if not module or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, (_, line) in sorted(module.RESULTS.items()):
        terminalreporter.write_line(line)
