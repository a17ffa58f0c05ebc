import pytest
from hypothesis import settings

from risscatter.array_model import ArrayGeometry, CoupledArray
from risscatter.grid import AngularGrid

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


@pytest.fixture(scope="session")
def coupled4():
    return CoupledArray.from_geometry(ArrayGeometry(4, 0.5))


@pytest.fixture(scope="session")
def coupled8():
    return CoupledArray.from_geometry(ArrayGeometry(8, 0.5))


@pytest.fixture(scope="session")
def grid():
    return AngularGrid.gauss_legendre()


def pytest_terminal_summary(terminalreporter):
    from risscatter.acceptance import evaluated

    results = evaluated()
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for r in results:
        terminalreporter.write_line(r.line())
