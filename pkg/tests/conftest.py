import pytest
from hypothesis import settings

from eqposets import catalog
from eqposets.corep import MatrixCorep, spaces_of
from eqposets.fields import gf2_tower, gf3_tower, qsqrt2_tower

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def gf2():
    return gf2_tower()


@pytest.fixture(scope="session")
def qs2():
    return qsqrt2_tower()


@pytest.fixture(scope="session")
def gf3():
    return gf3_tower()


def mc(pname, widths, rows, tower):
    """Matrix corep from a catalog poset name, stripe widths and rows of entry strings."""
    return MatrixCorep.from_rows(catalog.catalog_poset(pname), tower, widths, rows)


def sp(pname, widths, rows, tower):
    return spaces_of(mc(pname, widths, rows, tower))


ACCEPTANCE: dict = {}


def record(n: int, ok: bool, detail: str, seconds: float):
    ACCEPTANCE[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail}; {seconds:.2f} s)"
    print("\n" + ACCEPTANCE[n])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
