import pytest
from hypothesis import HealthCheck, settings

from pegembed.embedder import EmbedderConfig
from pegembed.lattice import LatticeParams, build_lattice

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def p16():
    return LatticeParams(16, 12)


@pytest.fixture(scope="session")
def g16(p16):
    return build_lattice(p16)


@pytest.fixture(scope="session")
def cfg16(p16):
    return EmbedderConfig(p16)


@pytest.fixture(scope="session")
def g4():
    return build_lattice(LatticeParams(4, 12))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
