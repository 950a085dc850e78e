import pytest

from ellbethe import ChainConfig, ModularParams
from ellbethe.suites import GENERIC_C, GENERIC_KAPPA, GENERIC_LAMBDA, GENERIC_TAU, GENERIC_Z

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def params():
    return ModularParams(GENERIC_TAU, 2, 7)


@pytest.fixture(scope="session")
def quarter():
    return ModularParams(GENERIC_TAU, 1, 4)


def make_chain(twice_spins, eta=(2, 7), **kw):
    base = dict(lambda_ring=GENERIC_LAMBDA, kappa=GENERIC_KAPPA, c=GENERIC_C)
    base.update(kw)
    return ChainConfig(tuple(twice_spins), GENERIC_Z[: len(twice_spins)], ModularParams(GENERIC_TAU, *eta), **base)


@pytest.fixture(name="make_chain", scope="session")
def make_chain_fixture():
    return make_chain


@pytest.fixture(scope="session")
def chain2():
    return make_chain((1, 1))


@pytest.fixture(scope="session")
def chain3():
    return make_chain((2, 1, 1))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
