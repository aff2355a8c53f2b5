import pytest

from frobdmod.frobmod import FrobModule, ModuleElement


@pytest.fixture
def ex2_2():
    return FrobModule.ex2(2)


@pytest.fixture
def s1_2():
    return ModuleElement.s1(2)


@pytest.fixture
def s2_2():
    return ModuleElement.s2(2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
