import pytest

import lbharm as lb


@pytest.fixture(scope="session")
def ctx0():
    return lb.make_context(0.0)


@pytest.fixture(scope="session")
def ctx05():
    return lb.make_context(0.5)


@pytest.fixture(scope="session")
def ctx1():
    return lb.make_context(1.0)


@pytest.fixture(scope="session")
def plan0(ctx0):
    return lb.default_plan(ctx0)


@pytest.fixture(scope="session")
def plan05(ctx05):
    return lb.default_plan(ctx05)


@pytest.fixture(scope="session")
def plan1(ctx1):
    return lb.default_plan(ctx1)


@pytest.fixture(scope="session")
def graded0(ctx0):
    return lb.build_graded_space_grid(ctx0)
