import pytest

from carentropy import build_context


@pytest.fixture(scope="session")
def ctx1():
    return build_context(1)


@pytest.fixture(scope="session")
def ctx2():
    return build_context(2)


@pytest.fixture(scope="session")
def ctx3():
    return build_context(3)


@pytest.fixture(scope="session")
def ctx4():
    return build_context(4)


@pytest.fixture(scope="session")
def ctx5():
    return build_context(5)
