import pytest

from jaqalc.gateset import builtin_gateset


@pytest.fixture(scope="session")
def gates():
    return builtin_gateset()
