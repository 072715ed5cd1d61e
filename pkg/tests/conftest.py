import pytest

from whilecc.algebra import (builtin_B, builtin_N, builtin_R_N,
                             builtin_interval, get_algebra)
from whilecc.codes import CodeRegistry


@pytest.fixture(scope="session")
def B():
    return builtin_B()


@pytest.fixture(scope="session")
def N():
    return builtin_N()


@pytest.fixture(scope="session")
def RN():
    return builtin_R_N()


@pytest.fixture(scope="session")
def IN():
    return builtin_interval()


@pytest.fixture(scope="session")
def RNs():
    return get_algebra("RN*")


@pytest.fixture(scope="session")
def Ns():
    return get_algebra("N*")


@pytest.fixture()
def registry():
    return CodeRegistry()
