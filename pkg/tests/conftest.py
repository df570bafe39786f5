import pytest

from rauzyadic.words import named_oracle


@pytest.fixture(scope="session")
def fib():
    return named_oracle("fibonacci", 60)


@pytest.fixture(scope="session")
def tm():
    return named_oracle("thue-morse", 45)


@pytest.fixture(scope="session")
def trib():
    return named_oracle("tribonacci", 60)
