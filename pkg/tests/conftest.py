import pytest

from qthresh import AccuracySpec, capacity_cost


@pytest.fixture(scope="session")
def spec128() -> AccuracySpec:
    """The headline working point: eps=0.1, log2(R_f) = n = 128."""
    return AccuracySpec(0.1, 128.0, 128)


@pytest.fixture(scope="session")
def c128(spec128) -> float:
    return capacity_cost(spec128)
