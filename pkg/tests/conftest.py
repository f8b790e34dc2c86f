import pytest

from ruelle.maps import Annulus, BlaschkeProduct, TrigLift


@pytest.fixture(scope="session")
def bstar():
    # z (2z - 1)/(2 - z): zeros {0, 1/2}, interior multiplier -1/2
    return BlaschkeProduct(1.0, (0.0, 0.5))


@pytest.fixture(scope="session")
def anti_bstar():
    return BlaschkeProduct(1.0, (0.0, 0.5), anti=True)


@pytest.fixture(scope="session")
def squaring():
    return TrigLift(2)


@pytest.fixture(scope="session")
def annulus():
    return Annulus(0.8, 1.25)
