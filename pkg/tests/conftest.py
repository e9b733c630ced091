import pytest

from edgesampling.dist import Rayleigh
from edgesampling.schedule import GOOGLE_GLASS, PenaltyWeights

# beta/alpha of the wearable-assistant profile, rounded as usually quoted
GLASS_RATIO = 21.7


@pytest.fixture
def unit_mean():
    return Rayleigh.from_mean(1.0)


@pytest.fixture
def glass_dist():
    return Rayleigh.from_mean(4.846)


@pytest.fixture
def ratio21():
    return PenaltyWeights.from_ratio(21.0)


@pytest.fixture
def ratio217():
    return PenaltyWeights.from_ratio(GLASS_RATIO)


@pytest.fixture
def glass():
    return GOOGLE_GLASS

