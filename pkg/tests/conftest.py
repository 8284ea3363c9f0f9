import math

import pytest

from tdho import Scenario


@pytest.fixture
def static_unit():
    return Scenario.static(m0=1.0, omega0=1.0)


@pytest.fixture
def pulsating_unit():
    return Scenario.pulsating_mass(m0=1.0, omega0=1.0, nu=1.0)


@pytest.fixture
def inverse_square_unit():
    return Scenario.inverse_square_frequency(m0=1.0, omega0=1.0)


LN_E_OVER_2 = 1.0 - math.log(2.0)
