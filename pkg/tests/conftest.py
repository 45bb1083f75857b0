import pytest

from glsalgebra import make_gaussian, make_indicator


@pytest.fixture(scope="session")
def z1():
    return make_gaussian(1.0)


@pytest.fixture(scope="session")
def box():
    """Indicator of [0, 1)."""
    return make_indicator(0.0, 1.0)
