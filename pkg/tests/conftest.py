import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from torvdw import axial_greens, toroid_from_radii

settings.register_profile(
    "package",
    deadline=None,
    max_examples=40,
    derandomize=True,  # reproducible runs; flip off locally to explore
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("package")


@pytest.fixture(scope="session")
def geom53():
    return toroid_from_radii(5.0, 3.0)


@pytest.fixture(scope="session")
def geom51():
    return toroid_from_radii(5.0, 1.0)


@pytest.fixture(scope="session")
def greens53(geom53):
    return axial_greens(geom53)


@pytest.fixture(scope="session")
def greens51(geom51):
    return axial_greens(geom51)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
