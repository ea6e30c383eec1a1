import numpy as np
import pytest
from loguru import logger

from eigenbounds.data.models import HydrogenicOrbital, NuclearGeometry


@pytest.fixture(autouse=True)
def quiet_logging():
    """Keep loguru output to warnings and above during tests"""
    logger.remove()
    logger.add(lambda message: None, level="WARNING")
    yield
    # the CLI replaces handlers through setup_logging
    logger.remove()


@pytest.fixture
def h2_geometry():
    return NuclearGeometry.h2_plus(1.0)


@pytest.fixture
def h3_geometry():
    return NuclearGeometry.h3_equilateral(1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_rotation(rng) -> np.ndarray:
    """Proper rotation from the QR factorization of a Gaussian matrix"""
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def orbital(center, j, l=0, m=0, n=2, Z=1, axes=None) -> HydrogenicOrbital:
    return HydrogenicOrbital(center, j, l, m, Z=Z, n_scale=n, axes=axes)
