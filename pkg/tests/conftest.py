import numpy as np
import pytest

from indefbc.domain import build_domain


@pytest.fixture(scope="session")
def interval():
    return build_domain("interval", 2)


@pytest.fixture(scope="session")
def disk16():
    return build_domain("unit-disk", 16)


@pytest.fixture(scope="session")
def disk32():
    return build_domain("unit-disk", 32)


def random_interval_weight(rng):
    """Sign-changing (g0, g1) with negative sum, in random endpoint order."""
    pos = rng.uniform(0.2, 3.0)
    neg = -rng.uniform(pos + 0.2, pos + 4.0)
    return np.array([pos, neg]) if rng.uniform() < 0.5 else np.array([neg, pos])


def sign_changing_disk_weight(domain, shift=-0.3):
    return np.cos(domain.nodes) + shift
