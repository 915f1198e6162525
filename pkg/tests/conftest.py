import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from polygamy_lab.linalg import DensityOperator, StateVector

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def random_psd(rng, n, rank=None):
    rank = rank or n
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_unitary(rng, n):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def bell():
    a = np.zeros(4)
    a[0] = a[3] = 1 / np.sqrt(2)
    return StateVector(a, (2, 2))


@pytest.fixture
def product00():
    a = np.zeros(4)
    a[0] = 1.0
    return StateVector(a, (2, 2))


@pytest.fixture
def maximally_mixed_2q():
    return DensityOperator(np.eye(4) / 4, (2, 2))
