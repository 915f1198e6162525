import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeds
from polygamy_lab.errors import ArgumentError
from polygamy_lab.linalg import reduced_state
from polygamy_lab.measures import concurrence_pure
from polygamy_lab.states import (
    GenSchmidtParams,
    gen_schmidt_3q,
    ghz_state,
    product_state,
    random_mixed,
    w_state,
)

angles = st.floats(min_value=0.0, max_value=np.pi / 2)


def test_gen_schmidt_layout():
    s6 = 6**-0.5
    psi = gen_schmidt_3q(GenSchmidtParams((0.5, 0.5, s6, s6, s6), phi=np.pi / 2))
    a = psi.amplitudes
    assert a[0] == pytest.approx(0.5)
    assert a[4] == pytest.approx(0.5j)
    assert np.allclose(a[[5, 6, 7]], s6)
    assert np.allclose(a[[1, 2, 3]], 0)


def test_gen_schmidt_validation():
    with pytest.raises(ArgumentError):
        GenSchmidtParams((1, 0, 0, 0))
    with pytest.raises(ArgumentError):
        GenSchmidtParams((-1, 0, 0, 0, 0))
    with pytest.raises(ArgumentError):
        GenSchmidtParams((1, 1, 0, 0, 0))
    with pytest.raises(ArgumentError):
        GenSchmidtParams.from_angles(2.0, 0, 0, 0)


@given(angles, angles, angles, angles)
def test_from_angles_normalized(t0, t1, t2, t3):
    p = GenSchmidtParams.from_angles(t0, t1, t2, t3)
    assert abs(sum(x * x for x in p.lambdas) - 1) < 1e-12
    assert p.lambdas[0] == pytest.approx(np.cos(t0), abs=1e-12)


def test_w_and_ghz():
    w = w_state(3)
    assert np.allclose(np.nonzero(w.amplitudes)[0], [1, 2, 4])
    assert concurrence_pure(w) == pytest.approx(2 * np.sqrt(2) / 3)
    g = ghz_state(4)
    assert np.nonzero(g.amplitudes)[0].tolist() == [0, 15]
    assert np.allclose(reduced_state(g, [0]).matrix, np.eye(2) / 2)
    for bad in (1, 2.5):
        with pytest.raises(ArgumentError):
            w_state(bad)


def test_product_state():
    psi = product_state((2, 3))
    assert psi.amplitudes[0] == 1 and concurrence_pure(psi) == 0


@given(seeds, st.integers(min_value=1, max_value=4))
def test_random_mixed_rank(seed, rank):
    rho = random_mixed((2, 2), rank, seed)
    w = np.linalg.eigvalsh(rho.matrix)
    assert np.sum(w > 1e-10) == rank
    assert abs(np.trace(rho.matrix) - 1) < 1e-12


def test_random_mixed_deterministic_and_checked():
    assert np.array_equal(random_mixed((2, 3), 2, 5).matrix, random_mixed((2, 3), 2, 5).matrix)
    with pytest.raises(ArgumentError):
        random_mixed((2, 2), 5, 0)
