import numpy as np
import pytest

from conftest import random_psd
from polygamy_lab import _backend, _search_py
from polygamy_lab.errors import ArgumentError
from polygamy_lab.linalg import DensityOperator, StateVector, haar_random_pure, reduced_state
from polygamy_lab.measures import Bipartition, concurrence_pure, negativity_pure, wootters_concurrence_2q
from polygamy_lab.roof import (
    PureFunctional,
    RoofConfig,
    _restart_inputs,
    _spectral_basis,
    ensemble_from_isometry,
    roof_measure,
    roof_optimize,
    scren,
)
from polygamy_lab.states import random_mixed, w_state

needs_cython = pytest.mark.skipif("cython" not in _backend.KERNELS, reason="extension not built")
FAST = RoofConfig(restarts=8, max_iters=300)


def test_config_validation():
    with pytest.raises(ArgumentError):
        RoofConfig(direction="up")
    with pytest.raises(ArgumentError):
        RoofConfig(restarts=0)
    with pytest.raises(ArgumentError):
        RoofConfig(ensemble_size=1).size_for(2)
    with pytest.raises(ArgumentError):
        RoofConfig(ensemble_size=5).size_for(2)
    assert RoofConfig().size_for(2) == 4
    assert RoofConfig().size_for(1) == 1
    assert RoofConfig().size_for(4) == 6


def test_isometry_identity_gives_spectral_decomposition():
    rho = DensityOperator(np.diag([0.7, 0.3, 0, 0]), (2, 2))
    ens = ensemble_from_isometry(rho, np.eye(2))
    assert np.allclose(ens.probabilities, [0.7, 0.3])
    assert abs(ens.members[0][1].amplitudes[0]) == pytest.approx(1.0)


def test_isometry_rank_one():
    psi = haar_random_pure((2, 2), 3)
    ens = ensemble_from_isometry(psi.projector(), np.array([[1j]]))
    assert len(ens) == 1
    assert abs(np.vdot(ens.members[0][1].amplitudes, psi.amplitudes)) == pytest.approx(1.0)


def test_isometry_hadamard_on_maximally_mixed_qubit():
    rho = DensityOperator(np.eye(2) / 2, (2,))
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    ens = ensemble_from_isometry(rho, h)
    assert np.allclose(ens.probabilities, [0.5, 0.5])
    overlaps = sorted(abs(psi.amplitudes @ np.array([1, 1]) / np.sqrt(2)) for _, psi in ens.members)
    assert np.allclose(overlaps, [0, 1], atol=1e-12)


def test_isometry_rejects_non_isometry():
    rho = DensityOperator(np.eye(2) / 2, (2,))
    with pytest.raises(ArgumentError):
        ensemble_from_isometry(rho, np.ones((2, 2)))
    with pytest.raises(ArgumentError):
        ensemble_from_isometry(rho, np.eye(3))


@pytest.mark.parametrize("direction", ["minimize", "maximize"])
def test_pure_input_returns_functional(direction):
    psi = haar_random_pure((2, 3), 8)
    res = roof_optimize(psi.projector(), PureFunctional.concurrence((2, 3)),
                        RoofConfig(direction=direction))
    assert res.value == pytest.approx(concurrence_pure(psi), abs=1e-12)
    assert len(res.ensemble) == 1


def test_max_concurrence_w3_marginal():
    rho = reduced_state(w_state(3), [0, 1])
    res = roof_measure(rho, "concurrence", config=RoofConfig())
    assert res.value == pytest.approx(2 / 3, abs=5e-3)
    assert res.value <= 2 / 3 + 1e-9


def test_min_concurrence_bell_diagonal_separable():
    # equal mixture of two Bell states has Wootters concurrence 0
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    psi = np.array([0, 1, 1, 0]) / np.sqrt(2)
    rho = DensityOperator(0.5 * (np.outer(phi, phi) + np.outer(psi, psi)), (2, 2))
    assert wootters_concurrence_2q(rho) == pytest.approx(0.0, abs=1e-12)
    res = roof_measure(rho, "concurrence", config=RoofConfig(direction="minimize"))
    assert res.value <= 5e-3


def test_scren_examples(bell):
    assert scren(bell.projector()) == pytest.approx(1.0, abs=1e-12)
    sep = DensityOperator(np.diag([0.5, 0, 0, 0.5]), (2, 2))
    assert scren(sep) <= 1e-4
    assert scren(reduced_state(w_state(3), [0, 1])) == pytest.approx(4 / 9, abs=1e-2)


def test_scren_direction_forced():
    rho = reduced_state(w_state(3), [0, 1])
    assert scren(rho, config=RoofConfig(direction="maximize")) == pytest.approx(4 / 9, abs=1e-2)


def test_result_value_matches_ensemble_and_reconstructs():
    rho = random_mixed((2, 3), 3, seed=4)
    f = PureFunctional.entropy((2, 3))
    res = roof_optimize(rho, f, FAST)
    assert abs(res.ensemble.average(f) - res.value) < 1e-10
    assert np.linalg.norm(res.ensemble.reconstruct() - rho.matrix) < 1e-8
    assert abs(res.ensemble.probabilities.sum() - 1) < 1e-10


def test_deterministic_for_fixed_seed(monkeypatch):
    rho = random_mixed((2, 2), 2, seed=6)
    f = PureFunctional.negativity((2, 2))
    a = roof_optimize(rho, f, FAST)
    monkeypatch.setenv("POLYGAMY_LAB_THREADS", "1")
    b = roof_optimize(rho, f, FAST)
    assert a.value == b.value
    assert a.best_restart_seed == b.best_restart_seed


def test_monotone_in_restarts():
    rho = random_mixed((2, 2), 3, seed=12)
    f = PureFunctional.entropy((2, 2))
    values = [roof_optimize(rho, f, RoofConfig(restarts=r, max_iters=150)).value for r in (1, 3, 6)]
    assert values[0] <= values[1] <= values[2]


@pytest.mark.parametrize("kind", ["concurrence", "negativity", "entropy"])
def test_sandwich(kind):
    rho = random_mixed((2, 3), 2, seed=21)
    f = PureFunctional(kind, (2, 3))
    _, basis = _spectral_basis(rho)
    spectral = ensemble_from_isometry(rho, np.eye(basis.shape[0])).average(f)
    lo = roof_optimize(rho, f, RoofConfig(direction="minimize", restarts=6, max_iters=200)).value
    hi = roof_optimize(rho, f, RoofConfig(direction="maximize", restarts=6, max_iters=200)).value
    assert lo <= spectral + 1e-12
    assert spectral <= hi + 1e-12


def test_callable_functional_matches_builtin():
    rho = random_mixed((2, 2), 2, seed=30)
    cfg = RoofConfig(restarts=2, max_iters=60)
    builtin = roof_optimize(rho, PureFunctional.concurrence((2, 2)), cfg, backend="python")
    generic = roof_optimize(rho, lambda psi: concurrence_pure(psi), cfg)
    assert generic.backend == "python"
    assert generic.value == pytest.approx(builtin.value, abs=1e-9)


def test_functional_dims_must_match():
    rho = random_mixed((2, 2), 2, seed=1)
    with pytest.raises(ArgumentError):
        roof_optimize(rho, PureFunctional.concurrence((2, 3)))
    with pytest.raises(ArgumentError):
        PureFunctional("fidelity", (2, 2))


def test_kernel_ensemble_average_python_matches_reference():
    rho = random_mixed((3, 2), 3, seed=2)
    _, basis = _spectral_basis(rho)
    v = _search_py.orthonormalize(np.random.default_rng(0).standard_normal((5, 3)) + 0j)
    ens = ensemble_from_isometry(rho, v)
    for kind, fn in (("concurrence", concurrence_pure), ("negativity", negativity_pure)):
        f = PureFunctional(kind, (3, 2))
        got = _search_py.ensemble_average(basis, v, 3, 2, f.code)
        assert got == pytest.approx(ens.average(lambda psi: fn(StateVector(psi.amplitudes, (3, 2)))), abs=1e-12)


@needs_cython
@pytest.mark.parametrize("kind", ["concurrence", "negativity", "entropy", "antilinear"])
@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
def test_backends_agree_on_average(kind, dims):
    ext = _backend.KERNELS["cython"]
    d = dims[0] * dims[1]
    rho = DensityOperator(random_psd(np.random.default_rng(d), d, rank=3), dims)
    _, basis = _spectral_basis(rho)
    op = None
    if kind == "antilinear":
        a = np.random.default_rng(1).standard_normal((d, d))
        op = (a + a.T).astype(np.complex128)
    f = PureFunctional(kind, dims, op)
    for seed in range(5):
        v = _search_py.orthonormalize(np.random.default_rng(seed).standard_normal((5, 3)) + 0j)
        ref = _search_py.ensemble_average(basis, v, *dims, f.code, f.kernel_operator())
        got = ext.ensemble_average(basis, np.ascontiguousarray(v), *dims, f.code, f.kernel_operator())
        assert got == pytest.approx(ref, abs=1e-12)


@needs_cython
@pytest.mark.parametrize("kind", ["concurrence", "negativity", "entropy"])
def test_backends_walk_same_trajectory(kind):
    rho = random_mixed((2, 2), 2, seed=5)
    _, basis = _spectral_basis(rho)
    f = PureFunctional(kind, (2, 2))
    v0, noise = _restart_inputs(3, 1, 4, 2, 200)
    args = (basis, v0, noise, 2, 2, f.code, None, 1.0, 0.3, 1e-7)
    v_py, f_py, it_py, _ = _search_py.local_search(*args)
    v_cy, f_cy, it_cy, _ = _backend.KERNELS["cython"].local_search(*args)
    assert it_py == it_cy
    assert f_cy == pytest.approx(f_py, abs=1e-9)
    assert np.allclose(v_py, v_cy, atol=1e-8)


@needs_cython
def test_backends_agree_end_to_end():
    rho = reduced_state(w_state(3), [0, 1])
    f = PureFunctional.entropy((2, 2))
    cy = roof_optimize(rho, f, FAST, backend="cython")
    py = roof_optimize(rho, f, FAST, backend="python")
    assert cy.backend == "cython" and py.backend == "python"
    assert cy.value == pytest.approx(py.value, abs=1e-8)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.get_kernel("fortran")


def test_cut_view_for_roof_measure():
    psi = w_state(3)
    rho = psi.projector()
    res = roof_measure(rho, "entropy", Bipartition([1], [0, 2]))
    assert res.value == pytest.approx(np.log2(3) - 2 / 3, abs=1e-12)
