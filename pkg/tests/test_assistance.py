import numpy as np
import pytest
from hypothesis import given

from conftest import random_psd, random_unitary, seeds
from polygamy_lab.assistance import (
    concurrence_of_assistance,
    eoa,
    eoa_result,
    l_operator,
    l_operator_pairs,
    screnoa,
    sub_ca,
    sub_ca_roof,
    tau_a,
    tau_a_gs_analytic,
)
from polygamy_lab.errors import ArgumentError
from polygamy_lab.linalg import DensityOperator, StateVector, haar_random_pure, reduced_state
from polygamy_lab.measures import (
    concurrence_pure,
    entanglement_entropy,
    negativity_pure,
    spin_flip_spectrum,
)
from polygamy_lab.roof import RoofConfig
from polygamy_lab.states import GenSchmidtParams, gen_schmidt_3q, ghz_state, random_mixed, w_state

S6 = 6**-0.5
EX2 = (0.5, 0.5, S6, S6, S6)


def test_l_operator_structure():
    op = l_operator(3, 0, 2)
    expected = np.zeros((3, 3))
    expected[0, 2], expected[2, 0] = -1, 1
    assert np.array_equal(op, expected)
    with pytest.raises(ArgumentError):
        l_operator(3, 2, 1)
    pairs = l_operator_pairs(3, 4)
    assert len(pairs) == 3 * 6
    for p in pairs:
        assert np.allclose(p.operator.imag, 0)
        assert np.allclose(p.operator, p.operator.T)  # kron of two antisymmetric factors


def test_ca_examples(bell):
    assert concurrence_of_assistance(bell.projector()) == pytest.approx(1.0, abs=1e-12)
    ghz_ab = reduced_state(ghz_state(3), [0, 1])
    assert np.allclose(spin_flip_spectrum(ghz_ab), [0.5, 0.5, 0, 0], atol=1e-12)
    assert concurrence_of_assistance(ghz_ab) == pytest.approx(1.0, abs=1e-12)
    assert concurrence_of_assistance(reduced_state(w_state(3), [0, 1])) == pytest.approx(2 / 3, abs=1e-12)


def test_sub_ca_single_block_equals_ca():
    rho = random_mixed((2, 2), 3, seed=1)
    (pair,) = l_operator_pairs(2, 2)
    assert sub_ca(rho, pair) == pytest.approx(concurrence_of_assistance(rho), abs=1e-12)


def test_sub_ca_rank_one():
    psi = haar_random_pure((3, 3), 2)
    for pair in l_operator_pairs(3, 3):
        a = psi.amplitudes
        expected = abs(np.conj(a) @ pair.operator @ np.conj(a))
        assert sub_ca(psi.projector(), pair) == pytest.approx(expected, abs=1e-10)


def test_sub_ca_support_outside_block():
    # A lives on |2> only, so every block touching {0,1} on A vanishes
    a = np.zeros(9)
    a[6] = a[7] = 1 / np.sqrt(2)
    rho = StateVector(a, (3, 3)).projector()
    pair = next(p for p in l_operator_pairs(3, 3) if p.m_index == (0, 1))
    assert sub_ca(rho, pair) == pytest.approx(0.0, abs=1e-12)


def test_sub_ca_dimension_mismatch():
    rho = random_mixed((2, 3), 2, seed=0)
    with pytest.raises(ArgumentError):
        sub_ca(rho, l_operator_pairs(2, 2)[0])


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
def test_sub_ca_spectral_vs_roof(dims):
    cfg = RoofConfig(restarts=6, max_iters=300)
    pairs = l_operator_pairs(*dims)
    for seed in range(50):
        rho = random_mixed(dims, 2, seed=1000 + seed)
        pair = pairs[seed % len(pairs)]
        exact = sub_ca(rho, pair)
        found = sub_ca_roof(rho, pair, cfg).value
        assert found <= exact + 1e-9
        assert exact - found <= 5e-3


def test_tau_a_two_qubit_equals_ca():
    for seed in range(20):
        rho = random_mixed((2, 2), 1 + seed % 4, seed=seed)
        assert abs(tau_a(rho) - concurrence_of_assistance(rho)) < 1e-12


def test_tau_a_examples(bell):
    assert tau_a(bell.projector()) == pytest.approx(1.0, abs=1e-12)
    psi = gen_schmidt_3q(GenSchmidtParams(EX2))
    flat = StateVector(psi.amplitudes, (2, 4))
    assert tau_a(flat) == pytest.approx(np.sqrt(2) / 2, abs=1e-12)
    assert tau_a(flat.projector()) == pytest.approx(np.sqrt(2) / 2, abs=1e-12)
    assert tau_a(reduced_state(psi, [0, 1])) == pytest.approx(np.sqrt(3) / 3, abs=1e-12)
    assert tau_a(reduced_state(psi, [0, 2])) == pytest.approx(np.sqrt(3) / 3, abs=1e-12)


def test_tau_a_computational_basis_differs():
    # the raw block sum is basis dependent; in the computational basis the
    # flattened Example-2 state gives sqrt(6)/2 rather than sqrt(2)/2
    psi = gen_schmidt_3q(GenSchmidtParams(EX2))
    flat = StateVector(psi.amplitudes, (2, 4))
    assert tau_a(flat, basis="computational") == pytest.approx(np.sqrt(6) / 2, abs=1e-12)
    with pytest.raises(ArgumentError):
        tau_a(flat, basis="polar")


def test_tau_a_needs_two_parties():
    with pytest.raises(ArgumentError):
        tau_a(w_state(3))
    with pytest.raises(ArgumentError):
        tau_a(random_mixed((2, 2, 2), 2, seed=0))


@given(seeds)
def test_tau_a_pure_equals_negativity_form(seed):
    psi = haar_random_pure((3, 4), seed)
    assert abs(tau_a(psi) - negativity_pure(psi)) < 1e-10
    assert abs(tau_a(psi.projector()) - negativity_pure(psi)) < 1e-8


@given(seeds)
def test_tau_a_qubit_qudit_pure_equals_concurrence(seed):
    psi = haar_random_pure((2, 4), seed)
    assert abs(tau_a(psi) - concurrence_pure(psi)) < 1e-10


@given(seeds)
def test_tau_a_upper_bounds_ca_roof(seed):
    rho = random_mixed((2, 3), 2, seed=seed)
    from polygamy_lab.roof import roof_measure

    found = roof_measure(rho, "concurrence", config=RoofConfig(restarts=3, max_iters=200)).value
    assert found <= tau_a(rho) + 1e-9


def test_tau_a_local_unitary_invariance():
    rng = np.random.default_rng(3)
    rho = DensityOperator(random_psd(rng, 6, rank=3), (2, 3))
    u = np.kron(random_unitary(rng, 2), random_unitary(rng, 3))
    rotated = DensityOperator(u @ rho.matrix @ u.conj().T, (2, 3))
    assert tau_a(rotated) == pytest.approx(tau_a(rho), abs=1e-9)


def test_gs_analytic_examples():
    assert tau_a_gs_analytic(EX2, "A|BC") == pytest.approx(np.sqrt(2) / 2)
    assert tau_a_gs_analytic(EX2, "AB") == pytest.approx(np.sqrt(3) / 3)
    lam = GenSchmidtParams.from_angles(0.7, 0.4, np.pi / 2, 0.0).lambdas
    l0, l3 = lam[0], lam[3]
    # |110> couples A with B: with l2 = l4 = 0 only the AB marginal is entangled
    assert tau_a_gs_analytic(lam, "AB") == pytest.approx(2 * l0 * l3)
    assert tau_a_gs_analytic(lam, "A|BC") == pytest.approx(2 * l0 * l3)
    assert tau_a_gs_analytic(lam, "AC") == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ArgumentError):
        tau_a_gs_analytic((1, 1, 0, 0, 0), "AB")
    with pytest.raises(ArgumentError):
        tau_a_gs_analytic(EX2, "BC")


def test_gs_analytic_matches_block_sum():
    rng = np.random.default_rng(17)
    for _ in range(100):
        p = GenSchmidtParams.from_angles(*rng.uniform(0, np.pi / 2, 4), phi=rng.uniform(0, 2 * np.pi))
        psi = gen_schmidt_3q(p)
        flat = StateVector(psi.amplitudes, (2, 4))
        assert abs(tau_a(flat) - tau_a_gs_analytic(p.lambdas, "A|BC")) < 1e-6
        assert abs(tau_a(reduced_state(psi, [0, 1])) - tau_a_gs_analytic(p.lambdas, "AB")) < 1e-6
        assert abs(tau_a(reduced_state(psi, [0, 2])) - tau_a_gs_analytic(p.lambdas, "AC")) < 1e-6


def test_dual_ckw_and_tau_sum_on_haar_states():
    for seed in range(200):
        psi = haar_random_pure((2, 2, 2), seed)
        ab, ac = reduced_state(psi, [0, 1]), reduced_state(psi, [0, 2])
        c2 = concurrence_pure(psi) ** 2
        assert c2 <= concurrence_of_assistance(ab) ** 2 + concurrence_of_assistance(ac) ** 2 + 1e-9
        whole = tau_a(StateVector(psi.amplitudes, (2, 4)))
        assert whole**2 <= tau_a(ab) ** 2 + tau_a(ac) ** 2 + 1e-9


def test_eoa_examples():
    psi = haar_random_pure((2, 3), 4)
    assert eoa(psi.projector()) == pytest.approx(entanglement_entropy(psi), abs=1e-12)
    w_ab = reduced_state(w_state(3), [0, 1])
    assert eoa(w_ab) == pytest.approx(2 / 3, abs=5e-3)
    assert eoa(DensityOperator(np.eye(4) / 4, (2, 2))) == pytest.approx(1.0, abs=1e-2)


def test_eoa_forces_maximize():
    w_ab = reduced_state(w_state(3), [0, 1])
    res = eoa_result(w_ab, RoofConfig(direction="minimize"))
    assert res.value == pytest.approx(2 / 3, abs=5e-3)


def test_screnoa_examples():
    psi = haar_random_pure((2, 3), 5)
    assert screnoa(psi.projector()) == pytest.approx(negativity_pure(psi) ** 2, abs=1e-12)
    w4 = w_state(4)
    for j in (1, 2, 3):
        assert screnoa(reduced_state(w4, [0, j])) == pytest.approx(0.25, abs=1e-2)
    assert screnoa(reduced_state(w_state(3), [0, 1])) == pytest.approx(4 / 9, abs=1e-2)


def test_screnoa_two_qubit_equals_ca_squared():
    for seed in range(10):
        rho = random_mixed((2, 2), 2, seed=50 + seed)
        assert screnoa(rho, RoofConfig(restarts=8)) == pytest.approx(concurrence_of_assistance(rho) ** 2, abs=1e-2)


def test_eoa_screnoa_local_unitary_invariance():
    rng = np.random.default_rng(8)
    rho = random_mixed((2, 2), 2, seed=77)
    u = np.kron(random_unitary(rng, 2), random_unitary(rng, 2))
    rotated = DensityOperator(u @ rho.matrix @ u.conj().T, (2, 2))
    assert eoa(rotated) == pytest.approx(eoa(rho), abs=5e-3)
    assert screnoa(rotated) == pytest.approx(screnoa(rho), abs=5e-3)
