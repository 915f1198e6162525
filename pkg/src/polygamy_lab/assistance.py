"""Assistance measures: maxima of ensemble averages over decompositions.

``concurrence_of_assistance`` and ``sub_ca`` use the exact spectral form:
for a symmetric operator ``S``, the best average of ``|<phi|S|phi*>|`` over
decompositions of ``rho`` is the trace norm of ``sqrt(rho) S sqrt(rho)*``.
``eoa`` and ``screnoa`` have no closed form and go through the roof
optimizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import ArgumentError
from .linalg import DensityOperator, StateVector, hermitian_eigensystem, psd_sqrt
from .measures import SPECTRAL_FLOOR, Bipartition, coefficient_matrix, spin_flip_spectrum
from .roof import PureFunctional, RoofConfig, RoofResult, roof_measure, roof_optimize


@dataclass(frozen=True, eq=False)
class LOperatorPair:
    """``L_A^m (x) L_B^n`` for the index pairs ``m = (i, j)`` and ``n = (k, l)``."""

    m_index: tuple[int, int]
    n_index: tuple[int, int]
    dims: tuple[int, int]
    operator: np.ndarray


def l_operator(d: int, i: int, j: int) -> np.ndarray:
    """``P (-|i><j| + |j><i|) P`` with ``P`` the projector onto span{|i>, |j>}."""
    if not 0 <= i < j < d:
        raise ArgumentError(f"need 0 <= i < j < {d}, got ({i}, {j})")
    p = np.zeros((d, d))
    p[i, i] = p[j, j] = 1.0
    x = np.zeros((d, d))
    x[i, j] = -1.0
    x[j, i] = 1.0
    return p @ x @ p


def l_operator_pairs(d1: int, d2: int) -> list[LOperatorPair]:
    pairs = []
    for m in combinations(range(d1), 2):
        la = l_operator(d1, *m)
        for n in combinations(range(d2), 2):
            op = np.kron(la, l_operator(d2, *n)).astype(np.complex128)
            pairs.append(LOperatorPair(m, n, (d1, d2), op))
    return pairs


def _two_party(rho: DensityOperator) -> tuple[int, int]:
    if rho.layout.n != 2:
        raise ArgumentError(f"needs a two-subsystem layout, got {rho.layout.dims}")
    return rho.layout.dims


def antilinear_assistance(rho: DensityOperator | StateVector, operator) -> float:
    """``max sum_i p_i |<phi_i|S|phi_i*>|`` for a symmetric ``S``."""
    if isinstance(rho, StateVector):
        a = rho.amplitudes
        return float(abs(a @ np.conj(operator) @ a))
    r = psd_sqrt(rho.matrix, SPECTRAL_FLOOR)
    return float(np.sum(np.linalg.svd(r @ operator @ r.conj(), compute_uv=False)))


def concurrence_of_assistance(rho: DensityOperator) -> float:
    """Two-qubit C_a: the full sum of the spin-flip spectrum."""
    return float(np.sum(spin_flip_spectrum(rho)))


def sub_ca(rho: DensityOperator, pair: LOperatorPair) -> float:
    if tuple(rho.layout.dims) != tuple(pair.dims):
        raise ArgumentError(f"pair built for {pair.dims}, state layout is {rho.layout.dims}")
    return antilinear_assistance(rho, pair.operator)


def sub_ca_roof(rho: DensityOperator, pair: LOperatorPair, config: RoofConfig | None = None) -> RoofResult:
    """Cross-check of :func:`sub_ca` by direct maximization over decompositions."""
    if tuple(rho.layout.dims) != tuple(pair.dims):
        raise ArgumentError(f"pair built for {pair.dims}, state layout is {rho.layout.dims}")
    config = (config or RoofConfig()).with_direction("maximize")
    return roof_optimize(rho, PureFunctional.antilinear(pair.operator, pair.dims), config)


def local_eigenbasis(rho: DensityOperator | StateVector) -> tuple[np.ndarray, np.ndarray]:
    """Unitaries ``(U_A, U_B)`` rotating each side to its reduced-state eigenbasis.

    For pure input the Schmidt bases from an SVD are used, which stays
    well-defined when the reduced spectra are degenerate.
    """
    if isinstance(rho, StateVector):
        u, _, vh = np.linalg.svd(coefficient_matrix(rho, Bipartition((0,), (1,))))
        return u.conj().T, vh.conj()
    d1, d2 = _two_party(rho)
    t = rho.matrix.reshape(d1, d2, d1, d2)
    _, ea = hermitian_eigensystem(np.einsum("ikjk->ij", t))
    _, eb = hermitian_eigensystem(np.einsum("kikj->ij", t))
    return ea.conj().T, eb.conj().T


def tau_a(rho: DensityOperator | StateVector, basis: str = "schmidt") -> float:
    """Sum of ``sub_ca`` over all ``L_A^m (x) L_B^n`` blocks.

    The block sum depends on the local bases. ``basis="schmidt"`` (default)
    evaluates it in the eigenbases of the two reduced states, where a pure
    qubit-qudit state gives exactly its concurrence; ``"computational"``
    uses the basis as given.
    """
    if isinstance(rho, DensityOperator) and rho.rank() == 1:
        w, v = hermitian_eigensystem(rho.matrix)
        rho = StateVector.normalized(v[:, 0], rho.layout)
    if isinstance(rho, StateVector):
        if rho.layout.n != 2:
            raise ArgumentError(f"needs a two-subsystem layout, got {rho.layout.dims}")
        d1, d2 = rho.layout.dims
        if basis == "schmidt":
            ua, ub = local_eigenbasis(rho)
            rho = StateVector.normalized(np.kron(ua, ub) @ rho.amplitudes, rho.layout)
    else:
        d1, d2 = _two_party(rho)
        if basis == "schmidt":
            ua, ub = local_eigenbasis(rho)
            u = np.kron(ua, ub)
            m = u @ rho.matrix @ u.conj().T
            rho = DensityOperator(0.5 * (m + m.conj().T), rho.layout)
    if basis not in ("schmidt", "computational"):
        raise ArgumentError(f"basis must be 'schmidt' or 'computational', got {basis!r}")
    return float(sum(antilinear_assistance(rho, pair.operator) for pair in l_operator_pairs(d1, d2)))


_GS_TARGETS = ("A|BC", "AB", "AC")


def tau_a_gs_analytic(lambdas, target: str) -> float:
    """Closed-form tau_a for ``l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>``.

    With qubit 0 as the most significant bit, the ``|110>`` amplitude ``l3``
    entangles A with B and ``l2`` (``|101>``) entangles A with C.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (5,) or np.any(lam < 0):
        raise ArgumentError("need five nonnegative coefficients")
    if abs(np.sum(lam**2) - 1.0) > 1e-10:
        raise ArgumentError(f"coefficients are not normalized (sum of squares {np.sum(lam**2)!r})")
    l0, _, l2, l3, l4 = lam
    if target == "A|BC":
        return float(2 * l0 * np.sqrt(l2**2 + l3**2 + l4**2))
    if target == "AB":
        return float(2 * l0 * np.sqrt(l3**2 + l4**2))
    if target == "AC":
        return float(2 * l0 * np.sqrt(l2**2 + l4**2))
    raise ArgumentError(f"target must be one of {_GS_TARGETS}, got {target!r}")


def eoa_result(rho: DensityOperator, config: RoofConfig | None = None,
               cut: Bipartition | None = None) -> RoofResult:
    config = (config or RoofConfig()).with_direction("maximize")
    return roof_measure(rho, "entropy", cut, config)


def eoa(rho: DensityOperator, config: RoofConfig | None = None,
        cut: Bipartition | None = None) -> float:
    """Entanglement of assistance (bits), best value found by the optimizer."""
    return eoa_result(rho, config, cut).value


def screnoa_result(rho: DensityOperator, config: RoofConfig | None = None,
                   cut: Bipartition | None = None) -> RoofResult:
    config = (config or RoofConfig()).with_direction("maximize")
    return roof_measure(rho, "negativity", cut, config)


def screnoa(rho: DensityOperator, config: RoofConfig | None = None,
            cut: Bipartition | None = None) -> float:
    """Square of the maximal average negativity over decompositions."""
    return screnoa_result(rho, config, cut).value ** 2
