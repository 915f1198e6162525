"""Named state families and random sampling.

Basis indices are row-major with qubit 0 as the most significant bit, so
``|101>`` is index 5.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .linalg import DensityOperator, StateVector, SubsystemLayout, haar_random_pure, reduced_state

NORMALIZATION_TOL = 1e-10
_GS_INDICES = (0, 4, 5, 6, 7)


@dataclass(frozen=True)
class GenSchmidtParams:
    """Coefficients of ``l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>``."""

    lambdas: tuple[float, float, float, float, float]
    phi: float = 0.0

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lambdas)
        if len(lam) != 5:
            raise ArgumentError(f"need five coefficients, got {len(lam)}")
        if any(x < 0 for x in lam):
            raise ArgumentError(f"coefficients must be nonnegative, got {lam}")
        norm = sum(x * x for x in lam)
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise ArgumentError(f"coefficients are not normalized (sum of squares {norm!r})")
        object.__setattr__(self, "lambdas", lam)

    @classmethod
    def from_angles(cls, theta0, theta1, theta2, theta3, phi: float = 0.0) -> "GenSchmidtParams":
        """Hyperspherical form ``l0 = cos t0, l1 = sin t0 cos t1, ...`` with ``t_i`` in [0, pi/2]."""
        thetas = (theta0, theta1, theta2, theta3)
        if any(not 0.0 <= t <= np.pi / 2 for t in thetas):
            raise ArgumentError(f"angles must lie in [0, pi/2], got {thetas}")
        s0, s1, s2, s3 = np.sin(thetas)
        c0, c1, c2, c3 = np.cos(thetas)
        lam = (c0, s0 * c1, s0 * s1 * c2, s0 * s1 * s2 * c3, s0 * s1 * s2 * s3)
        # rounding can leave the sum of squares a few ulps off; renormalize
        lam = np.abs(lam) / np.sqrt(np.sum(np.square(lam)))
        return cls(tuple(lam), phi)


def gen_schmidt_3q(params: GenSchmidtParams) -> StateVector:
    a = np.zeros(8, dtype=np.complex128)
    a[list(_GS_INDICES)] = params.lambdas
    a[4] *= np.exp(1j * params.phi)
    return StateVector(a, (2, 2, 2))


def _check_n(n: int) -> int:
    if int(n) != n or n < 2:
        raise ArgumentError(f"need at least two qubits, got {n!r}")
    return int(n)


def w_state(n: int) -> StateVector:
    """Uniform superposition of the ``n`` single-excitation basis states."""
    n = _check_n(n)
    a = np.zeros(2**n, dtype=np.complex128)
    a[[1 << k for k in range(n)]] = 1 / np.sqrt(n)
    return StateVector(a, (2,) * n)


def ghz_state(n: int) -> StateVector:
    n = _check_n(n)
    a = np.zeros(2**n, dtype=np.complex128)
    a[0] = a[-1] = 1 / np.sqrt(2)
    return StateVector(a, (2,) * n)


def product_state(layout) -> StateVector:
    """``|0...0>`` on ``layout``."""
    layout = SubsystemLayout(layout)
    a = np.zeros(layout.total, dtype=np.complex128)
    a[0] = 1.0
    return StateVector(a, layout)


def random_mixed(layout, rank: int, seed: int) -> DensityOperator:
    """Marginal of a Haar-random pure state on ``layout`` (x) ancilla of dimension ``rank``."""
    layout = SubsystemLayout(layout)
    if not 1 <= rank <= layout.total:
        raise ArgumentError(f"rank must lie in [1, {layout.total}], got {rank}")
    if rank == 1:
        return haar_random_pure(layout, seed).projector()
    psi = haar_random_pure(layout.dims + (rank,), seed)
    return reduced_state(psi, range(layout.n))
