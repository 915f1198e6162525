"""Closed-form entanglement quantities.

Pure-state measures work from the Schmidt coefficients of a bipartite cut.
Mixed-state quantities here are the ones with a direct formula: negativity
and the two-qubit concurrence via the spin-flip spectrum.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ArgumentError
from .linalg import (
    DensityOperator,
    StateVector,
    SubsystemLayout,
    permute_subsystems,
    psd_sqrt,
    trace_norm,
    transpose_subsystems,
)

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)
# eigenvalues below this are rounding noise; their square roots would not be
SPECTRAL_FLOOR = 1e-14


@dataclass(frozen=True)
class Bipartition:
    """A cut ``side_a | side_b`` of a multipartite system."""

    side_a: tuple[int, ...]
    side_b: tuple[int, ...]

    def __init__(self, side_a: Iterable[int], side_b: Iterable[int]):
        a = tuple(sorted({int(i) for i in side_a}))
        b = tuple(sorted({int(i) for i in side_b}))
        if not a or not b:
            raise ArgumentError("both sides of a bipartition must be nonempty")
        if set(a) & set(b):
            raise ArgumentError(f"sides overlap: {a} and {b}")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @classmethod
    def first(cls, n: int, k: int = 1) -> "Bipartition":
        """The cut ``0..k-1 | k..n-1``."""
        return cls(range(k), range(k, n))

    @classmethod
    def parse(cls, spec: str) -> "Bipartition":
        """Parse ``"A|BC"`` (one letter per subsystem) or ``"0|1,2"``."""
        if spec.count("|") != 1:
            raise ArgumentError(f"cut {spec!r} must contain exactly one '|'")
        return cls(*(_parse_side(s.strip()) for s in spec.split("|")))

    @property
    def subsystems(self) -> tuple[int, ...]:
        return tuple(sorted(self.side_a + self.side_b))

    def covers(self, n: int) -> bool:
        return self.subsystems == tuple(range(n))

    def check(self, layout: SubsystemLayout) -> None:
        if not self.covers(layout.n):
            raise ArgumentError(
                f"cut {self} does not cover all {layout.n} subsystems of the layout"
            )

    def dims(self, layout: SubsystemLayout) -> tuple[int, int]:
        da = int(np.prod([layout.dims[i] for i in self.side_a]))
        db = int(np.prod([layout.dims[i] for i in self.side_b]))
        return da, db

    def __str__(self) -> str:
        def fmt(side):
            return ",".join(str(i) for i in side)

        return f"{fmt(self.side_a)}|{fmt(self.side_b)}"


def _parse_side(side: str) -> list[int]:
    if not side:
        raise ArgumentError("empty side in cut specification")
    if side.isalpha():
        letters = string.ascii_uppercase
        return [letters.index(c) for c in side.upper()]
    try:
        return [int(tok) for tok in side.split(",")]
    except ValueError:
        raise ArgumentError(f"cannot parse cut side {side!r}") from None


def _cut_of(psi: StateVector, cut: Bipartition | None) -> Bipartition:
    if cut is None:
        cut = Bipartition.first(psi.layout.n)
    cut.check(psi.layout)
    return cut


def coefficient_matrix(psi: StateVector, cut: Bipartition | None = None) -> np.ndarray:
    """Amplitudes reshaped to a ``d_A x d_B`` matrix across the cut."""
    cut = _cut_of(psi, cut)
    da, _ = cut.dims(psi.layout)
    t = np.transpose(psi.tensor(), cut.side_a + cut.side_b)
    return t.reshape(da, -1)


def schmidt_coefficients(psi: StateVector, cut: Bipartition | None = None) -> np.ndarray:
    """Squared Schmidt coefficients (the spectrum of the reduced state)."""
    s = np.linalg.svd(coefficient_matrix(psi, cut), compute_uv=False)
    return s**2


def concurrence_pure(psi: StateVector, cut: Bipartition | None = None) -> float:
    mu = schmidt_coefficients(psi, cut)
    purity = float(np.sum(mu**2))
    return float(np.sqrt(max(0.0, 2.0 * (1.0 - purity))))


def concurrence_sq_from_amplitudes(psi: StateVector) -> float:
    """Squared concurrence as four times the summed squared 2x2 minors."""
    if psi.layout.n != 2:
        raise ArgumentError(f"needs exactly two subsystems, layout is {psi.layout.dims}")
    a = psi.tensor()
    d1, d2 = psi.layout.dims
    i, j = np.triu_indices(d1, k=1)
    k, l = np.triu_indices(d2, k=1)
    minors = (
        a[i[:, None], k[None, :]] * a[j[:, None], l[None, :]]
        - a[i[:, None], l[None, :]] * a[j[:, None], k[None, :]]
    )
    return float(4.0 * np.sum(np.abs(minors) ** 2))


def entanglement_entropy(psi: StateVector, cut: Bipartition | None = None) -> float:
    """Von Neumann entropy of the reduced state, in bits."""
    mu = schmidt_coefficients(psi, cut)
    mu = mu[mu > 1e-300]
    return float(max(0.0, -np.sum(mu * np.log2(mu))))


def negativity_pure(psi: StateVector, cut: Bipartition | None = None) -> float:
    """``(Tr sqrt(rho_A))^2 - 1`` from the Schmidt coefficients."""
    s = np.linalg.svd(coefficient_matrix(psi, cut), compute_uv=False)
    return float(max(0.0, np.sum(s) ** 2 - 1.0))


def negativity(rho: DensityOperator | StateVector, cut: Bipartition | None = None) -> float:
    """Negativity ``||rho^{T_A}|| - 1`` (no factor 1/2).

    Every subsystem on side A is transposed; the partial transposes
    commute, so side A need not be contiguous.
    """
    if isinstance(rho, StateVector):
        rho = rho.projector()
    if cut is None:
        cut = Bipartition.first(rho.layout.n)
    cut.check(rho.layout)
    pt = transpose_subsystems(rho.matrix, rho.layout.dims, cut.side_a)
    return max(0.0, trace_norm(pt) - 1.0)


def scren_pure(psi: StateVector, cut: Bipartition | None = None) -> float:
    return negativity_pure(psi, cut) ** 2


def _check_two_qubit(rho: DensityOperator) -> None:
    if rho.layout.dims != (2, 2):
        raise ArgumentError(f"needs a two-qubit state, layout is {rho.layout.dims}")


def spin_flip_spectrum(rho: DensityOperator) -> np.ndarray:
    """Descending square roots of the eigenvalues of ``rho (sy x sy) rho* (sy x sy)``.

    Computed as singular values of ``sqrt(rho) S sqrt(rho)*``, whose squares
    are exactly those eigenvalues, so rank-deficient inputs stay stable.
    """
    _check_two_qubit(rho)
    r = psd_sqrt(rho.matrix, SPECTRAL_FLOOR)
    return np.linalg.svd(r @ SPIN_FLIP @ r.conj(), compute_uv=False)


def wootters_concurrence_2q(rho: DensityOperator) -> float:
    lam = spin_flip_spectrum(rho)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def bipartite_view(rho: DensityOperator, cut: Bipartition) -> DensityOperator:
    """Reorder ``rho`` so side A comes first and flatten to ``(d_A, d_B)``."""
    cut.check(rho.layout)
    da, db = cut.dims(rho.layout)
    order = list(cut.side_a + cut.side_b)
    if order != list(range(rho.layout.n)):
        rho = permute_subsystems(rho, order)
    return DensityOperator(rho.matrix, (da, db))
