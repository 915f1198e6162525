"""Dense linear algebra on small multipartite Hilbert spaces.

Subsystem 0 is always the slowest-varying tensor index, so a basis label
``|b_0 b_1 ... b_{n-1}>`` maps to the row-major flat index and
``tensor_product(a, b)`` matches the layout order ``(a, b)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError, DomainError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-12
NORM_TOL = 1e-12


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered local dimensions of a composite system."""

    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if not dims:
            raise ArgumentError("layout needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ArgumentError(f"every local dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n(self) -> int:
        return len(self.dims)

    def sub(self, indices: Iterable[int]) -> "SubsystemLayout":
        return SubsystemLayout(self.dims[i] for i in indices)

    def check_index(self, i: int) -> int:
        if not isinstance(i, (int, np.integer)) or not 0 <= i < self.n:
            raise ArgumentError(f"subsystem index {i!r} out of range for {self.n} subsystems")
        return int(i)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self) -> int:
        return len(self.dims)


def _as_layout(layout) -> SubsystemLayout:
    return layout if isinstance(layout, SubsystemLayout) else SubsystemLayout(layout)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state together with its subsystem layout."""

    amplitudes: np.ndarray
    layout: SubsystemLayout

    def __init__(self, amplitudes, layout):
        layout = _as_layout(layout)
        amps = _frozen(np.ravel(amplitudes))
        if amps.shape != (layout.total,):
            raise ArgumentError(
                f"expected {layout.total} amplitudes for layout {layout.dims}, got {amps.size}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"state is not normalized (norm = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "layout", layout)

    @classmethod
    def normalized(cls, amplitudes, layout) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise DomainError("cannot normalize the zero vector")
        return cls(amps / norm, layout)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)

    def projector(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()), self.layout)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix with a layout."""

    matrix: np.ndarray
    layout: SubsystemLayout

    def __init__(self, matrix, layout):
        layout = _as_layout(layout)
        m = _frozen(matrix)
        n = layout.total
        if m.shape != (n, n):
            raise ArgumentError(f"expected a {n}x{n} matrix for layout {layout.dims}, got {m.shape}")
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITIAN_TOL:
            raise DomainError(f"matrix is not Hermitian (max deviation {herm:.3g})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise DomainError(f"trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise DomainError(f"matrix has negative eigenvalue {lo:.3g}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "layout", layout)

    def rank(self, cutoff: float = PSD_TOL) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > cutoff))

    def flatten(self, split: int) -> "DensityOperator":
        """View as bipartite: subsystems ``[:split]`` against ``[split:]``."""
        dims = self.layout.dims
        if not 0 < split < len(dims):
            raise ArgumentError(f"split {split} must lie strictly inside 1..{len(dims) - 1}")
        return DensityOperator(
            self.matrix, (int(np.prod(dims[:split])), int(np.prod(dims[split:])))
        )


def tensor_product(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def partial_trace(rho: DensityOperator, keep: Iterable[int]) -> DensityOperator:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems appear in their original order regardless of the
    order given in ``keep``.
    """
    layout = rho.layout
    keep = sorted({layout.check_index(i) for i in keep})
    if not keep:
        raise ArgumentError("keep must name at least one subsystem")
    n = layout.n
    t = rho.matrix.reshape(layout.dims * 2)
    row = list(range(n))
    col = [n + i if i in keep else i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(t, row + col, out)
    d = int(np.prod([layout.dims[i] for i in keep]))
    return DensityOperator(_hermitize(reduced.reshape(d, d)), layout.sub(keep))


def reduced_state(psi: StateVector, keep: Iterable[int]) -> DensityOperator:
    """Marginal of a pure state without forming the full projector."""
    layout = psi.layout
    keep = sorted({layout.check_index(i) for i in keep})
    if not keep:
        raise ArgumentError("keep must name at least one subsystem")
    rest = [i for i in range(layout.n) if i not in keep]
    d = int(np.prod([layout.dims[i] for i in keep]))
    m = np.transpose(psi.tensor(), keep + rest).reshape(d, -1)
    return DensityOperator(_hermitize(m @ m.conj().T), layout.sub(keep))


def permute_subsystems(rho: DensityOperator, order: Sequence[int]) -> DensityOperator:
    layout = rho.layout
    order = [layout.check_index(i) for i in order]
    if sorted(order) != list(range(layout.n)):
        raise ArgumentError(f"{order} is not a permutation of the subsystems")
    n = layout.n
    t = rho.matrix.reshape(layout.dims * 2)
    t = np.transpose(t, order + [n + i for i in order])
    d = layout.total
    return DensityOperator(t.reshape(d, d), layout.sub(order))


def transpose_subsystems(matrix, dims: Sequence[int], subsystems: Iterable[int]) -> np.ndarray:
    """Transpose the listed tensor factors of ``matrix``; the rest are untouched."""
    dims = tuple(dims)
    n = len(dims)
    axes = list(range(2 * n))
    for k in set(subsystems):
        axes[k], axes[n + k] = n + k, k
    total = int(np.prod(dims))
    t = np.transpose(np.asarray(matrix).reshape(dims * 2), axes)
    return t.reshape(total, total)


def partial_transpose(rho: DensityOperator, subsystem: int) -> np.ndarray:
    k = rho.layout.check_index(subsystem)
    return transpose_subsystems(rho.matrix, rho.layout.dims, [k])


def trace_norm(m) -> float:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ArgumentError(f"trace norm needs a square matrix, got shape {m.shape}")
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def hermitian_eigensystem(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order with matching eigenvector columns."""
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {h.shape}")
    if np.max(np.abs(h - h.conj().T), initial=0.0) > PSD_TOL:
        raise ArgumentError("matrix is not Hermitian")
    w, v = np.linalg.eigh(_hermitize(h))
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(rho, floor: float = 0.0) -> np.ndarray:
    """Principal square root; eigenvalues below ``floor`` are treated as zero."""
    w, v = hermitian_eigensystem(rho)
    if w.size and w[-1] < -PSD_TOL:
        raise DomainError(f"matrix is not positive semidefinite (eigenvalue {w[-1]:.3g})")
    w = np.where(w < floor, 0.0, np.clip(w, 0.0, None))
    return (v * np.sqrt(w)) @ v.conj().T


def haar_random_pure(layout, seed: int) -> StateVector:
    layout = _as_layout(layout)
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(layout.total) + 1j * rng.standard_normal(layout.total)
    return StateVector(z / np.linalg.norm(z), layout)
