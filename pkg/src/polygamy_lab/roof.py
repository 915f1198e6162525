"""Optimization of ensemble averages over pure-state decompositions.

Every decomposition of a rank-``r`` density operator with ``K`` members is
``sqrt(p_i)|psi_i> = sum_j V_ij sqrt(lambda_j)|e_j>`` for a ``K x r``
isometry ``V`` and the spectral pairs ``(lambda_j, |e_j>)``. The optimizer
runs a derivative-free random local search over ``V`` from several seeded
restarts and keeps the best ensemble found. For ``maximize`` the value is
achieved by the returned ensemble, so it is a lower bound on the true
maximum; for ``minimize`` it is an upper bound on the true minimum.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _backend, _search_py
from .errors import ArgumentError, NumericError
from .linalg import PSD_TOL, DensityOperator, StateVector, hermitian_eigensystem
from .measures import (
    Bipartition,
    bipartite_view,
    concurrence_pure,
    entanglement_entropy,
    negativity_pure,
)

DROP_TOL = 1e-12
PROB_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-8
ISOMETRY_TOL = 1e-10

_KINDS = {
    "concurrence": _search_py.KIND_CONCURRENCE,
    "negativity": _search_py.KIND_NEGATIVITY,
    "entropy": _search_py.KIND_ENTROPY,
    "antilinear": _search_py.KIND_ANTILINEAR,
}


@dataclass(frozen=True, eq=False)
class PureFunctional:
    """A pure-state measure the compiled kernel knows how to evaluate.

    ``dims`` is the bipartite shape ``(d_A, d_B)`` the amplitudes are
    reshaped to. For ``antilinear`` the value is ``|<psi|S|psi*>|``.
    """

    kind: str
    dims: tuple[int, int]
    operator: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ArgumentError(f"unknown functional {self.kind!r}")
        if self.kind == "antilinear" and self.operator is None:
            raise ArgumentError("antilinear functional needs an operator")

    @classmethod
    def concurrence(cls, dims):
        return cls("concurrence", tuple(dims))

    @classmethod
    def negativity(cls, dims):
        return cls("negativity", tuple(dims))

    @classmethod
    def entropy(cls, dims):
        return cls("entropy", tuple(dims))

    @classmethod
    def antilinear(cls, operator, dims):
        return cls("antilinear", tuple(dims), np.asarray(operator, dtype=np.complex128))

    @property
    def code(self) -> int:
        return _KINDS[self.kind]

    def kernel_operator(self):
        # <psi|S|psi*> = conj(psi^T conj(S) psi); the kernel evaluates psi^T X psi
        return None if self.operator is None else np.ascontiguousarray(self.operator.conj())

    def __call__(self, psi: StateVector) -> float:
        if self.kind == "antilinear":
            a = psi.amplitudes
            return float(abs(a @ self.operator.conj() @ a))
        view = StateVector(psi.amplitudes, self.dims)
        if self.kind == "concurrence":
            return concurrence_pure(view)
        if self.kind == "negativity":
            return negativity_pure(view)
        return entanglement_entropy(view)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Pure-state decomposition ``{(p_i, psi_i)}`` of ``source``."""

    members: tuple[tuple[float, StateVector], ...]
    source: DensityOperator

    def __post_init__(self):
        probs = np.array([p for p, _ in self.members])
        if probs.size == 0 or np.any(probs <= 0) or np.any(probs > 1 + PROB_TOL):
            raise ArgumentError("member probabilities must lie in (0, 1]")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise NumericError(f"probabilities sum to {probs.sum()!r}")
        err = np.linalg.norm(self.reconstruct() - self.source.matrix)
        if err > RECONSTRUCTION_TOL:
            raise NumericError(f"ensemble does not reconstruct its source (error {err:.3g})")

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([p for p, _ in self.members])

    def reconstruct(self) -> np.ndarray:
        d = self.source.layout.total
        out = np.zeros((d, d), dtype=np.complex128)
        for p, psi in self.members:
            out += p * np.outer(psi.amplitudes, psi.amplitudes.conj())
        return out

    def average(self, functional: Callable[[StateVector], float]) -> float:
        return float(sum(p * functional(psi) for p, psi in self.members))

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class RoofConfig:
    direction: str = "maximize"
    ensemble_size: int | None = None
    restarts: int = 32
    max_iters: int = 400
    step_tolerance: float = 1e-7
    seed: int = 0
    initial_step: float = 0.3

    def __post_init__(self):
        if self.direction not in ("minimize", "maximize"):
            raise ArgumentError(f"direction must be 'minimize' or 'maximize', got {self.direction!r}")
        if self.restarts < 1 or self.max_iters < 1:
            raise ArgumentError("restarts and max_iters must be positive")
        if self.step_tolerance <= 0 or self.initial_step <= 0:
            raise ArgumentError("step sizes must be positive")

    @property
    def sign(self) -> float:
        return 1.0 if self.direction == "maximize" else -1.0

    def with_direction(self, direction: str) -> "RoofConfig":
        return dataclasses.replace(self, direction=direction)

    def size_for(self, rank: int) -> int:
        k = self.ensemble_size if self.ensemble_size is not None else min(rank + 2, rank * rank)
        if not rank <= k <= rank * rank:
            raise ArgumentError(f"ensemble_size {k} must lie in [rank, rank^2] = [{rank}, {rank * rank}]")
        return k


@dataclass(frozen=True, eq=False)
class RoofResult:
    value: float
    ensemble: Ensemble
    converged: bool
    restarts_used: int
    best_restart_seed: int
    best_restart: int = 0
    iterations: int = 0
    backend: str = ""


def _spectral_basis(rho: DensityOperator) -> tuple[np.ndarray, np.ndarray]:
    w, v = hermitian_eigensystem(rho.matrix)
    r = int(np.sum(w > PSD_TOL))
    if r == 0:
        raise NumericError("density operator has no eigenvalue above the rank cutoff")
    w, v = w[:r], v[:, :r]
    return w, np.ascontiguousarray((v * np.sqrt(w)).T)


def _members(basis: np.ndarray, v: np.ndarray, rho: DensityOperator) -> Ensemble:
    rows = v @ basis
    members = []
    for row in rows:
        p = float(np.vdot(row, row).real)
        if p < DROP_TOL:
            continue
        members.append((p, StateVector(row / np.sqrt(p), rho.layout)))
    total = sum(p for p, _ in members)
    # renormalize away the mass of dropped members (at most K * 1e-12)
    members = tuple((p / total, psi) for p, psi in members)
    return Ensemble(members, rho)


def ensemble_from_isometry(rho: DensityOperator, v) -> Ensemble:
    """The decomposition of ``rho`` generated by the isometry ``v`` (``K x rank``)."""
    _, basis = _spectral_basis(rho)
    r = basis.shape[0]
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 2 or v.shape[1] != r or v.shape[0] < r:
        raise ArgumentError(f"isometry must have shape (K >= {r}, {r}), got {v.shape}")
    if np.max(np.abs(v.conj().T @ v - np.eye(r))) > ISOMETRY_TOL:
        raise ArgumentError("columns of v are not orthonormal")
    return _members(basis, v, rho)


def restart_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _complex_normal(rng, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _restart_inputs(seed: int, index: int, k: int, r: int, iters: int):
    rng = np.random.default_rng(restart_seed(seed, index))
    v0 = _complex_normal(rng, (k, r))
    noise = np.ascontiguousarray(_complex_normal(rng, (iters, k, r)))
    if index == 0:
        # first restart starts at the spectral decomposition itself
        v0 = np.zeros((k, r), dtype=np.complex128)
        v0[:r, :r] = np.eye(r)
    return np.ascontiguousarray(v0), noise


def roof_optimize(
    rho: DensityOperator,
    functional: Callable[[StateVector], float],
    config: RoofConfig | None = None,
    *,
    backend: str | None = None,
) -> RoofResult:
    """Best ensemble average of ``functional`` over decompositions of ``rho``.

    ``functional`` may be any callable on :class:`StateVector`; a
    :class:`PureFunctional` is evaluated inside the compiled kernel.
    """
    config = config or RoofConfig()
    _, basis = _spectral_basis(rho)
    r = basis.shape[0]
    backend_name = backend or _backend.BACKEND
    if r == 1:
        ens = _members(basis, np.ones((1, 1), dtype=np.complex128), rho)
        return RoofResult(ens.average(functional), ens, True, 0, restart_seed(config.seed, 0),
                          backend=backend_name)

    k = config.size_for(r)
    kernel = _backend.get_kernel(backend)
    if isinstance(functional, PureFunctional):
        da, db = functional.dims
        if da * db != rho.layout.total:
            raise ArgumentError(f"functional dims {functional.dims} do not match the state")
        op = functional.kernel_operator()

        def run(index):
            v0, noise = _restart_inputs(config.seed, index, k, r, config.max_iters)
            return kernel.local_search(basis, v0, noise, da, db, functional.code, op,
                                       config.sign, config.initial_step, config.step_tolerance)
    else:
        backend_name = "python"

        def average(v):
            rows = v @ basis
            total = 0.0
            for row in rows:
                p = float(np.vdot(row, row).real)
                if p > DROP_TOL:
                    total += p * functional(StateVector(row / np.sqrt(p), rho.layout))
            return total

        def run(index):
            v0, noise = _restart_inputs(config.seed, index, k, r, config.max_iters)
            return _search_py.search_with(average, v0, noise, config.sign,
                                          config.initial_step, config.step_tolerance)

    workers = min(_backend.worker_count(), config.restarts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, range(config.restarts)))
    else:
        outcomes = [run(i) for i in range(config.restarts)]

    best = 0
    for i, (_, f, _, _) in enumerate(outcomes):
        # strict comparison keeps the lowest index on ties
        if config.sign * f > config.sign * outcomes[best][1]:
            best = i
    v, _, iters, converged = outcomes[best]
    ens = _members(basis, np.asarray(v), rho)
    return RoofResult(
        value=ens.average(functional),
        ensemble=ens,
        converged=bool(converged),
        restarts_used=config.restarts,
        best_restart_seed=restart_seed(config.seed, best),
        best_restart=best,
        iterations=int(iters),
        backend=backend_name,
    )


def roof_measure(
    rho: DensityOperator,
    kind: str,
    cut: Bipartition | None = None,
    config: RoofConfig | None = None,
    **kwargs,
) -> RoofResult:
    """Roof optimization of a built-in measure across ``cut`` of ``rho``."""
    cut = cut or Bipartition.first(rho.layout.n)
    view = bipartite_view(rho, cut)
    functional = PureFunctional(kind, view.layout.dims)
    return roof_optimize(view, functional, config, **kwargs)


def scren(rho: DensityOperator, cut: Bipartition | None = None,
          config: RoofConfig | None = None) -> float:
    """Squared convex-roof negativity (minimum over decompositions, squared)."""
    config = (config or RoofConfig()).with_direction("minimize")
    return roof_measure(rho, "negativity", cut, config).value ** 2
