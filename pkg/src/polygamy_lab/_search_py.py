"""Pure-NumPy roof search kernel.

Reference implementation of the hot loop; ``_search_ext`` (Cython) mirrors it
operation for operation so both backends walk the same trajectory for the
same noise tensor.
"""

from __future__ import annotations

import numpy as np

KIND_CONCURRENCE = 0
KIND_NEGATIVITY = 1
KIND_ENTROPY = 2
KIND_ANTILINEAR = 3

DROP_TOL = 1e-12
GROW = 1.5
SHRINK = 0.9
MAX_STEP = 1.0


def orthonormalize(a: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt on the columns of a tall complex matrix."""
    q = np.array(a, dtype=np.complex128, copy=True)
    for j in range(q.shape[1]):
        c = q[:, j]
        for i in range(j):
            c -= np.vdot(q[:, i], c) * q[:, i]
        c /= np.linalg.norm(c)
    return q


def ensemble_average(basis, v, dim_a, dim_b, kind, op=None) -> float:
    """Average of the built-in functional over the members ``v @ basis``."""
    w = v @ basis
    p = np.einsum("kd,kd->k", w.conj(), w).real
    keep = p > DROP_TOL
    w, p = w[keep], p[keep]
    if kind == KIND_ANTILINEAR:
        f = np.abs(np.einsum("ka,ab,kb->k", w, op, w)) / p
        return float(np.sum(p * f))
    m = w.reshape(-1, dim_a, dim_b)
    if kind == KIND_CONCURRENCE:
        # 2 sqrt(sum |2x2 minors|^2) avoids the cancellation in 1 - Tr rho_A^2
        i, j = np.triu_indices(dim_a, k=1)
        k, l = np.triu_indices(dim_b, k=1)
        minors = (
            m[:, i[:, None], k[None, :]] * m[:, j[:, None], l[None, :]]
            - m[:, i[:, None], l[None, :]] * m[:, j[:, None], k[None, :]]
        )
        f = 2.0 * np.sqrt(np.sum(np.abs(minors) ** 2, axis=(1, 2))) / p
    else:
        mu = np.linalg.svd(m, compute_uv=False) ** 2 / p[:, None]
        if kind == KIND_NEGATIVITY:
            f = np.clip(np.sum(np.sqrt(mu), axis=1) ** 2 - 1.0, 0.0, None)
        elif kind == KIND_ENTROPY:
            with np.errstate(divide="ignore", invalid="ignore"):
                terms = np.where(mu > 1e-300, -mu * np.log2(mu), 0.0)
            f = np.clip(np.sum(terms, axis=1), 0.0, None)
        else:
            raise ValueError(f"unknown functional kind {kind}")
    return float(np.sum(p * f))


def local_search(basis, v0, noise, dim_a, dim_b, kind, op, sign, step0, step_tol):
    """(1+1) random local search on the isometry manifold.

    Returns ``(v, value, iterations, converged)``. Candidates are
    ``orthonormalize(v + step * noise[t])``; the step grows on success and
    shrinks geometrically on failure, stopping below ``step_tol``.
    """

    def average(v):
        return ensemble_average(basis, v, dim_a, dim_b, kind, op)

    return search_with(average, v0, noise, sign, step0, step_tol)


def search_with(average, v0, noise, sign, step0, step_tol):
    """The search loop of :func:`local_search` for an arbitrary objective."""
    v = orthonormalize(v0)
    f = average(v)
    step = step0
    it = 0
    converged = False
    for t in range(noise.shape[0]):
        it = t + 1
        cand = orthonormalize(v + step * noise[t])
        fc = average(cand)
        if sign * (fc - f) > 0:
            v, f = cand, fc
            step = min(step * GROW, MAX_STEP)
        else:
            step *= SHRINK
        if step < step_tol:
            converged = True
            break
    return v, f, it, converged
