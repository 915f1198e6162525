"""Numerical checks of the power-law polygamy inequalities.

Every check reduces to the same shape: a whole-system value ``E(A|B_0..B_{N-1})``,
pairwise values ``E(rho_{AB_j})``, an exponent ``k`` and a weight
``w = 2^{k/2} - 1`` (tau_a) or ``w = 2^k - 1`` (E_a, SCRENoA). The ordering
of the pairwise values picks the weight pattern:

* ascending (each value at most the sum of its successors):
  ``sum_j w^j v_j^k``;
* split at ``m``: ascending through ``m`` and descending after it,
  ``sum_{j<=m} w^j v_j^k + w^{m+2} sum_{m<j<N-1} v_j^k + w^{m+1} v_{N-1}^k``.

With two parties on the B side the larger value takes weight ``w``, which
is the tripartite form. The residual is ``rhs - lhs``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .assistance import concurrence_of_assistance, eoa, screnoa, tau_a
from .errors import ArgumentError, DomainError
from .linalg import DensityOperator, StateVector, reduced_state, partial_trace
from .measures import (
    Bipartition,
    concurrence_pure,
    entanglement_entropy,
    negativity_pure,
    wootters_concurrence_2q,
)
from .roof import RoofConfig

CLOSED_FORM_TOL = 1e-9
ROOF_TOL = 1e-9 + 5e-3

ASCENDING = "all-ascending"
SPLIT = "split"
UNSATISFIED = "unsatisfied"


def lemma1_gap(x: float, t: float) -> float:
    """``1 + (2^x - 1) t^x - (1 + t)^x``; nonnegative for ``x, t >= 1``."""
    if not (x >= 1 and t >= 1):
        raise DomainError(f"the inequality is only claimed for x >= 1 and t >= 1, got x={x}, t={t}")
    if x == 1 or t == 1:
        # both sides agree exactly; skip the rounding of the power terms
        return 0.0
    return float(1.0 + (2.0**x - 1.0) * t**x - (1.0 + t) ** x)


@dataclass(frozen=True)
class OrderingClassification:
    values: tuple[float, ...]
    condition_kind: str
    split_m: int | None = None
    squared: bool = False
    tolerance: float = 0.0

    @property
    def satisfied(self) -> bool:
        return self.condition_kind != UNSATISFIED


def classify_ordering(values, squared: bool = False, tol: float = 0.0) -> OrderingClassification:
    """Classify the ordering hypothesis on pairwise values (``B_0`` first).

    Comparisons are made on squares when ``squared`` is set. Each comparison
    passes if it holds within ``tol``. Returns ascending if every prefix
    condition holds, else the smallest valid split ``m`` in ``[1, N-3]``,
    else unsatisfied.
    """
    v = tuple(float(x) for x in values)
    if len(v) < 2:
        raise ArgumentError(f"need at least two values, got {len(v)}")
    if any(x < 0 or math.isnan(x) for x in v):
        raise ArgumentError(f"values must be nonnegative, got {v}")
    q = np.square(v) if squared else np.array(v)
    n = len(q)
    tail = np.concatenate([np.cumsum(q[::-1])[::-1][1:], [0.0]])
    up = [bool(q[i] <= tail[i] + tol) for i in range(n - 1)]
    down = [bool(q[i] >= tail[i] - tol) for i in range(n - 1)]
    make = lambda kind, m=None: OrderingClassification(v, kind, m, squared, tol)  # noqa: E731
    if all(up):
        return make(ASCENDING)
    for m in range(1, n - 2):
        if all(up[: m + 1]) and all(down[m + 1 :]):
            return make(SPLIT, m)
    return make(UNSATISFIED)


def split_rhs(powered, weight: float, m: int) -> float:
    """Weighted sum for a split at ``m``; ``m = N-2`` gives the ascending form."""
    p = np.asarray(powered, dtype=float)
    n = p.size
    if not 0 <= m <= n - 2:
        raise ArgumentError(f"split index {m} out of range for {n} values")
    head = sum(weight**j * p[j] for j in range(m + 1))
    middle = weight ** (m + 2) * float(np.sum(p[m + 1 : n - 1]))
    return float(head + middle + weight ** (m + 1) * p[n - 1])


def ascending_rhs(powered, weight: float) -> float:
    return split_rhs(powered, weight, len(powered) - 2)


@dataclass(frozen=True)
class MeasureProfile:
    """Exponent-independent inputs of a check.

    ``kind`` is ``tau``, ``eoa`` or ``screnoa``; ``whole`` is the value
    across ``A | B_0..B_{N-1}`` and ``values`` the pairwise ones.
    """

    kind: str
    whole: float
    values: tuple[float, ...]
    tolerance: float
    notes: tuple[str, ...] = ()

    def weight(self, exponent: float) -> float:
        if self.kind == "tau":
            return 2.0 ** (exponent / 2.0) - 1.0
        return 2.0**exponent - 1.0

    @property
    def min_exponent(self) -> float:
        return 2.0 if self.kind == "tau" else 1.0


@dataclass(frozen=True)
class PolygamyReport:
    theorem_id: str
    exponent: float
    lhs: float
    rhs: float
    residual: float
    classification: OrderingClassification | None
    precondition_met: bool
    holds: bool
    tolerance: float
    branch: str | None = None
    whole: float = float("nan")
    values: tuple[float, ...] = ()
    notes: tuple[str, ...] = field(default=())

    @property
    def violated(self) -> bool:
        """A met precondition with the inequality failing beyond tolerance."""
        return self.precondition_met and not self.holds

    def to_record(self) -> dict:
        c = self.classification
        return {
            "theorem": self.theorem_id,
            "exponent": self.exponent,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "precondition_met": self.precondition_met,
            "holds": self.holds,
            "tolerance": self.tolerance,
            "branch": self.branch,
            "ordering": None if c is None else c.condition_kind,
            "split_m": None if c is None else c.split_m,
            "whole": self.whole,
            "values": list(self.values),
            "notes": list(self.notes),
        }


_THEOREMS = {
    "tau": {"pair": "t1", ASCENDING: "t3", SPLIT: "t2"},
    "eoa": {"pair": "t5", ASCENDING: "t5", SPLIT: "t4"},
    "screnoa": {"pair": "t7", ASCENDING: "t7", SPLIT: "t6"},
}


def _check_exponent(profile: MeasureProfile, exponent: float) -> None:
    if not exponent >= profile.min_exponent:
        name = "alpha" if profile.kind == "tau" else "beta"
        raise DomainError(f"{name} must be >= {profile.min_exponent:g}, got {exponent}")


def report_from_profile(profile: MeasureProfile, exponent: float) -> PolygamyReport:
    """Assemble the inequality for ``profile`` at ``exponent``."""
    _check_exponent(profile, exponent)
    tol = profile.tolerance
    w = profile.weight(exponent)
    v = np.asarray(profile.values, dtype=float)
    powered = v**exponent
    lhs = float(profile.whole**exponent)
    squared = profile.kind == "tau"
    ids = _THEOREMS[profile.kind]
    cls = classify_ordering(v, squared=squared, tol=tol)
    branch = None

    if v.size == 2:
        # the larger pairwise value carries the weight; ties take B_0
        if v[0] >= v[1]:
            rhs, branch = powered[1] + w * powered[0], "AB>=AC"
        else:
            rhs, branch = powered[0] + w * powered[1], "AB<AC"
        theorem, met = ids["pair"], True
    elif cls.condition_kind == ASCENDING:
        rhs, theorem, met = ascending_rhs(powered, w), ids[ASCENDING], True
    elif cls.condition_kind == SPLIT:
        rhs, theorem, met = split_rhs(powered, w, cls.split_m), ids[SPLIT], True
    else:
        rhs, theorem, met = float("nan"), ids[SPLIT], False

    residual = float(rhs - lhs)
    holds = bool(met and residual >= -tol)
    return PolygamyReport(theorem, float(exponent), lhs, float(rhs), residual, cls, met, holds,
                          tol, branch, float(profile.whole), tuple(v.tolist()), profile.notes)


def _pure_parties(psi: StateVector, minimum: int = 3) -> int:
    if not isinstance(psi, StateVector):
        raise ArgumentError("this check needs a pure state")
    if psi.layout.n < minimum:
        raise ArgumentError(f"need at least {minimum} subsystems, got {psi.layout.n}")
    return psi.layout.n


def _whole_cut(n: int) -> Bipartition:
    return Bipartition.first(n)


def tau_profile(psi: StateVector) -> MeasureProfile:
    n = _pure_parties(psi)
    whole_view = StateVector(psi.amplitudes, (psi.layout.dims[0], psi.layout.total // psi.layout.dims[0]))
    values = tuple(tau_a(reduced_state(psi, [0, j])) for j in range(1, n))
    return MeasureProfile("tau", tau_a(whole_view), values, CLOSED_FORM_TOL)


def _marginals(state, n: int):
    for j in range(1, n):
        if isinstance(state, StateVector):
            yield reduced_state(state, [0, j])
        else:
            yield partial_trace(state, [0, j])


def _parties(state) -> int:
    if not isinstance(state, (StateVector, DensityOperator)):
        raise ArgumentError(f"expected a state, got {type(state).__name__}")
    if state.layout.n < 3:
        raise ArgumentError(f"need at least 3 subsystems, got {state.layout.n}")
    return state.layout.n


def eoa_profile(state, config: RoofConfig | None = None) -> MeasureProfile:
    n = _parties(state)
    if isinstance(state, StateVector):
        whole = entanglement_entropy(state, _whole_cut(n))
    else:
        whole = eoa(state, config, _whole_cut(n))
    values = tuple(eoa(rho, config) for rho in _marginals(state, n))
    return MeasureProfile("eoa", whole, values, ROOF_TOL)


def screnoa_profile(state, config: RoofConfig | None = None) -> MeasureProfile:
    n = _parties(state)
    if isinstance(state, StateVector):
        whole = negativity_pure(state, _whole_cut(n)) ** 2
    else:
        whole = screnoa(state, config, _whole_cut(n))
    values = tuple(screnoa(rho, config) for rho in _marginals(state, n))
    note = "ordering classified on SCRENoA values (the stated ascending hypothesis names E_a)"
    return MeasureProfile("screnoa", whole, values, ROOF_TOL, (note,))


def check_tau_tripartite(psi: StateVector, alpha: float) -> PolygamyReport:
    if _pure_parties(psi) != 3:
        raise ArgumentError(f"needs a three-party state, got {psi.layout.n} subsystems")
    if not alpha >= 2:
        raise DomainError(f"alpha must be >= 2, got {alpha}")
    return report_from_profile(tau_profile(psi), alpha)


def check_tau_multi(psi: StateVector, alpha: float) -> PolygamyReport:
    """Power-law polygamy of tau_a; three-party input reduces to the tripartite form."""
    if not alpha >= 2:
        raise DomainError(f"alpha must be >= 2, got {alpha}")
    return report_from_profile(tau_profile(psi), alpha)


def check_eoa_multi(rho, beta: float, config: RoofConfig | None = None) -> PolygamyReport:
    if not beta >= 1:
        raise DomainError(f"beta must be >= 1, got {beta}")
    return report_from_profile(eoa_profile(rho, config), beta)


def check_screnoa_multi(rho, beta: float, config: RoofConfig | None = None) -> PolygamyReport:
    if not beta >= 1:
        raise DomainError(f"beta must be >= 1, got {beta}")
    return report_from_profile(screnoa_profile(rho, config), beta)


def check_tau_sum(psi: StateVector) -> PolygamyReport:
    """``tau_a^2(A|rest) <= sum_j tau_a^2(rho_{AB_j})``, the unweighted bound."""
    p = tau_profile(psi)
    lhs = p.whole**2
    rhs = float(np.sum(np.square(p.values)))
    res = rhs - lhs
    return PolygamyReport("tau-sum", 2.0, lhs, rhs, res, None, True, res >= -p.tolerance,
                          p.tolerance, whole=p.whole, values=p.values)


def _qubit_pairs(psi: StateVector):
    if not isinstance(psi, StateVector):
        raise ArgumentError("this check needs a pure state")
    if any(d != 2 for d in psi.layout.dims):
        raise ArgumentError(f"every subsystem must be a qubit, layout is {psi.layout.dims}")
    if psi.layout.n < 2:
        raise ArgumentError("need at least two qubits")
    whole = concurrence_pure(psi, _whole_cut(psi.layout.n)) ** 2
    pairs = [reduced_state(psi, [0, j]) for j in range(1, psi.layout.n)]
    return whole, pairs


def ckw_check(psi: StateVector) -> tuple[float, float]:
    """``(C^2(A|rest) - sum C^2(AB_j), sum C_a^2(AB_j) - C^2(A|rest))``."""
    whole, pairs = _qubit_pairs(psi)
    c2 = sum(wootters_concurrence_2q(r) ** 2 for r in pairs)
    ca2 = sum(concurrence_of_assistance(r) ** 2 for r in pairs)
    return float(whole - c2), float(ca2 - whole)


def ckw_reports(psi: StateVector) -> tuple[PolygamyReport, PolygamyReport]:
    """Both inequalities as reports (``ckw`` then ``dual-ckw``)."""
    whole, pairs = _qubit_pairs(psi)
    c = tuple(wootters_concurrence_2q(r) for r in pairs)
    ca = tuple(concurrence_of_assistance(r) for r in pairs)
    tol = CLOSED_FORM_TOL
    mono_rhs = float(np.sum(np.square(c)))
    dual_rhs = float(np.sum(np.square(ca)))
    # monogamy reads sum <= whole; as rhs - lhs that is whole - sum
    mono = PolygamyReport("ckw", 2.0, mono_rhs, whole, whole - mono_rhs, None, True,
                          whole - mono_rhs >= -tol, tol, whole=math.sqrt(whole), values=c)
    dual = PolygamyReport("dual-ckw", 2.0, whole, dual_rhs, dual_rhs - whole, None, True,
                          dual_rhs - whole >= -tol, tol, whole=math.sqrt(whole), values=ca)
    return mono, dual


def lemma1_report(x: float, t_grid=None) -> PolygamyReport:
    """Worst case of the scalar lemma over ``t_grid`` (default ``[1, 50]``)."""
    if not x >= 1:
        raise DomainError(f"x must be >= 1, got {x}")
    ts = np.linspace(1.0, 50.0, 1001) if t_grid is None else np.asarray(t_grid, dtype=float)
    gaps = np.array([lemma1_gap(x, t) for t in ts])
    i = int(np.argmin(gaps))
    t = float(ts[i])
    lhs = (1.0 + t) ** x
    rhs = 1.0 + (2.0**x - 1.0) * t**x
    tol = 1e-12 * max(1.0, rhs)
    return PolygamyReport("lemma1", float(x), lhs, rhs, float(gaps[i]), None, True,
                          bool(gaps[i] >= -tol), tol, notes=(f"worst t = {t:.6g}",))
