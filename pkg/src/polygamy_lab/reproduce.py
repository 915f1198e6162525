"""Reference values for the worked examples and residual curves.

Each reproduction computes the reference quantities next to closed forms
and reports the absolute difference against a per-quantity tolerance.
Closed-form paths use 1e-6; paths through the roof optimizer use 5e-3
(entanglement of assistance) or 1e-2 (SCRENoA).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .assistance import eoa, screnoa, tau_a, tau_a_gs_analytic
from .linalg import reduced_state
from .measures import entanglement_entropy, negativity_pure
from .polygamy import check_tau_tripartite, eoa_profile, report_from_profile, screnoa_profile, tau_profile
from .roof import RoofConfig
from .states import GenSchmidtParams, gen_schmidt_3q, w_state

CLOSED_TOL = 1e-6
EOA_TOL = 5e-3
SCRENOA_TOL = 1e-2
FIG_GRID_STEP = 0.1

S6 = 1 / math.sqrt(6)
EX2_PARAMS = GenSchmidtParams((0.5, 0.5, S6, S6, S6))
LOG3 = math.log2(3)


def y1(alpha):
    return 2 ** (alpha / 2) * (math.sqrt(3) / 3) ** alpha


def y2(beta):
    return 2**beta * (2 / 3) ** beta - (LOG3 - 2 / 3) ** beta


def y3(beta):
    return (2**beta + (2**beta - 1) ** 2) * 0.25**beta - 0.75**beta


@dataclass
class Row:
    quantity: str
    reference: float
    computed: float
    tolerance: float
    nonnegative: bool = False

    @property
    def diff(self) -> float:
        return abs(self.computed - self.reference)

    @property
    def ok(self) -> bool:
        if not self.diff <= self.tolerance:
            return False
        return not (self.nonnegative and self.computed < -self.tolerance)


@dataclass
class Table:
    example: str
    rows: list[Row] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, quantity, reference, computed, tolerance, nonnegative=False) -> None:
        self.rows.append(Row(quantity, float(reference), float(computed), tolerance, nonnegative))

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def failures(self) -> list[Row]:
        return [r for r in self.rows if not r.ok]

    def render(self) -> str:
        width = max(len("quantity"), *(len(r.quantity) for r in self.rows))
        head = f"{'quantity':<{width}}  {'reference':>15}  {'computed':>15}  {'abs diff':>10}  {'tol':>8}  ok"
        lines = [f"# {self.example}", head, "-" * len(head)]
        for r in self.rows:
            lines.append(
                f"{r.quantity:<{width}}  {r.reference:>15.10f}  {r.computed:>15.10f}  "
                f"{r.diff:>10.3e}  {r.tolerance:>8.1e}  {'yes' if r.ok else 'NO'}"
            )
        lines += [f"note: {n}" for n in self.notes]
        passed = sum(r.ok for r in self.rows)
        lines.append(f"{self.example}: {passed}/{len(self.rows)} within tolerance")
        return "\n".join(lines)


def fig_grid(lo: float) -> np.ndarray:
    return lo + FIG_GRID_STEP * np.arange(int(round((6.0 - lo) / FIG_GRID_STEP)) + 1)


def _ex1(config):
    t = Table("ex1")
    draws = [
        ("saturated", GenSchmidtParams.from_angles(0.7, 0.4, math.pi / 2, 0.0, phi=0.3)),
        ("generic", GenSchmidtParams.from_angles(0.5, 0.6, 0.8, 0.9, phi=1.1)),
        ("l3>l2", GenSchmidtParams.from_angles(0.9, 0.3, 1.2, 0.2)),
    ]
    for name, p in draws:
        psi = gen_schmidt_3q(p)
        prof = tau_profile(psi)
        t.add(f"{name} tau_a(A|BC)", tau_a_gs_analytic(p.lambdas, "A|BC"), prof.whole, CLOSED_TOL)
        t.add(f"{name} tau_a(AB)", tau_a_gs_analytic(p.lambdas, "AB"), prof.values[0], CLOSED_TOL)
        t.add(f"{name} tau_a(AC)", tau_a_gs_analytic(p.lambdas, "AC"), prof.values[1], CLOSED_TOL)
    rep = check_tau_tripartite(gen_schmidt_3q(draws[0][1]), 2.0)
    t.add("saturated y(alpha=2)", 0.0, rep.residual, CLOSED_TOL)
    t.notes.append("pair labels follow the amplitudes: |110> couples A with B, |101> couples A with C")
    return t


def _ex2(config):
    t = Table("ex2")
    psi = gen_schmidt_3q(EX2_PARAMS)
    prof = tau_profile(psi)
    t.add("tau_a(A|BC)", math.sqrt(2) / 2, prof.whole, CLOSED_TOL)
    t.add("tau_a(AB)", math.sqrt(3) / 3, prof.values[0], CLOSED_TOL)
    t.add("tau_a(AC)", math.sqrt(3) / 3, prof.values[1], CLOSED_TOL)
    t.add("y(alpha=2) = 2/3 - 1/2", 1 / 6, report_from_profile(prof, 2.0).residual, CLOSED_TOL)
    return t


def _ex3(config):
    t = Table("ex3")
    psi = w_state(3)
    t.add("E(A|BC) = S(rho_A)", LOG3 - 2 / 3, entanglement_entropy(psi), 1e-9)
    t.add("E_a(AB)", 2 / 3, eoa(reduced_state(psi, [0, 1]), config), EOA_TOL)
    t.add("E_a(AC)", 2 / 3, eoa(reduced_state(psi, [0, 2]), config), EOA_TOL)
    prof = eoa_profile(psi, config)
    t.add("y(beta=1)", y2(1.0), report_from_profile(prof, 1.0).residual, EOA_TOL)
    return t


def _ex4(config):
    t = Table("ex4")
    psi = w_state(4)
    t.add("N_sc^a(A|BCD)", 0.75, negativity_pure(psi) ** 2, 1e-9)
    for j, name in ((1, "AB"), (2, "AC"), (3, "AD")):
        t.add(f"N_sc^a({name})", 0.25, screnoa(reduced_state(psi, [0, j]), config), SCRENOA_TOL)
    prof = screnoa_profile(psi, config)
    t.add("y(beta=1)", 0.0, report_from_profile(prof, 1.0).residual, SCRENOA_TOL)
    return t


def _curve(name, profile, lo, closed, tol, symbol):
    t = Table(name)
    for x in fig_grid(lo):
        r = report_from_profile(profile, float(x))
        t.add(f"y({symbol}={x:.1f})", closed(x), r.residual, tol, nonnegative=True)
    return t


def _fig1(config):
    t = _curve("fig1", tau_profile(gen_schmidt_3q(EX2_PARAMS)), 2.0, y1, CLOSED_TOL, "alpha")
    t.notes.append("reference curve is 2^(a/2) (sqrt(3)/3)^a; the computed residual also "
                   "subtracts tau_a(A|BC)^a = (sqrt(2)/2)^a")
    return t


def _fig2(config):
    return _curve("fig2", eoa_profile(w_state(3), config), 1.0, y2, EOA_TOL, "beta")


def _fig3(config):
    return _curve("fig3", screnoa_profile(w_state(4), config), 1.0, y3, SCRENOA_TOL, "beta")


REPRODUCTIONS = {
    "ex1": _ex1,
    "ex2": _ex2,
    "ex3": _ex3,
    "ex4": _ex4,
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
}


def run_reproduction(example: str, config: RoofConfig | None = None) -> Table:
    return REPRODUCTIONS[example](config or RoofConfig())
