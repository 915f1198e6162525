"""Command-line interface.

Exit codes: 0 ok, 1 bad data, 2 usage error, 3 an inequality (or a
reference value) failed beyond tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import _backend
from .assistance import concurrence_of_assistance, eoa_result, screnoa_result, tau_a
from .errors import PolygamyLabError
from .linalg import StateVector, haar_random_pure, partial_trace, reduced_state
from .measures import (
    Bipartition,
    bipartite_view,
    concurrence_pure,
    entanglement_entropy,
    negativity,
    negativity_pure,
    wootters_concurrence_2q,
)
from .polygamy import (
    ckw_reports,
    check_tau_sum,
    eoa_profile,
    lemma1_report,
    report_from_profile,
    screnoa_profile,
    tau_profile,
)
from .reproduce import REPRODUCTIONS, run_reproduction
from .roof import RoofConfig, roof_measure
from .statefile import StateFileError, dumps_state, load_state, save_state
from .states import GenSchmidtParams, gen_schmidt_3q, ghz_state, product_state, random_mixed, w_state

EXIT_OK, EXIT_DATA, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3

MEASURES = ("concurrence", "ca", "tau_a", "entropy", "eoa", "negativity", "scren", "screnoa", "wootters")
PROFILE_THEOREMS = {"t1": "tau", "t2": "tau", "t3": "tau", "t4": "eoa", "t5": "eoa",
                    "t6": "screnoa", "t7": "screnoa"}
THEOREMS = ("lemma1", *PROFILE_THEOREMS, "ckw", "dual-ckw", "tau-sum")
SWEEP_HEADER = ["exponent", "lhs", "rhs", "residual", "precondition_met"]


class UsageError(PolygamyLabError):
    pass


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(record, out=None) -> None:
    print(json.dumps(_jsonable(record), indent=2), file=out or sys.stdout)


def _config(args) -> RoofConfig:
    kw = {}
    if getattr(args, "restarts", None) is not None:
        kw["restarts"] = args.restarts
    if getattr(args, "max_iters", None) is not None:
        kw["max_iters"] = args.max_iters
    if getattr(args, "seed", None) is not None:
        kw["seed"] = args.seed
    try:
        return RoofConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---- measure -------------------------------------------------------------


def _restrict(state, cut: Bipartition):
    """Trace out subsystems the cut does not name and relabel the cut."""
    n = state.layout.n
    if max(cut.subsystems) >= n:
        raise StateFileError(f"cut {cut} names a subsystem beyond the {n} in the state")
    keep = list(cut.subsystems)
    if keep == list(range(n)):
        return state, cut
    if isinstance(state, StateVector):
        state = reduced_state(state, keep)
    else:
        state = partial_trace(state, keep)
    pos = {k: i for i, k in enumerate(keep)}
    return state, Bipartition([pos[i] for i in cut.side_a], [pos[i] for i in cut.side_b])


def _roof_record(res, squared: bool = False) -> dict:
    return {
        "value": res.value**2 if squared else res.value,
        "method": "roof",
        "converged": res.converged,
        "restarts": res.restarts_used,
        "best_restart": res.best_restart,
        "best_restart_seed": res.best_restart_seed,
        "iterations": res.iterations,
        "ensemble_size": len(res.ensemble),
        "backend": res.backend,
    }


def measure_state(state, name: str, cut: Bipartition, config: RoofConfig) -> dict:
    state, cut = _restrict(state, cut)
    pure = isinstance(state, StateVector)
    rho = state if not pure else None

    def roof(kind, direction, squared=False):
        dm = state.projector() if pure else state
        return _roof_record(roof_measure(dm, kind, cut, config.with_direction(direction)), squared)

    closed = lambda v: {"value": float(v), "method": "closed-form"}  # noqa: E731
    if name == "concurrence":
        return closed(concurrence_pure(state, cut)) if pure else roof("concurrence", "minimize")
    if name == "ca":
        if pure:
            return closed(concurrence_pure(state, cut))
        view = bipartite_view(rho, cut)
        if view.layout.dims == (2, 2):
            return closed(concurrence_of_assistance(view))
        return roof("concurrence", "maximize")
    if name == "tau_a":
        if pure:
            da, db = cut.dims(state.layout)
            order = list(cut.side_a + cut.side_b)
            amps = np.transpose(state.tensor(), order).ravel()
            return closed(tau_a(StateVector(amps, (da, db))))
        return closed(tau_a(bipartite_view(rho, cut)))
    if name == "entropy":
        if not pure:
            raise StateFileError("entropy of entanglement needs a pure state across the cut (try eoa)")
        return closed(entanglement_entropy(state, cut))
    if name == "eoa":
        if pure:
            return closed(entanglement_entropy(state, cut))
        return _roof_record(eoa_result(rho, config, cut))
    if name == "negativity":
        return closed(negativity_pure(state, cut) if pure else negativity(rho, cut))
    if name in ("scren", "screnoa"):
        if pure:
            return closed(negativity_pure(state, cut) ** 2)
        if name == "screnoa":
            return _roof_record(screnoa_result(rho, config, cut), squared=True)
        return roof("negativity", "minimize", squared=True)
    if name == "wootters":
        view = bipartite_view(state.projector() if pure else rho, cut)
        if view.layout.dims != (2, 2):
            raise StateFileError(f"wootters needs a two-qubit state, cut gives {view.layout.dims}")
        return closed(wootters_concurrence_2q(view))
    raise UsageError(f"unknown measure {name!r}")


def cmd_measure(args) -> int:
    if args.measure not in MEASURES:
        raise UsageError(f"unknown measure {args.measure!r}; choose from {', '.join(MEASURES)}")
    try:
        cut = Bipartition.parse(args.cut) if args.cut else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    config = _config(args)
    state = load_state(args.state)
    cut = cut or Bipartition.first(state.layout.n)
    record = {"measure": args.measure, "cut": args.cut or str(cut), "layout": list(state.layout.dims)}
    record.update(measure_state(state, args.measure, cut, config))
    _emit(record)
    return EXIT_OK


# ---- verify / sweep -------------------------------------------------------


def _exponent_floor(theorem: str) -> float:
    kind = PROFILE_THEOREMS.get(theorem)
    if kind == "tau":
        return 2.0
    return 1.0


def _check_theorem(theorem: str) -> None:
    if theorem not in THEOREMS:
        raise UsageError(f"unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}")


def _check_exponent(theorem: str, x: float) -> None:
    lo = _exponent_floor(theorem)
    if not x >= lo:
        raise UsageError(f"{theorem} needs an exponent >= {lo:g}, got {x}")


def _pure(state, theorem: str) -> StateVector:
    if not isinstance(state, StateVector):
        raise StateFileError(f"{theorem} is stated for pure states; the file holds a mixed state")
    return state


def _profile(state, theorem: str, config: RoofConfig):
    kind = PROFILE_THEOREMS[theorem]
    if kind == "tau":
        psi = _pure(state, theorem)
        if theorem == "t1" and psi.layout.n != 3:
            raise StateFileError(f"t1 needs a three-party state, got {psi.layout.n} subsystems")
        return tau_profile(psi)
    if kind == "eoa":
        return eoa_profile(state, config)
    return screnoa_profile(state, config)


def _fixed_report(state, theorem: str):
    if theorem in ("ckw", "dual-ckw"):
        mono, dual = ckw_reports(_pure(state, theorem))
        return mono if theorem == "ckw" else dual
    return check_tau_sum(_pure(state, theorem))


def _exponent_arg(args, theorem: str) -> float:
    x = args.exponent
    if x is None:
        x = _exponent_floor(theorem)
    _check_exponent(theorem, x)
    return float(x)


def cmd_verify(args) -> int:
    _check_theorem(args.theorem)
    if args.theorem == "lemma1":
        report = lemma1_report(_exponent_arg(args, "lemma1"))
    elif args.theorem in PROFILE_THEOREMS:
        x = _exponent_arg(args, args.theorem)
        state = _load_required(args)
        report = report_from_profile(_profile(state, args.theorem, _config(args)), x)
    else:
        report = _fixed_report(_load_required(args), args.theorem)
    record = {"requested": args.theorem}
    record.update(report.to_record())
    _emit(record)
    return EXIT_VIOLATION if report.violated else EXIT_OK


def parse_range(spec: str) -> np.ndarray:
    try:
        lo, hi, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise UsageError(f"range {spec!r} must look like lo:hi:step") from None
    if not (step > 0 and hi >= lo and math.isfinite(hi)):
        raise UsageError(f"range {spec!r} needs step > 0 and hi >= lo")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def _load_required(args):
    if not args.state:
        raise UsageError("--state is required for this theorem")
    return load_state(args.state)


def sweep_rows(state, theorem: str, grid, config: RoofConfig | None = None) -> list[list]:
    if theorem in ("ckw", "dual-ckw", "tau-sum"):
        raise UsageError(f"{theorem} has no exponent to sweep")
    for x in grid:
        _check_exponent(theorem, x)
    if theorem == "lemma1":
        reports = [lemma1_report(x) for x in grid]
    else:
        profile = _profile(state, theorem, config or RoofConfig())
        reports = [report_from_profile(profile, x) for x in grid]
    return [[r.exponent, r.lhs, r.rhs, r.residual, r.precondition_met] for r in reports]


def format_sweep(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for x, lhs, rhs, res, met in rows:
        w.writerow([f"{x:.12g}", f"{lhs:.12g}", f"{rhs:.12g}", f"{res:.12g}", str(bool(met)).lower()])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    _check_theorem(args.theorem)
    grid = parse_range(args.range)
    state = None if args.theorem == "lemma1" else _load_required(args)
    text = format_sweep(sweep_rows(state, args.theorem, grid, _config(args)))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---- fuzz -----------------------------------------------------------------


def _parse_list(spec: str, conv, what: str) -> list:
    try:
        return [conv(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse {what} {spec!r}") from None


def fuzz_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _fuzz_one(index: int, seed: int, layout, theorems, exponents, config):
    psi = haar_random_pure(layout, fuzz_seed(seed, index))
    profiles = {}
    out = []
    for th in theorems:
        if th in PROFILE_THEOREMS:
            key = PROFILE_THEOREMS[th]
            if key not in profiles:
                profiles[key] = _profile(psi, th, config)
            for x in exponents:
                if x >= _exponent_floor(th):
                    out.append((th, x, report_from_profile(profiles[key], x)))
        elif th == "lemma1":
            continue
        else:
            out.append((th, None, _fixed_report(psi, th)))
    return psi, out


def cmd_fuzz(args) -> int:
    if args.count < 1:
        raise UsageError(f"count must be >= 1, got {args.count}")
    layout = _parse_list(args.layout, int, "layout")
    theorems = _parse_list(args.theorems, str, "theorem list")
    for th in theorems:
        _check_theorem(th)
    exponents = _parse_list(args.alpha, float, "exponent list")
    if not exponents or min(exponents) < 1:
        raise UsageError("exponents must be >= 1")
    try:
        haar_random_pure(layout, 0)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    config = _config(args)

    def run(i):
        return _fuzz_one(i, args.seed, layout, theorems, exponents, config)

    workers = min(_backend.worker_count(), args.count, 8)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(args.count)))
    else:
        results = [run(i) for i in range(args.count)]

    counts: dict[str, dict[str, int]] = {}
    worst: dict[str, float] = {}
    violations = []
    out_dir = Path(args.out or "fuzz-violations")
    for i, (psi, reports) in enumerate(results):
        for th, x, r in reports:
            key = th if x is None else f"{th}@{x:g}"
            c = counts.setdefault(key, {"pass": 0, "precondition_unsatisfied": 0, "violation": 0})
            if not r.precondition_met:
                c["precondition_unsatisfied"] += 1
                continue
            worst[key] = min(worst.get(key, math.inf), r.residual)
            if r.holds:
                c["pass"] += 1
                continue
            c["violation"] += 1
            out_dir.mkdir(parents=True, exist_ok=True)
            path = save_state(psi, out_dir / f"violation-{args.seed}-{i:05d}.json")
            violations.append({"index": i, "theorem": th, "exponent": x,
                               "residual": r.residual, "state_file": str(path)})
    summary = {
        "count": args.count,
        "layout": layout,
        "seed": args.seed,
        "results": {k: dict(v, min_residual=worst.get(k)) for k, v in counts.items()},
        "violations": violations,
    }
    _emit(summary)
    return EXIT_VIOLATION if violations else EXIT_OK


# ---- reproduce / make-state ----------------------------------------------


def cmd_reproduce(args) -> int:
    if args.example not in REPRODUCTIONS:
        raise UsageError(f"unknown example {args.example!r}; choose from {', '.join(REPRODUCTIONS)}")
    table = run_reproduction(args.example, _config(args))
    print(table.render())
    return EXIT_OK if table.ok else EXIT_VIOLATION


def cmd_make_state(args) -> int:
    fam, params = args.family, args.params
    try:
        if fam == "w":
            state = w_state(int(params[0]))
        elif fam == "ghz":
            state = ghz_state(int(params[0]))
        elif fam == "product":
            state = product_state([int(p) for p in params])
        elif fam == "gs":
            lam = [float(p) for p in params[:5]]
            phi = float(params[5]) if len(params) > 5 else 0.0
            state = gen_schmidt_3q(GenSchmidtParams(tuple(lam), phi))
        elif fam == "haar":
            state = haar_random_pure([int(p) for p in params], args.seed or 0)
        elif fam == "mixed":
            *dims, rank = (int(p) for p in params)
            state = random_mixed(dims, rank, args.seed or 0)
        else:
            raise UsageError(f"unknown family {fam!r}")
    except (IndexError, ValueError) as exc:
        raise UsageError(f"bad parameters for {fam}: {exc}") from None
    if args.out:
        save_state(state, args.out)
    else:
        sys.stdout.write(dumps_state(state))
    return EXIT_OK


# ---- parser ---------------------------------------------------------------


def _add_roof_flags(p) -> None:
    p.add_argument("--restarts", type=int, help="optimizer restarts (default 32)")
    p.add_argument("--max-iters", type=int, help="iterations per restart (default 400)")
    p.add_argument("--seed", type=int, help="optimizer seed (default 0)")


def _add_exponent(p) -> None:
    p.add_argument("--alpha", "--beta", dest="exponent", type=float,
                   help="exponent (alpha for t1-t3, beta for t4-t7, x for lemma1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polygamy-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="evaluate one measure on a state file")
    p.add_argument("--state", required=True)
    p.add_argument("--measure", required=True, help=", ".join(MEASURES))
    p.add_argument("--cut", help="bipartition such as 'A|BC' or '0|1,2'; unnamed subsystems are traced out")
    _add_roof_flags(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("verify", help="check one inequality and print the report")
    p.add_argument("--state")
    p.add_argument("--theorem", required=True, help=", ".join(THEOREMS))
    _add_exponent(p)
    _add_roof_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="residual against exponent as CSV")
    p.add_argument("--state")
    p.add_argument("--theorem", required=True)
    p.add_argument("--range", required=True, help="lo:hi:step, inclusive")
    p.add_argument("--out")
    _add_roof_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fuzz", help="run checks on Haar-random pure states")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--layout", default="2,2,2")
    p.add_argument("--theorems", default="t1,ckw,dual-ckw")
    p.add_argument("--alpha", "--beta", dest="alpha", default="2", help="comma-separated exponents")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int)
    p.add_argument("--max-iters", type=int)
    p.add_argument("--out", help="directory for violation state files")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("reproduce", help="compare against the reference values")
    p.add_argument("example", help=", ".join(REPRODUCTIONS))
    _add_roof_flags(p)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("make-state", help="write a named state as a state file")
    p.add_argument("family", help="w N | ghz N | product D... | gs l0 l1 l2 l3 l4 [phi] | haar D... | mixed D... RANK")
    p.add_argument("params", nargs="*")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_make_state)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PolygamyLabError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
