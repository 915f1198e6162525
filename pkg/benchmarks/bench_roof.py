"""Compare the compiled roof-search kernel with the NumPy fallback.

Usage::

    python benchmarks/bench_roof.py [--restarts 8] [--max-iters 400] [--repeat 3]

Both backends run the same restarts from the same seeds with one worker
thread, so the values agree and the timings compare the kernels alone.
"""

import argparse
import os
import time

os.environ.setdefault("POLYGAMY_LAB_THREADS", "1")

from polygamy_lab import _backend  # noqa: E402
from polygamy_lab.linalg import reduced_state  # noqa: E402
from polygamy_lab.roof import PureFunctional, RoofConfig, roof_optimize  # noqa: E402
from polygamy_lab.states import random_mixed, w_state  # noqa: E402


def cases():
    yield "W3 marginal, entropy", reduced_state(w_state(3), [0, 1]), "entropy"
    yield "W4 marginal, negativity", reduced_state(w_state(4), [0, 1]), "negativity"
    yield "rank-3 2x3, concurrence", random_mixed((2, 3), 3, seed=1), "concurrence"
    yield "rank-4 3x3, entropy", random_mixed((3, 3), 4, seed=2), "entropy"


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--restarts", type=int, default=8)
    ap.add_argument("--max-iters", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if "cython" not in _backend.KERNELS:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    cfg = RoofConfig(direction="maximize", restarts=args.restarts, max_iters=args.max_iters)

    print(f"{'case':<26} {'cython s':>10} {'python s':>10} {'speedup':>8} {'|dv|':>9}")
    for name, rho, kind in cases():
        f = PureFunctional(kind, rho.layout.dims)
        t_cy, r_cy = best_time(lambda: roof_optimize(rho, f, cfg, backend="cython"), args.repeat)
        t_py, r_py = best_time(lambda: roof_optimize(rho, f, cfg, backend="python"), args.repeat)
        print(f"{name:<26} {t_cy:>10.4f} {t_py:>10.4f} {t_py / t_cy:>7.1f}x {abs(r_cy.value - r_py.value):>9.1e}")


if __name__ == "__main__":
    main()
