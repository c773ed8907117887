"""Benchmark: compiled Godunov face-flux kernel vs the numpy fallback.

Runs the finite volume oracle on the traffic experiment at several grid sizes
and times the face-flux evaluation, which dominates stepping cost.  Also
verifies that both kernels return identical bits.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from twoflux import problems
from twoflux._kernels import COMPILED, _godunov_py

if COMPILED:
    from twoflux._kernels import _godunov_cy
else:
    _godunov_cy = None


def bench_case(delta, dx, repeats):
    prob = problems.experiment("traffic-kl-kr")
    gd, fd = prob.interpolants(delta)
    u0d = prob.initial_data(delta)

    from twoflux import godunov

    grid = godunov.make_grid(gd, fd, u0d, prob.u_left, prob.u_right,
                             prob.X, prob.T, dx)
    n_steps = godunov.step_count(prob.T, grid.dt)
    # scramble the row a little so faces are not all trivial
    rng = np.random.default_rng(0)
    U = grid.cells + 0.0
    U[2:-2] = np.clip(U[2:-2] + 0.01 * rng.standard_normal(U.size - 4), 0.0, 1.0)
    split = grid.split

    results = {}
    tabs = {"numpy": (_godunov_py.make_flux_table(gd.breakpoints, gd.values),
                      _godunov_py.make_flux_table(fd.breakpoints, fd.values),
                      _godunov_py.face_fluxes_pwl)}
    if _godunov_cy is not None:
        tabs["compiled"] = (_godunov_cy.make_flux_table(gd.breakpoints, gd.values),
                            _godunov_cy.make_flux_table(fd.breakpoints, fd.values),
                            _godunov_cy.face_fluxes_pwl)

    outputs = {}
    for name, (gt, ft, fn) in tabs.items():
        fn(U, split, gt, ft)  # warm up
        best = np.inf
        for _ in range(repeats):
            t0 = time.perf_counter()
            for _ in range(n_steps):
                h = fn(U, split, gt, ft)
            best = min(best, (time.perf_counter() - t0) / n_steps)
        results[name] = best
        outputs[name] = np.asarray(h)

    if len(outputs) == 2:
        same = np.array_equal(outputs["numpy"], outputs["compiled"])
    else:
        same = None
    return U.size, n_steps, results, same


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    print(f"compiled kernel available: {COMPILED}")
    print(f"{'cells':>8} {'K':>6} {'numpy us/step':>14} {'compiled us/step':>17} "
          f"{'speedup':>8}  identical")
    for delta, dx in [(2.0 ** -4, 2.0 ** -7), (2.0 ** -6, 2.0 ** -9),
                      (2.0 ** -8, 2.0 ** -11)]:
        cells, n_steps, res, same = bench_case(delta, dx, args.repeats)
        k = int(round(1.0 / delta)) + 1
        np_t = res["numpy"] * 1e6
        if "compiled" in res:
            cy_t = res["compiled"] * 1e6
            print(f"{cells:>8} {k:>6} {np_t:>14.1f} {cy_t:>17.1f} "
                  f"{np_t / cy_t:>8.2f}  {same}")
        else:
            print(f"{cells:>8} {k:>6} {np_t:>14.1f} {'-':>17} {'-':>8}  -")


if __name__ == "__main__":
    main()
