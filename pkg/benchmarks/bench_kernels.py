"""Time the numpy and numba variants of the grid likelihood and MLE refinement.

    python3 benchmarks/bench_kernels.py [--grid 37] [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from bdsest import _kernels
from bdsest.estimators import build_grid, likelihood_design
from bdsest.measurements import MeasurementPlan, sample_outcomes
from bdsest.states import BellDiagonalState


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--grid", type=int, default=37)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    pts = build_grid(args.grid).points
    state = BellDiagonalState((0.5, 0.2, 0.2, 0.1))
    cases = {
        "bell N=45": likelihood_design(sample_outcomes(state, MeasurementPlan("bell", 45), 0)),
        "mub N=45": likelihood_design(sample_outcomes(state, MeasurementPlan("mub", 45), 0)),
        "haar N=45": likelihood_design(sample_outcomes(state, MeasurementPlan("haar", 45), 0)),
    }
    start = np.array([0.4, 0.3, 0.2, 0.1])
    print(f"grid m={args.grid} ({len(pts)} points), best of {args.repeat}, milliseconds")
    print(f"{'case':<12}{'kernel':<10}{'numpy':>10}{'numba':>10}{'speedup':>10}")
    for label, (rows, counts) in cases.items():
        variants = {
            "grid": {"numpy": lambda: _kernels.loglik_grid(pts, rows, counts),
                     "numba": lambda: _kernels.loglik_grid_compiled(pts, rows, counts)},
            "refine": {name: (lambda name=name: (_kernels.set_backend(name),
                                                 _kernels.refine_mle(start, rows, counts)))
                       for name in ("numpy", "numba")},
        }
        for kernel, fns in variants.items():
            times = {}
            for name, fn in fns.items():
                fn()  # warm up (compilation)
                times[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3
            print(f"{label:<12}{kernel:<10}{times['numpy']:>10.3f}{times['numba']:>10.3f}"
                  f"{times['numpy'] / times['numba']:>9.1f}x")


if __name__ == "__main__":
    main()
