"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

The numba column is blank when numba is missing or FRACSOLVE_NO_NUMBA=1.
A whole diffusion-wave solve is timed at the end with the active backend.
"""

import argparse
import timeit

import numpy as np

from fracsolve import _kernels as k
from fracsolve.cqtime import UniformTimeGrid
from fracsolve.femcore import UniformMesh1D
from fracsolve.harness import run_single
from fracsolve.manufactured import ManufacturedCase
from fracsolve.stepper import SolverConfig


def cases():
    rng = np.random.default_rng(0)
    states = rng.standard_normal((2001, 511))
    weights = rng.standard_normal(2001)
    fq = rng.standard_normal((4096, 8))
    basis = rng.random((8, 2))
    wq = rng.random(8)
    z = np.linspace(-2.0, 5.0, 2000)
    return [
        ("cq_weights N=100000", "cq_weights", (0.7, 1e-3, 100_000)),
        ("history_sum n=2000 dof=511", "history_sum", (weights, states, 2000)),
        ("fourth_difference n=4095", "fourth_difference", (0.25, 4095)),
        ("scatter_load m=4096", "scatter_load", (fq, basis, wq, 4097)),
        ("ml_series 2000 points", "ml_series", (0.6, 1.0, z, 4000)),
    ]


def best(fn, args, repeat):
    fn(*args)  # warm-up (JIT compile / cache load)
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    opts = parser.parse_args()

    print(f"active backend: {k.BACKEND}")
    print(f"{'kernel':32s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speed-up':>9s}")
    for label, name, args in cases():
        t_np = best(getattr(k, f"{name}_numpy"), args, opts.repeat)
        jit = getattr(k, f"{name}_numba")
        if jit is None:
            print(f"{label:32s} {1e3 * t_np:12.3f} {'':>12s} {'':>9s}")
            continue
        t_nb = best(jit, args, opts.repeat)
        print(f"{label:32s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:8.1f}x")

    case = ManufacturedCase("b", 1.5, 0.75)
    cfg = SolverConfig(1.5, 0.75, UniformTimeGrid.from_end(0.1, 1 / 400), UniformMesh1D(1024))
    run_single(case, cfg)
    t = min(timeit.repeat(lambda: run_single(case, cfg), number=1, repeat=max(1, opts.repeat // 2)))
    print(f"\nfull solve case (b), alpha=1.5, m=1024, 40 steps: {t:.3f} s ({k.BACKEND})")


if __name__ == "__main__":
    main()
