"""Compare the compiled and pure-Python tridiagonal kernels.

    python3 benchmarks/bench_kernels.py [--n 4001] [--levels 4] [--repeat 3]
"""
import time

import click
import numpy as np

from pdem_spectra import jacobi_es
from pdem_spectra.numerics import default_grid, discretize, kernels, lowest_eigenpairs


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


@click.command()
@click.option("--n", "n_points", default=4001, show_default=True, help="Grid points.")
@click.option("--levels", default=4, show_default=True)
@click.option("--repeat", default=3, show_default=True)
def main(n_points, levels, repeat):
    fam = jacobi_es(1.0, 1.2, 0.8)
    hmat = discretize(fam, default_grid(fam, n_points))
    off2 = hmat.offdiag**2
    rhs = np.random.default_rng(0).standard_normal(hmat.size)
    rows = []
    results = {}
    for name in sorted(kernels.BACKENDS):
        kern = kernels.get(name)
        t_count, _ = best_of(lambda: kern.sturm_count(hmat.diag, off2, 3.0, 1e-300), repeat)
        t_solve, _ = best_of(lambda: kern.solve_shifted(hmat.diag, hmat.offdiag, 2.0, rhs, 1e-300), repeat)
        t_eig, pairs = best_of(lambda: lowest_eigenpairs(hmat, levels, backend=name), repeat)
        results[name] = np.array([v for v, _ in pairs])
        rows.append((name, t_count, t_solve, t_eig))

    print(f"grid points: {hmat.size}, levels: {levels}")
    print(f"{'backend':<8} {'sturm_count':>12} {'solve':>12} {'eigenpairs':>12}")
    for name, a, b, c in rows:
        print(f"{name:<8} {a * 1e3:>10.3f}ms {b * 1e3:>10.3f}ms {c * 1e3:>10.1f}ms")
    if len(rows) == 2:
        (_, ca, cb, cc), (_, pa, pb, pc) = rows
        print(f"speedup  {pa / ca:>11.1f}x {pb / cb:>11.1f}x {pc / cc:>11.1f}x")
        diff = np.max(np.abs(results["cython"] - results["python"]))
        print(f"max eigenvalue difference between backends: {diff:.1e}")
    else:
        print("compiled kernels not built; only the pure-Python backend was timed")


if __name__ == "__main__":
    main()
