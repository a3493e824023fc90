"""Time the compiled and pure-Python eigensolver and Cholesky kernels.

Usage::

    python benchmarks/bench_backends.py [--sizes 10,30,60,100] [--repeat 5]

Sizes cover filter problems (n channels) and PCA Gram matrices (N trials).
LAPACK via numpy is listed as a reference point.
"""
import argparse
import importlib
import timeit

import numpy as np

from robcsp import _pycore


def spd(n, seed=0):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n))
    return M @ M.T + n * np.eye(n)


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 1000:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="10,30,60,100")
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    impls = {"python": _pycore}
    try:
        impls["cython"] = importlib.import_module("robcsp._core")
    except ImportError:
        print("compiled extension not built; timing the fallback only")

    header = f"{'kernel':<10}{'n':>6}" + "".join(f"{name:>14}" for name in impls) + f"{'numpy':>14}{'speedup':>10}"
    print(header)
    for n in (int(s) for s in args.sizes.split(",")):
        S = spd(n)
        rows = {
            "jacobi": ({k: (lambda m=m: m.jacobi_eigh(S)) for k, m in impls.items()}, lambda: np.linalg.eigh(S)),
            "cholesky": (
                {k: (lambda m=m: m.cholesky(S, 1e-13)) for k, m in impls.items()},
                lambda: np.linalg.cholesky(S),
            ),
        }
        for kernel, (fns, ref) in rows.items():
            times = {k: best_of(fn, args.repeat) for k, fn in fns.items()}
            t_ref = best_of(ref, args.repeat)
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            cells = "".join(f"{times[k] * 1e3:>12.3f}ms" for k in impls)
            print(f"{kernel:<10}{n:>6}{cells}{t_ref * 1e3:>12.3f}ms{speed:>9.1f}x")


if __name__ == "__main__":
    main()
