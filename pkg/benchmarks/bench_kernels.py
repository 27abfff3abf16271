"""Time the compiled and numpy kernel backends on the Monte-Carlo hot loops.

    python3 benchmarks/bench_kernels.py [--rows N] [--classes C] [--repeat R]
"""

import argparse
import time

import numpy as np

from logitsimplex import _kernels

ACTS = {"exp": _kernels.ACT_EXP, "normcdf": _kernels.ACT_NORMCDF, "sigmoid": _kernels.ACT_SIGMOID}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(y, h, a):
    C = y.shape[1]
    for name, code in ACTS.items():
        yield f"simplex_sums[{name}]", lambda m, code=code: m.simplex_sums(y, code, np.zeros(C))
        yield f"moment_sums[{name}]", lambda m, code=code: m.moment_sums(
            y, code, np.zeros(C), np.zeros(C), np.zeros(C)
        )
    yield "owens_t", lambda m: m.owens_t(h, a)
    yield "digamma", lambda m: m.digamma(np.abs(h) + 0.1)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--rows", type=int, default=20_000)
    p.add_argument("--classes", type=int, default=50)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)

    rng = np.random.default_rng(0)
    y = rng.normal(size=(args.rows, args.classes))
    h = rng.normal(scale=3, size=args.rows * args.classes // 10)
    a = rng.uniform(0, 2, size=h.shape)
    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; timing numpy fallback only")

    print(f"rows={args.rows} classes={args.classes} best of {args.repeat}")
    print(f"{'kernel':24s}" + "".join(f"{b:>12s}" for b in backends) + "     speedup")
    for name, fn in cases(y, h, a):
        t = {b: best_of(lambda: fn(m), args.repeat) for b, m in backends.items()}
        line = f"{name:24s}" + "".join(f"{t[b] * 1e3:10.2f}ms" for b in backends)
        if "cython" in t:
            line += f"  {t['python'] / t['cython']:8.2f}x"
        print(line)


if __name__ == "__main__":
    main()
