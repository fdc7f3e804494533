"""Time the compiled kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

The first compiled call is excluded (it pays for compilation, or for
loading the on-disk cache).
"""

import argparse
import time

import numpy as np

from csft import _kernels
from csft.csg import Family
from csft.oracle import _HomTable, compose_all, enumerate_hom


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    p = 2147483629
    a, b = rng.integers(0, p, (64, 64)), rng.integers(0, p, (64, 64))
    yield ("matmul_mod 64x64 mod p~2^31",
           lambda: _kernels.matmul_mod_numpy(a, b, p),
           lambda: _kernels.matmul_mod(a, b, p))

    fam = Family.parse("Dihedral")
    left = _HomTable(fam, 3, 3, enumerate_hom(fam, 3, 3, 1))
    right = _HomTable(fam, 3, 3, enumerate_hom(fam, 3, 3, 1))
    args = (left.lifts, right.lifts, right.signs, 4, 4)
    yield (f"compose_lifts {len(left.items)}x{len(right.items)} dihedral [3]->[3]",
           lambda: _kernels.compose_lifts_numpy(*args),
           lambda: _kernels.compose_lifts(*args))
    lifts, signs, _ = compose_all(fam, left, right)
    yield (f"monotone_ok {len(lifts)} rows",
           lambda: _kernels.monotone_ok_numpy(lifts, signs, 4),
           lambda: _kernels.monotone_ok(lifts, signs, 4))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    print(f"numba available: {_kernels.HAVE_NUMBA}")
    print(f"{'case':<48} {'numpy':>10} {'kernel':>10} {'speedup':>8}")
    for name, slow, fast in cases():
        fast()
        assert np.array_equal(slow(), fast())
        ts, tf = best_of(slow, args.repeat), best_of(fast, args.repeat)
        print(f"{name:<48} {ts * 1e3:>8.2f}ms {tf * 1e3:>8.2f}ms {ts / tf:>7.1f}x")


if __name__ == "__main__":
    main()
