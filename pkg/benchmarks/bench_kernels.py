"""Numba kernels against the numpy fallback on the audit workloads.

    python benchmarks/bench_kernels.py [--repeat 3]

The matrices are the real ones: the differential of a truncated complex
and a dense random block of the same size.  JIT compilation happens in a
warm-up call and is reported separately.
"""

import argparse
import time

import numpy as np

from properad import _kernels
from properad import freeprop as fp


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba is unavailable or disabled; only the numpy path can run")

    t0 = time.perf_counter()
    tc = fp.truncated_complex(2, 2, 3, max_genus=2)
    d = tc.integer_matrix()
    print(f"differential: {d.shape[0]} x {d.shape[1]}, {np.count_nonzero(d)} nonzeros "
          f"(assembled in {time.perf_counter() - t0:.1f}s)")
    rng = np.random.default_rng(0)
    dense = rng.integers(-3, 4, size=(400, 400)).astype(np.int64)

    cases = [
        ("d @ d", lambda: _kernels._matmul_py(d, d),
         lambda: _kernels._matmul_nb(d, d) if _kernels.HAVE_NUMBA else None),
        ("rank mod p (sparse d)", lambda: _kernels._rank_mod_p_py(d, _kernels.PRIME),
         lambda: _kernels._rank_mod_p_nb(d.copy(), _kernels.PRIME) if _kernels.HAVE_NUMBA else None),
        ("rank mod p (dense 400)", lambda: _kernels._rank_mod_p_py(dense, _kernels.PRIME),
         lambda: _kernels._rank_mod_p_nb(dense.copy(), _kernels.PRIME) if _kernels.HAVE_NUMBA else None),
    ]
    if _kernels.HAVE_NUMBA:
        t0 = time.perf_counter()
        for _, _, fast in cases:
            fast()
        print(f"jit warm-up: {time.perf_counter() - t0:.2f}s")

    print(f"{'kernel':<24}{'numpy':>10}{'numba':>10}{'ratio':>8}")
    for name, slow, fast in cases:
        ts, rs = best_of(slow, args.repeat)
        if not _kernels.HAVE_NUMBA:
            print(f"{name:<24}{ts:>10.4f}{'-':>10}{'-':>8}")
            continue
        tf, rf = best_of(fast, args.repeat)
        same = np.array_equal(np.asarray(rs), np.asarray(rf))
        print(f"{name:<24}{ts:>10.4f}{tf:>10.4f}{ts / tf:>8.1f}{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
