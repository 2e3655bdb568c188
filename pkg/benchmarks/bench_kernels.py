"""Time the compiled and numpy backends on row reduction and matrix products.

    python3 benchmarks/bench_kernels.py --sizes 32 64 128 --repeat 5
"""

import argparse
import json
import time

import numpy as np

from sgcast import kernels
from sgcast.gf import DEFAULT_PRIME


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[32, 64, 128, 256])
    ap.add_argument("--p", type=int, default=DEFAULT_PRIME)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    backends = kernels.available_backends()
    rows = []
    for n in args.sizes:
        A = rng.integers(0, args.p, size=(n, n), dtype=np.int64)
        B = rng.integers(0, args.p, size=(n, n), dtype=np.int64)
        ref = None
        for be in backends:
            out = kernels.matmul_mod(A, B, args.p, backend=be)
            if ref is None:
                ref = out
            assert np.array_equal(out, ref), f"{be} disagrees on matmul"
            t_mm = best_of(lambda: kernels.matmul_mod(A, B, args.p, backend=be), args.repeat)
            t_rr = best_of(lambda: kernels.rref_inplace(A.copy(), args.p, backend=be), args.repeat)
            rows.append({"n": n, "backend": be, "matmul_s": t_mm, "rref_s": t_rr})
    print(f"{'n':>5} {'backend':>8} {'matmul (ms)':>12} {'rref (ms)':>10}")
    for r in rows:
        print(f"{r['n']:>5} {r['backend']:>8} {1e3 * r['matmul_s']:>12.2f} {1e3 * r['rref_s']:>10.2f}")
    print(json.dumps(rows))


if __name__ == "__main__":
    main()
