"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--n 10000]
"""
import argparse
import time

import numpy as np

from rghyper import _backend
from rghyper.geometry import FIXED, Box, sample
from rghyper.threshold import critical_radius_exact
from rghyper.spatial_index import pairs_within


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(n):
    n1 = round(0.8 * n)
    for d in (2, 4, 10):
        A = sample(Box.unit(d), FIXED, n1, 1)
        B = sample(Box.unit(d), FIXED, n - n1, 2)
        r = critical_radius_exact(A, B).r_star
        yield f"pairs_within d={d}", lambda A=A, B=B, r=r: pairs_within(A.points, B.points, r)[0].size
        for alg in ("grid", "prim") if d <= 4 else ("prim",):
            yield (f"critical_radius {alg:<4} d={d}",
                   lambda A=A, B=B, alg=alg: critical_radius_exact(A, B, alg).r_star)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000, help="points per instance (default: 10000)")
    ap.add_argument("--repeat", type=int, default=3, help="timing repeats (default: 3)")
    args = ap.parse_args()
    backends = _backend.available()
    print(f"{'case':<28}" + "".join(f"{b:>12}" for b in backends) + "     speedup  same")
    for name, fn in cases(args.n):
        row, outs = [], []
        for b in backends:
            old = _backend.use(b)
            try:
                t, out = best_of(fn, args.repeat)
            finally:
                _backend.use(old)
            row.append(t)
            outs.append(out)
        speed = row[-1] / row[0] if len(row) > 1 else float("nan")
        same = all(o == outs[0] for o in outs)
        print(f"{name:<28}" + "".join(f"{t * 1e3:>10.1f}ms" for t in row) + f"{speed:>11.1f}x  {same}")


if __name__ == "__main__":
    main()
