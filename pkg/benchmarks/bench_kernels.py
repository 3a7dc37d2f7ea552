"""Compare the numba and numpy kernels on the census workloads.

    python3 benchmarks/bench_kernels.py [--q 101] [--repeat 3]
"""

import argparse
import time

import numpy as np

from quadbundle import _accel, kernels
from quadbundle.exact import GF_order
from quadbundle.strata import BaseRing, QuadraticFamily


def _random_net(seed, n=4):
    rng = np.random.default_rng(seed)
    a = rng.integers(-3, 4, size=(3, n, n))
    a = a + a.transpose(0, 2, 1)
    rows = [[" + ".join(f"{int(a[k, i, j])}*l{k}" for k in range(3)) for j in range(n)] for i in range(n)]
    return QuadraticFamily.from_strings(rows, 2, BaseRing.rational())


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, default=101)
    ap.add_argument("--fiber-q", type=int, default=13)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    F = GF_order(args.q)
    T = kernels.tables(F)
    fam = _random_net(0)
    coeffs, exps = fam.compile(F)
    pts = kernels.projective_points(F.q, 2)
    mats = kernels.evaluate_family(coeffs, exps, pts, T)

    Ff = GF_order(args.fiber_q)
    Tf = kernels.tables(Ff)
    gram = np.diag(np.array([1, 2, 3, 1, 1], dtype=np.int64)) % Ff.p
    batch = np.stack([gram] * 64)

    jobs = {
        f"evaluate_family  ({len(pts)} points, q={args.q})": lambda: kernels.evaluate_family(coeffs, exps, pts, T),
        f"diagonalize_batch ({len(pts)} 4x4, q={args.q})": lambda: kernels.diagonalize_batch(mats, T),
        f"count_zeros_batch (64 forms in P^4, q={args.fiber_q})": lambda: kernels.count_projective_zeros_batch(batch, Tf),
    }
    backends = ["numpy"] + (["numba"] if _accel.NUMBA_AVAILABLE else [])
    if "numba" in backends:
        _accel.set_backend("numba")
        kernels.warm_up()
    print(f"{'kernel':58s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) == 2 else ""))
    for name, fn in jobs.items():
        times = []
        for b in backends:
            _accel.set_backend(b)
            times.append(_time(fn, args.repeat))
        line = f"{name:58s}" + "".join(f"{t:11.4f}s" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
