"""Time every hot kernel on the numba and numpy paths and check they agree.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""

import argparse
import json
import sys
import time

import numpy as np

from phasesup import _kernels
from phasesup._backend import HAS_NUMBA
from phasesup.core import random_density_matrix


def workloads(seed=0):
    gen = np.random.default_rng(seed)
    out = []
    for d in (4, 16):
        rho = random_density_matrix(d, gen)
        th = gen.uniform(0, 2 * np.pi, size=(8192, d))
        out.append((f"quad_values d={d} n=8192", "quad_values", (rho, np.exp(1j * th))))
        out.append((f"grad_hess_sq d={d} n=8192", "grad_hess_sq", (rho, th)))
        out.append((f"channel_samples d={d} n=2048", "channel_samples", (rho, th[:2048])))
        init = gen.uniform(0, 2 * np.pi, size=(32, d))
        init[:, 0] = 0.0
        out.append((f"ascend d={d} restarts=32", "ascend", (rho, init, 1.0, 5000, 1e-8, 1e-4, 0.5, float(d))))
    return out


def best_time(fn, args, repeat):
    fn(*args)  # compile / warm caches
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def agree(a, b):
    if isinstance(a, tuple):
        # ascend returns (thetas, values, iters, converged); compare the values only
        if len(a) == 4:
            return float(np.abs(a[1] - b[1]).max())
        return max(agree(x, y) for x, y in zip(a, b))
    return float(np.abs(np.asarray(a) - np.asarray(b)).max())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", default=None, help="also write results as JSON")
    args = ap.parse_args(argv)
    if not HAS_NUMBA:
        print("numba is not installed; only the numpy path can be timed", file=sys.stderr)
    rows = []
    print(f"{'kernel':34s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s} {'max diff':>9s}")
    for label, name, kargs in workloads():
        np_fn = _kernels.NUMPY_KERNELS[name]
        t_np = best_time(np_fn, kargs, args.repeat)
        row = {"kernel": label, "numpy_s": t_np}
        if HAS_NUMBA:
            nb_fn = _kernels.NUMBA_KERNELS[name]
            t_nb = best_time(nb_fn, kargs, args.repeat)
            diff = agree(np_fn(*kargs), nb_fn(*kargs))
            row.update(numba_s=t_nb, speedup=t_np / t_nb, max_abs_diff=diff)
            print(f"{label:34s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:8.1f} {diff:9.1e}")
        else:
            print(f"{label:34s} {1e3 * t_np:11.2f} {'-':>11s} {'-':>8s} {'-':>9s}")
        rows.append(row)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")


if __name__ == "__main__":
    main()
