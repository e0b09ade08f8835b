"""Time the compiled curvature kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --points 2000 --repeat 5

Both backends get identical inputs taken from a Kerr-Newman metric; the
script also reports the largest difference between their Riemann tensors.
"""

import argparse
import time

import numpy as np

from emgr import _kernels_py
from emgr.metrics import MetricSpec, build_metric
from emgr.tensor import CoordPoint, _stack

try:
    from emgr import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def _inputs(n, seed):
    rng = np.random.default_rng(seed)
    spec = MetricSpec.scaled("kn", "regularized", 1.0, 1.0)
    p = CoordPoint(0.0, 10 ** rng.uniform(-1, 2, n), rng.uniform(0.1, 3.0, n))
    g, dg, d2g = _stack(build_metric(spec).components(p), p.shape)
    z3, z4 = np.zeros((n, 4, 4, 4)), np.zeros((n, 4, 4, 4, 4))
    return [np.ascontiguousarray(a) for a in (np.linalg.inv(g), dg, g, dg, d2g, z3, z4)]


def _time(impl, args, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        d, dd = impl.connection(*args)
        riem = impl.riemann(args[5], d, dd)
        best = min(best, time.perf_counter() - t0)
    return best, riem


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, nargs="+", default=[100, 1000, 10000])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    print(f"{'points':>8} {'numpy [ms]':>12} {'cython [ms]':>12} {'speedup':>8} {'max diff':>10}")
    for n in args.points:
        data = _inputs(n, args.seed)
        t_py, r_py = _time(_kernels_py, data, args.repeat)
        if _compiled is None:
            print(f"{n:>8} {1e3 * t_py:>12.2f} {'n/a':>12} {'n/a':>8} {'n/a':>10}")
            continue
        t_c, r_c = _time(_compiled, data, args.repeat)
        diff = np.max(np.abs(r_c - r_py)) / np.max(np.abs(r_py))
        print(f"{n:>8} {1e3 * t_py:>12.2f} {1e3 * t_c:>12.2f} {t_py / t_c:>8.1f} {diff:>10.1e}")


if __name__ == "__main__":
    main()
