"""Compiled vs numpy kernels: median wall time per call and agreement.

    python benchmarks/bench_kernels.py [--repeat 7] [--size 1024]
"""

import argparse
import statistics
import time

import numpy as np

from svipipe._ext import BACKEND, _kernels_py as py

try:
    from svipipe._ext import _ckernels as cy
except ImportError:
    cy = None


def timeit(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cases(size, rng):
    h, w = size // 2, size
    img = rng.random((h, w, 3))
    u = rng.random((h, w)) * w
    v = rng.random((h, w)) * h - 0.5
    gray = rng.random((h, w)) * 255
    k = np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])
    x = rng.normal(size=(20000, 17))
    c = rng.normal(size=(5, 17))
    return [
        ("sample_bilinear", lambda m: m.sample_bilinear(img, u, v)),
        ("sample_nearest", lambda m: m.sample_nearest(img, u, v)),
        ("correlate3x3", lambda m: m.correlate3x3(gray, k)),
        ("nearest_centroid", lambda m: m.nearest_centroid(x, c)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--size", type=int, default=1024, help="panorama width; height is half")
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"active backend: {BACKEND}")
    if cy is None:
        print("compiled extension not built; only numpy timings shown")
    print(f"{'kernel':<18} {'numpy ms':>10} {'cython ms':>10} {'speedup':>8}  max |diff|")
    for name, call in cases(args.size, rng):
        t_py = timeit(lambda: call(py), args.repeat)
        if cy is None:
            print(f"{name:<18} {t_py * 1e3:10.2f} {'-':>10} {'-':>8}")
            continue
        t_cy = timeit(lambda: call(cy), args.repeat)
        a, b = call(py), call(cy)
        if isinstance(a, tuple):
            diff = max(float(np.max(np.abs(np.asarray(p, float) - np.asarray(q, float)))) for p, q in zip(a, b))
        else:
            diff = float(np.max(np.abs(a - b)))
        print(f"{name:<18} {t_py * 1e3:10.2f} {t_cy * 1e3:10.2f} {t_py / t_cy:7.1f}x  {diff:.3g}")


if __name__ == "__main__":
    main()
