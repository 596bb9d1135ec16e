"""Backend benchmark: compiled kernels vs the pure-NumPy fallback.

Run with `python -m latentring.bench [--quick]`. Times the three hot kernels
on representative workloads and prints per-backend medians plus speedups.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import _backend
from .decoder import decode
from .lapgrid import grid_cost_matrix
from .tsne import calibrate_affinities


def _median_time(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return sorted(times)[len(times) // 2]


def run(quick: bool = False) -> list[tuple[str, dict[str, float]]]:
    rng = np.random.default_rng(7)
    repeats = 3 if quick else 7

    z = rng.uniform(-2, 2, 512)
    lap_n = 200 if quick else 400
    lap_cost = grid_cost_matrix(rng.random((lap_n, 2)), int(np.ceil(np.sqrt(lap_n))))
    tsne_n = 300 if quick else 800
    pts = rng.normal(size=(tsne_n, 8))
    p = calibrate_affinities(pts, 30.0).P
    y = np.ascontiguousarray(rng.normal(size=(tsne_n, 2)))

    workloads = [
        ("decode 512x512", lambda b: decode(z, backend=b)),
        ("jv_solve %dx%d" % lap_cost.shape, lambda b: _backend.jv_solve(lap_cost, backend=b)),
        ("tsne_step N=%d" % tsne_n, lambda b: _backend.tsne_step(p, p, y, backend=b)),
    ]

    results = []
    for name, fn in workloads:
        row = {}
        for backend in _backend.available_backends():
            fn(backend)  # warmup
            row[backend] = _median_time(lambda: fn(backend), repeats)
        results.append((name, row))
    return results


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args(argv)

    print(f"backends available: {', '.join(_backend.available_backends())}")
    print(f"active backend: {_backend.active_backend()}")
    results = run(quick=args.quick)
    print(f"{'workload':<24} " + "".join(f"{b:>12} " for b in _backend.available_backends()))
    for name, row in results:
        line = f"{name:<24} "
        for backend in _backend.available_backends():
            line += f"{row[backend] * 1e3:>10.2f}ms "
        if "native" in row and "python" in row:
            line += f" ({row['python'] / row['native']:.1f}x)"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
