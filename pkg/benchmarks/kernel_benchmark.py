"""Benchmark the compiled radial-sweep kernel against the pure-Python fallback.

Usage: python benchmarks/kernel_benchmark.py [--trials 3]

Times star_difference_area on kernel-centered star polygons of several sizes
and the full best_match argmin on a packed workload, cross-checking that both
backends agree to 1e-9 before reporting speedups.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from eni._kernels import backend_name, get_backend


def random_star(rng: np.random.Generator, n: int, lo: float = 0.5, hi: float = 4.0) -> np.ndarray:
    ang = 2 * np.pi * (np.arange(n) + rng.uniform(0.1, 0.9, n)) / n
    r = rng.uniform(lo, hi, n)
    return np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)


def time_call(fn, repeats: int) -> float:
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_difference(trials: int) -> None:
    rng = np.random.default_rng(0)
    thetas = 2 * np.pi * np.arange(10) / 10
    print(f"{'vertices':>10} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for n in (8, 24, 64, 160):
        a = random_star(rng, n)
        b = random_star(rng, n)
        theta = float(thetas[3])
        py = get_backend("python")
        cy = get_backend("compiled")
        va = py.star_difference_area(a, b, theta)
        vb = cy.star_difference_area(a, b, theta)
        assert abs(va - vb) < 1e-9 * max(1.0, va), (va, vb)
        t_py = min(time_call(lambda: py.star_difference_area(a, b, theta), 50) for _ in range(trials))
        t_cy = min(time_call(lambda: cy.star_difference_area(a, b, theta), 2000) for _ in range(trials))
        print(f"{n:>10} {t_py * 1e6:>10.1f}us {t_cy * 1e6:>10.1f}us {t_py / t_cy:>8.1f}x")


def bench_best_match(trials: int) -> None:
    rng = np.random.default_rng(1)
    thetas = 2 * np.pi * np.arange(10) / 10
    m = 150
    polys = [random_star(rng, int(rng.integers(12, 48))) for _ in range(m)]
    counts = np.array([p.shape[0] for p in polys], dtype=np.int64)
    offsets = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    allv = np.concatenate(polys, axis=0)
    px = np.ascontiguousarray(allv[:, 0])
    py_arr = np.ascontiguousarray(allv[:, 1])
    pang = np.mod(np.arctan2(py_arr, px), 2 * np.pi)
    areas = np.array(
        [
            0.5 * abs(np.dot(p[:, 0], np.roll(p[:, 1], -1)) - np.dot(p[:, 1], np.roll(p[:, 0], -1)))
            for p in polys
        ]
    )
    a = random_star(rng, 32)
    a_area = 0.5 * abs(np.dot(a[:, 0], np.roll(a[:, 1], -1)) - np.dot(a[:, 1], np.roll(a[:, 0], -1)))

    py = get_backend("python")
    cy = get_backend("compiled")
    args = (a, float(a_area), px, py_arr, pang, offsets, areas, thetas)
    assert py.best_match(*args) == cy.best_match(*args)
    t_py = min(time_call(lambda: py.best_match(*args), 1) for _ in range(trials))
    t_cy = min(time_call(lambda: cy.best_match(*args), 20) for _ in range(trials))
    print(
        f"\nbest_match over {m} polygons x {len(thetas)} rotations: "
        f"python {t_py * 1e3:.1f}ms, compiled {t_cy * 1e3:.2f}ms "
        f"({t_py / t_cy:.1f}x)"
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=3)
    args = parser.parse_args()
    print(f"active backend: {backend_name()}")
    try:
        get_backend("compiled")
    except ImportError:
        print("compiled kernel not built; nothing to compare")
        return
    bench_difference(args.trials)
    bench_best_match(args.trials)


if __name__ == "__main__":
    main()
