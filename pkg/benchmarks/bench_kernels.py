"""Compare the compiled and numpy indicator-search kernels.

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from discrete_hbl import _kernels_py, kernels

try:
    from discrete_hbl import _kernels
except ImportError:
    _kernels = None

CASES = [
    ("|G|=32, images 8,8,8", 32, (8, 8, 8)),
    ("|G|=32, images 6,7,8", 32, (6, 7, 8)),
    ("|G|=16, images 4,4,8", 16, (4, 4, 8)),
    ("|G|=64, images 8,8,4", 64, (8, 8, 4)),
    ("|G|=128, images 8,6,8", 128, (8, 6, 8)),
]


def _time(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t)
    return best


def main():
    rng = np.random.default_rng(0)
    print(f"selected backend: {kernels.BACKEND}")
    print(f"{'case':<26}{'numpy (ms)':>12}{'cython (ms)':>13}{'speedup':>9}")
    for name, n, sizes in CASES:
        codes = np.stack([rng.permutation(np.arange(n) % k) for k in sizes], axis=1).astype(np.int64)
        sizes = np.array(sizes, dtype=np.int64)
        t_py = _time(_kernels_py.prefix_counts, codes, sizes)
        if _kernels is None:
            print(f"{name:<26}{t_py * 1e3:>12.2f}{'n/a':>13}{'':>9}")
            continue
        assert np.array_equal(_kernels_py.prefix_counts(codes, sizes), _kernels.prefix_counts(codes, sizes))
        t_cy = _time(_kernels.prefix_counts, codes, sizes)
        print(f"{name:<26}{t_py * 1e3:>12.2f}{t_cy * 1e3:>13.2f}{t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
