import importlib

import numpy as np
import pytest

from discrete_hbl import _kernels_py, kernels

try:
    from discrete_hbl import _kernels
except ImportError:  # extension not built
    _kernels = None


def _case(rng, m):
    sizes = rng.integers(1, 7, size=m)
    n = int(rng.integers(1, 150))
    codes = np.stack([rng.integers(0, k, size=n) for k in sizes], axis=1)
    return codes, sizes


def test_fallback_by_hand():
    codes = np.array([[0, 0], [0, 1], [1, 1]])
    out = _kernels_py.prefix_counts(codes, np.array([2, 2]))
    # masks {0}, {1}, {0,1} of the first image; best-1 and best-2 fiber counts
    assert out.tolist() == [[1, 2], [1, 1], [2, 3]]


def test_single_map():
    out = _kernels_py.prefix_counts(np.array([[0], [0], [2], [1]]), np.array([3]))
    assert out.tolist() == [[2, 3, 4]]


@pytest.mark.skipif(_kernels is None, reason="compiled kernels not built")
def test_backends_agree():
    rng = np.random.default_rng(0)
    for m in (1, 2, 3):
        for _ in range(30):
            codes, sizes = _case(rng, m)
            assert np.array_equal(_kernels.prefix_counts(codes, sizes), _kernels_py.prefix_counts(codes, sizes))


def test_selection_env(monkeypatch):
    monkeypatch.setenv("DISCRETE_HBL_KERNELS", "python")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.prefix_counts is _kernels_py.prefix_counts
    finally:
        monkeypatch.delenv("DISCRETE_HBL_KERNELS")
        importlib.reload(kernels)
    if _kernels is not None:
        assert kernels.BACKEND == "cython"
