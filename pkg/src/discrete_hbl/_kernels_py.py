"""Pure Python (numpy) implementations of the compiled kernels."""

from __future__ import annotations

import numpy as np


def prefix_counts(codes: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    """Best-k counts for every tuple of outer subsets.

    ``codes[x, j]`` is the index of ``phi_j(x)`` inside the image of
    ``phi_j`` and ``sizes[j]`` the size of that image.  Rows enumerate the
    tuples of nonempty subsets (bitmasks ``1 .. 2**sizes[j] - 1``) of the
    first ``m - 1`` images, first coordinate most significant.  Column
    ``k - 1`` holds the largest number of ``x`` whose outer images all lie in
    the chosen subsets and whose last image lies in some ``k``-element subset
    of the last image.
    """
    codes = np.asarray(codes, dtype=np.int64)
    sizes = np.asarray(sizes, dtype=np.int64)
    N, m = codes.shape
    nlast = int(sizes[-1])
    onehot = np.zeros((N, nlast), dtype=np.int64)
    onehot[np.arange(N), codes[:, -1]] = 1
    sel = np.ones((1, N), dtype=bool)
    for j in range(m - 1):
        masks = np.arange(1, 1 << int(sizes[j]), dtype=np.int64)
        mj = ((masks[:, None] >> codes[None, :, j]) & 1).astype(bool)
        sel = (sel[:, None, :] & mj[None, :, :]).reshape(-1, N)
    hist = sel.astype(np.int64) @ onehot
    hist = -np.sort(-hist, axis=1)
    return np.cumsum(hist, axis=1)
