"""Kernel backend selection.

The compiled extension is used when it was built; set
``DISCRETE_HBL_KERNELS=python`` to force the numpy fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
prefix_counts = _kernels_py.prefix_counts

if os.environ.get("DISCRETE_HBL_KERNELS", "").lower() != "python":
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        prefix_counts = _kernels.prefix_counts
        BACKEND = "cython"

__all__ = ["BACKEND", "prefix_counts"]
