"""Kernel backend selection.

The hot loops live in ``_kernels_nb`` (numba) with a pure numpy fallback in
``_kernels_np``.  The environment variable TREEBESOV_BACKEND picks one
explicitly ("numba" or "numpy"); by default numba is used when it imports
and numpy otherwise.  Both backends return bit-identical results, see
benchmarks/bench_backends.py for the speed comparison.
"""

import os

from . import _kernels_np


def _load():
    forced = os.environ.get("TREEBESOV_BACKEND", "").strip().lower()
    if forced == "numpy":
        return _kernels_np, "numpy"
    if forced not in ("", "numba"):
        raise ValueError("TREEBESOV_BACKEND must be 'numba' or 'numpy', got %r" % forced)
    try:
        from . import _kernels_nb
    except ImportError:
        if forced == "numba":
            raise
        return _kernels_np, "numpy"
    return _kernels_nb, "numba"


kernels, BACKEND = _load()
