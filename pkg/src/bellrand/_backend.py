"""Kernel backend selection.

At import time the compiled extension (``bellrand._kernels``) is preferred;
the pure NumPy/Python module (``bellrand._kernels_py``) is the fallback.
Set the environment variable ``BELLRAND_PURE=1`` to force the fallback,
e.g. for benchmarking or debugging.
"""

import os

if os.environ.get("BELLRAND_PURE"):
    from bellrand import _kernels_py as _impl
else:
    try:
        from bellrand import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        from bellrand import _kernels_py as _impl

COMPILED: bool = bool(_impl.COMPILED)
BACKEND: str = "compiled" if COMPILED else "pure"

lz76_parse_positions = _impl.lz76_parse_positions
match_indices = _impl.match_indices
match_count = _impl.match_count
