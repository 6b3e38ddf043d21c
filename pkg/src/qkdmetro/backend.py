"""Selects the kernel backend at import time.

The compiled Cython extension is preferred; the pure-Python twin is used
when the extension is missing or when ``QKDMETRO_BACKEND=python`` is set.
"""

import os

if os.environ.get("QKDMETRO_BACKEND", "").lower() == "python":
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND_NAME = kernels.BACKEND
