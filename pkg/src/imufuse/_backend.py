"""Select the estimator kernel backend at import time.

The compiled extension is used when available; the pure-Python fallback is
always importable.  Set ``IMUFUSE_PURE_PYTHON=1`` to force the fallback
(used by the backend-comparison tests and benchmark).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("IMUFUSE_PURE_PYTHON"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND: str = kernels.BACKEND
