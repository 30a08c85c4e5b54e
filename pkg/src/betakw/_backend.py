"""Select the kernel implementation at import time.

The compiled module is used when it imports cleanly; setting the environment
variable ``BETAKW_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

if os.environ.get("BETAKW_PURE_PYTHON", "") not in ("", "0"):
    from betakw import _pykernels as kernels
else:
    try:
        from betakw import _ckernels as kernels
    except ImportError:
        from betakw import _pykernels as kernels

BACKEND = kernels.BACKEND

__all__ = ["kernels", "BACKEND"]
