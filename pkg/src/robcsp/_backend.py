"""Selects the compiled kernels when available, else the pure-Python twins.

Set ``ROBCSP_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("ROBCSP_PURE_PYTHON", "") not in ("", "0"):
    from . import _pycore as _impl
    BACKEND = "python"
else:
    try:
        from . import _core as _impl
        BACKEND = "cython"
    except ImportError:
        from . import _pycore as _impl
        BACKEND = "python"

jacobi_eigh = _impl.jacobi_eigh
cholesky_raw = _impl.cholesky

__all__ = ["BACKEND", "jacobi_eigh", "cholesky_raw"]
