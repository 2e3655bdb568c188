"""Backend selection for the F_p hot loops (row reduction, matrix product).

The compiled ``_ckernels`` module is used for int64 matrices when it was
built; otherwise, or when ``SGCAST_PURE_PYTHON=1`` is set, the numpy
fallback runs. Object-dtype matrices (p >= 2**31) always use the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

if os.environ.get("SGCAST_PURE_PYTHON", "") not in ("", "0"):
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _ckernels is not None else [])


def _impl(M: np.ndarray, backend: str | None):
    if backend == "python" or M.dtype != np.int64:
        return _pykernels
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("cython backend requested but the extension is not built")
        return _ckernels
    return _ckernels if _ckernels is not None else _pykernels


def rref_inplace(M: np.ndarray, p: int, ncols: int | None = None, backend: str | None = None) -> list[int]:
    if ncols is None:
        ncols = M.shape[1]
    if not M.flags.c_contiguous:
        raise ValueError("rref_inplace needs a C-contiguous matrix")
    return list(_impl(M, backend).rref_inplace(M, p, ncols))


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int, backend: str | None = None) -> np.ndarray:
    impl = _impl(A, backend)
    if impl is _ckernels and B.dtype == np.int64:
        return impl.matmul_mod(np.ascontiguousarray(A), np.ascontiguousarray(B), p)
    return _pykernels.matmul_mod(A, B, p)
