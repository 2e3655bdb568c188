"""Numpy implementation of the kernels in ``_ckernels.pyx``.

Works for int64 matrices with p < 2**31 and for object matrices of Python
ints at any p.
"""

from __future__ import annotations

import numpy as np

_LIMB = 16
_INNER_CHUNK = 1 << 14


def rref_inplace(M: np.ndarray, p: int, ncols: int) -> list[int]:
    nrows = M.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = pow(int(M[r, c]), -1, p)
        if inv != 1:
            M[r, c:] = M[r, c:] * inv % p
        col = M[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            f = col[rows].reshape(-1, 1)
            M[rows, c:] = (M[rows, c:] + (p - f) * M[r, c:]) % p
        pivots.append(c)
        r += 1
    return pivots


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.dtype == object or B.dtype == object:
        out = np.empty((A.shape[0], B.shape[1]), dtype=object)
        out[...] = np.dot(A.astype(object), B.astype(object)) % p if A.size and B.size else 0
        return out
    # Split B into 16-bit limbs so every partial sum stays below 2**63.
    lo = B & ((1 << _LIMB) - 1)
    hi = B >> _LIMB
    acc_lo = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    acc_hi = np.zeros_like(acc_lo)
    for s in range(0, A.shape[1], _INNER_CHUNK):
        a = A[:, s:s + _INNER_CHUNK]
        acc_lo = (acc_lo + a @ lo[s:s + _INNER_CHUNK]) % p
        acc_hi = (acc_hi + a @ hi[s:s + _INNER_CHUNK]) % p
    return (acc_hi * (1 << _LIMB) + acc_lo) % p
