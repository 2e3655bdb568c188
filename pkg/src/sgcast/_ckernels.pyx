# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled F_p kernels for int64 matrices with p < 2**31.

Entries must already be reduced to [0, p); products then stay below 2**62.
"""

from libc.stdint cimport int64_t, uint64_t


cdef extern from *:
    ctypedef unsigned long long uint128_t "unsigned __int128"


cdef inline int64_t _inv(int64_t a, int64_t p) nogil:
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_inplace(int64_t[:, ::1] M, int64_t p, Py_ssize_t ncols):
    """Reduce M in place to RREF; pivots searched in the first ncols columns.

    Row operations act on the full row width so augmented columns follow.
    Returns the list of pivot columns.
    """
    cdef Py_ssize_t nrows = M.shape[0], width = M.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef int64_t f, inv, v
    pivots = []
    with nogil:
        for c in range(ncols):
            if r >= nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if M[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(width):
                    v = M[r, j]
                    M[r, j] = M[piv, j]
                    M[piv, j] = v
            inv = _inv(M[r, c], p)
            if inv != 1:
                for j in range(c, width):
                    M[r, j] = (M[r, j] * inv) % p
            for i in range(nrows):
                if i == r:
                    continue
                f = M[i, c]
                if f == 0:
                    continue
                f = p - f
                for j in range(c, width):
                    if M[r, j] != 0:
                        M[i, j] = (M[i, j] + f * M[r, j]) % p
            with gil:
                pivots.append(c)
            r += 1
    return pivots


def matmul_mod(const int64_t[:, ::1] A, const int64_t[:, ::1] B, int64_t p):
    """(A @ B) mod p, one reduction per entry via a 128-bit accumulator."""
    import numpy as np

    cdef Py_ssize_t n = A.shape[0], k = A.shape[1], m = B.shape[1]
    cdef Py_ssize_t i, j, t
    cdef uint128_t acc
    BT_arr = np.ascontiguousarray(np.asarray(B).T)
    cdef const int64_t[:, ::1] BT = BT_arr
    out = np.empty((n, m), dtype=np.int64)
    cdef int64_t[:, ::1] C = out
    with nogil:
        for i in range(n):
            for j in range(m):
                acc = 0
                for t in range(k):
                    acc += <uint128_t>(<uint64_t>(A[i, t] * BT[j, t]))
                C[i, j] = <int64_t>(acc % <uint128_t>p)
    return out
