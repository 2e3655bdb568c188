"""Exact dense linear algebra over F_p.

Matrices are plain 2-D numpy arrays: ``int64`` when p < 2**31 (so that a
product of two residues fits in 63 bits) and ``object`` arrays of Python
ints otherwise. Every function takes the modulus explicitly and returns
fresh, fully reduced, C-contiguous arrays.

Bases returned by the null-space and intersection routines are canonical:
they are read off the reduced row echelon form, so equal inputs always give
bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, Singular

INT64_LIMIT = 1 << 31


def dtype_for(p: int):
    return np.int64 if p < INT64_LIMIT else object


def asmat(A, p: int, cols: int | None = None) -> np.ndarray:
    """Coerce ``A`` to a reduced, contiguous matrix over F_p.

    ``cols`` fixes the width of an empty input (``[]`` has no row to infer it).
    """
    dt = dtype_for(p)
    if isinstance(A, np.ndarray) and A.ndim == 2 and A.dtype == dt:
        out = np.array(A % p, dtype=dt, order="C")
    else:
        if dt is object:
            arr = np.array(A, dtype=object)
            if arr.size:
                arr = np.vectorize(lambda x: int(x) % p, otypes=[object])(arr)
        else:
            arr = np.array(A, dtype=object if _has_big(A) else np.int64)
            arr = np.array(arr % p, dtype=np.int64)
        out = np.ascontiguousarray(arr, dtype=dt)
    if out.ndim == 1:
        if out.size == 0:
            out = out.reshape(0, cols or 0)
        else:
            out = out.reshape(1, -1)
    if out.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {out.shape}")
    if cols is not None and out.shape[1] != cols:
        if out.shape[0] == 0:
            out = out.reshape(0, cols)
        else:
            raise DimensionMismatch(f"expected {cols} columns, got {out.shape[1]}")
    return out


def _has_big(A) -> bool:
    try:
        flat = np.array(A, dtype=object).ravel()
    except ValueError:
        return False
    return any(abs(int(x)) >= 1 << 62 for x in flat)


def zeros(rows: int, cols: int, p: int) -> np.ndarray:
    out = np.zeros((rows, cols), dtype=dtype_for(p))
    if out.dtype == object:
        out[...] = 0
    return out


def identity(n: int, p: int) -> np.ndarray:
    out = zeros(n, n, p)
    for i in range(n):
        out[i, i] = 1
    return out


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    dt = dtype_for(p)
    if A.shape[1] == 0 or A.shape[0] == 0 or B.shape[1] == 0:
        return zeros(A.shape[0], B.shape[1], p)
    out = kernels.matmul_mod(np.ascontiguousarray(A, dtype=dt), np.ascontiguousarray(B, dtype=dt), p)
    return np.ascontiguousarray(out, dtype=dt)


def neg(A: np.ndarray, p: int) -> np.ndarray:
    return np.ascontiguousarray((-A) % p, dtype=dtype_for(p))


def add(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.shape != B.shape:
        raise DimensionMismatch(f"cannot add {A.shape} and {B.shape}")
    return np.ascontiguousarray((A + B) % p, dtype=dtype_for(p))


def scale(A: np.ndarray, c: int, p: int) -> np.ndarray:
    return np.ascontiguousarray(A * (c % p) % p, dtype=dtype_for(p))


@dataclass(frozen=True)
class RrefResult:
    """RREF of a matrix with the row operations that produced it.

    ``transform @ input == rref`` and ``rank`` equals the number of nonzero
    rows of ``rref`` (which are its leading rows).
    """

    rref: np.ndarray
    rank: int
    pivot_columns: tuple[int, ...]
    transform: np.ndarray


def rref(A, p: int) -> RrefResult:
    A = asmat(A, p)
    n, c = A.shape
    aug = stack_h(A, identity(n, p), p=p)
    pivots = kernels.rref_inplace(aug, p, c)
    return RrefResult(
        rref=np.ascontiguousarray(aug[:, :c]),
        rank=len(pivots),
        pivot_columns=tuple(pivots),
        transform=np.ascontiguousarray(aug[:, c:]),
    )


def _reduce(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    M = np.array(A, dtype=dtype_for(p), order="C")
    pivots = kernels.rref_inplace(M, p, M.shape[1])
    return M, pivots


def rank(A, p: int) -> int:
    A = asmat(A, p)
    if A.size == 0:
        return 0
    return len(_reduce(A, p)[1])


def row_basis(A, p: int) -> np.ndarray:
    """Canonical basis of rowspan(A): the nonzero rows of its RREF."""
    A = asmat(A, p)
    M, pivots = _reduce(A, p)
    return np.ascontiguousarray(M[: len(pivots)])


def right_null_space(A, p: int) -> np.ndarray:
    """Columns form the canonical basis of {x : A x = 0}."""
    A = asmat(A, p)
    n = A.shape[1]
    R, pivots = _reduce(A, p)
    free = [j for j in range(n) if j not in set(pivots)]
    N = zeros(n, len(free), p)
    for k, f in enumerate(free):
        N[f, k] = 1
        for i, pc in enumerate(pivots):
            N[pc, k] = (-R[i, f]) % p
    return N


def left_null_space(A, p: int) -> np.ndarray:
    """Rows form the canonical basis of {y : y A = 0}."""
    A = asmat(A, p)
    return np.ascontiguousarray(right_null_space(A.T.copy(), p).T)


def row_space_intersection(A, B, p: int) -> np.ndarray:
    """Canonical basis (rows) of rowspan(A) ∩ rowspan(B).

    Each left-null row (y_A, y_B) of [A; B] gives y_A A = -y_B B, a vector
    in both row spaces; their span is the whole intersection.
    """
    A = asmat(A, p)
    B = asmat(B, p)
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(f"column counts differ: {A.shape[1]} vs {B.shape[1]}")
    Y = left_null_space(stack_v(A, B, p=p), p)
    common = matmul(np.ascontiguousarray(Y[:, : A.shape[0]]), A, p)
    return row_basis(common, p) if common.shape[0] else zeros(0, A.shape[1], p)


def invert(A, p: int) -> np.ndarray:
    A = asmat(A, p)
    n, c = A.shape
    if n != c:
        raise DimensionMismatch(f"cannot invert a {n}x{c} matrix")
    res = rref(A, p)
    if res.rank < n:
        raise Singular(f"matrix has rank {res.rank} < {n}")
    return res.transform


def det(A, p: int) -> int:
    A = asmat(A, p)
    n, c = A.shape
    if n != c:
        raise DimensionMismatch(f"determinant of a {n}x{c} matrix")
    M = A.copy()
    out = 1
    for col in range(n):
        nz = [i for i in range(col, n) if M[i, col] != 0]
        if not nz:
            return 0
        piv = nz[0]
        if piv != col:
            M[[col, piv]] = M[[piv, col]]
            out = -out
        a = int(M[col, col])
        out = out * a % p
        inv = pow(a, -1, p)
        for i in range(col + 1, n):
            f = int(M[i, col])
            if f:
                M[i, col:] = (M[i, col:] - (f * inv % p) * M[col, col:]) % p
    return out % p


def solve(A, B, p: int) -> np.ndarray | None:
    """Some X with A X = B, or None when the system is inconsistent."""
    A = asmat(A, p)
    B = asmat(B, p)
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatch(f"row counts differ: {A.shape[0]} vs {B.shape[0]}")
    n = A.shape[1]
    M = stack_h(A, B, p=p)
    pivots = kernels.rref_inplace(M, p, n)
    if np.any(M[len(pivots):, n:] != 0):
        return None
    X = zeros(n, B.shape[1], p)
    for i, pc in enumerate(pivots):
        X[pc] = M[i, n:]
    return X


def solve_left(A, B, p: int) -> np.ndarray | None:
    """Some Y with Y A = B (each row of B expressed in the rows of A)."""
    A = asmat(A, p)
    B = asmat(B, p, cols=A.shape[1])
    X = solve(A.T.copy(), B.T.copy(), p)
    return None if X is None else np.ascontiguousarray(X.T)


def in_row_space(A, B, p: int) -> bool:
    """True when every row of B lies in rowspan(A)."""
    A = asmat(A, p)
    B = asmat(B, p, cols=A.shape[1])
    return rank(stack_v(A, B, p=p), p) == rank(A, p)


def slice_rows(A, i: int, j: int) -> np.ndarray:
    """Rows i..j inclusive, 1-based, MATLAB-style ``A(i:j, :)``."""
    if i < 1 or j > A.shape[0] or j < i - 1:
        raise DimensionMismatch(f"row range {i}:{j} outside 1:{A.shape[0]}")
    return np.ascontiguousarray(A[i - 1 : j])


def stack_v(*mats, p: int) -> np.ndarray:
    mats = [asmat(M, p) for M in mats]
    widths = {M.shape[1] for M in mats if M.shape[0]} or {mats[0].shape[1]}
    if len(widths) != 1:
        raise DimensionMismatch(f"cannot stack widths {sorted(widths)}")
    w = widths.pop()
    mats = [M if M.shape[0] else M.reshape(0, w) for M in mats]
    return np.ascontiguousarray(np.concatenate(mats, axis=0), dtype=dtype_for(p))


def stack_h(*mats, p: int) -> np.ndarray:
    mats = [asmat(M, p) for M in mats]
    heights = {M.shape[0] for M in mats}
    if len(heights) != 1:
        raise DimensionMismatch(f"cannot join heights {sorted(heights)}")
    return np.ascontiguousarray(np.concatenate(mats, axis=1), dtype=dtype_for(p))


def block_diag(*mats, p: int) -> np.ndarray:
    mats = [asmat(M, p) for M in mats]
    out = zeros(sum(M.shape[0] for M in mats), sum(M.shape[1] for M in mats), p)
    r = c = 0
    for M in mats:
        out[r : r + M.shape[0], c : c + M.shape[1]] = M
        r += M.shape[0]
        c += M.shape[1]
    return out


def random_matrix(rows: int, cols: int, p: int, rng: np.random.Generator) -> np.ndarray:
    out = rng.integers(0, p, size=(rows, cols), dtype=np.uint64)
    return np.ascontiguousarray(out.astype(dtype_for(p)))
