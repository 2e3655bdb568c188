import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sgcast import kernels
from conftest import BIG_P

BACKENDS = kernels.available_backends()


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    assert "python" in BACKENDS


@pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")
@settings(max_examples=60, deadline=None)
@given(
    st.integers(0, 9),
    st.integers(0, 9),
    st.integers(0, 9),
    st.sampled_from([2, 3, 7, 65537, BIG_P]),
    st.integers(0, 2**32 - 1),
)
def test_backends_agree(n, k, m, p, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, p, size=(n, k), dtype=np.int64)
    B = rng.integers(0, p, size=(k, m), dtype=np.int64)
    ref = (A.astype(object) @ B.astype(object)) % p if k else np.zeros((n, m), dtype=object)
    for be in ("python", "cython"):
        out = kernels.matmul_mod(A, B, p, backend=be)
        assert np.array_equal(out.astype(object), ref)
    M1, M2 = A.copy(), A.copy()
    assert kernels.rref_inplace(M1, p, backend="python") == kernels.rref_inplace(M2, p, backend="cython")
    assert np.array_equal(M1, M2)


def test_python_matmul_large_inner_dimension():
    # forces the chunked limb path to accumulate across chunks
    rng = np.random.default_rng(0)
    A = rng.integers(0, BIG_P, size=(2, 40000), dtype=np.int64)
    B = rng.integers(0, BIG_P, size=(40000, 2), dtype=np.int64)
    ref = (A.astype(object) @ B.astype(object)) % BIG_P
    assert np.array_equal(kernels.matmul_mod(A, B, BIG_P, backend="python").astype(object), ref)


def test_rref_partial_columns():
    # pivots restricted to the first ncols columns; the tail is carried along
    M = np.array([[0, 2, 1, 0], [1, 1, 0, 1]], dtype=np.int64)
    piv = kernels.rref_inplace(M, 5, ncols=2)
    assert piv == [0, 1]
    assert M[:, :2].tolist() == [[1, 0], [0, 1]]
    assert M[:, 2:].tolist() == [[2, 1], [3, 0]]


def test_noncontiguous_rejected():
    M = np.zeros((4, 4), dtype=np.int64)[:, ::2]
    with pytest.raises(ValueError):
        kernels.rref_inplace(M, 5)


def test_object_dtype_goes_to_python():
    p = (1 << 61) - 1
    A = np.array([[p - 1, 2], [3, p - 2]], dtype=object)
    out = kernels.matmul_mod(A, A, p)
    ref = (A @ A) % p
    assert out.dtype == object and np.array_equal(out, ref)
    piv = kernels.rref_inplace(A.copy(), p)
    assert piv == [0, 1]


def test_env_var_forces_fallback():
    code = "from sgcast import kernels; print(kernels.BACKEND)"
    out = subprocess.run(
        [sys.executable, "-c", code], env={"SGCAST_PURE_PYTHON": "1", "PATH": ""}, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"
