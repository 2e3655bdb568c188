import numpy as np
import pytest

from sgcast import gfpoly as gp
from sgcast import matfp as mf
from conftest import BIG_P


def test_basic_arithmetic():
    p = 7
    f, g = [1, 2, 3], [6, 1]
    q, r = gp.divmod_poly(gp.mul(f, g, p), g, p)
    assert q == f and r == []
    assert gp.add(f, gp.sub([], f, p), p) == []
    assert gp.degree([]) == -1 and gp.degree([0, 0, 5]) == 2
    assert gp.derivative([4, 3, 2, 1], p) == [3, 4, 3]
    assert gp.evaluate([1, 0, 1], 3, p) == 3
    assert gp.gcd([6, 0, 1], [6, 1], p) == [6, 1]  # (x-1)(x+1) and x-1
    with pytest.raises(ZeroDivisionError):
        gp.divmod_poly(f, [], p)


@pytest.mark.parametrize("p", [7, 65537, BIG_P])
def test_roots_of_split_polynomial(p):
    rng = np.random.default_rng(p)
    rts = sorted({int(x) for x in rng.integers(0, p, size=4)})
    f = [1]
    for r in rts:
        f = gp.mul(f, [(-r) % p, 1], p)
    f = gp.mul(f, [1, 0, 1] if p % 4 == 3 else [1], p)  # x^2+1 has no roots when p = 3 mod 4
    assert gp.roots(f, p, rng) == rts


def test_roots_irreducible_quadratic():
    assert gp.roots([1, 0, 1], BIG_P) == []  # BIG_P = 3 mod 4


def test_charpoly_and_cayley_hamilton():
    rng = np.random.default_rng(0)
    for p in (5, BIG_P):
        A = mf.random_matrix(4, 4, p, rng)
        chi = gp.charpoly(A, p)
        assert len(chi) == 5 and chi[-1] == 1
        assert chi[0] == mf.det(mf.neg(A, p), p)
        assert not gp.matrix_eval(chi, A, p).any()
    with pytest.raises(ValueError):
        gp.charpoly(mf.identity(3, 2), 2)


def test_charpoly_roots_are_eigenvalues():
    p = BIG_P
    rng = np.random.default_rng(3)
    D = mf.zeros(3, 3, p)
    for i, v in enumerate((5, 9, 123456)):
        D[i, i] = v
    T = mf.random_matrix(3, 3, p, rng)
    A = mf.matmul(mf.matmul(T, D, p), mf.invert(T, p), p)
    assert gp.roots(gp.charpoly(A, p), p) == [5, 9, 123456]
