import numpy as np
import pytest
from hypothesis import given, strategies as st

from sgcast.errors import NotPrime, ZeroInverse
from sgcast.gf import DEFAULT_PRIME, PrimeField, inverse, is_prime, make_rng, power

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def test_inverse_examples():
    assert inverse(2, 5) == 3
    assert inverse(1, 7) == 1
    assert inverse(4, 5) == 4


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroInverse):
        inverse(0, 7)
    with pytest.raises(ZeroInverse):
        PrimeField(5).inverse(10)


def test_power_examples():
    assert power(3, 0, 7) == 1
    assert power(0, 0, 7) == 1
    assert power(2, 3, 5) == 3


@pytest.mark.parametrize("p", [q for q in range(2, 102) if is_prime(q)])
def test_fermat_exhaustive(p):
    F = PrimeField(p)
    assert all(F.power(a, p - 1) == 1 for a in range(1, p))


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_field_axioms_exhaustive(p):
    F = PrimeField(p)
    elems = range(p)
    for a in elems:
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inverse(a)) == 1
        for b in elems:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            assert F.sub(F.add(a, b), b) == a
            for c in elems:
                assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
                assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_primality():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(DEFAULT_PRIME)
    assert is_prime((1 << 61) - 1)
    assert not is_prime(561)  # Carmichael
    assert not is_prime(DEFAULT_PRIME * 3)


@pytest.mark.parametrize("bad", [0, 1, 4, 9, 91, 1 << 64, (1 << 89) - 1])
def test_not_prime(bad):
    with pytest.raises(NotPrime):
        PrimeField(bad)


def test_sampling_is_deterministic():
    F = PrimeField(DEFAULT_PRIME)
    a = [F.uniform_sample(make_rng(5)) for _ in range(3)]
    r1, r2 = make_rng(11), make_rng(11)
    assert [F.uniform_sample(r1) for _ in range(50)] == [F.uniform_sample(r2) for _ in range(50)]
    assert len(set(a)) == 1
    g = np.random.default_rng(0)
    assert make_rng(g) is g


def test_binary_frequency():
    F = PrimeField(2)
    draws = F.uniform_array(make_rng(1), 10_000)
    assert 0.47 <= draws.mean() <= 0.53


def test_all_residues_appear():
    F = PrimeField(5)
    rng = make_rng(3)
    assert {F.uniform_sample(rng) for _ in range(100)} == set(range(5))


def test_nonzero_array_and_big_prime_dtype():
    big = PrimeField((1 << 61) - 1)
    arr = big.uniform_array(make_rng(0), (3, 3))
    assert arr.dtype == object and all(0 <= int(x) < big.p for x in arr.ravel())
    nz = PrimeField(3).nonzero_array(make_rng(0), 500)
    assert set(nz.tolist()) == {1, 2}


@given(st.integers(1, DEFAULT_PRIME - 1), st.integers(0, 10**6))
def test_inverse_and_power_properties(a, e):
    F = PrimeField(DEFAULT_PRIME)
    assert F.mul(a, F.inverse(a)) == 1
    assert F.mul(F.power(a, e), F.power(a, e + 1)) == F.power(a, 2 * e + 1)
