"""Prime-field scalars: primality, inverses, powers and seeded sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPrime, ZeroInverse

DEFAULT_PRIME = 2147483647

# Deterministic Miller-Rabin witnesses valid for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def make_rng(seed=None) -> np.random.Generator:
    """Seeded generator; pass an existing Generator through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime p below 2**64."""

    p: int

    def __post_init__(self):
        p = int(self.p)
        if p >= 1 << 64 or not is_prime(p):
            raise NotPrime(f"{self.p} is not a prime below 2**64")
        object.__setattr__(self, "p", p)

    def __call__(self, a: int) -> int:
        return int(a) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inverse(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroInverse(f"0 has no inverse in F_{self.p}")
        return pow(a, -1, self.p)

    def power(self, a: int, e: int) -> int:
        """a**e with 0**0 == 1 (square-and-multiply via builtin pow)."""
        if e < 0:
            raise ValueError("exponent must be non-negative")
        return pow(a % self.p, e, self.p)

    def uniform_sample(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.p))

    def uniform_array(self, rng: np.random.Generator, shape) -> np.ndarray:
        from .matfp import dtype_for

        out = rng.integers(0, self.p, size=shape, dtype=np.uint64)
        return out.astype(dtype_for(self.p))

    def nonzero_array(self, rng: np.random.Generator, shape) -> np.ndarray:
        from .matfp import dtype_for

        out = rng.integers(1, self.p, size=shape, dtype=np.uint64)
        return out.astype(dtype_for(self.p))


def inverse(a: int, p: int) -> int:
    return PrimeField(p).inverse(a)


def power(a: int, e: int, p: int) -> int:
    return PrimeField(p).power(a, e)
