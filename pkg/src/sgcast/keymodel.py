"""Secure-groupcast instances: key matrices, named examples, generic sampling
and rank-based entropy profiles.

Receivers are labelled 1..K; receivers 1..N are qualified and N+1..K are
eavesdroppers. Entropies are in p-ary symbols, so H(z_S) is simply the rank
of the stacked key matrices of S.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from . import matfp
from .errors import BadDimensions, FieldTooSmall, TooManyReceivers
from .gf import PrimeField

NAMED_INSTANCES = ("SG1", "SG2", "SG3", "SG4")


@dataclass(frozen=True, eq=False)
class Instance:
    p: int
    m: int
    N: int
    keys: tuple[np.ndarray, ...]
    diagonal: bool = False
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def K(self) -> int:
        return len(self.keys)

    @property
    def E(self) -> int:
        return self.K - self.N

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def qualified(self) -> range:
        return range(1, self.N + 1)

    @property
    def eavesdroppers(self) -> range:
        return range(self.N + 1, self.K + 1)

    @property
    def key_dims(self) -> tuple[int, ...]:
        return tuple(H.shape[0] for H in self.keys)

    @property
    def d(self) -> int | None:
        """Common key dimension, or None when receivers differ."""
        dims = set(self.key_dims)
        return dims.pop() if len(dims) == 1 else None

    @property
    def gamma(self) -> Fraction | None:
        d = self.d
        return Fraction(self.m, d) if d else None

    def key(self, k: int) -> np.ndarray:
        """H_k for a 1-based receiver label."""
        if not 1 <= k <= self.K:
            raise IndexError(f"receiver {k} outside 1..{self.K}")
        return self.keys[k - 1]

    def stacked(self, subset: Iterable[int]) -> np.ndarray:
        subset = sorted(set(subset))
        if not subset:
            return matfp.zeros(0, self.m, self.p)
        return matfp.stack_v(*(self.key(k) for k in subset), p=self.p)

    def entropy(self, subset: Iterable[int]) -> int:
        key = frozenset(subset)
        cache = self._cache.setdefault("H", {})
        if key not in cache:
            cache[key] = matfp.rank(self.stacked(key), self.p) if key else 0
        return cache[key]

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            (self.p, self.m, self.N, self.diagonal) == (other.p, other.m, other.N, other.diagonal)
            and self.K == other.K
            and all(a.shape == b.shape and np.array_equal(a, b) for a, b in zip(self.keys, other.keys))
        )

    __hash__ = None


def make_instance(p: int, m: int, N: int, keys, *, diagonal: bool = False, label: str = "") -> Instance:
    PrimeField(p)
    if m < 1:
        raise BadDimensions("m must be positive")
    mats = []
    for k, H in enumerate(keys, start=1):
        try:
            H = matfp.asmat(H, p, cols=m)
        except Exception as exc:
            raise BadDimensions(f"key {k}: {exc}") from None
        H.setflags(write=False)
        mats.append(H)
    if not 1 <= N < len(mats):
        raise BadDimensions(f"need 1 <= N < K, got N={N}, K={len(mats)}")
    return Instance(p=p, m=m, N=N, keys=tuple(mats), diagonal=diagonal, label=label)


def _rows(m: int, terms: list[dict[int, int]]) -> list[list[int]]:
    """Rows from {1-based symbol index: coefficient} maps."""
    out = []
    for t in terms:
        row = [0] * m
        for j, c in t.items():
            row[j - 1] = c
        out.append(row)
    return out


def _block(start: int) -> list[dict[int, int]]:
    return [{start + i: 1} for i in range(3)]


def _sum_blocks(starts, coeffs=None) -> list[dict[int, int]]:
    coeffs = coeffs or [[1, 1, 1]] * len(starts)
    return [{s + i: c[i] for s, c in zip(starts, coeffs)} for i in range(3)]


def named_instance(name: str, p: int) -> Instance:
    """The four hand-built instances SG1..SG4 with the same entropy structure in pairs."""
    name = name.upper()
    if name not in NAMED_INSTANCES:
        raise ValueError(f"unknown instance {name!r}; choose from {NAMED_INSTANCES}")
    PrimeField(p)
    if name in ("SG1", "SG2"):
        e = lambda *idx: [{i: 1} for i in idx]  # noqa: E731
        z3 = e(2, 3) if name == "SG1" else [{1: 1}, {2: 1, 3: 1}]
        keys = [_rows(3, e(1, 2)), _rows(3, e(1, 3)), _rows(3, z3)]
        return make_instance(p, 3, 2, keys, label=name)
    if p < 5:
        raise FieldTooSmall(f"{name} needs p >= 5, got {p}")
    A, B, C, D, E = 1, 4, 7, 10, 13
    if name == "SG3":
        everything = [{A + i: 1, B + i: 1, C + i: 1, D + i: 1, E + i: 1} for i in range(3)]
        keys = [
            _block(A) + _block(B) + _block(C),
            _block(A) + _block(D) + _block(E),
            _block(B) + _block(D) + everything,
            _block(C) + _block(E) + everything,
        ]
    else:
        keys = [
            _block(A) + _block(B) + _block(D),
            _block(A) + _block(C) + _block(E),
            _block(A) + _sum_blocks([B, C]) + _sum_blocks([D, E]),
            _block(A)
            + _sum_blocks([B, C], [[1, 1, 1], [2, 3, 4]])
            + _sum_blocks([D, E], [[1, 1, 1], [2, 3, 4]]),
        ]
    return make_instance(p, 15, 2, [_rows(15, k) for k in keys], label=name)


def sample_generic_instance(
    p: int, d: int, m: int, N: int, E: int, rng: np.random.Generator, *, diagonal: bool = False
) -> Instance:
    """K = N + E keys with i.i.d. uniform entries.

    With ``diagonal`` each key is [D1 D2] for two d x d diagonal matrices
    whose diagonals are uniform over the nonzero residues.
    """
    F = PrimeField(p)
    if d < 1 or m < d or N < 1 or E < 1:
        raise BadDimensions(f"need 1 <= d <= m, N >= 1, E >= 1 (d={d}, m={m}, N={N}, E={E})")
    keys = []
    for _ in range(N + E):
        if diagonal:
            if m != 2 * d:
                raise BadDimensions(f"diagonal keys need m = 2d, got d={d}, m={m}")
            H = matfp.zeros(d, m, p)
            a = F.nonzero_array(rng, (2, d))
            idx = np.arange(d)
            H[idx, idx] = a[0]
            H[idx, d + idx] = a[1]
        else:
            H = matfp.random_matrix(d, m, p, rng)
        keys.append(H)
    return make_instance(p, m, N, keys, diagonal=diagonal, label="generic")


def resample_like(inst: Instance, rng: np.random.Generator) -> Instance:
    """A fresh generic draw with the same (p, d, m, N, E, diagonal) shape."""
    if inst.d is None:
        raise BadDimensions("cannot resample an instance with unequal key dimensions")
    return sample_generic_instance(inst.p, inst.d, inst.m, inst.N, inst.E, rng, diagonal=inst.diagonal)


EntropyProfile = dict[frozenset, int]


def entropy_profile(inst: Instance) -> EntropyProfile:
    """H(z_S) for every non-empty S ⊆ {1..K}."""
    if inst.K > 20:
        raise TooManyReceivers(f"2^{inst.K} subsets is too many")
    out: EntropyProfile = {}
    for size in range(1, inst.K + 1):
        for S in combinations(range(1, inst.K + 1), size):
            out[frozenset(S)] = inst.entropy(S)
    return out


def conditional_entropy(inst: Instance, S: Iterable[int], T: Iterable[int]) -> int:
    """H(z_S | z_T) = rank([H_S; H_T]) - rank(H_T)."""
    S, T = set(S), set(T)
    return inst.entropy(S | T) - inst.entropy(T)


def is_submodular(profile: EntropyProfile, K: int) -> bool:
    H = lambda S: profile.get(frozenset(S), 0)  # noqa: E731
    everyone = range(1, K + 1)
    subsets = [frozenset(S) for r in range(K + 1) for S in combinations(everyone, r)]
    for T in subsets:
        for S in subsets:
            if not S <= T:
                continue
            for k in everyone:
                if k in T:
                    continue
                if H(S | {k}) - H(S) < H(T | {k}) - H(T):
                    return False
    return True


def is_monotone(profile: EntropyProfile) -> bool:
    return all(profile[S] <= profile[T] for S in profile for T in profile if S <= T)
