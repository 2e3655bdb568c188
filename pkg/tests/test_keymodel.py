from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sgcast import matfp as mf
from sgcast.errors import BadDimensions, FieldTooSmall, NotPrime, TooManyReceivers
from sgcast.keymodel import (
    conditional_entropy,
    entropy_profile,
    is_monotone,
    is_submodular,
    make_instance,
    named_instance,
    resample_like,
    sample_generic_instance,
)
from conftest import BIG_P


def profile_by_size(inst):
    return {S: h for S, h in entropy_profile(inst).items()}


def test_sg1_matrices():
    inst = named_instance("SG1", 2)
    assert (inst.K, inst.N, inst.E, inst.m, inst.d) == (3, 2, 1, 3, 2)
    assert inst.key(1).tolist() == [[1, 0, 0], [0, 1, 0]]
    assert inst.key(2).tolist() == [[1, 0, 0], [0, 0, 1]]
    assert inst.key(3).tolist() == [[0, 1, 0], [0, 0, 1]]


def test_sg2_matrices():
    inst = named_instance("sg2", 3)
    assert inst.key(3).tolist() == [[1, 0, 0], [0, 1, 1]]


def test_sg4_row_coefficients():
    inst = named_instance("SG4", 5)
    H4 = inst.key(4)
    assert H4.shape == (9, 15)
    rows = [{j + 1: int(c) for j, c in enumerate(r) if c} for r in H4]
    assert rows[3] == {4: 1, 7: 2}
    assert rows[4] == {5: 1, 8: 3}
    assert rows[5] == {6: 1, 9: 4}
    assert rows[8] == {12: 1, 15: 4}
    assert rows[:3] == [{1: 1}, {2: 1}, {3: 1}]


def test_sg3_sg4_need_p5():
    for name in ("SG3", "SG4"):
        with pytest.raises(FieldTooSmall):
            named_instance(name, 3)
    with pytest.raises(ValueError):
        named_instance("SG9", 5)


def test_profiles_equal_in_pairs():
    for a, b, single, rest in (("SG1", "SG2", 2, 3), ("SG3", "SG4", 9, 15)):
        pa = entropy_profile(named_instance(a, 5))
        pb = entropy_profile(named_instance(b, 5))
        assert pa == pb
        assert all(h == (single if len(S) == 1 else rest) for S, h in pa.items())


def test_conditional_entropy_examples():
    assert conditional_entropy(named_instance("SG1", 2), {1}, {3}) == 1
    assert conditional_entropy(named_instance("SG3", 5), {1}, {3}) == 6
    sg = named_instance("SG2", 3)
    assert conditional_entropy(sg, {1, 2}, {1, 2}) == 0


def test_make_instance_validation():
    with pytest.raises(BadDimensions):
        make_instance(5, 2, 1, [[[1, 0]]])
    with pytest.raises(BadDimensions):
        make_instance(5, 3, 1, [[[1, 0, 0]], [[1, 0]]])
    with pytest.raises(NotPrime):
        make_instance(4, 2, 1, [[[1, 0]], [[0, 1]]])
    inst = make_instance(5, 2, 1, [[[6, -1]], [[0, 1]]])
    assert inst.key(1).tolist() == [[1, 4]]
    with pytest.raises(IndexError):
        inst.key(3)
    assert not inst.key(1).flags.writeable


def test_zero_keys_have_zero_entropy():
    inst = make_instance(5, 3, 1, [np.zeros((2, 3), dtype=np.int64)] * 3)
    assert set(entropy_profile(inst).values()) == {0}


def test_generic_sampling(rng):
    inst = sample_generic_instance(BIG_P, 3, 6, 2, 2, np.random.default_rng(7))
    assert all(mf.rank(H, BIG_P) == 3 for H in inst.keys)
    assert inst.gamma == Fraction(2) and inst.d == 3
    again = sample_generic_instance(BIG_P, 3, 6, 2, 2, np.random.default_rng(7))
    assert inst == again
    other = resample_like(inst, rng)
    assert other != inst and other.key_dims == inst.key_dims
    with pytest.raises(BadDimensions):
        sample_generic_instance(BIG_P, 3, 2, 2, 2, rng)


def test_diagonal_sampling(rng):
    inst = sample_generic_instance(BIG_P, 2, 4, 2, 2, rng, diagonal=True)
    for H in inst.keys:
        mask = np.zeros((2, 4), dtype=bool)
        mask[[0, 1, 0, 1], [0, 1, 2, 3]] = True
        assert not H[~mask].any() and H[mask].all()
    with pytest.raises(BadDimensions):
        sample_generic_instance(BIG_P, 2, 5, 2, 2, rng, diagonal=True)


def test_pairwise_independence_when_m_ge_2d():
    ok = 0
    for seed in range(100):
        inst = sample_generic_instance(BIG_P, 3, 7, 2, 2, np.random.default_rng(seed))
        ok += all(inst.entropy({i, j}) == 6 for i, j in combinations(range(1, 5), 2))
    assert ok >= 99


def test_too_many_receivers(rng):
    inst = sample_generic_instance(5, 1, 1, 1, 20, rng)
    with pytest.raises(TooManyReceivers):
        entropy_profile(inst)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 6), st.integers(1, 3), st.integers(0, 2**32 - 1), st.sampled_from([2, 3, 7]))
def test_profile_submodular_and_monotone(K, d, seed, p):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(d, 2 * d + 3))
    inst = sample_generic_instance(p, d, m, 1, K - 1, rng)
    prof = entropy_profile(inst)
    assert is_submodular(prof, K) and is_monotone(prof)
    assert max(prof.values()) <= m


def test_submodularity_checker_detects_violation():
    prof = {frozenset({1}): 1, frozenset({2}): 1, frozenset({1, 2}): 3}
    assert not is_submodular(prof, 2)
    assert not is_monotone({frozenset({1}): 2, frozenset({1, 2}): 1})
