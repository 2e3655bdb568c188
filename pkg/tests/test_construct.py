from fractions import Fraction
from math import comb

import numpy as np
import pytest

from sgcast import construct as C
from sgcast import matfp as mf
from sgcast.bounds import generic_capacity, n2e2_capacity
from sgcast.errors import BadDelta, BadDimensions, FieldTooSmall, RegimeMismatch, RetriesExhausted, Unsolved
from sgcast.keymodel import entropy_profile, make_instance, sample_generic_instance
from sgcast.scheme import exact_decoding_deficit, exact_leakage, verify_feasibility
from conftest import BIG_P


def generic(d, m, N, E, seed=0, p=BIG_P, diagonal=False):
    return sample_generic_instance(p, d, m, N, E, np.random.default_rng(seed), diagonal=diagonal)


# -- named instances ----------------------------------------------------------


@pytest.mark.parametrize("name,p,R,beta", [("SG1", 2, 1, 1), ("SG2", 2, 1, 2), ("SG3", 5, 6, 9), ("SG4", 5, 4, 8)])
def test_extra_entropic(name, p, R, beta):
    out = C.construct_extra_entropic(name, p)
    assert out.report.passed
    assert (out.scheme.L_W, out.scheme.L_X) == (R, beta)
    assert out.rate == R


def test_extra_entropic_needs_p5():
    with pytest.raises(FieldTooSmall):
        C.construct_extra_entropic("SG4", 3)


def test_sg4_message_projection_vanishes():
    # [2, 1, 3, 4] X_1 carries no message component
    sch = C.construct_extra_entropic("SG4", 5).scheme
    proj = mf.matmul(mf.asmat([[2, 1, 3, 4, 0, 0, 0, 0]], 5), sch.V_W, 5)
    assert not proj.any()


# -- extreme regimes ------------------------------------------------------------


def test_large_gamma_one_time_pad():
    out = C.construct_large_gamma(generic(1, 3, 2, 3))
    assert out.notes["variant"] == "one_time_pad"
    assert out.rate == 1 and out.scheme.L_X == 2


def test_large_gamma_null_space():
    out = C.construct_large_gamma(generic(1, 3, 3, 2))
    assert out.notes["variant"] == "eavesdropper_null_space"
    assert out.rate == 1 and out.scheme.L_X == 3


def test_large_gamma_boundary_n1_e1():
    out = C.construct_large_gamma(generic(1, 2, 1, 1))
    assert out.rate == 1


def test_large_gamma_regime_check():
    with pytest.raises(RegimeMismatch):
        C.construct_large_gamma(generic(2, 5, 2, 2))


def test_small_gamma_qualified_overlap():
    out = C.construct_small_gamma(generic(2, 3, 2, 3))
    assert out.notes["variant"] == "qualified_overlap" and out.rate == 1 and out.scheme.L_X == 1


def test_small_gamma_eavesdropper_overlap():
    out = C.construct_small_gamma(generic(2, 3, 3, 2), rng=np.random.default_rng(1))
    assert out.notes["variant"] == "eavesdropper_overlap" and out.rate == 1 and out.scheme.L_X == 2


def test_small_gamma_empty():
    out = C.construct_small_gamma(generic(3, 3, 2, 2))
    assert out.rate == 0 and out.report.passed


def test_small_gamma_regime_check():
    with pytest.raises(RegimeMismatch):
        C.construct_small_gamma(generic(2, 4, 2, 2))


def test_degenerate_instance_exhausts_retries():
    # identical qualified keys break the one-time pad independence
    H = [[1, 0, 0]]
    inst = make_instance(BIG_P, 3, 2, [H, H, [[0, 0, 1]]])
    with pytest.raises(RetriesExhausted):
        C.construct_large_gamma(inst)
    out = C.construct_large_gamma(inst, rng=np.random.default_rng(0))
    assert out.retries_used == 1 and out.report.passed
    with pytest.raises(RetriesExhausted):
        C.construct_large_gamma(inst, max_retries=0, rng=np.random.default_rng(0))


def test_small_field_resamples():
    used = [C.construct_large_gamma(generic(1, 3, 2, 3, seed=s, p=2), rng=np.random.default_rng(s)).retries_used
            for s in range(20)]
    assert max(used) > 0 and all(u <= C.DEFAULT_MAX_RETRIES for u in used)


# -- N = E = 2 --------------------------------------------------------------------


@pytest.mark.parametrize(
    "d,m",
    [(2, 3), (4, 6), (5, 8), (3, 5), (6, 10), (3, 6), (4, 9), (6, 13), (2, 5), (4, 11), (3, 9), (4, 13)],
)
def test_n2e2_matches_capacity(d, m):
    out = C.construct_n2e2(generic(d, m, 2, 2, seed=d * m), rng=np.random.default_rng(m))
    sch = out.scheme
    assert out.report.passed
    cap = n2e2_capacity(Fraction(m, d)).value
    assert Fraction(sch.L_W, sch.inst.d) == cap
    assert sch.inst.gamma == Fraction(m, d)


def test_example_three():
    out = C.construct_n2e2(generic(3, 6, 2, 2))
    assert out.rate == 2 and out.scheme.L_X == 4 and out.normalized_rate == Fraction(2, 3)
    assert out.notes["spatial_factor"] == 1


def test_spatial_extension_when_needed():
    out = C.construct_n2e2(generic(1, 2, 2, 2), rng=np.random.default_rng(0))
    assert out.notes["spatial_factor"] == 3
    assert (out.scheme.inst.d, out.scheme.inst.m) == (3, 6) and out.rate == 2


def test_n2e2_worked_examples():
    out = C.construct_n2e2(generic(2, 5, 2, 2))
    assert out.rate == 2 and out.normalized_rate == 1
    out = C.construct_n2e2(generic(5, 8, 2, 2), rng=np.random.default_rng(0))
    assert out.rate == 3 and out.normalized_rate == Fraction(3, 5)
    assert out.notes["eavesdropper_overlaps_equal_H34"]


def test_n2e2_unsolved_and_mismatch():
    with pytest.raises(Unsolved):
        C.construct_n2e2(generic(4, 7, 2, 2))
    with pytest.raises(RegimeMismatch):
        C.construct_n2e2(generic(3, 6, 3, 2))


# -- change of basis and alignment --------------------------------------------


def test_change_of_basis(rng):
    inst = generic(3, 6, 3, 2)
    bar, H12 = C.change_of_basis(inst)
    p = BIG_P
    assert np.array_equal(bar.key(1), mf.stack_h(mf.identity(3, p), mf.zeros(3, 3, p), p=p))
    assert np.array_equal(bar.key(2), mf.stack_h(mf.zeros(3, 3, p), mf.identity(3, p), p=p))
    assert entropy_profile(bar) == entropy_profile(inst)
    twice, I = C.change_of_basis(bar)
    assert np.array_equal(I, mf.identity(6, p)) and twice == bar
    with pytest.raises(BadDimensions):
        C.change_of_basis(generic(3, 7, 3, 2))


def test_alignment_n3():
    out = C.construct_alignment_smallN(generic(3, 6, 3, 2))
    assert out.report.passed and out.rate == 2 and out.scheme.L_X == 4
    assert set(out.report.correctness_ranks) == {1, 2, 3}


def test_alignment_n3_larger_d():
    out = C.construct_alignment_smallN(generic(6, 12, 3, 2), rng=np.random.default_rng(0))
    assert out.report.passed and out.normalized_rate == Fraction(2, 3)


def test_alignment_n4():
    out = C.construct_alignment_smallN(generic(3, 6, 4, 2), rng=np.random.default_rng(5))
    assert out.report.passed and out.rate == 2
    lam = out.notes["eigenvalue"]
    from sgcast import gfpoly

    assert gfpoly.evaluate(out.notes["charpoly"], lam, BIG_P) == 0


def test_alignment_rejects_rank_deficient_v3(monkeypatch):
    calls = {"n": 0}
    real = C.matfp.random_matrix

    def fake(rows, cols, p, rng):
        calls["n"] += 1
        if calls["n"] == 1:
            return mf.zeros(rows, cols, p)
        return real(rows, cols, p, rng)

    inst = generic(3, 6, 3, 2)
    monkeypatch.setattr(C.matfp, "random_matrix", fake)
    with pytest.raises(RetriesExhausted):
        C.construct_alignment_smallN(inst)
    calls["n"] = 0
    out = C.construct_alignment_smallN(inst, rng=np.random.default_rng(1))
    assert out.retries_used == 1 and out.report.passed


def test_alignment_preconditions():
    with pytest.raises(RegimeMismatch):
        C.construct_alignment_smallN(generic(3, 6, 2, 2))
    with pytest.raises(BadDimensions):
        C.construct_alignment_smallN(generic(2, 4, 3, 2))
    with pytest.raises(BadDimensions):
        C.construct_alignment_smallN(generic(6, 12, 4, 2))


# -- asymptotic alignment ----------------------------------------------------------


def test_positive_exponents():
    for n, t in [(2, 2), (2, 5), (6, 8), (4, 3)]:
        tuples = C.positive_exponents(n, t)
        assert len(tuples) == comb(t, n) == len(set(tuples))
        assert all(min(a) >= 1 and sum(a) <= t for a in tuples)


def test_asymptotic_n():
    out = C.construct_asymptotic_N(BIG_P, 3, 7, np.random.default_rng(0))
    sch = out.scheme
    assert (sch.inst.d, sch.inst.m, sch.L_W, sch.L_X) == (42, 84, 7, 56)
    assert out.report.passed and out.report.max_leakage == 0
    assert out.normalized_rate == Fraction(1, 6) == Fraction(2, 3) * Fraction(8 - 6, 8)
    assert C.alignment_contained(sch.inst, sch.inst.qualified, 7, sch.inst.qualified)


def test_asymptotic_n_bad_delta():
    with pytest.raises(BadDelta):
        C.construct_asymptotic_N(BIG_P, 3, 6, np.random.default_rng(0))
    with pytest.raises(BadDelta):
        C.construct_asymptotic_N(BIG_P, 3, 4, np.random.default_rng(0))
    with pytest.raises(RegimeMismatch):
        C.construct_asymptotic_N(BIG_P, 2, 7, np.random.default_rng(0))


def test_asymptotic_e():
    out = C.construct_asymptotic_E(BIG_P, 3, 6, np.random.default_rng(0))
    sch = out.scheme
    assert (sch.inst.d, sch.inst.m, sch.L_W, sch.L_X) == (21, 42, 14, 28)
    assert all(exact_decoding_deficit(sch, q) == 0 for q in (1, 2))
    assert all(exact_leakage(sch, e) <= 6 for e in (3, 4, 5))
    assert C.leakage_budget(3, 6) == 6
    assert C.alignment_contained(sch.inst, sch.inst.eavesdroppers, 6, sch.inst.eavesdroppers)


def test_asymptotic_e_smallest():
    out = C.construct_asymptotic_E(BIG_P, 3, 5, np.random.default_rng(1))
    assert out.scheme.inst.d == 3 and out.scheme.L_W == 2
    assert out.report.max_leakage <= 1


def test_alignment_containment_detects_mismatch():
    inst = generic(42, 84, 3, 2, diagonal=True)
    # V^6 from the eavesdropper diagonals spans 15 of 42 dimensions; qualified
    # diagonals push V^5 outside it
    assert C.alignment_contained(inst, inst.eavesdroppers, 5, inst.eavesdroppers)
    assert not C.alignment_contained(inst, [1], 5, inst.eavesdroppers)


# -- dispatch and determinism ---------------------------------------------------------


@pytest.mark.parametrize("N,E,d,m", [(1, 3, 1, 2), (4, 1, 2, 4), (2, 3, 2, 6), (3, 2, 2, 3), (2, 2, 4, 13)])
def test_synthesize_rate_matches_capacity(N, E, d, m):
    out = C.synthesize(generic(d, m, N, E), rng=np.random.default_rng(0))
    assert out.report.passed
    g = Fraction(m, d)
    assert out.normalized_rate == generic_capacity(N, E, g).value


def test_synthesize_unsolved():
    with pytest.raises(Unsolved):
        C.synthesize(generic(2, 5, 3, 3))


def test_determinism():
    a = C.construct_n2e2(generic(4, 9, 2, 2, seed=3), rng=np.random.default_rng(9))
    b = C.construct_n2e2(generic(4, 9, 2, 2, seed=3), rng=np.random.default_rng(9))
    assert np.array_equal(a.scheme.V, b.scheme.V) and np.array_equal(a.scheme.V_W, b.scheme.V_W)
    x = C.construct_asymptotic_E(BIG_P, 3, 5, np.random.default_rng(2))
    y = C.construct_asymptotic_E(BIG_P, 3, 5, np.random.default_rng(2))
    assert np.array_equal(x.scheme.V, y.scheme.V)


def test_returned_schemes_reverify():
    for out in (
        C.construct_n2e2(generic(5, 8, 2, 2), rng=np.random.default_rng(0)),
        C.construct_alignment_smallN(generic(3, 6, 3, 2)),
    ):
        assert verify_feasibility(out.scheme).passed
