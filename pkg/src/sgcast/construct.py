"""Achievability constructions.

Every constructor returns a :class:`ConstructorOutcome` whose scheme has
already passed :func:`~sgcast.scheme.verify_feasibility` (the asymptotic-E
scheme instead meets its leakage budget). Conditions that only hold "almost
surely" are handled by resampling the whole generic instance from ``rng``,
at most ``max_retries`` times; with ``rng=None`` the given instance is
final and a failure raises :class:`RetriesExhausted` at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from . import gfpoly, matfp
from .errors import BadDelta, BadDimensions, FieldTooSmall, RegimeMismatch, RetriesExhausted, Singular, Unsolved
from .keymodel import Instance, make_instance, named_instance, resample_like, sample_generic_instance
from .scheme import LinearScheme, VerificationReport, overlap_decomposition, verify_feasibility

DEFAULT_MAX_RETRIES = 50


class Degenerate(Exception):
    """A generic-position condition failed for this draw."""


@dataclass
class ConstructorOutcome:
    scheme: LinearScheme
    report: VerificationReport
    retries_used: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.scheme.L_W, self.scheme.L)

    @property
    def normalized_rate(self) -> Fraction:
        return Fraction(self.scheme.L_W, self.scheme.L * self.scheme.inst.d)


Build = Callable[[Instance], tuple[LinearScheme, dict]]


def _run(
    name: str,
    inst: Instance,
    build: Build,
    rng: np.random.Generator | None,
    max_retries: int,
    accept: Callable[[LinearScheme, VerificationReport, dict], bool] | None = None,
) -> ConstructorOutcome:
    retries = 0
    reasons = []
    while True:
        try:
            sch, notes = build(inst)
            report = verify_feasibility(sch)
            ok = accept(sch, report, notes) if accept else report.passed
            if not ok:
                reasons.append("verification failed")
        except (Degenerate, Singular) as exc:
            ok = False
            reasons.append(str(exc))
        if ok:
            return ConstructorOutcome(scheme=sch, report=report, retries_used=retries, notes=notes)
        if rng is None or retries >= max_retries:
            raise RetriesExhausted(
                f"{name}: no valid draw after {retries} resamples at p={inst.p} (last: {reasons[-1]})"
            )
        retries += 1
        inst = resample_like(inst, rng)


def _scheme(inst: Instance, V_W, V, constructor: str, **params) -> LinearScheme:
    return LinearScheme(inst=inst, V_W=V_W, V=V, provenance={"constructor": constructor, **params})


def _identity_stack(p: int, d: int, signs) -> np.ndarray:
    eye = matfp.identity(d, p)
    return matfp.stack_v(*(eye if s > 0 else matfp.neg(eye, p) for s in signs), p=p)


def _require_uniform(inst: Instance) -> tuple[int, Fraction]:
    if inst.d is None:
        raise BadDimensions("generic constructions need equal key dimensions")
    return inst.d, inst.gamma


def _null_columns(A: np.ndarray, count: int, p: int, rng: np.random.Generator | None) -> np.ndarray:
    """``count`` columns spanning a subspace of the right null space of A.

    The canonical basis is used when it has exactly ``count`` vectors;
    otherwise a generic (random) combination of it.
    """
    NS = matfp.right_null_space(A, p)
    if NS.shape[1] < count:
        raise Degenerate(f"null space has dimension {NS.shape[1]} < {count}")
    if NS.shape[1] == count or rng is None:
        return np.ascontiguousarray(NS[:, :count])
    return matfp.matmul(NS, matfp.random_matrix(NS.shape[1], count, p, rng), p)


def common_overlap(mats: list[np.ndarray], p: int) -> np.ndarray:
    """Canonical basis of the intersection of the row spaces of ``mats``.

    Solves [P_1 ... P_n] H_B = 0 with H_B = [[H_1 ... H_1]; diag(-H_2, ..., -H_n)]
    and returns the row basis of P_1 H_1.
    """
    first = mats[0]
    if len(mats) == 1:
        return matfp.row_basis(first, p)
    m = first.shape[1]
    n = len(mats)
    top = matfp.stack_h(*([first] * (n - 1)), p=p)
    lower = matfp.block_diag(*(matfp.neg(H, p) for H in mats[1:]), p=p)
    HB = matfp.stack_v(top, lower, p=p)
    P = matfp.left_null_space(HB, p)
    common = matfp.matmul(np.ascontiguousarray(P[:, : first.shape[0]]), first, p)
    return matfp.row_basis(common, p) if common.shape[0] else matfp.zeros(0, m, p)


def _overlap_U(inst: Instance, V: np.ndarray, k: int) -> np.ndarray:
    probe = LinearScheme(inst=inst, V_W=matfp.zeros(V.shape[0], 0, inst.p), V=V)
    return overlap_decomposition(probe, k).U


# --------------------------------------------------------------------------
# Hand-built schemes for SG1..SG4


def _sg_rows(m: int, spec: list[dict[int, int]], p: int) -> np.ndarray:
    out = matfp.zeros(len(spec), m, p)
    for i, row in enumerate(spec):
        for j, c in row.items():
            out[i, j - 1] = c % p
    return out


def construct_extra_entropic(name: str, p: int) -> ConstructorOutcome:
    """The optimal schemes for the four named instances (all with L = 1)."""
    inst = named_instance(name, p)
    name = inst.label
    if name == "SG1":
        # X = W + s1
        V_W = [[1]]
        V = _sg_rows(3, [{1: 1}], p)
    elif name == "SG2":
        # X = (W + s2; -W + s3)
        V_W = [[1], [-1]]
        V = _sg_rows(3, [{2: 1}, {3: 1}], p)
    elif name == "SG3":
        # (W_{1:3} + s_{1:3}; W_{4:6} + s_{4:6} + s_{7:9}; -W_{1:3} - W_{4:6} + s_{10:12} + s_{13:15})
        eye = np.eye(3, dtype=np.int64)
        z = np.zeros((3, 3), dtype=np.int64)
        V_W = np.block([[eye, z], [z, eye], [-eye, -eye]])
        V = _sg_rows(
            15,
            [{1 + i: 1} for i in range(3)]
            + [{4 + i: 1, 7 + i: 1} for i in range(3)]
            + [{10 + i: 1, 13 + i: 1} for i in range(3)],
            p,
        )
    else:
        # X_1 on (W1, W2, s4..s9) and X_2 on (W3, W4, s10..s15), same pattern.
        pattern_W = [[1, 0], [0, 1], [-2, -3], [1, 2]]
        V_W = np.zeros((8, 4), dtype=np.int64)
        rows = []
        for blk, off in enumerate((0, 6)):
            V_W[4 * blk : 4 * blk + 4, 2 * blk : 2 * blk + 2] = pattern_W
            rows += [{4 + off: 1}, {5 + off: 1, 6 + off: 1}, {8 + off: 1}, {7 + off: 1, 9 + off: 1}]
        V = _sg_rows(15, rows, p)
    sch = _scheme(inst, matfp.asmat(V_W, p), V, "extra_entropic", instance=name, p=p)
    report = verify_feasibility(sch)
    if not report.passed:
        raise RetriesExhausted(f"{name} scheme failed verification at p={p}")
    return ConstructorOutcome(scheme=sch, report=report, notes={"instance": name})


# --------------------------------------------------------------------------
# Extreme gamma regimes, any (N, E)


def construct_large_gamma(
    inst: Instance, max_retries: int = DEFAULT_MAX_RETRIES, rng: np.random.Generator | None = None
) -> ConstructorOutcome:
    """R = d when gamma >= min(N+1, E+1).

    gamma >= N+1: one-time pad per qualified key, X = (W + z_1; ...; W + z_N).
    gamma >= E+1: X = V_W W + s with V_W in the right null space of all
    eavesdropper keys stacked.
    """
    d, g = _require_uniform(inst)
    N, E, p = inst.N, inst.E, inst.p
    if g >= N + 1:
        variant = "one_time_pad"
    elif g >= E + 1:
        variant = "eavesdropper_null_space"
    else:
        raise RegimeMismatch(f"gamma={g} < min(N+1, E+1)={min(N, E) + 1}")

    def build(inst: Instance):
        d = inst.d
        if variant == "one_time_pad":
            V = inst.stacked(inst.qualified)
            V_W = _identity_stack(p, d, [1] * N)
            for e in inst.eavesdroppers:
                if inst.entropy(list(inst.qualified) + [e]) != (N + 1) * d:
                    raise Degenerate(f"qualified keys not independent of z_{e}")
        else:
            V = matfp.identity(inst.m, p)
            NS = matfp.right_null_space(inst.stacked(inst.eavesdroppers), p)
            if NS.shape[1] < d:
                raise Degenerate("eavesdropper null space too small")
            V_W = np.ascontiguousarray(NS[:, :d])
            for q in inst.qualified:
                if matfp.rank(matfp.matmul(inst.key(q), V_W, p), p) != d:
                    raise Degenerate(f"H_{q} V_W is rank deficient")
        return _scheme(inst, V_W, V, "large_gamma", variant=variant), {"variant": variant}

    return _run("large_gamma", inst, build, rng, max_retries)


def construct_small_gamma(
    inst: Instance, max_retries: int = DEFAULT_MAX_RETRIES, rng: np.random.Generator | None = None
) -> ConstructorOutcome:
    """R = m - d when gamma <= max(1 + 1/N, 1 + 1/E).

    gamma <= 1 + 1/N: the common overlap of the qualified keys is the pad.
    gamma <= 1 + 1/E: broadcast the common eavesdropper overlap and pad W
    with fresh random combinations H_rand s.
    """
    d, g = _require_uniform(inst)
    N, E, p = inst.N, inst.E, inst.p
    if g <= 1 + Fraction(1, N):
        variant = "qualified_overlap"
    elif g <= 1 + Fraction(1, E):
        variant = "eavesdropper_overlap"
    else:
        raise RegimeMismatch(f"gamma={g} > max(1+1/N, 1+1/E)")
    local = rng if rng is not None else np.random.default_rng(0)

    def build(inst: Instance):
        m = inst.m
        R = m - inst.d
        if R == 0:
            return _scheme(inst, matfp.zeros(0, 0, p), matfp.zeros(0, m, p), "small_gamma", variant="empty"), {
                "variant": "empty"
            }
        if variant == "qualified_overlap":
            HQ = common_overlap([inst.key(q) for q in inst.qualified], p)
            if HQ.shape[0] < R:
                raise Degenerate(f"qualified overlap has dimension {HQ.shape[0]} < {R}")
            V = np.ascontiguousarray(HQ[:R])
            V_W = matfp.identity(R, p)
            for e in inst.eavesdroppers:
                if matfp.rank(matfp.stack_v(V, inst.key(e), p=p), p) != m:
                    raise Degenerate(f"[H_Q; H_{e}] is singular")
        else:
            HE = common_overlap([inst.key(e) for e in inst.eavesdroppers], p)
            if HE.shape[0] < R:
                raise Degenerate(f"eavesdropper overlap has dimension {HE.shape[0]} < {R}")
            H_rand = matfp.random_matrix(R, m, p, local)
            V = matfp.stack_v(HE[:R], H_rand, p=p)
            V_W = matfp.stack_v(matfp.zeros(R, R, p), matfp.identity(R, p), p=p)
        return _scheme(inst, V_W, V, "small_gamma", variant=variant), {"variant": variant}

    return _run("small_gamma", inst, build, rng, max_retries)


# --------------------------------------------------------------------------
# N = E = 2


def spatial_extension(inst: Instance, factor: int, rng: np.random.Generator) -> Instance:
    """Fresh generic keys at (factor*d, factor*m); gamma is unchanged."""
    d, _ = _require_uniform(inst)
    return sample_generic_instance(inst.p, factor * d, factor * inst.m, inst.N, inst.E, rng, diagonal=inst.diagonal)


def construct_n2e2(
    inst: Instance, max_retries: int = DEFAULT_MAX_RETRIES, rng: np.random.Generator | None = None
) -> ConstructorOutcome:
    """Capacity-achieving schemes for N = E = 2 on every solved gamma.

    gamma in [5/2, 3): V = [H_1; H_2], R = d.
    gamma in [2, 5/2): V from the first 2(m-d)/3 rows of H_1 and H_2,
        R = 2(m-d)/3; when 3 does not divide m-d the keys are redrawn at
        three times the dimension first.
    gamma in (3/2, 5/3]: overlap scheme built from H_12 and H_34, R = m-d.
    gamma <= 3/2 and gamma >= 3 delegate to the extreme-regime constructors.
    """
    if (inst.N, inst.E) != (2, 2):
        raise RegimeMismatch(f"construct_n2e2 needs N = E = 2, got N={inst.N}, E={inst.E}")
    d, g = _require_uniform(inst)
    p = inst.p
    if g >= 3:
        return construct_large_gamma(inst, max_retries, rng)
    if g <= Fraction(3, 2):
        return construct_small_gamma(inst, max_retries, rng)
    if Fraction(5, 3) < g < 2:
        raise Unsolved(f"gamma={g} lies in the open interval (5/3, 2)")
    local = rng if rng is not None else np.random.default_rng(0)

    if g >= Fraction(5, 2):

        def build(inst: Instance):
            V = inst.stacked([1, 2])
            U = [_overlap_U(inst, V, e) for e in (3, 4)]
            expected = 3 * inst.d - inst.m
            if any(u.shape[0] != expected for u in U):
                raise Degenerate(f"eavesdropper overlaps are not {expected}-dimensional")
            V_W = _null_columns(matfp.stack_v(*U, p=p), inst.d, p, local)
            return _scheme(inst, V_W, V, "n2e2", variant="full_keys"), {"variant": "full_keys"}

        return _run("n2e2", inst, build, rng, max_retries)

    if g >= 2:
        extended = (inst.m - inst.d) % 3 != 0
        work = spatial_extension(inst, 3, local) if extended else inst

        def build(inst: Instance):
            r = 2 * (inst.m - inst.d) // 3
            V = matfp.stack_v(inst.key(1)[:r], inst.key(2)[:r], p=p)
            U = [_overlap_U(inst, V, e) for e in (3, 4)]
            if any(u.shape[0] != r // 2 for u in U):
                raise Degenerate(f"eavesdropper overlaps are not {r // 2}-dimensional")
            V_W = _null_columns(matfp.stack_v(*U, p=p), r, p, local)
            notes = {"variant": "two_thirds", "spatial_factor": 3 if extended else 1}
            return _scheme(inst, V_W, V, "n2e2", **notes), notes

        return _run("n2e2", work, build, rng, max_retries)

    def build(inst: Instance):
        d, m = inst.d, inst.m
        a, b, t = 2 * d - m, 2 * m - 3 * d, m - d
        H1, H2 = inst.key(1), inst.key(2)
        H12 = common_overlap([H1, H2], p)
        H34_all = common_overlap([inst.key(3), inst.key(4)], p)
        if H12.shape[0] != a or H34_all.shape[0] != a:
            raise Degenerate("pairwise key overlaps are not (2d - m)-dimensional")
        H34 = matfp.matmul(matfp.random_matrix(b, a, p, local), H34_all, p)
        basis = matfp.stack_v(H1[:t], H2[:t], H12, p=p)
        C = matfp.solve_left(basis, H34, p)
        if C is None or matfp.rank(basis, p) != m:
            raise Degenerate("[H_1(1:m-d); H_2(1:m-d); H_12] is singular")
        C1, C2, C12 = C[:, :t], C[:, t : 2 * t], C[:, 2 * t :]
        V = matfp.stack_v(
            H12,
            matfp.matmul(np.ascontiguousarray(C1), H1[:t], p),
            matfp.matmul(np.ascontiguousarray(C2), H2[:t], p),
            p=p,
        )
        V_W = matfp.stack_v(
            matfp.stack_h(matfp.identity(a, p), matfp.zeros(a, b, p), p=p),
            matfp.stack_h(matfp.zeros(b, a, p), matfp.identity(b, p), p=p),
            matfp.stack_h(matfp.neg(np.ascontiguousarray(C12), p), matfp.neg(matfp.identity(b, p), p), p=p),
            p=p,
        )
        sch = _scheme(inst, V_W, V, "n2e2", variant="overlap")
        return sch, {"variant": "overlap", "H34": H34}

    def accept(sch, report, notes):
        # Both eavesdropper overlaps must be exactly rowspan(H_34).
        H34 = notes.pop("H34")
        target = matfp.rank(H34, p)
        same = True
        for e in (3, 4):
            common = matfp.matmul(overlap_decomposition(sch, e).U, sch.V, p)
            same &= matfp.rank(common, p) == target == matfp.rank(matfp.stack_v(common, H34, p=p), p)
        notes["eavesdropper_overlaps_equal_H34"] = same
        return report.passed and same

    return _run("n2e2", inst, build, rng, max_retries, accept)


# --------------------------------------------------------------------------
# gamma = 2 with more receivers: change of basis and alignment


def change_of_basis(inst: Instance) -> tuple[Instance, np.ndarray]:
    """Rewrite every key in the basis s̄ = H_12 s where H_12 = [H_1; H_2].

    Afterwards H̄_1 = [I 0] and H̄_2 = [0 I]; H̄_k = H_k H_12^{-1}.
    """
    if inst.N < 2:
        raise RegimeMismatch("change of basis needs at least two qualified receivers")
    H12 = inst.stacked([1, 2])
    if H12.shape[0] != inst.m:
        raise BadDimensions(f"[H_1; H_2] is {H12.shape[0]}x{inst.m}, not square")
    inv = matfp.invert(H12, inst.p)
    keys = [matfp.matmul(H, inv, inst.p) for H in inst.keys]
    return make_instance(inst.p, inst.m, inst.N, keys, label=f"{inst.label}:basis"), H12


def _halves(H: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    return np.ascontiguousarray(H[:, :d]), np.ascontiguousarray(H[:, d:])


def construct_alignment_smallN(
    inst: Instance, max_retries: int = DEFAULT_MAX_RETRIES, rng: np.random.Generator | None = None
) -> ConstructorOutcome:
    """R = 2d/3 at gamma = 2, E = 2 and N in {3, 4} by aligning z_3 (and z_4) into V.

    N = 3: V_1 = V_3 H̄_3^[1], V_2 = V_3 H̄_3^[2] for a generic V_3.
    N = 4: rowspan(V_3) is a 2-dimensional subspace invariant under
    H̄_c = H̄_3^[2] (H̄_4^[2])^{-1} H̄_4^[1] (H̄_3^[1])^{-1}, found from a simple
    root of its characteristic polynomial in F_p; d must be 3.
    """
    d, g = _require_uniform(inst)
    p, N = inst.p, inst.N
    if g != 2 or inst.E != 2 or N not in (3, 4):
        raise RegimeMismatch(f"alignment needs gamma=2, E=2, N in {{3, 4}}; got gamma={g}, N={N}, E={inst.E}")
    if d % 3:
        raise BadDimensions(f"d must be a multiple of 3, got {d}")
    if N == 4 and d != 3:
        raise BadDimensions("the eigenvector route is implemented for d = 3")
    local = rng if rng is not None else np.random.default_rng(0)
    r = 2 * d // 3

    def build(inst: Instance):
        try:
            bar, H12 = change_of_basis(inst)
        except Singular as exc:
            raise Degenerate(f"[H_1; H_2] singular: {exc}") from None
        A3, B3 = _halves(bar.key(3), d)
        notes: dict = {}
        if N == 3:
            V3 = matfp.random_matrix(r, d, p, local)
            if matfp.rank(V3, p) != r:
                raise Degenerate("V_3 is rank deficient")
            V1, V2 = matfp.matmul(V3, A3, p), matfp.matmul(V3, B3, p)
        else:
            A4, B4 = _halves(bar.key(4), d)
            Hc = matfp.matmul(
                matfp.matmul(B3, matfp.invert(B4, p), p), matfp.matmul(A4, matfp.invert(A3, p), p), p
            )
            chi = gfpoly.charpoly(Hc, p)
            dchi = gfpoly.derivative(chi, p)
            simple = [lam for lam in gfpoly.roots(chi, p, local) if gfpoly.evaluate(dchi, lam, p)]
            if not simple:
                raise Degenerate("characteristic polynomial has no simple root in F_p")
            lam = simple[0]
            cofactor, rem = gfpoly.divmod_poly(chi, [(-lam) % p, 1], p)
            assert not rem
            V3 = matfp.left_null_space(gfpoly.matrix_eval(cofactor, Hc, p), p)
            if V3.shape[0] != r:
                raise Degenerate("invariant subspace has the wrong dimension")
            V1, V2 = matfp.matmul(V3, A3, p), matfp.matmul(V3, B3, p)
            V4 = matfp.matmul(V1, matfp.invert(A4, p), p)
            V4B4 = matfp.matmul(V4, B4, p)
            if not (matfp.in_row_space(V2, V4B4, p) and matfp.in_row_space(V4B4, V2, p)):
                raise Degenerate("V_4 H̄_4^[2] does not align with V_2")
            notes.update(eigenvalue=lam, charpoly=chi)
        V = matfp.matmul(matfp.block_diag(V1, V2, p=p), H12, p)
        U = [_overlap_U(inst, V, e) for e in inst.eavesdroppers]
        V_W = _null_columns(matfp.stack_v(*U, p=p), r, p, local)
        notes["variant"] = f"align_N{N}"
        return _scheme(inst, V_W, V, "alignment_smallN", N=N), notes

    return _run("alignment_smallN", inst, build, rng, max_retries)


# --------------------------------------------------------------------------
# Asymptotic alignment with diagonal keys


def positive_exponents(n_vars: int, total: int) -> list[tuple[int, ...]]:
    """All tuples of ``n_vars`` positive integers with sum <= total, lexicographic.

    There are comb(total, n_vars) of them.
    """
    out: list[tuple[int, ...]] = []

    def rec(prefix: tuple[int, ...], left: int):
        if len(prefix) == n_vars:
            out.append(prefix)
            return
        remaining = n_vars - len(prefix) - 1
        for a in range(1, left - remaining + 1):
            rec(prefix + (a,), left - a)

    if total >= n_vars:
        rec((), total)
    return out


def _diagonals(inst: Instance, receivers) -> list[np.ndarray]:
    d = inst.d
    idx = np.arange(d)
    out = []
    for k in receivers:
        H = inst.key(k)
        out += [np.ascontiguousarray(H[idx, idx]), np.ascontiguousarray(H[idx, d + idx])]
    return out


def monomial_rows(diagonals: list[np.ndarray], total: int, p: int) -> np.ndarray:
    """Rows 1·∏ D_i^{α_i} over positive exponent tuples with sum <= total."""
    tuples = positive_exponents(len(diagonals), total)
    d = diagonals[0].shape[0]
    out = matfp.zeros(len(tuples), d, p)
    powers = []
    for D in diagonals:
        table = [matfp.asmat(np.ones((1, d), dtype=np.int64), p)[0]]
        for _ in range(total):
            table.append(table[-1] * D % p)
        powers.append(table)
    for i, alpha in enumerate(tuples):
        row = matfp.asmat(np.ones((1, d), dtype=np.int64), p)[0]
        for j, a in enumerate(alpha):
            row = row * powers[j][a] % p
        out[i] = row
    return out


def alignment_contained(inst: Instance, receivers, delta: int, via) -> bool:
    """Every row of V^Δ H^[1]_k and V^Δ H^[2]_k (k in ``receivers``) lies in rowspan(V^{Δ+1}).

    ``via`` names the receivers whose diagonals generate V^Δ.
    """
    p = inst.p
    diags = _diagonals(inst, via)
    small = monomial_rows(diags, delta, p)
    big = monomial_rows(diags, delta + 1, p)
    for D in _diagonals(inst, receivers):
        if matfp.solve_left(big, small * D % p, p) is None:
            return False
    return True


def asymptotic_dimension(delta: int, parts: int, scale: Fraction) -> int:
    c = comb(delta + 1, parts)
    d = scale * c
    if c == 0 or d.denominator != 1:
        raise BadDelta(f"delta={delta}: d = {scale} * C({delta + 1}, {parts}) = {d} is not a positive integer")
    return int(d)


def construct_asymptotic_N(
    p: int,
    N: int,
    delta: int,
    rng: np.random.Generator,
    E: int = 2,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> ConstructorOutcome:
    """Zero-leakage scheme for N > 2, E = 2, gamma = 2 with diagonal keys.

    d = (3/2) C(Δ+1, 2N); V = blockdiag(V^{Δ+1}, V^{Δ+1}) built from the
    qualified diagonals, L_W = C(Δ, 2N), L_X = 2 C(Δ+1, 2N).
    """
    if N <= 2 or E != 2:
        raise RegimeMismatch(f"asymptotic-N alignment needs N > 2 and E = 2, got N={N}, E={E}")
    d = asymptotic_dimension(delta, 2 * N, Fraction(3, 2))
    L_W = comb(delta, 2 * N)
    inst = sample_generic_instance(p, d, 2 * d, N, E, rng, diagonal=True)

    def build(inst: Instance):
        VD = monomial_rows(_diagonals(inst, inst.qualified), delta + 1, p)
        V = matfp.block_diag(VD, VD, p=p)
        U = [_overlap_U(inst, V, e) for e in inst.eavesdroppers]
        if any(u.shape[0] != d // 3 for u in U):
            raise Degenerate("eavesdropper overlaps are not d/3-dimensional")
        V_W = _null_columns(matfp.stack_v(*U, p=p), L_W, p, rng)
        notes = {"variant": "asymptotic_N", "delta": delta, "d": d}
        return _scheme(inst, V_W, V, "asymptotic_N", N=N, E=E, delta=delta), notes

    return _run("asymptotic_N", inst, build, rng, max_retries)


def leakage_budget(E: int, delta: int) -> int:
    """C(Δ+1, 2E) - C(Δ, 2E): the unaligned part of each eavesdropper overlap."""
    return comb(delta + 1, 2 * E) - comb(delta, 2 * E)


def construct_asymptotic_E(
    p: int,
    E: int,
    delta: int,
    rng: np.random.Generator,
    N: int = 2,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> ConstructorOutcome:
    """Vanishing-leakage scheme for N = 2, E > 2, gamma = 2 with diagonal keys.

    d = 3 C(Δ+1, 2E); V^{Δ+1} comes from the eavesdropper diagonals and is
    pulled back through inv([H_1; H_2]); L_W = 2d/3, L_X = 4d/3. Each
    eavesdropper learns at most leakage_budget(E, Δ) symbols.
    """
    if N != 2 or E <= 2:
        raise RegimeMismatch(f"asymptotic-E alignment needs N = 2 and E > 2, got N={N}, E={E}")
    d = asymptotic_dimension(delta, 2 * E, Fraction(3))
    c = d // 3
    budget = leakage_budget(E, delta)
    inst = sample_generic_instance(p, d, 2 * d, N, E, rng, diagonal=True)

    def build(inst: Instance):
        VD = monomial_rows(_diagonals(inst, inst.eavesdroppers), delta + 1, p)
        try:
            inv = matfp.invert(inst.stacked([1, 2]), p)
        except Singular:
            raise Degenerate("[H_1; H_2] is singular") from None
        i11, i12 = inv[:d, :d], inv[:d, d:]
        i21, i22 = inv[d:, :d], inv[d:, d:]
        H1, H2 = inst.key(1), inst.key(2)
        blocks = [
            matfp.matmul(matfp.matmul(VD, np.ascontiguousarray(blk), p), H, p)
            for blk, H in ((i11, H1), (i21, H1), (i12, H2), (i22, H2))
        ]
        V = matfp.stack_v(*blocks, p=p)
        eye, zero = matfp.identity(c, p), matfp.zeros(c, c, p)
        neg = matfp.neg(eye, p)
        V_W = matfp.stack_v(
            matfp.stack_h(eye, zero, p=p),
            matfp.stack_h(zero, eye, p=p),
            matfp.stack_h(neg, zero, p=p),
            matfp.stack_h(zero, neg, p=p),
            p=p,
        )
        notes = {"variant": "asymptotic_E", "delta": delta, "d": d, "leakage_budget": budget}
        return _scheme(inst, V_W, V, "asymptotic_E", N=N, E=E, delta=delta), notes

    def accept(sch, report, notes):
        notes["leakage"] = dict(report.leakage)
        return (
            report.v_full_rank
            and all(v == 0 for v in report.deficit.values())
            and report.max_leakage <= budget
        )

    return _run("asymptotic_E", inst, build, rng, max_retries, accept)


# --------------------------------------------------------------------------


def synthesize(
    inst: Instance, rng: np.random.Generator | None = None, max_retries: int = DEFAULT_MAX_RETRIES
) -> ConstructorOutcome:
    """Pick the constructor that matches the instance's regime."""
    d, g = _require_uniform(inst)
    N, E = inst.N, inst.E
    if (N, E) == (2, 2):
        return construct_n2e2(inst, max_retries, rng)
    if g >= min(N, E) + 1:
        return construct_large_gamma(inst, max_retries, rng)
    if g <= max(1 + Fraction(1, N), 1 + Fraction(1, E)):
        return construct_small_gamma(inst, max_retries, rng)
    if g == 2 and E == 2 and N in (3, 4):
        return construct_alignment_smallN(inst, max_retries, rng)
    raise Unsolved(f"no construction for N={N}, E={E}, gamma={g}")


def require_field(p: int, minimum: int) -> None:
    if p < minimum:
        raise FieldTooSmall(f"p={p} < {minimum}")
