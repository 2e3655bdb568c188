"""Linear schemes X = V_W W + V s and their feasibility check.

Decodability and leakage are computed exactly from ranks. For receiver k
the map (W, s) -> (X, z_k) has matrix [[V_W, V], [0, H_k]], so in p-ary
symbols

    I(W; X, z_k) = rank([[V_W, V], [0, H_k]]) - rank([V; H_k])
    H(W | X, z_k) = L_W - I(W; X, z_k)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import matfp
from .errors import DimensionMismatch
from .keymodel import Instance


@dataclass(frozen=True, eq=False)
class LinearScheme:
    inst: Instance
    V_W: np.ndarray
    V: np.ndarray
    L: int = 1
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        p, m = self.inst.p, self.inst.m
        V = matfp.asmat(self.V, p, cols=m)
        V_W = matfp.asmat(self.V_W, p)
        if V_W.shape[0] != V.shape[0]:
            if V_W.shape[1] != 0:
                raise DimensionMismatch(f"V_W has {V_W.shape[0]} rows but V has {V.shape[0]}")
            V_W = matfp.zeros(V.shape[0], 0, p)
        if self.L < 1:
            raise ValueError("L must be at least 1")
        for M in (V, V_W):
            M.setflags(write=False)
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "V_W", V_W)

    @property
    def p(self) -> int:
        return self.inst.p

    @property
    def L_W(self) -> int:
        return self.V_W.shape[1]

    @property
    def L_X(self) -> int:
        return self.V.shape[0]

    def joint_matrix(self, k: int) -> np.ndarray:
        """[[V_W, V], [0, H_k]]: columns for W first, then s."""
        p = self.p
        H = self.inst.key(k)
        top = matfp.stack_h(self.V_W, self.V, p=p)
        bottom = matfp.stack_h(matfp.zeros(H.shape[0], self.L_W, p), H, p=p)
        return matfp.stack_v(top, bottom, p=p)


@dataclass(frozen=True)
class OverlapDecomposition:
    """U_k V = P_k H_k spans rowspan(V) ∩ rowspan(H_k); Q_k H_k completes it to rowspan(H_k)."""

    k: int
    U: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    overlap_dim: int


def overlap_decomposition(sch: LinearScheme, k: int) -> OverlapDecomposition:
    p = sch.p
    H = sch.inst.key(k)
    Y = matfp.left_null_space(matfp.stack_v(sch.V, H, p=p), p)
    U = np.ascontiguousarray(Y[:, : sch.L_X])
    P = matfp.neg(np.ascontiguousarray(Y[:, sch.L_X :]), p)
    overlap = matfp.matmul(U, sch.V, p)
    overlap_dim = matfp.rank(overlap, p)
    # Greedy canonical complement: add unit rows of F^{d_k} in order.
    basis = matfp.matmul(P, H, p)
    current = matfp.rank(basis, p)
    q_rows = []
    target = matfp.rank(H, p)
    for i in range(H.shape[0]):
        if current == target:
            break
        trial = matfp.stack_v(basis, H[i : i + 1], p=p)
        r = matfp.rank(trial, p)
        if r > current:
            basis, current = trial, r
            row = matfp.zeros(1, H.shape[0], p)
            row[0, i] = 1
            q_rows.append(row)
    Q = matfp.stack_v(*q_rows, p=p) if q_rows else matfp.zeros(0, H.shape[0], p)
    return OverlapDecomposition(k=k, U=U, P=P, Q=Q, overlap_dim=overlap_dim)


def exact_leakage(sch: LinearScheme, e: int) -> int:
    """I(W; X, z_e) in p-ary symbols."""
    p = sch.p
    H = sch.inst.key(e)
    return matfp.rank(sch.joint_matrix(e), p) - matfp.rank(matfp.stack_v(sch.V, H, p=p), p)


def exact_decoding_deficit(sch: LinearScheme, q: int) -> int:
    """H(W | X, z_q) in p-ary symbols."""
    return sch.L_W - exact_leakage(sch, q)


def rate_and_bandwidth(sch: LinearScheme) -> tuple[Fraction, Fraction]:
    return Fraction(sch.L_W, sch.L), Fraction(sch.L_X, sch.L)


@dataclass
class VerificationReport:
    L_W: int
    L_X: int
    v_rank: int
    overlap_dims: dict[int, int]
    correctness_ranks: dict[int, int]
    security_residual_zero: dict[int, bool]
    leakage: dict[int, int]
    deficit: dict[int, int]

    @property
    def v_full_rank(self) -> bool:
        return self.v_rank == self.L_X

    @property
    def passed(self) -> bool:
        return (
            self.v_full_rank
            and all(r == self.L_W for r in self.correctness_ranks.values())
            and all(self.security_residual_zero.values())
        )

    @property
    def max_leakage(self) -> int:
        return max(self.leakage.values(), default=0)

    def to_dict(self) -> dict:
        keyed = lambda d: {str(k): v for k, v in sorted(d.items())}  # noqa: E731
        return {
            "pass": self.passed,
            "L_W": self.L_W,
            "L_X": self.L_X,
            "v_rank": self.v_rank,
            "v_full_rank": self.v_full_rank,
            "overlap_dims": keyed(self.overlap_dims),
            "correctness_ranks": keyed(self.correctness_ranks),
            "security_residual_zero": keyed(self.security_residual_zero),
            "leakage": keyed(self.leakage),
            "deficit": keyed(self.deficit),
        }


def verify_feasibility(sch: LinearScheme) -> VerificationReport:
    """Check rank(U_q V_W) = L_W for qualified q, U_e V_W = 0 for eavesdroppers, rank(V) = L_X."""
    p, inst = sch.p, sch.inst
    overlap, ranks, residual, leakage, deficit = {}, {}, {}, {}, {}
    for k in range(1, inst.K + 1):
        dec = overlap_decomposition(sch, k)
        overlap[k] = dec.overlap_dim
        proj = matfp.matmul(dec.U, sch.V_W, p)
        if k <= inst.N:
            ranks[k] = matfp.rank(proj, p)
            deficit[k] = exact_decoding_deficit(sch, k)
        else:
            residual[k] = not np.any(proj)
            leakage[k] = exact_leakage(sch, k)
    return VerificationReport(
        L_W=sch.L_W,
        L_X=sch.L_X,
        v_rank=matfp.rank(sch.V, p),
        overlap_dims=overlap,
        correctness_ranks=ranks,
        security_residual_zero=residual,
        leakage=leakage,
        deficit=deficit,
    )
