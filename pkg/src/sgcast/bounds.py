"""Converse bounds and closed-form capacities.

All auxiliaries u are linear: a matrix whose rows are combinations of the
basis key symbols s (so u = U s). Conditional entropies are then rank
differences, H(z_S | u) = rank([H_S; U]) - rank(U).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from . import matfp
from .errors import BadGamma, DimensionMismatch, IndependenceViolated
from .keymodel import Instance


def _H(inst: Instance, S: Iterable[int], U: np.ndarray | None = None) -> int:
    """H(z_S | u) in p-ary symbols."""
    p = inst.p
    A = inst.stacked(S)
    if U is None or U.shape[0] == 0:
        return matfp.rank(A, p)
    return matfp.rank(matfp.stack_v(A, U, p=p), p) - matfp.rank(U, p)


def _as_aux(inst: Instance, U) -> np.ndarray:
    if U is None:
        return matfp.zeros(0, inst.m, inst.p)
    return matfp.asmat(U, inst.p, cols=inst.m)


# ----------------------------------------------------------------------------
# Rate and bandwidth bounds for a single (q, e) / (Q, e, u_e)


def rate_upper_bound(inst: Instance) -> tuple[int, tuple[int, int]]:
    """min over q, e of H(z_q | z_e), with the minimizing (q, e)."""
    best = None
    for q in inst.qualified:
        for e in inst.eavesdroppers:
            v = inst.entropy({q, e}) - inst.entropy({e})
            if best is None or v < best[0]:
                best = (v, (q, e))
    return best


def bandwidth_lower_bound(inst: Instance, R, Q: Iterable[int], e: int, U_e=None) -> Fraction:
    """max(R, |Q| R - (sum_i H(z_{q_i} | u_e) - H(z_Q | u_e))) with u_e = U_e z_e.

    ``U_e`` has d_e columns (it acts on z_e); None or an empty matrix means
    u_e is empty.
    """
    p = inst.p
    R = Fraction(R)
    Q = sorted(set(Q))
    if not Q:
        return R
    if not set(Q) <= set(inst.qualified):
        raise DimensionMismatch(f"Q={Q} is not a subset of the qualified receivers")
    H_e = inst.key(e)
    if U_e is None:
        U_e = matfp.zeros(0, H_e.shape[0], p)
    U_e = matfp.asmat(U_e, p, cols=H_e.shape[0])
    u = matfp.matmul(U_e, H_e, p)
    gap = sum(_H(inst, [q], u) for q in Q) - _H(inst, Q, u)
    return max(len(Q) * R - gap, R)


# ----------------------------------------------------------------------------
# The joint converse for independent eavesdropper keys


@dataclass(frozen=True)
class NewconResult:
    """R + multiplier * I <= rhs, I >= |Q| R - gap  =>  R <= bound."""

    rhs: int
    multiplier: int
    Q: tuple[int, ...]
    gap: int
    bound: Fraction


def newcon_bound(inst: Instance, u_E=None, Q: Iterable[int] | None = None) -> NewconResult:
    """Upper bound on R from the joint converse combined with the I >= |Q|R - gap bound.

    ``u_E`` is a matrix over s whose rows must lie in every eavesdropper's
    key space; the eavesdropper keys must be independent given u_E.
    """
    p = inst.p
    U = _as_aux(inst, u_E)
    for e in inst.eavesdroppers:
        if not matfp.in_row_space(inst.key(e), U, p):
            raise IndependenceViolated(f"u_E is not a function of z_{e}")
    eaves = list(inst.eavesdroppers)
    joint = _H(inst, eaves, U)
    separate = [_H(inst, [e], U) for e in eaves]
    if joint != sum(separate):
        raise IndependenceViolated(
            f"eavesdropper keys are dependent given u_E: H(z_E|u)={joint} < {sum(separate)}"
        )
    Q = tuple(sorted(set(Q))) if Q is not None else tuple(inst.qualified)
    everyone = range(1, inst.K + 1)
    mult = inst.K - inst.N - 1
    rhs = (inst.K - inst.N) * _H(inst, everyone, U) - sum(separate)
    gap = sum(_H(inst, [q], U) for q in Q) - _H(inst, Q, U)
    bound = Fraction(rhs + mult * gap, 1 + mult * len(Q))
    return NewconResult(rhs=rhs, multiplier=mult, Q=Q, gap=gap, bound=bound)


# ----------------------------------------------------------------------------
# Closed forms


@dataclass(frozen=True)
class CapacityResult:
    """Normalized capacity C/d, or a bracket when the regime is open.

    ``bracket`` is (lower, upper); a lower end of None means no achievable
    rate is claimed there.
    """

    value: Fraction | None
    regime: str
    bracket: tuple[Fraction | None, Fraction] | None = None

    @property
    def solved(self) -> bool:
        return self.value is not None


def _gamma(gamma) -> Fraction:
    g = Fraction(gamma)
    if g < 1:
        raise BadGamma(f"gamma={g} < 1")
    return g


def generic_capacity(N: int, E: int, gamma) -> CapacityResult:
    if N < 1 or E < 1:
        raise DimensionMismatch(f"need N, E >= 1, got N={N}, E={E}")
    g = _gamma(gamma)
    if g >= min(N + 1, E + 1):
        return CapacityResult(Fraction(1), "large_gamma")
    if g <= max(1 + Fraction(1, N), 1 + Fraction(1, E)):
        return CapacityResult(g - 1, "small_gamma")
    if (N, E) == (2, 2):
        return n2e2_capacity(g)
    lower = Fraction(2, 3) if g == 2 and E == 2 and N in (3, 4) else None
    return CapacityResult(None, "unsolved", (lower, min(Fraction(1), g - 1)))


def n2e2_capacity(gamma) -> CapacityResult:
    g = _gamma(gamma)
    if g >= Fraction(5, 2):
        return CapacityResult(Fraction(1), "large_gamma" if g >= 3 else "full_keys")
    if g >= 2:
        return CapacityResult(2 * (g - 1) / 3, "two_thirds")
    if g <= Fraction(5, 3):
        return CapacityResult(g - 1, "small_gamma" if g <= Fraction(3, 2) else "overlap")
    return CapacityResult(None, "unsolved", (None, min(Fraction(1), g - 1)))


# ----------------------------------------------------------------------------
# Search and report


def _rref_row_subsets(H: np.ndarray, p: int, limit: int):
    basis = matfp.row_basis(H, p)
    r = basis.shape[0]
    if r > limit:
        yield matfp.zeros(0, H.shape[1], p)
        yield basis
        return
    for size in range(r + 1):
        for rows in combinations(range(r), size):
            yield np.ascontiguousarray(basis[list(rows)])


def best_bandwidth_bound(inst: Instance, R, exhaustive_limit: int = 6) -> tuple[Fraction, dict]:
    """Largest bandwidth_lower_bound over Q, e and u_e drawn from RREF row subsets of H_e."""
    p = inst.p
    best, witness = Fraction(R), {"Q": [], "e": None, "u_e": []}
    Qs = [Q for r in range(1, min(inst.N, 6) + 1) for Q in combinations(inst.qualified, r)]
    for e in inst.eavesdroppers:
        H_e = inst.key(e)
        for rows in _rref_row_subsets(H_e, p, exhaustive_limit):
            # rows are combinations of s; express them through z_e.
            U_e = matfp.solve_left(H_e, rows, p)
            for Q in Qs:
                v = bandwidth_lower_bound(inst, R, Q, e, U_e)
                if v > best:
                    best, witness = v, {"Q": list(Q), "e": e, "u_e": rows.tolist()}
    return best, witness


@dataclass
class BoundReport:
    rate_upper: Fraction
    bandwidth_lower: Fraction
    newcon_upper: Fraction | None
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "rate_upper": self.rate_upper,
            "bandwidth_lower": self.bandwidth_lower,
            "newcon_upper": self.newcon_upper,
            "witnesses": self.witnesses,
        }


def bound_report(inst: Instance, R=None, exhaustive_limit: int = 6) -> BoundReport:
    """All bounds for one instance.

    The joint converse is tried with u_E empty and with u_E the common
    overlap of the eavesdropper keys; whichever is admissible and smaller
    is kept. The bandwidth bound is evaluated at ``R`` (default: the best
    rate upper bound).
    """
    from .construct import common_overlap

    rate, (q, e) = rate_upper_bound(inst)
    witnesses: dict = {"rate_upper": {"q": q, "e": e}}
    newcon = None
    common = common_overlap([inst.key(k) for k in inst.eavesdroppers], inst.p)
    for label, U in (("empty", None), ("eavesdropper_overlap", common)):
        try:
            res = newcon_bound(inst, U)
        except IndependenceViolated:
            continue
        if newcon is None or res.bound < newcon:
            newcon = res.bound
            witnesses["newcon_upper"] = {"u_E": label, "Q": list(res.Q), "rhs": res.rhs, "gap": res.gap}
    upper = min(Fraction(rate), newcon) if newcon is not None else Fraction(rate)
    R = Fraction(R) if R is not None else upper
    beta, w = best_bandwidth_bound(inst, R, exhaustive_limit)
    witnesses["bandwidth_lower"] = {"R": R, **w}
    return BoundReport(rate_upper=Fraction(rate), bandwidth_lower=beta, newcon_upper=newcon, witnesses=witnesses)
