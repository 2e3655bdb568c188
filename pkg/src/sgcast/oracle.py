"""Brute-force entropic ground truth for tiny schemes.

Enumerates every (W, s) pair, forms each receiver's observation
(X, z_k), and reads entropies off counts. Nothing here calls the rank
routines: the point is an independent check of the rank identities.

Because (W, s) is uniform and every observed quantity is linear in it,
each joint distribution is uniform on its support and the support has
p**h points. Entropies in p-ary units are therefore the integers h, read
from support sizes after checking both facts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooLarge
from .keymodel import sample_generic_instance
from . import matfp

DEFAULT_CAP = 10**7
CHUNK = 1 << 18


def _state_count(p: int, n: int) -> int:
    return p**n


def _check_cap(p: int, n: int, cap: int) -> int:
    total = _state_count(p, n)
    if total > cap:
        raise TooLarge(f"{p}^{n} = {total} joint states exceeds the cap {cap}")
    return total


def _digits(idx: np.ndarray, p: int, n: int) -> np.ndarray:
    """Base-p digits of each index, least significant first: shape (n, len(idx))."""
    out = np.empty((n, idx.size), dtype=np.int64)
    rem = idx.copy()
    for j in range(n):
        out[j] = rem % p
        rem //= p
    return out


def _pack(rows: np.ndarray, p: int) -> np.ndarray:
    """Encode each column of ``rows`` as one integer (object dtype if needed)."""
    n = rows.shape[0]
    if n == 0:
        return np.zeros(rows.shape[1], dtype=np.int64)
    if p**n < 1 << 62:
        weights = np.array([p**j for j in range(n)], dtype=np.int64)
        return weights @ rows
    acc = np.zeros(rows.shape[1], dtype=object)
    for j in range(n - 1, -1, -1):
        acc = acc * p + rows[j].astype(object)
    return acc


def _log_p(count: int, p: int) -> int:
    h, v = 0, 1
    while v < count:
        v *= p
        h += 1
    if v != count:
        raise AssertionError(f"support size {count} is not a power of {p}")
    return h


@dataclass
class JointTable:
    """Counts of (W, observation) cells for one receiver.

    ``w`` and ``obs`` are packed base-p codes of W and of (X, z_k).
    """

    p: int
    L_W: int
    k: int
    w: np.ndarray
    obs: np.ndarray
    counts: np.ndarray
    total: int

    def w_marginal(self) -> dict[int, int]:
        vals, inv = np.unique(self.w, return_inverse=True)
        sums = np.bincount(inv.ravel(), weights=self.counts).astype(np.int64)
        return dict(zip(vals.tolist(), sums.tolist()))

    def conditionals(self) -> dict[int, tuple]:
        """For each W code, its sorted (obs, count) pairs: the law of O given W, unnormalized."""
        order = np.lexsort((self.obs, self.w)) if self.w.dtype != object else sorted(
            range(self.w.size), key=lambda i: (self.w[i], self.obs[i])
        )
        w, o, c = self.w[order], self.obs[order], self.counts[order]
        cuts = np.flatnonzero(w[1:] != w[:-1]) + 1
        out = {}
        for ws, os_, cs in zip(np.split(w, cuts), np.split(o, cuts), np.split(c, cuts)):
            out[ws[0].item() if hasattr(ws[0], "item") else ws[0]] = (tuple(os_.tolist()), tuple(cs.tolist()))
        return out


def enumerate_joint(sch, k: int, cap: int = DEFAULT_CAP) -> JointTable:
    p = sch.p
    H = np.asarray(sch.inst.key(k), dtype=np.int64)
    V_W = np.asarray(sch.V_W, dtype=np.int64)
    V = np.asarray(sch.V, dtype=np.int64)
    L_W, m = V_W.shape[1], V.shape[1]
    n = L_W + m
    total = _check_cap(p, n, cap)
    # Rows: X = V_W W + V s, then z_k = H s.
    M = np.block([[V_W, V], [np.zeros((H.shape[0], L_W), dtype=np.int64), H]])
    rows = M.shape[0]
    w_base = p**L_W
    packed = p ** (rows + L_W) < 1 << 62
    codes, tallies = [], []
    merged: dict[tuple, int] = {}
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        dig = _digits(idx, p, n)
        obs = (M @ dig) % p if rows else np.zeros((0, idx.size), dtype=np.int64)
        w_code = _pack(dig[:L_W], p)
        o_code = _pack(obs, p)
        if packed:
            u, c = np.unique(w_code + w_base * o_code, return_counts=True)
            codes.append(u)
            tallies.append(c)
        else:
            for key in zip(w_code.tolist(), o_code.tolist()):
                merged[key] = merged.get(key, 0) + 1
    if packed:
        allc = np.concatenate(codes)
        u, inv = np.unique(allc, return_inverse=True)
        cnt = np.bincount(inv, weights=np.concatenate(tallies)).astype(np.int64)
        w, o = u % w_base, u // w_base
    else:
        keys = sorted(merged)
        w = np.array([a for a, _ in keys], dtype=object)
        o = np.array([b for _, b in keys], dtype=object)
        cnt = np.array([merged[key] for key in keys], dtype=np.int64)
    return JointTable(p=p, L_W=L_W, k=k, w=w, obs=o, counts=cnt, total=total)


def _uniform_support_entropy(counts: list[int], p: int) -> int:
    if len(set(counts)) > 1:
        raise AssertionError("linear image is not uniform on its support")
    return _log_p(len(counts), p)


def table_entropies(table: JointTable) -> tuple[int, int]:
    """(H(W, O), H(O)) in p-ary units, from support sizes."""
    p = table.p
    h_wo = _uniform_support_entropy(table.counts.tolist(), p)
    _, inv = np.unique(table.obs, return_inverse=True)
    marg = np.bincount(inv.ravel(), weights=table.counts).astype(np.int64)
    h_o = _uniform_support_entropy(marg.tolist(), p)
    return h_wo, h_o


@dataclass
class EntropicReport:
    deficits: dict[int, int]
    leakages: dict[int, int]
    unique_decoding: dict[int, bool]
    identical_conditionals: dict[int, bool]

    def to_dict(self) -> dict:
        keyed = lambda d: {str(k): v for k, v in sorted(d.items())}  # noqa: E731
        return {
            "deficits": keyed(self.deficits),
            "leakages": keyed(self.leakages),
            "unique_decoding": keyed(self.unique_decoding),
            "identical_conditionals": keyed(self.identical_conditionals),
        }


def entropic_check(sch, cap: int = DEFAULT_CAP) -> EntropicReport:
    """H(W | X, z_q) for qualified q and I(W; X, z_e) for eavesdroppers, exactly."""
    inst = sch.inst
    deficits, leakages, unique, identical = {}, {}, {}, {}
    for k in range(1, inst.K + 1):
        table = enumerate_joint(sch, k, cap)
        h_wo, h_o = table_entropies(table)
        if k <= inst.N:
            deficits[k] = h_wo - h_o
            # every realized observation comes from exactly one W
            unique[k] = np.unique(table.obs).size == table.obs.size
        else:
            leakages[k] = table.L_W + h_o - h_wo
            cond = list(table.conditionals().values())
            identical[k] = all(c == cond[0] for c in cond[1:])
    return EntropicReport(deficits, leakages, unique, identical)


def enumerated_entropy(A, p: int, cap: int = DEFAULT_CAP) -> int:
    """H(A s) for uniform s, by enumerating every s."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    total = _check_cap(p, n, cap)
    counts: dict = {}
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        img = _pack((A @ _digits(idx, p, n)) % p, p)
        vals, cnt = np.unique(np.asarray(img), return_counts=True)
        for v, c in zip(vals.tolist(), cnt.tolist()):
            counts[v] = counts.get(v, 0) + c
    return _uniform_support_entropy(list(counts.values()), p)


# ----------------------------------------------------------------------------
# Schwartz-Zippel style sampling of generic rank conditions

PREDICATES = ("f1", "f2", "o2", "ex3_null1", "singular")


def _pred_f1(inst) -> bool:
    """[H_1; ...; H_N; H_e] has full row rank for every eavesdropper."""
    full = (inst.N + 1) * inst.d
    return all(inst.entropy(list(inst.qualified) + [e]) == full for e in inst.eavesdroppers)


def _pred_f2(inst) -> bool:
    """H_q V_W has rank d for V_W spanning d null directions of the stacked eavesdropper keys."""
    p, d = inst.p, inst.d
    NS = matfp.right_null_space(inst.stacked(inst.eavesdroppers), p)
    if NS.shape[1] < d:
        return False
    V_W = np.ascontiguousarray(NS[:, :d])
    return all(matfp.rank(matfp.matmul(inst.key(q), V_W, p), p) == d for q in inst.qualified)


def _pred_o2(inst) -> bool:
    """The qualified overlap has m-d dimensions and [H_Q; H_e] is invertible."""
    from .construct import common_overlap

    p, m, d = inst.p, inst.m, inst.d
    HQ = common_overlap([inst.key(q) for q in inst.qualified], p)
    if HQ.shape[0] < m - d:
        return False
    HQ = HQ[: m - d]
    return all(matfp.rank(matfp.stack_v(HQ, inst.key(e), p=p), p) == m for e in inst.eavesdroppers)


def _pred_ex3(inst) -> bool:
    """With V = [H_1(1:2); H_2(1:2)], each [V; H_e] has a 1-dimensional left null space."""
    p = inst.p
    V = matfp.stack_v(inst.key(1)[:2], inst.key(2)[:2], p=p)
    return all(matfp.left_null_space(matfp.stack_v(V, inst.key(e), p=p), p).shape[0] == 1 for e in inst.eavesdroppers)


def _pred_singular(inst) -> bool:
    """H_1 with its first row repeated never has full row rank."""
    H = inst.key(1)
    rep = matfp.stack_v(H, H[:1], p=inst.p)
    return matfp.rank(rep, inst.p) == rep.shape[0]


_PRED = {"f1": _pred_f1, "f2": _pred_f2, "o2": _pred_o2, "ex3_null1": _pred_ex3, "singular": _pred_singular}

DEFAULT_PARAMS = {
    "f1": dict(N=2, E=3, d=1, m=3),
    "f2": dict(N=3, E=2, d=1, m=3),
    "o2": dict(N=2, E=3, d=2, m=3),
    "ex3_null1": dict(N=2, E=2, d=3, m=6),
    "singular": dict(N=2, E=2, d=2, m=4),
}


def schwartz_zippel_trial(condition: str, p: int, params: dict | None, trials: int, rng) -> float:
    """Fraction of generic draws satisfying the named rank predicate."""
    if condition not in _PRED:
        raise ValueError(f"unknown predicate {condition!r}; choose from {PREDICATES}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    kw = {**DEFAULT_PARAMS[condition], **(params or {})}
    hits = 0
    for _ in range(trials):
        inst = sample_generic_instance(p, kw["d"], kw["m"], kw["N"], kw["E"], rng)
        hits += bool(_PRED[condition](inst))
    return hits / trials


__all__ = [
    "DEFAULT_CAP",
    "JointTable",
    "EntropicReport",
    "enumerate_joint",
    "entropic_check",
    "enumerated_entropy",
    "schwartz_zippel_trial",
    "PREDICATES",
]
