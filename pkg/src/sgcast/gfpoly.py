"""Univariate polynomials over F_p, stored as coefficient lists (constant first).

Only what the eigenvector alignment needs: characteristic polynomials of
small matrices and their roots in F_p, found through gcd(f, x^p - x) and
equal-degree splitting so that p near 2**31 costs O(log p) multiplications.
"""

from __future__ import annotations

import numpy as np

from . import matfp


def trim(f: list[int]) -> list[int]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: list[int]) -> int:
    return len(trim(f)) - 1


def add(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def sub(f, g, p):
    return add(f, [(-c) % p for c in g], p)


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return trim(out)


def divmod_poly(f, g, p):
    f, g = trim(f), trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - len(g) + 1, 0)
    r = list(f)
    for k in range(len(f) - len(g), -1, -1):
        c = r[k + len(g) - 1] * inv % p
        q[k] = c
        if c:
            for j, b in enumerate(g):
                r[k + j] = (r[k + j] - c * b) % p
    return trim(q), trim(r[: len(g) - 1])


def monic(f, p):
    f = trim(f)
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def gcd(f, g, p):
    f, g = trim(f), trim(g)
    while g:
        f, g = g, divmod_poly(f, g, p)[1]
    return monic(f, p)


def powmod(base, e: int, mod, p):
    result = [1]
    base = divmod_poly(base, mod, p)[1]
    while e:
        if e & 1:
            result = divmod_poly(mul(result, base, p), mod, p)[1]
        base = divmod_poly(mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def evaluate(f, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def derivative(f, p):
    return trim([i * c % p for i, c in enumerate(f)][1:])


def roots(f, p: int, rng: np.random.Generator | None = None) -> list[int]:
    """Distinct roots of f in F_p, ascending."""
    f = monic(f, p)
    if degree(f) < 1:
        return []
    if p <= 64:
        return [x for x in range(p) if evaluate(f, x, p) == 0]
    xp = powmod([0, 1], p, f, p)
    g = gcd(f, sub(xp, [0, 1], p), p)
    rng = rng if rng is not None else np.random.default_rng(0)
    out: list[int] = []
    _split(g, p, rng, out)
    return sorted(out)


def _split(g, p, rng, out):
    d = degree(g)
    if d < 1:
        return
    if d == 1:
        out.append((-g[0]) % p)
        return
    while True:
        a = int(rng.integers(0, p))
        h = powmod([a, 1], (p - 1) // 2, g, p)
        h = gcd(g, sub(h, [1], p), p)
        if 0 < degree(h) < d:
            break
    _split(h, p, rng, out)
    _split(divmod_poly(g, h, p)[0], p, rng, out)


def charpoly(A, p: int) -> list[int]:
    """det(x I - A) as a monic coefficient list, by interpolation at 0..n."""
    A = matfp.asmat(A, p)
    n = A.shape[0]
    if p <= n:
        raise ValueError(f"interpolating a degree-{n} polynomial needs p > {n}")
    xs = list(range(n + 1))
    ys = [matfp.det(matfp.add(matfp.scale(matfp.identity(n, p), x, p), matfp.neg(A, p), p), p) for x in xs]
    out: list[int] = []
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        basis = [1]
        denom = 1
        for j, xj in enumerate(xs):
            if j != i:
                basis = mul(basis, [(-xj) % p, 1], p)
                denom = denom * (xi - xj) % p
        out = add(out, [c * yi * pow(denom, -1, p) % p for c in basis], p)
    return out


def matrix_eval(f, A, p: int) -> np.ndarray:
    """f(A) by Horner's rule."""
    A = matfp.asmat(A, p)
    n = A.shape[0]
    acc = matfp.zeros(n, n, p)
    eye = matfp.identity(n, p)
    for c in reversed(trim(f)):
        acc = matfp.add(matfp.matmul(acc, A, p), matfp.scale(eye, c, p), p)
    return acc
