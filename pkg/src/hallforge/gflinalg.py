"""Linear algebra and subspace enumeration over a prime field F_q.

Matrices are plain ``numpy`` integer arrays with entries in ``[0, q)``; the
modulus travels alongside as an explicit argument.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded

SUBSPACE_MAX_AMBIENT = 6
INVERTIBLE_COUNT_BUDGET = 10**6

__all__ = [
    "as_gf",
    "rref",
    "rank",
    "nullspace",
    "nullspace_dim",
    "inverse",
    "is_invertible",
    "subspaces",
    "gaussian_binomial",
    "count_invertible",
    "batched_full_rank",
    "gl_order",
    "gl_generators",
    "primitive_root",
]


def as_gf(m, q: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    a = np.asarray(m, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    return a % q


def rref(m: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are taken leftmost first; among candidate rows the smallest index
    wins, so the result is deterministic.
    """
    a = np.array(m, dtype=np.int64) % q
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, q)) % q
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % q
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: np.ndarray, q: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m, q)[1])


def nullspace(m: np.ndarray, q: int) -> np.ndarray:
    """Basis of ``{x : m x = 0}`` as the rows of the returned array."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    red, pivots = rref(m, q)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, p in enumerate(pivots):
            basis[k, p] = (-red[row, f]) % q
    return basis


def nullspace_dim(m: np.ndarray, q: int) -> int:
    m = np.asarray(m)
    return m.shape[1] - rank(m, q)


def inverse(m: np.ndarray, q: int) -> np.ndarray:
    n = m.shape[0]
    aug = np.concatenate([np.asarray(m, dtype=np.int64) % q, np.eye(n, dtype=np.int64)], axis=1)
    red, pivots = rref(aug, q)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return red[:, n:]


def is_invertible(m: np.ndarray, q: int) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and rank(m, q) == m.shape[0]


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n, from the product formula."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspaces(n: int, k: int, q: int) -> list[np.ndarray]:
    """Every k-dimensional subspace of F_q^n once, as its RREF basis (k x n).

    Order: pivot sets lexicographically, then free entries lexicographically.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    if n > SUBSPACE_MAX_AMBIENT:
        raise BudgetExceeded(f"subspace enumeration in dimension {n} > {SUBSPACE_MAX_AMBIENT}")
    out = []
    for pivots in combinations(range(n), k):
        pivot_set = set(pivots)
        slots = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pivot_set]
        for values in product(range(q), repeat=len(slots)):
            b = np.zeros((k, n), dtype=np.int64)
            for i, p in enumerate(pivots):
                b[i, p] = 1
            for (i, j), val in zip(slots, values):
                b[i, j] = val
            out.append(b)
    return out


def batched_full_rank(mats: np.ndarray, q: int) -> np.ndarray:
    """Boolean mask: which of the square matrices ``mats[k]`` are invertible mod q."""
    a = np.array(mats, dtype=np.int64) % q
    count, n, _ = a.shape
    ok = np.ones(count, dtype=bool)
    inv_table = np.zeros(q, dtype=np.int64)
    for x in range(1, q):
        inv_table[x] = pow(x, -1, q)
    idx = np.arange(count)
    for c in range(n):
        # first nonzero row at or below c in column c
        sub = a[:, c:, c] != 0
        has = sub.any(axis=1)
        ok &= has
        p = c + np.argmax(sub, axis=1)
        rows_c = a[idx, c].copy()
        a[idx, c] = a[idx, p]
        a[idx, p] = rows_c
        piv = a[:, c, c]
        a[:, c] = (a[:, c] * inv_table[piv][:, None]) % q
        for r in range(c + 1, n):
            f = a[:, r, c][:, None]
            a[:, r] = (a[:, r] - f * a[:, c]) % q
    return ok


def count_invertible(endo_basis: Sequence[Sequence[np.ndarray]], q: int) -> int:
    """Count F_q-combinations of block-diagonal matrices invertible in every block.

    Each basis element is a sequence of square blocks (one per vertex); the
    blocks are independent, so invertibility is tested blockwise.
    """
    k = len(endo_basis)
    if k == 0:
        return 1
    if q**k > INVERTIBLE_COUNT_BUDGET:
        raise BudgetExceeded(f"q^{k} = {q**k} combinations exceeds {INVERTIBLE_COUNT_BUDGET}")
    nblocks = len(endo_basis[0])
    coeffs = np.array(list(product(range(q), repeat=k)), dtype=np.int64)
    ok = np.ones(len(coeffs), dtype=bool)
    for b in range(nblocks):
        stack = np.stack([np.asarray(e[b], dtype=np.int64) for e in endo_basis])
        if stack.shape[1] == 0:
            continue
        combos = np.tensordot(coeffs, stack, axes=(1, 0)) % q
        ok &= batched_full_rank(combos, q)
    return int(ok.sum())


def gl_order(n: int, q: int) -> int:
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def primitive_root(q: int) -> int:
    for g in range(1, q):
        if len({pow(g, e, q) for e in range(1, q)}) == q - 1:
            return g
    raise ValueError(f"{q} has no primitive root")


def gl_generators(n: int, q: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairs ``(g, g^-1)`` generating GL_n(F_q): transvections plus one scaling."""
    gens = []
    for a in range(n):
        for b in range(n):
            if a != b:
                g = np.eye(n, dtype=np.int64)
                g[a, b] = 1
                gi = np.eye(n, dtype=np.int64)
                gi[a, b] = q - 1
                gens.append((g, gi))
    if n >= 1 and q > 2:
        root = primitive_root(q)
        g = np.eye(n, dtype=np.int64)
        g[0, 0] = root
        gi = np.eye(n, dtype=np.int64)
        gi[0, 0] = pow(root, -1, q)
        gens.append((g, gi))
    return gens
