"""1-periodic complexes over rep^nil(Q) and the triangle-count oracle.

A 1-periodic complex is a representation together with one endomorphism
``d_v`` per vertex, ``d^2 = 0``, commuting with every arrow.  Its
isomorphism classes are classified with the same orbit engine as plain
representations, the differentials being extra loop edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gflinalg as gf
from ._orbits import OrbitTable, hom_basis, restrict_and_quotient
from .errors import BudgetExceeded, ConsistencyError
from .quiver import DimVec, add_dims
from .repcat import IsoTable, Rep
from .scalars import Coeff, v_pow

COMPLEX_DIM_GUARD = {2: 4, 3: 3}
DEFAULT_COMPLEX_DIM_GUARD = 2


def complex_dim_guard(q: int) -> int:
    return COMPLEX_DIM_GUARD.get(q, DEFAULT_COMPLEX_DIM_GUARD)


@dataclass(frozen=True, eq=False)
class PerComplex:
    base: Rep
    d: tuple[np.ndarray, ...]

    @property
    def dim(self) -> DimVec:
        return self.base.dim

    @property
    def mats(self) -> tuple[np.ndarray, ...]:
        """Arrow matrices followed by the differentials, as the orbit engine sees them."""
        return self.base.mats + self.d

    def check(self, arrows: Sequence[tuple[int, int]], q: int) -> None:
        for v, dv in enumerate(self.d):
            if (dv @ dv % q).any():
                raise ValueError(f"d^2 != 0 at vertex {v}")
        for (s, t), x in zip(arrows, self.base.mats):
            if ((self.d[t] @ x - x @ self.d[s]) % q).any():
                raise ValueError(f"d does not commute with arrow {s}->{t}")

    def direct_sum(self, other: PerComplex) -> PerComplex:
        ds = []
        for a, b in zip(self.d, other.d):
            m = np.zeros((a.shape[0] + b.shape[0],) * 2, dtype=np.int64)
            m[: a.shape[0], : a.shape[0]] = a
            m[a.shape[0] :, a.shape[0] :] = b
            ds.append(m)
        return PerComplex(self.base.direct_sum(other.base), tuple(ds))


def stalk(x: int, reps: IsoTable) -> PerComplex:
    r = reps.classes[x]
    return PerComplex(r, tuple(np.zeros((n, n), dtype=np.int64) for n in r.dim))


def k_complex(x: int, reps: IsoTable) -> PerComplex:
    """``K_X = (X + X, [[0, 1], [0, 0]])``."""
    r = reps.classes[x]
    base = r.direct_sum(r)
    ds = []
    for n in r.dim:
        d = np.zeros((2 * n, 2 * n), dtype=np.int64)
        d[:n, n:] = np.eye(n, dtype=np.int64)
        ds.append(d)
    return PerComplex(base, tuple(ds))


def _choice(rows: np.ndarray, n: int, q: int):
    b, piv = gf.rref(rows, q) if rows.shape[0] else (np.zeros((0, n), dtype=np.int64), [])
    return b, piv, [c for c in range(n) if c not in piv]


def homology_and_image(c: PerComplex, reps: IsoTable) -> tuple[int, DimVec]:
    """(class of ker d / im d, dimension vector of im d)."""
    q = reps.q
    arrows = list(reps.quiver.arrows)
    kers, ims = [], []
    for n, dv in zip(c.dim, c.d):
        kers.append(_choice(gf.nullspace(dv, q) if n else np.zeros((0, 0), np.int64), n, q))
    ker_mats, _ = restrict_and_quotient(arrows, c.base.mats, kers, q)
    if ker_mats is None:
        raise ConsistencyError("ker d is not a subrepresentation; d does not commute with arrows")
    for (kb, kp, _), n, dv in zip(kers, c.dim, c.d):
        img_rows = (dv % q).T  # rows span im d
        coords = img_rows[:, kp] if n else np.zeros((0, 0), np.int64)
        ims.append(_choice(coords, kb.shape[0], q))
    _, hom_mats = restrict_and_quotient(arrows, ker_mats, ims, q)
    if hom_mats is None:
        raise ConsistencyError("im d is not a subrepresentation of ker d")
    h_dim = tuple(kb.shape[0] - ib.shape[0] for (kb, _, _), (ib, _, _) in zip(kers, ims))
    im_dim = tuple(ib.shape[0] for ib, _, _ in ims)
    return reps.lookup(h_dim, hom_mats), im_dim


class CplxIsoTable(OrbitTable):
    """C_1-isomorphism classes of 1-periodic complexes with bounded total dimension."""

    def __init__(self, reps: IsoTable, max_total_dim: int):
        if max_total_dim > reps.max_total_dim:
            raise BudgetExceeded("complex table bound exceeds the representation table bound")
        super().__init__(reps.quiver, reps.q, max_total_dim, with_differential=True)
        self.reps = reps
        n_arrows = len(reps.quiver.arrows)
        self.classes = []
        for c in range(len(self)):
            mats = self.class_mats(c)
            self.classes.append(PerComplex(Rep(self.class_dims[c], mats[:n_arrows]), mats[n_arrows:]))
        self._homology = [homology_and_image(x, reps) for x in self.classes]
        self._triangles: dict[tuple[int, int], dict[int, int]] = {}

    def iso_class_of(self, c: PerComplex) -> int:
        return self.lookup(c.dim, c.mats)

    def homology(self, x: int) -> tuple[int, DimVec]:
        return self._homology[x]

    def stalk_id(self, a: int) -> int:
        return self.iso_class_of(stalk(a, self.reps))

    def k_id(self, a: int) -> int:
        return self.iso_class_of(k_complex(a, self.reps))

    def aut_order(self, x: int) -> int:
        return self.automorphism_order(x)

    def hom_dim(self, x: int, y: int) -> int:
        a, b = self.classes[x], self.classes[y]
        return len(hom_basis(self.edges, a.dim, a.mats, b.dim, b.mats, self.q))

    def hall_number(self, x: int, y: int, z: int) -> int:
        """Subcomplexes of Z isomorphic to Y with quotient isomorphic to X."""
        return self.profile(z).get((x, y), 0)

    def ext1_count_with_middle(self, x: int, y: int, z: int) -> int:
        """|Ext^1_{C_1}(X, Y)_Z| by Riedtmann-Peng inside C_1."""
        f = self.hall_number(x, y, z)
        if f == 0:
            return 0
        num = f * self.q ** self.hom_dim(x, y) * self.aut_order(x) * self.aut_order(y)
        count, rem = divmod(num, self.aut_order(z))
        if rem:
            raise ConsistencyError(f"non-integral C_1 extension count {num}/{self.aut_order(z)}")
        return count

    def ext1_size(self, x: int, y: int) -> int:
        """|Ext^1_{C_1}(X, Y)| as the sum over all middle terms."""
        return sum(
            self.ext1_count_with_middle(x, y, z)
            for z in self.ids_with_dim(add_dims(self.class_dims[x], self.class_dims[y]))
        )

    def ext1_dim(self, x: int, y: int) -> int:
        size = self.ext1_size(x, y)
        e = round(math.log(size, self.q))
        if self.q**e != size:
            raise ConsistencyError(f"|Ext^1| = {size} is not a power of {self.q}")
        return e

    def c1_ext1_count_with_middle(self, a: int, b: int, x: int) -> int:
        """|Ext^1_{C_1}(C_A, C_B)_X| for representation classes A, B."""
        reps = self.reps
        f = self.hall_number(self.stalk_id(a), self.stalk_id(b), x)
        if f == 0:
            return 0
        num = f * self.q ** reps.hom_dim(a, b) * reps.aut_order(a) * reps.aut_order(b)
        count, rem = divmod(num, self.aut_order(x))
        if rem:
            raise ConsistencyError(f"non-integral C_1 extension count {num}/{self.aut_order(x)}")
        return count

    def triangle_counts(self, a: int, b: int) -> dict[int, int]:
        """``{M: |(A,B)_M|}`` over representation classes M with a nonzero count."""
        key = (a, b)
        if key not in self._triangles:
            dim = add_dims(self.reps.class_dims[a], self.reps.class_dims[b])
            if tuple(dim) not in self.strata:
                self._require_dim(dim)
            out: dict[int, int] = {}
            for x in self.ids_with_dim(dim):
                c = self.c1_ext1_count_with_middle(a, b, x)
                if c:
                    m = self._homology[x][0]
                    out[m] = out.get(m, 0) + c
            self._triangles[key] = out
        return self._triangles[key]

    def triangle_count(self, a: int, b: int, m: int) -> int:
        return self.triangle_counts(a, b).get(m, 0)


def complex_isoclasses(reps: IsoTable, max_total_dim: int) -> CplxIsoTable:
    if max_total_dim > complex_dim_guard(reps.q):
        raise BudgetExceeded(
            f"complex tables over F_{reps.q} are limited to total dimension {complex_dim_guard(reps.q)}"
        )
    return CplxIsoTable(reps, max_total_dim)


@dataclass(frozen=True)
class D1Stats:
    hom_d1_size: int
    aut_d1_order_a: int
    sqrt_brace_ab: Coeff


def d1_stats(a: int, b: int, reps: IsoTable) -> D1Stats:
    """|Hom_{D_1}(A,B)|, the D_1-automorphism order of A and sqrt{A,B}."""
    q = reps.q
    ext_ab = reps.ext1_dim(a, b)
    hom_size = q ** (reps.hom_dim(a, b) + ext_ab)
    aut_tilde = reps.aut_order(a) * q ** reps.ext1_dim(a, a)
    sqrt_brace = v_pow(-reps.euler(a, b), q) / q**ext_ab
    return D1Stats(hom_size, aut_tilde, sqrt_brace)
