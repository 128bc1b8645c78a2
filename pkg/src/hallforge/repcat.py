"""Nilpotent representations of a quiver over F_q, at desk scale.

``enumerate_isoclasses`` builds an :class:`IsoTable`; every query after that
(Hom, Ext, automorphisms, Hall numbers) is answered from the frozen table and
memoised.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from . import gflinalg as gf
from ._orbits import OrbitTable, hom_basis
from .errors import BudgetExceeded, ConsistencyError
from .quiver import DimVec, Quiver, add_dims

# largest table bound allowed per field size; primes not listed get DEFAULT_DIM_GUARD
DIM_GUARD = {2: 4, 3: 4, 5: 3}
DEFAULT_DIM_GUARD = 2


def dim_guard(q: int) -> int:
    return DIM_GUARD.get(q, DEFAULT_DIM_GUARD)


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % p for p in range(2, int(n**0.5) + 1))


@dataclass(frozen=True, eq=False)
class Rep:
    """A representation: ``mats[k]`` is the ``dim[t] x dim[s]`` matrix of arrow k: s -> t."""

    dim: DimVec
    mats: tuple[np.ndarray, ...]

    @classmethod
    def build(cls, quiver: Quiver, dim: Sequence[int], mats: Sequence, q: int) -> Rep:
        dim = tuple(int(x) for x in dim)
        if len(mats) != len(quiver.arrows):
            raise ValueError(f"expected {len(quiver.arrows)} arrow matrices, got {len(mats)}")
        out = []
        for (s, t), m in zip(quiver.arrows, mats):
            out.append(np.asarray(m, dtype=np.int64).reshape(dim[t], dim[s]) % q)
        return cls(dim, tuple(out))

    @classmethod
    def zero(cls, quiver: Quiver, dim: Sequence[int]) -> Rep:
        dim = tuple(dim)
        return cls(dim, tuple(np.zeros((dim[t], dim[s]), dtype=np.int64) for s, t in quiver.arrows))

    @property
    def total_dim(self) -> int:
        return sum(self.dim)

    def direct_sum(self, other: Rep) -> Rep:
        mats = []
        for a, b in zip(self.mats, other.mats):
            m = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.int64)
            m[: a.shape[0], : a.shape[1]] = a
            m[a.shape[0] :, a.shape[1] :] = b
            mats.append(m)
        return Rep(add_dims(self.dim, other.dim), tuple(mats))

    def to_json(self) -> dict:
        return {"dim": list(self.dim), "mats": [[int(x) for x in m.ravel()] for m in self.mats]}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Rep):
            return NotImplemented
        return self.dim == other.dim and all(np.array_equal(a, b) for a, b in zip(self.mats, other.mats))

    def __hash__(self) -> int:
        return hash((self.dim, tuple(m.tobytes() for m in self.mats)))


class IsoTable(OrbitTable):
    """Isoclasses of nilpotent representations with total dimension <= the bound.

    Class 0 is the zero representation and classes ``1..|I|`` are the simples
    in vertex order.  Within a total dimension, classes are grouped by
    dimension vector and then ordered by their lexicographically smallest
    matrix encoding, which is also the stored representative.
    """

    def __init__(self, quiver: Quiver, q: int, max_total_dim: int):
        super().__init__(quiver, q, max_total_dim, with_differential=False)
        self.classes = [Rep(self.class_dims[c], self.class_mats(c)) for c in range(len(self))]
        self._hom: dict[tuple[int, int], int] = {}
        self._aut: dict[int, int] = {}

    def simple(self, i: int) -> int:
        return self.lookup(self.quiver.unit(i), Rep.zero(self.quiver, self.quiver.unit(i)).mats)

    def dim_of(self, cid: int) -> DimVec:
        return self.class_dims[cid]

    def iso_class_of(self, r: Rep) -> int:
        return self.lookup(r.dim, r.mats)

    def hom_dim(self, m: int, n: int) -> int:
        key = (m, n)
        if key not in self._hom:
            a, b = self.classes[m], self.classes[n]
            self._hom[key] = len(hom_basis(self.edges, a.dim, a.mats, b.dim, b.mats, self.q))
        return self._hom[key]

    def euler(self, m: int, n: int) -> int:
        return self.quiver.euler_form(self.class_dims[m], self.class_dims[n])

    def ext1_dim(self, m: int, n: int) -> int:
        e = self.hom_dim(m, n) - self.euler(m, n)
        if e < 0:
            raise ConsistencyError(f"negative Ext^1 dimension {e} for classes ({m}, {n})")
        return e

    def aut_order(self, m: int) -> int:
        """|Aut(M)|, as |GL(dim)| / |orbit of M| (the stabiliser of M is Aut(M))."""
        if m not in self._aut:
            self._aut[m] = self.automorphism_order(m)
        return self._aut[m]

    def aut_order_by_enumeration(self, m: int) -> int:
        """|Aut(M)| by counting invertible elements of End(M); budget-guarded."""
        a = self.classes[m]
        basis = hom_basis(self.edges, a.dim, a.mats, a.dim, a.mats, self.q)
        return gf.count_invertible(basis, self.q)

    def hall_number(self, m: int, n: int, l: int) -> int:
        """F^L_{MN}: subrepresentations X of L with X ~ N and L/X ~ M."""
        return self.profile(l).get((m, n), 0)

    def ext1_count_with_middle(self, m: int, n: int, l: int) -> int:
        f = self.hall_number(m, n, l)
        if f == 0:
            return 0
        num = f * self.q ** self.hom_dim(m, n) * self.aut_order(m) * self.aut_order(n)
        count, rem = divmod(num, self.aut_order(l))
        if rem:
            raise ConsistencyError(f"non-integral |Ext^1({m},{n})_{l}| = {num}/{self.aut_order(l)}")
        return count

    def middles(self, m: int, n: int) -> list[tuple[int, int]]:
        """``[(L, F^L_{MN})]`` for all middle terms L with nonzero Hall number."""
        return self.extensions(m, n)

    def to_json(self) -> list[dict]:
        return [{"id": c, **r.to_json()} for c, r in enumerate(self.classes)]


def enumerate_isoclasses(quiver: Quiver, q: int, max_total_dim: int) -> IsoTable:
    if not is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    if max_total_dim < 0:
        raise ValueError("max_total_dim must be nonnegative")
    if max_total_dim > dim_guard(q):
        raise BudgetExceeded(
            f"representation tables over F_{q} are limited to total dimension {dim_guard(q)}"
        )
    return IsoTable(quiver, q, max_total_dim)


def find_isomorphism(quiver: Quiver, r1: Rep, r2: Rep, q: int):
    """An invertible intertwiner ``r1 -> r2`` found by enumerating Hom, or None."""
    if r1.dim != r2.dim:
        return None
    basis = hom_basis(list(quiver.arrows), r1.dim, r1.mats, r2.dim, r2.mats, q)
    if q ** len(basis) > gf.INVERTIBLE_COUNT_BUDGET:
        raise BudgetExceeded("Hom space too large to search for an isomorphism")
    for coeffs in product(range(q), repeat=len(basis)):
        f = [sum((c * b[v] for c, b in zip(coeffs, basis)), np.zeros((r1.dim[v],) * 2, np.int64)) % q
             for v in range(quiver.n)]
        if all(gf.is_invertible(fv, q) for fv in f):
            return tuple(f)
    return None
