"""Orbit classification of linear structures on a quiver.

A *structure* on a dimension vector assigns a matrix to every edge of an edge
list; edges are the quiver's arrows, optionally followed by one loop per
vertex (the differential of a 1-periodic complex).  The group
``prod_v GL(dim_v)`` acts by change of basis and its orbits are the
isomorphism classes.

For every dimension vector the whole (filtered) state space is enumerated, the
group generators are applied to it in one vectorised pass and the orbits are
read off as connected components.  This gives, per state, its class and,
per class, the orbit size, so automorphism orders follow from
orbit-stabiliser without ever enumerating a group.
"""

from __future__ import annotations

from collections import Counter
from itertools import product
from typing import Callable, Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import gflinalg as gf
from .errors import BudgetExceeded
from .quiver import DimVec, Quiver

STATE_SPACE_BUDGET = 2_000_000

Edge = tuple[int, int]
Mats = tuple[np.ndarray, ...]


def dim_vectors(n: int, max_total: int) -> list[DimVec]:
    """All dimension vectors of total at most ``max_total``, in table order."""
    out = [d for d in product(range(max_total + 1), repeat=n) if sum(d) <= max_total]
    out.sort(key=dim_order_key)
    return out


def dim_order_key(d: Sequence[int]) -> tuple:
    return (sum(d), tuple(-x for x in d))


def edge_shapes(edges: Sequence[Edge], dim: Sequence[int]) -> list[tuple[int, int]]:
    return [(dim[t], dim[s]) for s, t in edges]


def encode(mats: Sequence[np.ndarray], q: int) -> int:
    code = 0
    for m in mats:
        for x in np.asarray(m, dtype=np.int64).ravel():
            code = code * q + int(x) % q
    return code


def decode(code: int, shapes: Sequence[tuple[int, int]], q: int) -> Mats:
    total = sum(r * c for r, c in shapes)
    digits = [0] * total
    for k in range(total - 1, -1, -1):
        code, digits[k] = divmod(code, q)
    out, pos = [], 0
    for r, c in shapes:
        out.append(np.array(digits[pos : pos + r * c], dtype=np.int64).reshape(r, c))
        pos += r * c
    return tuple(out)


def is_nilpotent(quiver: Quiver, dim: Sequence[int], mats: Sequence[np.ndarray], q: int) -> bool:
    """Whether J^N V = 0 for the arrow ideal J, i.e. every long path acts as zero."""
    spaces = [np.eye(d, dtype=np.int64) for d in dim]  # rows span the current space
    for _ in range(sum(dim) + 1):
        if all(s.shape[0] == 0 for s in spaces):
            return True
        new = [[] for _ in dim]
        for (s, t), m in zip(quiver.arrows, mats):
            if spaces[s].shape[0] and dim[t]:
                new[t].append((m @ spaces[s].T % q).T)
        spaces = []
        for v, parts in enumerate(new):
            if parts:
                spaces.append(gf.rref(np.concatenate(parts), q)[0])
            else:
                spaces.append(np.zeros((0, dim[v]), dtype=np.int64))
    return all(s.shape[0] == 0 for s in spaces)


class Stratum:
    """Classification of all valid structures with one fixed dimension vector."""

    def __init__(
        self,
        edges: Sequence[Edge],
        dim: DimVec,
        q: int,
        batch_filter: Callable[[list[np.ndarray]], np.ndarray] | None,
        state_filter: Callable[[Mats], bool] | None,
    ):
        self.dim = dim
        self.shapes = edge_shapes(edges, dim)
        n_entries = sum(r * c for r, c in self.shapes)
        size = q**n_entries
        if size > STATE_SPACE_BUDGET:
            raise BudgetExceeded(
                f"state space of dimension vector {dim} has {size} points (> {STATE_SPACE_BUDGET})"
            )
        codes = np.arange(size, dtype=np.int64)
        weights = q ** np.arange(n_entries - 1, -1, -1, dtype=np.int64)
        digits = (codes[:, None] // weights[None, :]) % q if n_entries else np.zeros((size, 0), np.int64)
        if batch_filter is not None and size:
            keep = batch_filter(self._split(digits))
            codes, digits = codes[keep], digits[keep]
        if state_filter is not None:
            keep = np.array(
                [state_filter(self._split(digits[k : k + 1], single=True)) for k in range(len(codes))],
                dtype=bool,
            )
            if keep.size:
                codes, digits = codes[keep], digits[keep]
        self.codes = codes  # ascending
        n_states = len(codes)

        rows, cols = [np.arange(n_states)], [np.arange(n_states)]
        mats = self._split(digits)
        for v in range(len(dim)):
            if not any(v in e and dim[e[0]] * dim[e[1]] for e in edges):
                continue
            for g, gi in gf.gl_generators(dim[v], q):
                moved = []
                for (s, t), m in zip(edges, mats):
                    if t == v:
                        m = np.einsum("ij,njk->nik", g, m) % q
                    if s == v:
                        m = np.einsum("nij,jk->nik", m, gi) % q
                    moved.append(m.reshape(n_states, m.shape[1] * m.shape[2]))
                new_digits = np.concatenate(moved, axis=1) if moved else digits
                new_codes = new_digits @ weights if n_entries else np.zeros(n_states, np.int64)
                pos = np.searchsorted(codes, new_codes)
                rows.append(np.arange(n_states))
                cols.append(pos)
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n_states, n_states))
        n_orbits, labels = connected_components(graph, directed=True, connection="weak")
        # relabel orbits by their smallest code, which is the first occurrence
        first = np.full(n_orbits, -1, dtype=np.int64)
        seen_order = []
        for k, lab in enumerate(labels):
            if first[lab] < 0:
                first[lab] = k
                seen_order.append(lab)
        relabel = np.empty(n_orbits, dtype=np.int64)
        for new, lab in enumerate(seen_order):
            relabel[lab] = new
        self.labels = relabel[labels]
        self.rep_codes = [int(codes[first[lab]]) for lab in seen_order]
        self.orbit_sizes = [int(x) for x in np.bincount(self.labels, minlength=n_orbits)]
        self.group_order = 1
        for d in dim:
            self.group_order *= gf.gl_order(d, q)

    def _split(self, digits: np.ndarray, single: bool = False):
        out, pos = [], 0
        for r, c in self.shapes:
            block = digits[:, pos : pos + r * c].reshape(digits.shape[0], r, c)
            out.append(block[0] if single else block)
            pos += r * c
        return tuple(out) if single else out

    def orbit_of(self, code: int) -> int | None:
        pos = int(np.searchsorted(self.codes, code))
        if pos < len(self.codes) and int(self.codes[pos]) == code:
            return int(self.labels[pos])
        return None


class OrbitTable:
    """Isomorphism classes of structures with total dimension <= a bound."""

    def __init__(self, quiver: Quiver, q: int, max_total_dim: int, with_differential: bool):
        self.quiver = quiver
        self.q = q
        self.max_total_dim = max_total_dim
        self.with_differential = with_differential
        n = quiver.n
        self.edges: list[Edge] = list(quiver.arrows)
        if with_differential:
            self.edges += [(v, v) for v in range(n)]
        cyclic = quiver.has_oriented_cycle()
        n_arrows = len(quiver.arrows)

        self.strata: dict[DimVec, Stratum] = {}
        self._first_id: dict[DimVec, int] = {}
        self.class_dims: list[DimVec] = []
        self.class_codes: list[int] = []
        self.class_orbit_sizes: list[int] = []
        self.class_group_orders: list[int] = []
        for dim in dim_vectors(n, max_total_dim):
            state_filter = None
            if cyclic:
                state_filter = lambda mats, dim=dim: is_nilpotent(quiver, dim, mats[:n_arrows], q)
            batch = self._complex_filter(n_arrows, q) if with_differential else None
            st = Stratum(self.edges, dim, q, batch, state_filter)
            self.strata[dim] = st
            self._first_id[dim] = len(self.class_dims)
            for code, size in zip(st.rep_codes, st.orbit_sizes):
                self.class_dims.append(dim)
                self.class_codes.append(code)
                self.class_orbit_sizes.append(size)
                self.class_group_orders.append(st.group_order)
        self._profiles: dict[int, Counter] = {}
        self._ext_index: dict[DimVec, dict[tuple[int, int], list[tuple[int, int]]]] = {}

    def _complex_filter(self, n_arrows: int, q: int):
        arrows = self.quiver.arrows

        def keep(mats: list[np.ndarray]) -> np.ndarray:
            ds = mats[n_arrows:]
            ok = np.ones(mats[0].shape[0], dtype=bool)
            for d in ds:
                if d.shape[1]:
                    ok &= ~np.any(np.einsum("nij,njk->nik", d, d) % q, axis=(1, 2))
            for (s, t), x in zip(arrows, mats[:n_arrows]):
                if x.size:
                    lhs = np.einsum("nij,njk->nik", ds[t], x)
                    rhs = np.einsum("nij,njk->nik", x, ds[s])
                    ok &= ~np.any((lhs - rhs) % q, axis=(1, 2))
            return ok

        return keep

    # -- basic lookups ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.class_dims)

    def ids_with_dim(self, dim: Sequence[int]) -> range:
        dim = tuple(dim)
        if dim not in self.strata:
            self._require_dim(dim)
        start = self._first_id[dim]
        return range(start, start + len(self.strata[dim].rep_codes))

    def _require_dim(self, dim: Sequence[int]) -> None:
        if any(x < 0 for x in dim) or len(dim) != self.quiver.n:
            raise ValueError(f"invalid dimension vector {tuple(dim)}")
        raise BudgetExceeded(
            f"dimension vector {tuple(dim)} exceeds the table bound {self.max_total_dim}"
        )

    def shapes(self, dim: Sequence[int]) -> list[tuple[int, int]]:
        return edge_shapes(self.edges, dim)

    def class_mats(self, cid: int) -> Mats:
        return decode(self.class_codes[cid], self.shapes(self.class_dims[cid]), self.q)

    def lookup(self, dim: Sequence[int], mats: Sequence[np.ndarray]) -> int:
        dim = tuple(int(x) for x in dim)
        if dim not in self.strata:
            self._require_dim(dim)
        for m, (r, c) in zip(mats, self.shapes(dim)):
            if np.shape(m) != (r, c):
                raise ValueError(f"matrix of shape {np.shape(m)} where {(r, c)} expected")
        orbit = self.strata[dim].orbit_of(encode(mats, self.q))
        if orbit is None:
            raise ValueError("structure violates the defining relations (nilpotency / d^2 = 0 / commutation)")
        return self._first_id[dim] + orbit

    def automorphism_order(self, cid: int) -> int:
        g, size = self.class_group_orders[cid], self.class_orbit_sizes[cid]
        assert g % size == 0
        return g // size

    # -- subobjects ------------------------------------------------------

    def profile(self, cid: int) -> Counter:
        """``Counter{(quotient class, sub class): number of subobjects}``."""
        if cid not in self._profiles:
            self._profiles[cid] = subobject_profile(self, self.class_dims[cid], self.class_mats(cid))
        return self._profiles[cid]

    def extensions(self, quot: int, sub: int) -> list[tuple[int, int]]:
        """Pairs ``(L, F^L_{quot,sub})`` over middle classes L with a nonzero count."""
        dim = tuple(a + b for a, b in zip(self.class_dims[quot], self.class_dims[sub]))
        if dim not in self._ext_index:
            self.ids_with_dim(dim)  # raises when out of range
            index: dict[tuple[int, int], list[tuple[int, int]]] = {}
            for mid in self.ids_with_dim(dim):
                for key, count in self.profile(mid).items():
                    index.setdefault(key, []).append((mid, count))
            self._ext_index[dim] = index
        return self._ext_index[dim].get((quot, sub), [])


def _subspace_data(n: int, k: int, q: int):
    out = []
    for b in gf.subspaces(n, k, q):
        piv = [int(np.nonzero(row)[0][0]) for row in b]
        non = [c for c in range(n) if c not in piv]
        out.append((b, piv, non))
    return out


def subobject_profile(table: OrbitTable, dim: DimVec, mats: Mats) -> Counter:
    """Classify every substructure of ``(dim, mats)`` by (quotient, sub) class."""
    q = table.q
    edges = table.edges
    cache: dict[tuple[int, int], list] = {}
    counts: Counter = Counter()
    for kdim in product(*(range(d + 1) for d in dim)):
        per_vertex = []
        for v, (n, k) in enumerate(zip(dim, kdim)):
            if (n, k) not in cache:
                cache[(n, k)] = _subspace_data(n, k, q)
            per_vertex.append(cache[(n, k)])
        qdim = tuple(d - k for d, k in zip(dim, kdim))
        for choice in product(*per_vertex):
            sub_mats, quot_mats = restrict_and_quotient(edges, mats, choice, q)
            if sub_mats is None:
                continue
            counts[(table.lookup(qdim, quot_mats), table.lookup(kdim, sub_mats))] += 1
    return counts


def restrict_and_quotient(edges, mats, choice, q):
    """Restricted and induced quotient matrices, or ``(None, None)`` if not invariant.

    ``choice[v] = (basis rows in RREF, pivot columns, non-pivot columns)``; the
    quotient uses the non-pivot standard vectors as a basis of a complement.
    """
    sub_mats, quot_mats = [], []
    for (s, t), m in zip(edges, mats):
        bs, ps, ns = choice[s]
        bt, pt, nt = choice[t]
        img = m @ bs.T % q  # columns: images of the sub basis at s
        resid = (img - bt.T @ img[pt, :]) % q
        if resid.any():
            return None, None
        sub_mats.append(img[pt, :])
        cols = m[:, ns] % q
        red = (cols - bt.T @ cols[pt, :]) % q
        quot_mats.append(red[nt, :])
    return tuple(sub_mats), tuple(quot_mats)


def hom_basis(edges: Sequence[Edge], dim_x, mats_x, dim_y, mats_y, q: int) -> list[Mats]:
    """Basis of intertwiners ``f = (f_v)`` with ``f_t X_e = Y_e f_s`` for all edges."""
    blocks = [(dim_y[v], dim_x[v]) for v in range(len(dim_x))]
    offsets = np.cumsum([0] + [r * c for r, c in blocks])
    n_unknowns = int(offsets[-1])
    rows = []
    for (s, t), x, y in zip(edges, mats_x, mats_y):
        eq_rows = dim_y[t] * dim_x[s]
        if eq_rows == 0:
            continue
        block = np.zeros((eq_rows, n_unknowns), dtype=np.int64)
        # vec(f_t X) = (I kron X^T) vec(f_t), vec(Y f_s) = (Y kron I) vec(f_s); row-major vec
        lt = np.kron(np.eye(dim_y[t], dtype=np.int64), np.asarray(x).T)
        rs = np.kron(np.asarray(y), np.eye(dim_x[s], dtype=np.int64))
        block[:, offsets[t] : offsets[t + 1]] += lt
        block[:, offsets[s] : offsets[s + 1]] -= rs
        rows.append(block % q)
    system = np.concatenate(rows) if rows else np.zeros((0, n_unknowns), dtype=np.int64)
    basis = gf.nullspace(system, q)
    out = []
    for vec in basis:
        out.append(
            tuple(vec[offsets[v] : offsets[v + 1]].reshape(blocks[v]) for v in range(len(blocks)))
        )
    return out


def iter_structures(table: OrbitTable, dim: DimVec) -> Iterator[Mats]:
    """All valid structures on ``dim`` (not just class representatives)."""
    st = table.strata[tuple(dim)]
    for code in st.codes:
        yield decode(int(code), st.shapes, table.q)
