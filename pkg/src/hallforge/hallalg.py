"""Formal linear combinations over Q(sqrt q) and the Hall-type products.

Three basis kinds share one element type:

* ``"rep"``   -- key ``M`` (an IsoClassId), the Ringel-Hall basis ``[M]``;
* ``"ihall"`` -- key ``(M, alpha)``, the ıHall basis ``[M] * [K_alpha]``;
* ``"dh"``    -- key ``M``, the basis ``u_[M]`` of the 1-periodic derived
  Hall algebra (products live in :mod:`hallforge.dhall`).
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import KindMismatch
from .percomplex import PerComplex, homology_and_image
from .quiver import DimVec, add_dims
from .repcat import IsoTable
from .scalars import Coeff, coeff_to_json, v_pow

KINDS = ("rep", "ihall", "dh")


class HallElement:
    """An immutable finite linear combination of basis keys of one kind."""

    __slots__ = ("kind", "q", "_terms")

    def __init__(self, kind: str, q: int, terms: Mapping | Iterable = ()):
        if kind not in KINDS:
            raise ValueError(f"unknown basis kind {kind!r}")
        self.kind = kind
        self.q = q
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, c in items:
            c = Coeff.of(c, q)
            acc[key] = acc[key] + c if key in acc else c
        self._terms = {k: c for k, c in acc.items() if not c.is_zero()}

    @classmethod
    def basis(cls, kind: str, key, q: int, coeff=1) -> HallElement:
        return cls(kind, q, [(_norm_key(kind, key), coeff)])

    @classmethod
    def zero(cls, kind: str, q: int) -> HallElement:
        return cls(kind, q)

    def _check(self, other: HallElement) -> None:
        if not isinstance(other, HallElement):
            raise TypeError(f"expected a HallElement, got {type(other).__name__}")
        if other.kind != self.kind:
            raise KindMismatch(f"cannot combine {self.kind!r} and {other.kind!r} elements")
        if other.q != self.q:
            raise ValueError("elements over different fields")

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))

    def keys(self):
        return [k for k, _ in self.items()]

    def coeff(self, key) -> Coeff:
        return self._terms.get(_norm_key(self.kind, key), Coeff.zero(self.q))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: HallElement) -> HallElement:
        self._check(other)
        return HallElement(self.kind, self.q, list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> HallElement:
        return HallElement(self.kind, self.q, [(k, -c) for k, c in self._terms.items()])

    def __sub__(self, other: HallElement) -> HallElement:
        return self + (-other)

    def scale(self, c) -> HallElement:
        c = Coeff.of(c, self.q)
        return HallElement(self.kind, self.q, [(k, c * x) for k, x in self._terms.items()])

    def __rmul__(self, c) -> HallElement:
        if isinstance(c, HallElement):
            return NotImplemented
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HallElement):
            return NotImplemented
        return self.kind == other.kind and self.q == other.q and self._terms == other._terms

    def __hash__(self):
        return hash((self.kind, self.q, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"HallElement({self.kind}: 0)"
        body = " + ".join(f"({c})*{_key_str(self.kind, k)}" for k, c in self.items())
        return f"HallElement({self.kind}: {body})"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "terms": [{"key": _key_json(self.kind, k), "coeff": coeff_to_json(c)} for k, c in self.items()],
        }


def _norm_key(kind: str, key):
    if kind == "ihall":
        m, alpha = key
        return (int(m), tuple(int(a) for a in alpha))
    return int(key)


def _sort_key(key):
    return key if isinstance(key, tuple) else (key,)


def _key_str(kind, key) -> str:
    if kind == "rep":
        return f"[{key}]"
    if kind == "dh":
        return f"u[{key}]"
    return f"[{key[0]}]*K{key[1]}"


def _key_json(kind, key):
    if kind == "ihall":
        return {"class": key[0], "alpha": list(key[1])}
    return key


def linear_combine(scalars: Sequence, elements: Sequence[HallElement]) -> HallElement:
    if len(scalars) != len(elements):
        raise ValueError("need one scalar per element")
    if not elements:
        raise ValueError("empty combination has no kind")
    first = elements[0]
    for e in elements[1:]:
        first._check(e)
    pairs = []
    for s, e in zip(scalars, elements):
        s = Coeff.of(s, first.q)
        pairs.extend((k, s * c) for k, c in e._terms.items())
    return HallElement(first.kind, first.q, pairs)


def _bilinear(x: HallElement, y: HallElement, kind: str, basis_product) -> HallElement:
    if x.kind != kind or y.kind != kind:
        raise KindMismatch(f"expected two {kind!r} elements, got {x.kind!r} and {y.kind!r}")
    acc: dict = defaultdict(lambda: Coeff.zero(x.q))
    for kx, cx in x._terms.items():
        for ky, cy in y._terms.items():
            c = cx * cy
            for k, g in basis_product(kx, ky).items():
                acc[k] = acc[k] + c * g
    return HallElement(kind, x.q, acc)


class RingelHallAlgebra:
    """``[M] <> [N] = sum_L |Ext^1(M,N)_L| / |Hom(M,N)| [L]``."""

    kind = "rep"

    def __init__(self, reps: IsoTable):
        self.reps = reps
        self.q = reps.q
        self._cache: dict[tuple[int, int], dict[int, Coeff]] = {}

    def basis(self, m: int, coeff=1) -> HallElement:
        return HallElement.basis("rep", m, self.q, coeff)

    def one(self) -> HallElement:
        return self.basis(0)

    def basis_product(self, m: int, n: int) -> dict[int, Coeff]:
        key = (m, n)
        if key not in self._cache:
            reps = self.reps
            hom = self.q ** reps.hom_dim(m, n)
            self._cache[key] = {
                l: Coeff.of(reps.ext1_count_with_middle(m, n, l), self.q) / hom
                for l, _ in reps.middles(m, n)
            }
        return self._cache[key]

    def product(self, x: HallElement, y: HallElement) -> HallElement:
        return _bilinear(x, y, "rep", self.basis_product)


class IHallAlgebra:
    """The ıHall algebra on its basis ``[M] * [K_alpha]``.

    On two classes ``A, B`` the product is::

        [A]*[B] = sum v^{-<A,B>} q^{<N,L>} F^M_{NL} F^A_{IN} F^B_{LI}
                      * a_N a_L a_I / a_M * [M]*[K_{dim I}]

    and the torus elements ``[K_alpha]`` are central and multiply additively.
    """

    kind = "ihall"

    def __init__(self, reps: IsoTable):
        self.reps = reps
        self.q = reps.q
        self._cache: dict[tuple[int, int], dict[tuple[int, DimVec], Coeff]] = {}

    def zero_vec(self) -> DimVec:
        return (0,) * self.reps.quiver.n

    def basis(self, m: int, alpha: Sequence[int] | None = None, coeff=1) -> HallElement:
        alpha = self.zero_vec() if alpha is None else tuple(alpha)
        return HallElement.basis("ihall", (m, alpha), self.q, coeff)

    def torus(self, alpha: Sequence[int], coeff=1) -> HallElement:
        return self.basis(0, alpha, coeff)

    def one(self) -> HallElement:
        return self.basis(0)

    def class_product(self, a: int, b: int) -> dict[tuple[int, DimVec], Coeff]:
        key = (a, b)
        if key in self._cache:
            return self._cache[key]
        reps, q = self.reps, self.q
        prefactor = v_pow(-reps.euler(a, b), q)
        by_sub: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for (l, i), f in reps.profile(b).items():
            by_sub[i].append((l, f))
        acc: dict[tuple[int, DimVec], int | object] = defaultdict(lambda: Coeff.zero(q))
        for (i, n), fa in reps.profile(a).items():
            for l, fb in by_sub.get(i, ()):
                w = fa * fb * Fraction(q) ** reps.euler(n, l) * reps.aut_order(n) * reps.aut_order(l) * reps.aut_order(i)
                torus = reps.dim_of(i)
                for m, fm in reps.extensions(n, l):
                    acc[(m, torus)] = acc[(m, torus)] + prefactor * Coeff.of(w * fm, q) / reps.aut_order(m)
        out = {k: c for k, c in acc.items() if not c.is_zero()}
        self._cache[key] = out
        return out

    def basis_product(self, x, y) -> dict[tuple[int, DimVec], Coeff]:
        (a, alpha), (b, beta) = x, y
        shift = add_dims(alpha, beta)
        return {(m, add_dims(shift, t)): c for (m, t), c in self.class_product(a, b).items()}

    def product(self, x: HallElement, y: HallElement) -> HallElement:
        return _bilinear(x, y, "ihall", self.basis_product)

    def normalize_complex(self, c: PerComplex) -> HallElement:
        """``[X] = [H(X)] * [K_{dim im d}]`` in the ıHall algebra."""
        h, im = homology_and_image(c, self.reps)
        return self.basis(h, im)
