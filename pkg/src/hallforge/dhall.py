"""The 1-periodic derived Hall algebra DH_1 and the ıquantum-group images in it.

Structure constants ``G_AB^M`` come from the closed formula in repcat data::

    G_AB^M = sum_{L,I,N} v^{<I,N>+<I,I>+<L,I>-<L,N>}
             * a_L a_I a_N / (a_A a_B) * F^M_{NL} F^A_{IN} F^B_{LI}

The complex-level route (triangle counts and D_1 statistics) is kept as
:meth:`DerivedHallAlgebra.g_constant_oracle` for validation.
"""

from __future__ import annotations

import json
from collections import defaultdict
from fractions import Fraction
from typing import NamedTuple

from .hallalg import HallElement, IHallAlgebra, _bilinear
from .percomplex import CplxIsoTable, complex_isoclasses, d1_stats
from .quiver import add_dims
from .repcat import IsoTable
from .scalars import Coeff, coeff_to_json, qfact, qint, v_pow

# the distinguished parameter: central reduction k_i -> VARSIGMA_DIAMOND
VARSIGMA_DIAMOND_V_EXP = -2
VARSIGMA_DIAMOND_SIGN = -1


def varsigma_diamond(q: int) -> Coeff:
    """``-v^{-2}``."""
    return VARSIGMA_DIAMOND_SIGN * v_pow(VARSIGMA_DIAMOND_V_EXP, q)


class PsiTildeImages(NamedTuple):
    b_image: HallElement
    k_image: HallElement


class DerivedHallAlgebra:
    kind = "dh"

    def __init__(self, reps: IsoTable):
        self.reps = reps
        self.q = reps.q
        self._rows: dict[tuple[int, int], dict[int, Coeff]] = {}
        self._cplx: CplxIsoTable | None = None

    # ---- basis -------------------------------------------------------
    def basis(self, m: int, coeff=1) -> HallElement:
        return HallElement.basis("dh", m, self.q, coeff)

    def one(self) -> HallElement:
        return self.basis(0)

    def scalar(self, c) -> HallElement:
        return self.basis(0, c)

    # ---- structure constants -----------------------------------------
    def g_constants(self, a: int, b: int) -> dict[int, Coeff]:
        """``{M: G_AB^M}`` with zero entries dropped."""
        key = (a, b)
        if key in self._rows:
            return self._rows[key]
        reps, q = self.reps, self.q
        by_sub: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for (l, i), f in reps.profile(b).items():
            by_sub[i].append((l, f))
        denom = reps.aut_order(a) * reps.aut_order(b)
        acc: dict[int, Coeff] = defaultdict(lambda: Coeff.zero(q))
        for (i, n), fa in reps.profile(a).items():
            for l, fb in by_sub.get(i, ()):
                e = reps.euler(i, n) + reps.euler(i, i) + reps.euler(l, i) - reps.euler(l, n)
                w = Fraction(reps.aut_order(l) * reps.aut_order(i) * reps.aut_order(n) * fa * fb, denom)
                w = v_pow(e, q) * w
                for m, fm in reps.extensions(n, l):
                    acc[m] = acc[m] + w * fm
        row = {m: c for m, c in acc.items() if not c.is_zero()}
        self._rows[key] = row
        return row

    def g_constant(self, a: int, b: int, m: int) -> Coeff:
        return self.g_constants(a, b).get(m, Coeff.zero(self.q))

    def complex_table(self, max_total_dim: int | None = None) -> CplxIsoTable:
        """The (cached) complex table used by the oracle."""
        if max_total_dim is None:
            max_total_dim = self.reps.max_total_dim
        if self._cplx is None or self._cplx.max_total_dim < max_total_dim:
            self._cplx = complex_isoclasses(self.reps, max_total_dim)
        return self._cplx

    def g_constant_oracle(self, a: int, b: int, m: int, cplx: CplxIsoTable | None = None) -> Coeff:
        """G_AB^M from triangle counts and D_1 statistics (derived Riedtmann-Peng)."""
        reps, q = self.reps, self.q
        if cplx is None:
            cplx = self.complex_table(sum(add_dims(reps.dim_of(a), reps.dim_of(b))))
        count = cplx.triangle_count(a, b, m)
        if count == 0:
            return Coeff.zero(q)
        s_ab = d1_stats(a, b, reps)
        s_aa = d1_stats(a, a, reps)
        s_bb = d1_stats(b, b, reps)
        s_mm = d1_stats(m, m, reps)
        ratio = Fraction(s_mm.aut_d1_order_a * count, s_aa.aut_d1_order_a * s_bb.aut_d1_order_a)
        return ratio * s_ab.sqrt_brace_ab * s_mm.sqrt_brace_ab / (s_aa.sqrt_brace_ab * s_bb.sqrt_brace_ab)

    # ---- products ----------------------------------------------------
    def product(self, x: HallElement, y: HallElement) -> HallElement:
        return _bilinear(x, y, "dh", self.g_constants)

    def power(self, x: HallElement, k: int) -> HallElement:
        out = self.one()
        for _ in range(k):
            out = self.product(out, x)
        return out

    # ---- maps from the ıHall algebra and from U^ı --------------------
    def phi(self, x: HallElement) -> HallElement:
        """``[M]*[K_alpha] -> sqrt{M,M} * a~_M * u_[M]``; torus coordinates are dropped."""
        if x.kind != "ihall":
            raise TypeError("phi expects an ihall element")
        pairs = []
        for (m, _alpha), c in x.items():
            st = d1_stats(m, m, self.reps)
            pairs.append((m, c * st.sqrt_brace_ab * st.aut_d1_order_a))
        return HallElement("dh", self.q, pairs)

    def psi_tilde_images(self, i: int) -> PsiTildeImages:
        q = self.q
        ih = IHallAlgebra(self.reps)
        s = self.reps.simple(i)
        b = ih.basis(s, coeff=Fraction(-1, q - 1))
        k = ih.torus(self.reps.quiver.unit(i), coeff=Fraction(-1, q))
        return PsiTildeImages(b, k)

    def psi_image(self, i: int) -> HallElement:
        """``B_i -> -v^{-1} u_[S_i]``."""
        return self.basis(self.reps.simple(i), -v_pow(-1, self.q))

    def idivided_power(self, i: int, m: int, parity: int, in_algebra: str = "dh") -> HallElement:
        if in_algebra != "dh":
            raise ValueError("ı-divided powers are evaluated in the derived Hall algebra only")
        if m < 0:
            raise ValueError("m must be nonnegative")
        q = self.q
        b = self.psi_image(i)
        k, odd = divmod(m, 2)
        if parity % 2:
            shifts = [2 * s - 1 for s in range(1, k + 1)]
        elif odd:
            shifts = [2 * s for s in range(1, k + 1)]
        else:
            shifts = [2 * s - 2 for s in range(1, k + 1)]
        out = b if odd else self.one()
        b2 = self.product(b, b) if shifts else None
        for r in shifts:
            factor = b2 + self.scalar(v_pow(-1, q) * qint(r, q) ** 2)
            out = self.product(out, factor)
        return out.scale(Coeff.of(1, q) / qfact(m, q))

    def serre_lhs(self, i: int, j: int, parity: int) -> HallElement:
        if i == j:
            raise ValueError("the ı-Serre relation needs two distinct vertices")
        c = self.reps.quiver.cartan_entry(i, j)
        top = 1 - c
        bj = self.psi_image(j)
        out = HallElement.zero("dh", self.q)
        for n in range(top + 1):
            left = self.idivided_power(i, n, parity)
            right = self.idivided_power(i, top - n, (c + parity) % 2)
            term = self.product(self.product(left, bj), right)
            out = out + term if n % 2 == 0 else out - term
        return out

    # ---- export ------------------------------------------------------
    def export_table(self) -> dict:
        """Every nonzero G_AB^M with total dim of A + B within the table bound."""
        reps = self.reps
        entries = []
        n = len(reps)
        for a in range(n):
            for b in range(n):
                if sum(reps.dim_of(a)) + sum(reps.dim_of(b)) > reps.max_total_dim:
                    continue
                for m, c in sorted(self.g_constants(a, b).items()):
                    entries.append({"a": a, "b": b, "m": m, "coeff": coeff_to_json(c)})
        return {
            "quiver": reps.quiver.to_json(),
            "q": self.q,
            "classes": reps.to_json(),
            "g": entries,
        }


def dumps_table(table: dict) -> str:
    return json.dumps(table, sort_keys=True, separators=(",", ":"))
