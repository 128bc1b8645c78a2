"""Exact arithmetic in Q(sqrt(q)) and quantum-integer combinatorics.

Every structure constant in this package is a value of a rational function
of ``v`` evaluated at ``v = sqrt(q)``; elements of Q(sqrt(q)) are stored as a
pair of fractions ``a + b*sqrt(q)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

__all__ = [
    "Coeff",
    "v_pow",
    "qint",
    "qfact",
    "qbinom",
    "coeff_to_json",
    "coeff_from_json",
]


@dataclass(frozen=True, slots=True)
class Coeff:
    """The element ``rat_part + sqrt_part * sqrt(prime_q)``."""

    rat_part: Fraction
    sqrt_part: Fraction
    prime_q: int

    def __post_init__(self):
        if not isinstance(self.rat_part, Fraction):
            object.__setattr__(self, "rat_part", Fraction(self.rat_part))
        if not isinstance(self.sqrt_part, Fraction):
            object.__setattr__(self, "sqrt_part", Fraction(self.sqrt_part))

    @classmethod
    def of(cls, x, q: int) -> Coeff:
        """Embed an int, Fraction or Coeff."""
        if isinstance(x, Coeff):
            if x.prime_q != q:
                raise ValueError(f"field mismatch: sqrt({x.prime_q}) vs sqrt({q})")
            return x
        if not isinstance(x, (int, Rational)):
            raise TypeError(f"cannot embed {type(x).__name__} exactly")
        return cls(Fraction(x), Fraction(0), q)

    @classmethod
    def zero(cls, q: int) -> Coeff:
        return cls(Fraction(0), Fraction(0), q)

    @classmethod
    def one(cls, q: int) -> Coeff:
        return cls(Fraction(1), Fraction(0), q)

    def _lift(self, other) -> Coeff | None:
        if isinstance(other, Coeff):
            if other.prime_q != self.prime_q:
                raise ValueError(
                    f"field mismatch: sqrt({self.prime_q}) vs sqrt({other.prime_q})"
                )
            return other
        if isinstance(other, (int, Rational)):
            return Coeff(Fraction(other), Fraction(0), self.prime_q)
        return None

    def is_zero(self) -> bool:
        return self.rat_part == 0 and self.sqrt_part == 0

    def is_rational(self) -> bool:
        return self.sqrt_part == 0

    def conjugate(self) -> Coeff:
        return Coeff(self.rat_part, -self.sqrt_part, self.prime_q)

    def norm(self) -> Fraction:
        return self.rat_part**2 - self.prime_q * self.sqrt_part**2

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Coeff(self.rat_part + o.rat_part, self.sqrt_part + o.sqrt_part, self.prime_q)

    __radd__ = __add__

    def __neg__(self) -> Coeff:
        return Coeff(-self.rat_part, -self.sqrt_part, self.prime_q)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Coeff(self.rat_part - o.rat_part, self.sqrt_part - o.sqrt_part, self.prime_q)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.rat_part, self.sqrt_part, o.rat_part, o.sqrt_part
        return Coeff(a * c + self.prime_q * b * d, a * d + b * c, self.prime_q)

    __rmul__ = __mul__

    def inverse(self) -> Coeff:
        n = self.norm()
        if n == 0:
            # only 0 has norm 0 when q is not a square
            raise ZeroDivisionError("inverse of zero in Q(sqrt(q))")
        return Coeff(self.rat_part / n, -self.sqrt_part / n, self.prime_q)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> Coeff:
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        result = Coeff.one(self.prime_q)
        for _ in range(abs(n)):
            result = result * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Coeff):
            return (
                self.prime_q == other.prime_q
                and self.rat_part == other.rat_part
                and self.sqrt_part == other.sqrt_part
            )
        if isinstance(other, (int, Rational)):
            return self.sqrt_part == 0 and self.rat_part == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.sqrt_part == 0:
            return hash(self.rat_part)
        return hash((self.rat_part, self.sqrt_part, self.prime_q))

    def __repr__(self) -> str:
        return f"Coeff({self.rat_part}, {self.sqrt_part}, q={self.prime_q})"

    def __str__(self) -> str:
        if self.sqrt_part == 0:
            return str(self.rat_part)
        root = f"√{self.prime_q}"
        s = root if self.sqrt_part == 1 else f"{self.sqrt_part}*{root}"
        if self.rat_part == 0:
            return s
        return f"{self.rat_part} + {s}"


def v_pow(n: int, q: int) -> Coeff:
    """``sqrt(q) ** n`` for any integer ``n``."""
    k, odd = divmod(n, 2)
    scale = Fraction(q) ** k
    if odd:
        return Coeff(Fraction(0), scale, q)
    return Coeff(scale, Fraction(0), q)


def qint(r: int, q: int) -> Coeff:
    """Quantum integer ``[r] = v^(r-1) + v^(r-3) + ... + v^(1-r)`` at ``v = sqrt(q)``.

    Negative ``r`` is allowed and gives ``[-r] = -[r]``, which the product
    form of the Gaussian binomial relies on.
    """
    if r < 0:
        return -qint(-r, q)
    total = Coeff.zero(q)
    for e in range(r - 1, -r, -2):
        total = total + v_pow(e, q)
    return total


def qfact(r: int, q: int) -> Coeff:
    if r < 0:
        raise ValueError("qfact needs r >= 0")
    result = Coeff.one(q)
    for i in range(1, r + 1):
        result = result * qint(i, q)
    return result


def qbinom(m: int, r: int, q: int) -> Coeff:
    """Gaussian binomial ``[m][m-1]...[m-r+1] / [r]!``; ``m`` may be negative."""
    if r < 0:
        raise ValueError("qbinom needs r >= 0")
    num = Coeff.one(q)
    for i in range(r):
        num = num * qint(m - i, q)
    return num / qfact(r, q)


def coeff_to_json(c: Coeff) -> dict:
    return {"a": str(c.rat_part), "b": str(c.sqrt_part)}


def coeff_from_json(obj: dict, q: int) -> Coeff:
    return Coeff(Fraction(obj["a"]), Fraction(obj["b"]), q)
