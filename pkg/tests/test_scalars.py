from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hallforge.scalars import Coeff, coeff_from_json, coeff_to_json, qbinom, qfact, qint, v_pow

PRIMES = st.sampled_from([2, 3, 5, 7])
small_frac = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def coeffs(draw, q=None):
    q = draw(PRIMES) if q is None else q
    return Coeff(draw(small_frac), draw(small_frac), q)


@st.composite
def triples(draw):
    q = draw(PRIMES)
    return tuple(draw(coeffs(q)) for _ in range(3))


def test_v_pow_examples():
    assert v_pow(0, 2) == 1
    assert v_pow(2, 3) == 3
    assert v_pow(-1, 2) == Coeff(0, Fraction(1, 2), 2)


def test_qint_examples():
    assert qint(0, 2) == 0
    assert qint(1, 5) == 1
    # sqrt2 + 1/sqrt2
    assert qint(2, 2) == Coeff(0, Fraction(3, 2), 2)


def test_qfact_examples():
    assert qfact(0, 3) == 1
    assert qfact(1, 3) == 1
    assert qfact(2, 3) == qint(2, 3) == Coeff(0, Fraction(4, 3), 3)
    with pytest.raises(ValueError):
        qfact(-1, 2)


def test_qbinom_examples():
    assert qbinom(5, 0, 2) == 1
    assert qbinom(2, 1, 3) == qint(2, 3)
    assert qbinom(2, 2, 2) == 1
    # negative top: [-1 choose 1] = [-1] = -1
    assert qbinom(-1, 1, 3) == -1


def test_qbinom_matches_gaussian_count():
    # [m choose r]_v = v^{-r(m-r)} * #{r-dim subspaces of F_q^m}
    from hallforge.gflinalg import gaussian_binomial

    for q in (2, 3):
        for m in range(5):
            for r in range(m + 1):
                assert qbinom(m, r, q) == v_pow(-r * (m - r), q) * gaussian_binomial(m, r, q)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        Coeff.zero(2).inverse()


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        Coeff.one(2) + Coeff.one(3)


def test_float_rejected():
    with pytest.raises(TypeError):
        Coeff.of(0.5, 2)


def test_json_roundtrip_and_format():
    c = Coeff(Fraction(-3, 4), Fraction(3, 2), 2)
    assert coeff_to_json(c) == {"a": "-3/4", "b": "3/2"}
    assert coeff_from_json(coeff_to_json(c), 2) == c
    assert coeff_to_json(Coeff.zero(5)) == {"a": "0", "b": "0"}


def test_rational_equality_and_hash():
    assert Coeff.of(3, 2) == 3
    assert hash(Coeff.of(Fraction(1, 2), 3)) == hash(Fraction(1, 2))
    assert Coeff(0, 1, 2) != 0


@given(triples())
def test_ring_axioms(t):
    x, y, z = t
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x - x == 0


@given(coeffs())
def test_inverse(x):
    if x.is_zero():
        return
    assert x * x.inverse() == 1
    assert 1 / x == x.inverse()
    assert x.norm() == (x * x.conjugate()).rat_part


@given(st.integers(-8, 8), st.integers(-8, 8), PRIMES)
def test_v_pow_additive(a, b, q):
    assert v_pow(a, q) * v_pow(b, q) == v_pow(a + b, q)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_qint_telescopes(q):
    for r in range(11):
        assert qint(r, q) * (v_pow(1, q) - v_pow(-1, q)) == v_pow(r, q) - v_pow(-r, q)


@given(st.integers(-6, 8), st.integers(0, 5), PRIMES)
def test_qbinom_times_factorial(m, r, q):
    prod = Coeff.one(q)
    for i in range(r):
        prod = prod * qint(m - i, q)
    assert qbinom(m, r, q) * qfact(r, q) == prod
