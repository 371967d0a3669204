import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqpowers.cyclotomic import (
    OrderMismatch,
    embed_int,
    make,
    one,
    parse_cycint,
    zero,
    zeta,
)

from conftest import PRIMES, cyc_triples, cycints


def test_make_reduces_top_power():
    assert make(3, [0, 0, 1]).coeffs == (-1, -1)


def test_make_order_two_is_integers():
    assert make(2, [5, 3]).coeffs == (2,)
    assert zeta(2) == -1


def test_all_roots_sum_to_zero():
    assert make(5, [1, 1, 1, 1, 1]).coeffs == (0, 0, 0, 0)


@pytest.mark.parametrize("n", [4, 9, 15])
def test_composite_order_names_factor(n):
    with pytest.raises(ValueError, match="divisible by 3" if n % 2 else "divisible by 2"):
        make(n, [1])


def test_make_rejects_long_input():
    with pytest.raises(ValueError):
        make(3, [1, 2, 3, 4])


def test_zeta_powers():
    assert zeta(3) * zeta(3) ** 2 == one(3)
    assert zeta(5) ** 5 == one(5)
    for n in PRIMES:
        total = zero(n)
        for i in range(n):
            total = total + zeta(n) ** i
        assert total.is_zero()
        assert zeta(n) ** n == one(n)


def test_hand_expansion():
    # (1 + z)(1 - z) = 1 - z^2 = 2 + z when z^2 = -1 - z
    assert make(3, [1, 1]) * make(3, [1, -1]) == make(3, [2, 1])


def test_embed_and_zero_sum():
    assert embed_int(3, 7).coeffs == (7, 0)
    w = zeta(3)
    assert (one(3) + (w + w**2)).is_zero()


def test_to_complex_zeta3():
    c = zeta(3).to_complex()
    assert c.real == pytest.approx(-0.5, abs=1e-12)
    assert c.imag == pytest.approx(math.sqrt(3) / 2, abs=1e-12)


def test_mismatched_orders():
    with pytest.raises(OrderMismatch, match="3 and 5"):
        zeta(3) + zeta(5)


def test_int_mixing():
    w = zeta(5)
    assert w + 2 == 2 + w
    assert 3 * w == w + w + w
    assert 1 - w == -(w - 1)
    assert embed_int(5, 4) == 4
    assert hash(embed_int(5, 4)) == hash(4)


@settings(max_examples=150, deadline=None)
@given(cyc_triples())
def test_ring_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert a - a == zero(a.order)
    assert a * one(a.order) == a


@settings(max_examples=150, deadline=None)
@given(cyc_triples(lo=-10, hi=10))
def test_no_zero_divisors(t):
    a, b, _ = t
    if (a * b).is_zero():
        assert a.is_zero() or b.is_zero()


@settings(max_examples=100, deadline=None)
@given(cyc_triples())
def test_canonical_idempotent(t):
    a = t[0]
    assert make(a.order, list(a.coeffs)) == a


@settings(max_examples=150, deadline=None)
@given(cyc_triples(lo=-10, hi=10))
def test_to_complex_is_homomorphism(t):
    a, b, _ = t
    assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-9
    assert abs((a + b).to_complex() - (a.to_complex() + b.to_complex())) < 1e-9


@settings(max_examples=100, deadline=None)
@given(cyc_triples(lo=-10, hi=10))
def test_exact_division_roundtrip(t):
    a, b, _ = t
    if not b.is_zero():
        assert (a * b).divide_exact(b) == a


def test_inexact_division_raises():
    with pytest.raises(ArithmeticError):
        one(3).divide_exact(embed_int(3, 2))
    with pytest.raises(ZeroDivisionError):
        one(3).divide_exact(zero(3))


@settings(max_examples=60, deadline=None)
@given(cyc_triples(lo=-6, hi=6))
def test_norm_matches_complex_conjugates(t):
    a = t[0]
    n = a.order
    prod = 1
    for j in range(1, n):
        w = cmath.exp(2j * math.pi * j / n)
        prod *= sum(c * w**i for i, c in enumerate(a.coeffs))
    assert a.norm() == round(prod.real)


def test_norm_of_one_minus_zeta_is_p():
    # classical: N(1 - zeta_p) = p
    for p in (3, 5, 7):
        assert (one(p) - zeta(p)).norm() == p


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(cycints))
def test_render_parse_roundtrip(a):
    assert parse_cycint(str(a)) == a
    assert parse_cycint(a.render(), a.order) == a


def test_parse_forms():
    assert parse_cycint("1 + 2*z - z^2", 5) == make(5, [1, 2, -1])
    assert parse_cycint("z^3 (n=3)") == one(3)
    assert parse_cycint("-z", 3) == -zeta(3)
    assert parse_cycint("3z", 3) == 3 * zeta(3)
    with pytest.raises(ValueError):
        parse_cycint("1 + + z", 3)
    with pytest.raises(ValueError):
        parse_cycint("2 3", 3)
    with pytest.raises(OrderMismatch):
        parse_cycint("z (n=5)", 3)


def test_immutable():
    with pytest.raises(AttributeError):
        zeta(3).coeffs = (0, 0)
