from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colstab import (
    Coeff,
    DescriptorMismatchError,
    Mode,
    NotDivisibleError,
    NotInIdealError,
    ParseError,
    RingDescriptor,
    c_adic_decompose,
    delta_split_linear,
    delta_split_quadratic,
    format_element,
    in_delta,
    parse_element,
)

from conftest import LAUR2, LAUR3, POLY2, POLY3, elements


# -- codec ----------------------------------------------------------------------


def test_parse_terms_and_round_trip():
    g = POLY3.parse("a1^2*a2 - 3")
    assert g.terms == {(2, 1, 0): 1, (0, 0, 0): -3}
    assert format_element(g) == "a1^2*a2 - 3"


def test_parse_laurent_inverse_monomial():
    g = LAUR3.parse("a1^-1")
    assert g.terms == {(-1, 0, 0): 1}
    assert format_element(g) == "a1^-1"


def test_parse_negative_exponent_rejected_in_polynomial_mode():
    with pytest.raises(ParseError) as err:
        POLY3.parse("a1^-1")
    assert err.value.position > 0


def test_parse_errors_carry_position():
    with pytest.raises(ParseError):
        POLY3.parse("a1 + + 2")
    with pytest.raises(ParseError):
        POLY3.parse("a9")
    with pytest.raises(ParseError):
        POLY3.parse("3 % 4")


def test_parse_rationals_only_when_enabled():
    ratring = RingDescriptor(Mode.POLYNOMIAL, 2, Coeff.RATIONALS)
    g = ratring.parse("1/2*a1 - 3/4")
    assert g.terms == {(1, 0): Fraction(1, 2), (0, 0): Fraction(-3, 4)}
    assert format_element(g) == "1/2*a1 - 3/4"
    with pytest.raises(ParseError):
        POLY2.parse("1/2*a1")


@pytest.mark.parametrize("ring", [POLY3, LAUR3], ids=["polynomial", "laurent"])
@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_codec_round_trip_random(ring, data):
    g = data.draw(elements(ring))
    assert parse_element(ring, format_element(g)) == g


# -- arithmetic -----------------------------------------------------------------


def test_difference_of_squares():
    a1 = POLY3.var(1)
    assert (a1 + 1) * (a1 - 1) == a1 * a1 - 1


def test_cohn_determinant_expansion():
    a1, a2 = POLY2.var(1), POLY2.var(2)
    assert (1 + a1 * a2) * (1 - a1 * a2) + a1**2 * a2**2 == POLY2.one


def test_laurent_monomial_times_inverse():
    a1 = LAUR3.var(1)
    assert a1 * LAUR3.parse("a1^-1") == LAUR3.one


def test_descriptor_mismatch_raises():
    with pytest.raises(DescriptorMismatchError):
        POLY3.var(1) + LAUR3.var(1)


@pytest.mark.parametrize("ring", [POLY3, LAUR3], ids=["polynomial", "laurent"])
@settings(deadline=None)
@given(data=st.data())
def test_ring_axioms_random(ring, data):
    g = data.draw(elements(ring))
    h = data.draw(elements(ring))
    k = data.draw(elements(ring))
    assert g + h == h + g
    assert g * h == h * g
    assert (g + h) * k == g * k + h * k
    assert (g * h) * k == g * (h * k)
    assert g + ring.zero == g
    assert g * ring.one == g
    assert g - g == ring.zero


# -- specialize -----------------------------------------------------------------


def test_specialize_examples():
    g = POLY3.parse("a3^2*a1 + a3 + a2")
    assert g.specialize(3) == POLY3.var(2)
    assert LAUR3.var(3).specialize(3) == LAUR3.one
    assert LAUR3.parse("a3^-1").specialize(3) == LAUR3.one


@pytest.mark.parametrize("ring", [POLY3, LAUR3], ids=["polynomial", "laurent"])
@settings(deadline=None)
@given(data=st.data())
def test_specialize_is_a_homomorphism(ring, data):
    g = data.draw(elements(ring))
    h = data.draw(elements(ring))
    k = data.draw(st.integers(1, ring.nvars))
    assert (g + h).specialize(k) == g.specialize(k) + h.specialize(k)
    assert (g * h).specialize(k) == g.specialize(k) * h.specialize(k)
    assert g.specialize(k).free_of(k)


# -- exact division -------------------------------------------------------------


def test_divide_examples():
    g = POLY3.parse("a3^2*a1 + a3")
    assert g.divide_exact(POLY3.var(3)) == POLY3.parse("a3*a1 + 1")

    f = LAUR3.parse("a3^-1") - 1
    q = f.divide_exact(LAUR3.c(3))
    assert q == -LAUR3.parse("a3^-1")
    assert q * LAUR3.c(3) == f

    with pytest.raises(NotDivisibleError):
        POLY3.var(1).divide_exact(POLY3.var(3))


def test_divisor_must_be_c_product():
    with pytest.raises(NotDivisibleError):
        (POLY3.var(1) * 2).divide_exact(POLY3.const(2))


@pytest.mark.parametrize("ring", [POLY3, LAUR3], ids=["polynomial", "laurent"])
@settings(deadline=None)
@given(data=st.data())
def test_divide_round_trip_random(ring, data):
    g = data.draw(elements(ring))
    exps = data.draw(st.tuples(*([st.integers(0, 2)] * 3)))
    d = ring.one
    for k, e in enumerate(exps, start=1):
        d = d * ring.c(k) ** e
    assert (g * d).divide_exact(d) == g


# -- c-adic decomposition ---------------------------------------------------------


def test_c_adic_examples():
    dec = c_adic_decompose(POLY3.parse("a1*a3^2 + a3 + a2"), 3, 2)
    assert list(dec.heads) == [POLY3.var(2), POLY3.one]
    assert dec.tail == POLY3.var(1)

    dec = c_adic_decompose(LAUR3.var(3), 3, 2)
    assert list(dec.heads) == [LAUR3.one, LAUR3.one]
    assert dec.tail == LAUR3.zero

    dec = c_adic_decompose(LAUR3.parse("a3^-1"), 3, 1)
    assert list(dec.heads) == [LAUR3.one]
    assert dec.tail == -LAUR3.parse("a3^-1")
    assert dec.reconstruct() == LAUR3.parse("a3^-1")


@pytest.mark.parametrize("ring", [POLY3, LAUR3], ids=["polynomial", "laurent"])
@settings(deadline=None)
@given(data=st.data())
def test_c_adic_round_trip_random(ring, data):
    g = data.draw(elements(ring))
    k = data.draw(st.integers(1, ring.nvars))
    t = data.draw(st.integers(1, 3))
    dec = c_adic_decompose(g, k, t)
    assert dec.reconstruct() == g
    for head in dec.heads:
        assert head.free_of(k)


def test_c_adic_unique_for_fixed_depth(ring3):
    g = ring3.parse("a1*a3^2 + 2*a3 - a2")
    first = c_adic_decompose(g, 3, 2)
    second = c_adic_decompose(g, 3, 2)
    assert first == second


# -- units ----------------------------------------------------------------------


def test_unit_examples():
    assert POLY3.const(-1).unit_inverse() == POLY3.const(-1)
    u = LAUR3.parse("a1^2*a2^-1")
    assert u.unit_inverse() == LAUR3.parse("a1^-2*a2")
    assert u * u.unit_inverse() == LAUR3.one
    assert not (1 + POLY3.var(1)).is_unit()
    assert not (1 + LAUR3.var(1)).is_unit()


def test_rational_units():
    ratring = RingDescriptor(Mode.POLYNOMIAL, 2, Coeff.RATIONALS)
    g = ratring.const(Fraction(3, 4))
    assert g * g.unit_inverse() == ratring.one


# -- augmentation ideal -----------------------------------------------------------


def test_in_delta_examples():
    assert in_delta(POLY2.parse("a1*a2"), 2)
    assert not in_delta(POLY2.var(1), 2)
    assert in_delta(LAUR2.c(1) * LAUR2.c(2), 2)
    assert not in_delta(POLY2.one, 1)
    assert not in_delta(LAUR2.one, 1)


@pytest.mark.parametrize("ring", [POLY2, LAUR2], ids=["polynomial", "laurent"])
@settings(deadline=None)
@given(data=st.data())
def test_in_delta_matches_base_point_vanishing(ring, data):
    g = data.draw(elements(ring))
    assert in_delta(g, 1) == g.specialize_all().is_zero


@pytest.mark.parametrize("ring", [POLY2, LAUR2], ids=["polynomial", "laurent"])
@settings(deadline=None)
@given(data=st.data())
def test_products_of_generators_land_in_delta_powers(ring, data):
    g = data.draw(elements(ring))
    h = data.draw(elements(ring))
    k1 = data.draw(st.integers(1, 2))
    k2 = data.draw(st.integers(1, 2))
    assert in_delta(g * ring.c(k1), 1)
    assert in_delta(g * ring.c(k1) * ring.c(k2) + h * ring.c(1) * ring.c(2), 2)


# -- ideal splits -----------------------------------------------------------------


def test_linear_split_examples():
    assert delta_split_linear(POLY2.parse("a1*a2")) == (POLY2.zero, POLY2.var(1))
    assert delta_split_linear(POLY2.c(1)) == (POLY2.one, POLY2.zero)
    with pytest.raises(NotInIdealError):
        delta_split_linear(POLY2.one)


def test_quadratic_split_examples():
    zero, one = POLY2.zero, POLY2.one
    assert delta_split_quadratic(POLY2.parse("a2^2")) == (zero, zero, zero, one)
    assert delta_split_quadratic(POLY2.c(1) * POLY2.c(2)) == (zero, one, zero, zero)
    assert delta_split_quadratic(POLY2.zero) == (zero, zero, zero, zero)
    with pytest.raises(NotInIdealError):
        delta_split_quadratic(POLY2.c(1))


@pytest.mark.parametrize("ring", [POLY2, LAUR2], ids=["polynomial", "laurent"])
@settings(deadline=None)
@given(data=st.data())
def test_linear_split_reconstructs(ring, data):
    b1 = data.draw(elements(ring))
    b2 = data.draw(elements(ring))
    beta = b1 * ring.c(1) + b2 * ring.c(2)
    s1, s2 = delta_split_linear(beta)
    assert s1 * ring.c(1) + s2 * ring.c(2) == beta
    assert s1.free_of(2)


@pytest.mark.parametrize("ring", [POLY2, LAUR2], ids=["polynomial", "laurent"])
@settings(deadline=None)
@given(data=st.data())
def test_quadratic_split_reconstructs(ring, data):
    c1, c2 = ring.c(1), ring.c(2)
    parts = [data.draw(elements(ring)) for _ in range(3)]
    delta = parts[0] * c1 * c1 + parts[1] * c1 * c2 + parts[2] * c2 * c2
    d11, d12, d12p, d22 = delta_split_quadratic(delta)
    assert d12p.is_zero
    assert d11 * c1 * c1 + (d12 + d12p) * c1 * c2 + d22 * c2 * c2 == delta
    assert d11.free_of(2) and d12.free_of(2)
