import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homfour.cyclotomic import (
    CycRat,
    cyc_div_int,
    cyc_from_int,
    cyc_from_json,
    cyc_scale_q_pow,
    cyc_to_complex,
    cyc_to_json,
    zeta_pow,
)

PRIMES = (2, 3, 5, 7)


def cycs(p):
    width = max(1, p - 1)
    coeff = st.integers(min_value=-50, max_value=50)
    den = st.integers(min_value=1, max_value=12)
    return st.builds(lambda num, d: CycRat(p, num, d), st.tuples(*[coeff] * width), den)


def test_vanishing_sum():
    for p in PRIMES:
        total = cyc_from_int(0, p)
        for a in range(p):
            total = total + zeta_pow(p, a)
        assert total == 0


def test_zeta_top_power_rewrites_into_basis():
    assert zeta_pow(5, 4).num == (-1, -1, -1, -1)
    assert zeta_pow(3, 2).num == (-1, -1)
    assert zeta_pow(2, 1) == cyc_from_int(-1, 2)


def test_canonical_form_reduces_gcd_and_sign():
    a = CycRat(5, (2, 0, -4, 6), -4)
    assert a.den == 2
    assert a.num == (-1, 0, 2, -3)
    zero = CycRat(3, (0, 0), 7)
    assert zero.den == 1 and zero.is_zero()


def test_constructor_rejects_bad_input():
    with pytest.raises(ValueError):
        CycRat(4, (1, 1, 1))
    with pytest.raises(ValueError):
        CycRat(5, (1, 2))
    with pytest.raises(ZeroDivisionError):
        CycRat(3, (1, 1), 0)
    with pytest.raises(ValueError):
        zeta_pow(5, 5)
    with pytest.raises(ValueError):
        cyc_from_int(1, 3) + cyc_from_int(1, 5)


def test_immutable():
    a = cyc_from_int(2, 3)
    with pytest.raises(AttributeError):
        a.den = 5


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
@settings(max_examples=40, deadline=None)
def test_ring_laws(p, data):
    a = data.draw(cycs(p))
    b = data.draw(cycs(p))
    c = data.draw(cycs(p))
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == 0
    assert a - b == a + (-b)


def test_multiplication_wraps_exponents():
    # zeta^3 * zeta^4 = zeta^7 = 1 in Q(zeta_7)
    assert zeta_pow(7, 3) * zeta_pow(7, 4) == 1
    for a in range(5):
        for b in range(5):
            assert zeta_pow(5, a) * zeta_pow(5, b) == zeta_pow(5, (a + b) % 5)


def test_pow_and_int_mixing():
    z = zeta_pow(7, 1)
    assert z**7 == 1
    assert z**0 == 1
    assert 2 * z - z == z
    assert (1 + z) - z == 1
    with pytest.raises(ValueError):
        z**-1


def _legendre(a, p):
    return pow(a, (p - 1) // 2, p)


@pytest.mark.parametrize("p", (3, 5, 7, 11, 13))
def test_quadratic_gauss_sum_squares_to_plus_minus_p(p):
    g = cyc_from_int(0, p)
    for a in range(1, p):
        sign = 1 if _legendre(a, p) == 1 else -1
        g = g + sign * zeta_pow(p, a)
    expected = p if p % 4 == 1 else -p
    assert g * g == cyc_from_int(expected, p)


def test_div_int_is_exact_rational_division():
    a = cyc_from_int(6, 3)
    assert cyc_div_int(a, 3) == 2
    third = cyc_div_int(cyc_from_int(1, 3), 3)
    assert third.den == 3
    assert third + third + third == 1
    with pytest.raises(ZeroDivisionError):
        cyc_div_int(a, 0)


def test_scale_q_pow_matches_tate_twist_sign_conventions():
    a = cyc_from_int(6, 3)
    assert cyc_scale_q_pow(a, 3, 1) == 2
    assert cyc_scale_q_pow(a, 3, -2) == 54
    ninth = cyc_scale_q_pow(cyc_from_int(1, 3), 9, 1)
    assert ninth.den == 9
    assert cyc_scale_q_pow(ninth, 9, -1) == 1


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_complex_embedding_is_a_homomorphism(p, data):
    a = data.draw(cycs(p))
    b = data.draw(cycs(p))
    za, zb = cyc_to_complex(a), cyc_to_complex(b)
    assert cmath.isclose(cyc_to_complex(a + b), za + zb, abs_tol=1e-7)
    assert cmath.isclose(cyc_to_complex(a * b), za * zb, abs_tol=1e-5)


def test_complex_embedding_sends_zeta_to_primitive_root():
    z = cyc_to_complex(zeta_pow(5, 1))
    assert cmath.isclose(z, cmath.exp(2j * cmath.pi / 5), abs_tol=1e-12)


@pytest.mark.parametrize("p", PRIMES)
@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_json_round_trip(p, data):
    a = data.draw(cycs(p))
    assert cyc_from_json(cyc_to_json(a)) == a


def test_json_rejects_garbage():
    with pytest.raises(ValueError):
        cyc_from_json({"p": 3, "num": [1, 0]})
    with pytest.raises(ValueError):
        cyc_from_json("nope")
