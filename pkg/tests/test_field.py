from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lindg.field import (
    CyclotomicField,
    FieldMismatchError,
    ScalarSyntaxError,
    cyclotomic_polynomial,
    euler_phi,
    field_arith,
    format_scalar,
    make_cyclotomic_field,
    parse_scalar,
)

F = Fraction


def test_phi_small_cases():
    assert cyclotomic_polynomial(1) == (F(-1), F(1))
    assert cyclotomic_polynomial(2) == (F(1), F(1))
    assert cyclotomic_polynomial(3) == (F(1), F(1), F(1))
    assert cyclotomic_polynomial(4) == (F(1), F(0), F(1))
    # Phi_12 = x^4 - x^2 + 1
    assert cyclotomic_polynomial(12) == (F(1), F(0), F(-1), F(0), F(1))


@pytest.mark.parametrize("n", range(1, 31))
def test_degree_is_totient(n):
    K = make_cyclotomic_field(n)
    assert K.degree == euler_phi(n) == len(cyclotomic_polynomial(n)) - 1
    assert cyclotomic_polynomial(n)[-1] == 1


def test_degenerate_conductors_are_q():
    assert CyclotomicField(1).degree == 1
    assert CyclotomicField(2).degree == 1
    assert CyclotomicField(2).zeta == -1


def test_zeta4_squared():
    K = CyclotomicField(4)
    assert K.zeta ** 2 == -1


def test_zeta3_relation():
    K = CyclotomicField(3)
    z = K.zeta
    assert 1 + z + z * z == 0
    assert field_arith("mul", z, z ** 2) == K.one


def test_inverse_in_q():
    Q = CyclotomicField(1)
    assert field_arith("inv", Q(2)) == Q(F(1, 2))


def test_inverse_of_one_plus_i():
    K = CyclotomicField(4)
    a = 1 + K.zeta
    inv = field_arith("inv", a)
    assert inv == (1 - K.zeta) / 2
    assert inv * a == 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        CyclotomicField(3).zero.inverse()


def test_mixed_fields_raise():
    a, b = CyclotomicField(3).zeta, CyclotomicField(4).zeta
    with pytest.raises(FieldMismatchError):
        a + b
    with pytest.raises(FieldMismatchError):
        a == b


@pytest.mark.parametrize("n", range(1, 13))
def test_zeta_has_exact_order(n):
    z = CyclotomicField(n).zeta
    assert z.multiplicative_order() == (2 if n == 2 else n) or n == 1
    if n > 2:
        assert z ** n == 1
        assert all(z ** k != 1 for k in range(1, n))


@pytest.mark.parametrize("text,expected", [
    ("-1", "-1"), ("1/2", "1/2"), ("z^2+z", "-1"), ("3/2*z", "3/2*z"),
    ("  z + 1 ", "z+1"), ("2/4", "1/2"), ("0", "0"), ("-z^3", "-1"),
])
def test_parse_and_format_in_q_zeta3(text, expected):
    K = CyclotomicField(3)
    assert format_scalar(parse_scalar(K, text)) == expected


@pytest.mark.parametrize("text,pos", [("1+*z", 2), ("z z", 2), ("1/0", 2), ("-", 0), ("2x", 1), (" 3 4", 3), ("1 + -", 2)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ScalarSyntaxError) as info:
        parse_scalar(CyclotomicField(3), text)
    assert info.value.position == pos


def test_never_prints_decimals():
    Q = CyclotomicField(1)
    assert str(Q(F(1, 3))) == "1/3"
    assert "." not in str(Q(F(22, 7)) * Q(F(5, 9)))


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def elements(n):
    K = CyclotomicField(n)
    return st.lists(rationals, min_size=K.degree, max_size=K.degree).map(K.from_coefficients)


conductors = st.sampled_from([1, 3, 4, 5, 7, 8, 12])


@given(conductors.flatmap(lambda n: st.tuples(elements(n), elements(n), elements(n))))
def test_ring_axioms(triple):
    a, b, c = triple
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0


@given(conductors.flatmap(elements))
def test_inverses(a):
    if a.is_zero():
        return
    assert a * a.inverse() == 1
    assert a.inverse().inverse() == a


@given(st.integers(-10**12, 10**12), st.integers(1, 10**6))
def test_rational_normalisation_idempotent(p, q):
    Q = CyclotomicField(1)
    x = Q(Fraction(p, q))
    c = x.coeffs[0]
    assert c.denominator > 0
    assert Fraction(c.numerator, c.denominator) == c
    assert Q(c) == x


@given(conductors.flatmap(elements))
def test_format_parse_round_trip(a):
    assert parse_scalar(a.field, format_scalar(a)) == a
