from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from omega_nij.field import MERSENNE31, QQ, PrimeField, field_from_descriptor


@pytest.mark.parametrize("text,value", [("3/4", Fraction(3, 4)), ("-2", -2), (" 6/3 ", 2), ("0", 0)])
def test_rational_parse(text, value):
    assert QQ.parse(text) == value


def test_rational_normalises_integral_fractions():
    assert type(QQ.coerce(Fraction(4, 2))) is int


def test_prime_parse_and_mod_suffix():
    F7 = PrimeField(7)
    assert F7.parse("5 mod 7") == 5
    assert F7.parse("1/2") == 4
    with pytest.raises(ValueError):
        F7.parse("5 mod 11")


def test_rejects_floats():
    with pytest.raises(TypeError):
        QQ.coerce(0.5)


def test_prime_denominator_vanishing():
    with pytest.raises(ZeroDivisionError):
        PrimeField(5).coerce(Fraction(1, 10))


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        PrimeField(15)


@pytest.mark.parametrize("desc,expected", [("rational", "rational"), ("prime:7", "prime:7"),
                                           ({"kind": "prime", "p": 11}, "prime:11")])
def test_descriptors(desc, expected):
    assert field_from_descriptor(desc).descriptor() == expected


@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_prime_reduction_is_a_ring_map(a, b):
    F = PrimeField(MERSENNE31)
    assert F.coerce(a * b) == F.coerce(F.coerce(a) * F.coerce(b))
    assert F.coerce(a + b) == F.coerce(F.coerce(a) + F.coerce(b))


@given(st.fractions(max_denominator=1000).filter(lambda x: x != 0))
def test_inverse(x):
    assert QQ.coerce(x * QQ.inv(x)) == 1


def test_array_helpers():
    arr = QQ.array(["1/2", 3, Fraction(2, 4)])
    assert QQ.equal_arrays(arr, np.array([Fraction(1, 2), 3, Fraction(1, 2)], dtype=object))
    assert QQ.is_zero_array(QQ.zeros((2, 3)))
    assert QQ.equal_arrays(QQ.eye(2), np.array([[1, 0], [0, 1]], dtype=object))
