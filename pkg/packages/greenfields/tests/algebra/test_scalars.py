from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Poly, cyclotomic_poly
from sympy.abc import x

from algebra.errors import CharacteristicError, FieldMismatchError, SpecSyntaxError
from algebra.scalars import (
    QQ,
    Cyclotomic,
    PrimeField,
    Residue,
    cyclotomic_eval,
    cyclotomic_polynomial,
    euler_phi,
    field_from_token,
    is_prime,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def cyclotomics(n: int):
    return st.lists(rationals, min_size=n, max_size=n).map(lambda cs: Cyclotomic(n, cs))


def test_number_theory_helpers():
    assert euler_phi(12) == 4
    assert euler_phi(7) == 6
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)


def test_roots_of_unity_relations():
    z3 = Cyclotomic.root(3)
    assert z3 + Cyclotomic.root(3, 2) == -1
    assert Cyclotomic.root(4) * Cyclotomic.root(4) == -1
    assert z3 * z3 * z3 == 1


def test_embedding_into_larger_conductor():
    assert Cyclotomic.root(3) == Cyclotomic.root(6, 2)
    assert Cyclotomic.root(3).embed(6).conductor == 6
    with pytest.raises(FieldMismatchError):
        Cyclotomic.root(3).embed(4)


def test_conjugation_and_galois_action():
    z5 = Cyclotomic.root(5)
    assert z5.conj() == Cyclotomic.root(5, 4)
    assert Cyclotomic.root(3).galois(2) == Cyclotomic.root(3, 2)
    with pytest.raises(ValueError):
        Cyclotomic.root(3).galois(3)


def test_format_and_rational_values():
    assert (Cyclotomic.root(5, 2) + 1).format() == "z5^2+1"
    assert Cyclotomic.rational(Fraction(3, 2)).format() == "3/2"
    assert (Cyclotomic.root(3) + Cyclotomic.root(3, 2)).rational_value() == -1
    with pytest.raises(ValueError):
        Cyclotomic.root(3).rational_value()


def test_cyclotomic_eval_expressions():
    assert cyclotomic_eval("z4*z4") == -1
    assert cyclotomic_eval("conj(z3)") == Cyclotomic.root(3, 2)
    assert cyclotomic_eval("1/2 + 1/2") == 1
    assert cyclotomic_eval("(1+z5)^2") == (1 + Cyclotomic.root(5)) * (1 + Cyclotomic.root(5))
    assert cyclotomic_eval("-z3 - z3^2") == 1
    with pytest.raises(SpecSyntaxError):
        cyclotomic_eval("1 +")


def test_inverse():
    x = 1 + Cyclotomic.root(5)
    assert x * x.inverse() == 1
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.rational(0).inverse()


@settings(max_examples=40)
@given(cyclotomics(5), cyclotomics(5), cyclotomics(5))
def test_field_axioms_in_q_zeta5(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    if a:
        assert a * a.inverse() == 1


def test_residues():
    assert Residue(5, 3) + Residue(5, 4) == Residue(5, 2)
    assert Residue(7, 3) / Residue(7, 3) == 1
    assert Residue(5, 2) * 3 == Residue(5, 1)
    with pytest.raises(FieldMismatchError):
        Residue(5, 1) + Residue(7, 1)
    with pytest.raises(CharacteristicError):
        Residue(5, 1) + Fraction(1, 5)
    with pytest.raises(ZeroDivisionError):
        Residue(3, 0).inverse()


def test_fields_from_tokens():
    assert field_from_token("Q") is QQ
    F7 = field_from_token("F7")
    assert F7 == PrimeField(7)
    assert F7.characteristic == 7
    assert F7.convert(Fraction(1, 2)) == Residue(7, 4)
    with pytest.raises(FieldMismatchError):
        field_from_token("F4")
    with pytest.raises(SpecSyntaxError):
        field_from_token("R")


@pytest.mark.parametrize("text", ["z3^z3", "2^(1)", "z0", "z0 + 1", "1/0", "z5^-1"])
def test_cyclotomic_eval_rejects_malformed_input(text):
    with pytest.raises(SpecSyntaxError):
        cyclotomic_eval(text)


@pytest.mark.parametrize("n", [1, 2, 5, 8, 12, 15])
def test_cyclotomic_polynomials_match_sympy(n):
    phi = cyclotomic_polynomial(n)
    assert len(phi) - 1 == euler_phi(n)
    assert phi == tuple(int(c) for c in reversed(Poly(cyclotomic_poly(n, x), x).all_coeffs()))


def test_inverse_in_q_zeta12_uses_the_full_modulus():
    x = Cyclotomic.root(12) + Cyclotomic.root(12, 5)
    # z12 + z12^5 = i, so its inverse is -i
    assert x.inverse() == -x
