import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra import burnside
from algebra.bisets import gset_from_subgroup, parse_word, realize, resolve_subgroup
from algebra.burnside import (
    BurnsideElement,
    basis_labels,
    biset_tensor_orbits,
    burnside_from_gset,
    double_coset_count,
    primitive_idempotents,
    table_of_marks,
)
from algebra.errors import CharacteristicError, FieldMismatchError
from algebra.groups import clear_registry, make_group
from algebra.scalars import PrimeField


def test_marks_of_c2():
    table = table_of_marks(make_group("C2"))
    assert table.matrix.entries == [[2, 1], [0, 1]]
    assert table.matrix.row_labels == ["[C2/1]", "[C2/C2]"]


def test_marks_of_s3(s3):
    assert table_of_marks(s3).matrix.entries == [
        [6, 3, 2, 1],
        [0, 1, 0, 1],
        [0, 0, 2, 1],
        [0, 0, 0, 1],
    ]
    assert basis_labels(s3) == ["[S3/1]", "[S3/H1_2]", "[S3/H2_3]", "[S3/S3]"]


def test_marks_are_cached_on_disk(mocker):
    spy = mocker.spy(burnside, "_fixed_cosets")
    table_of_marks(make_group("C2xC2"))
    calls = spy.call_count
    assert calls > 0
    clear_registry()
    table_of_marks(make_group("C2xC2"))
    assert spy.call_count == calls


def test_products_in_the_burnside_ring_of_c2():
    C2 = make_group("C2")
    free = BurnsideElement.basis(C2, 0)
    point = BurnsideElement.basis(C2, 1)
    assert (free * free).coeffs == (2, 0)
    assert (free * point) == free
    assert (point * point) == point
    assert (free + point).format() == "1*[C2/1] + 1*[C2/C2]"


def test_products_of_s3_orbits(s3):
    # S3/C2 x S3/C2 = S3/C2 + S3/1
    x = BurnsideElement.basis(s3, 1)
    assert (x * x).coeffs == (1, 1, 0, 0)
    # S3/C3 x S3/C3 = 2 S3/C3
    y = BurnsideElement.basis(s3, 2)
    assert (y * y).coeffs == (0, 0, 2, 0)


def test_products_over_a_prime_field():
    F2 = PrimeField(2)
    C2 = make_group("C2")
    free = BurnsideElement.basis(C2, 0, F2)
    assert (free * free).coeffs == (0, 0)
    with pytest.raises(FieldMismatchError):
        free + BurnsideElement.basis(C2, 0)


def test_primitive_idempotents(s3):
    idem = primitive_idempotents(s3)
    one = BurnsideElement.basis(s3, 3)
    total = idem[0]
    for e in idem[1:]:
        total = total + e
    assert total == one
    for i, e in enumerate(idem):
        assert e * e == e
        for f in idem[i + 1:]:
            assert (e * f).coeffs == (0, 0, 0, 0)
    with pytest.raises(CharacteristicError):
        primitive_idempotents(s3, PrimeField(3))


def test_double_cosets(s3):
    C2 = resolve_subgroup(s3, "C2").elements
    C3 = resolve_subgroup(s3, "C3").elements
    assert double_coset_count(s3, C2, C2) == 2
    assert double_coset_count(s3, C3, C2) == 1


def test_gset_decomposition(s3):
    for c in s3.subgroup_classes():
        X = gset_from_subgroup(s3, c.representative)
        assert burnside_from_gset(X) == BurnsideElement.basis(s3, c.index)


def test_restriction_through_a_biset(s3):
    C2 = resolve_subgroup(s3, "C2")
    U = realize(parse_word("Res[C2<S3]", s3))
    X = gset_from_subgroup(s3, resolve_subgroup(s3, "C3").elements)
    # S3/C3 restricted to C2 is one free orbit
    assert biset_tensor_orbits(U, X) == BurnsideElement.basis(C2, 0)


@settings(max_examples=25)
@given(
    st.lists(st.integers(-3, 3), min_size=4, max_size=4),
    st.lists(st.integers(-3, 3), min_size=4, max_size=4),
    st.lists(st.integers(-3, 3), min_size=4, max_size=4),
)
def test_ring_laws_on_s3(a, b, c):
    S3 = make_group("S3")
    x, y, z = (BurnsideElement(S3, tuple(v)) for v in (a, b, c))
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
