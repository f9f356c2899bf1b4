from fractions import Fraction

import pytest

from algebra.bisets import parse_word
from algebra.errors import FieldMismatchError, GroupStructureError, NotAFieldError
from algebra.groups import make_group, product, trivial_group
from algebra.matrices import rank
from green import engine
from green.engine import GreenElement
from green.spec_parser import parse_spec


@pytest.fixture
def burnside():
    return parse_spec("burnside(Q)")


def test_elements_check_their_dimension(burnside):
    C2 = make_group("C2")
    with pytest.raises(FieldMismatchError):
        GreenElement(burnside, C2, (1,))
    x = engine.element(burnside, C2, [1, 2])
    assert x.coeffs == (1, 2)
    assert x.format() == "1*[C2/1] + 2*[C2/C2]"
    assert x.to_strings() == ["1", "2"]
    assert (x - x).is_zero()
    assert (x + x).coeffs == x.scale(2).coeffs


def test_elements_from_different_evaluations_do_not_mix(burnside):
    x = engine.basis_element(burnside, make_group("C2"), 0)
    y = engine.basis_element(burnside, make_group("C3"), 0)
    with pytest.raises(FieldMismatchError):
        x + y


def test_evaluate(burnside):
    basis = engine.evaluate(burnside, make_group("C4"))
    assert basis.dimension == 3
    assert basis.labels == ["[C4/1]", "[C4/H1_2]", "[C4/C4]"]


def test_unit_and_scalars(burnside):
    eps = engine.unit(burnside)
    assert eps.coeffs == (1,)
    assert engine.to_scalar(eps.scale(3)) == 3
    shifted = parse_spec("shift(burnside(Q),C2)")
    with pytest.raises(NotAFieldError):
        engine.to_scalar(engine.unit(shifted))


def test_act_checks_the_source(burnside, s3):
    w = parse_word("Res[C2<S3]", s3)
    with pytest.raises(GroupStructureError):
        engine.act(burnside, w, engine.basis_element(burnside, make_group("C2"), 0))


def test_external_product(burnside):
    C2, C3 = make_group("C2"), make_group("C3")
    x = engine.basis_element(burnside, C2, 0)
    y = engine.basis_element(burnside, C3, 0)
    z = engine.times(burnside, x, y)
    assert z.group is product(C2, C3)
    # C2/1 x C3/1 is the regular C2xC3-set
    assert z.coeffs == engine.basis_element(burnside, z.group, 0).coeffs
    assert engine.from_right_one(burnside, engine.times(burnside, x, engine.unit(burnside))) == x


def test_dot_is_the_ring_product(burnside):
    C2 = make_group("C2")
    free = engine.basis_element(burnside, C2, 0)
    point = engine.basis_element(burnside, C2, 1)
    assert engine.dot(burnside, free, free).coeffs == (2, 0)
    assert engine.dot(burnside, point, free) == free
    assert engine.dot(burnside, point, point) == point


def test_identity_morphism_is_a_two_sided_unit(burnside):
    C2 = make_group("C2")
    identity = engine.identity_morphism(burnside, C2)
    assert identity.group is product(C2, C2)
    for alpha in engine.basis_elements(burnside, product(C2, make_group("C3"))):
        assert engine.compose_PA(burnside, identity, alpha) == alpha
    for alpha in engine.basis_elements(burnside, product(trivial_group(), C2)):
        assert engine.compose_PA(burnside, alpha, identity) == alpha


def test_composition_through_the_trivial_group_is_a_product(burnside):
    C2, C3 = make_group("C2"), make_group("C3")
    one = trivial_group()
    x = engine.basis_element(burnside, C2, 0)
    y = engine.basis_element(burnside, C3, 0)
    beta = engine.as_right_one(burnside, x)
    alpha = engine.as_left_one(burnside, y)
    assert beta.group is product(C2, one)
    assert alpha.group is product(one, C3)
    assert engine.compose_PA(burnside, beta, alpha) == engine.times(burnside, x, y)
    assert engine.from_left_one(burnside, alpha) == y


def test_composition_needs_matching_middle_groups(burnside):
    C2, C3 = make_group("C2"), make_group("C3")
    beta = engine.basis_element(burnside, product(C2, C2), 0)
    alpha = engine.basis_element(burnside, product(C3, C2), 0)
    with pytest.raises(GroupStructureError):
        engine.compose_PA(burnside, beta, alpha)


def test_opposite_is_an_involution(burnside):
    X = product(make_group("C2"), make_group("C3"))
    for alpha in engine.basis_elements(burnside, X):
        op = engine.opposite(burnside, alpha)
        assert op.group is product(make_group("C3"), make_group("C2"))
        assert engine.opposite(burnside, op) == alpha


def test_burnside_gram_at_c2():
    gram = engine.gram_matrix(parse_spec("burnside(Q)"), make_group("C2"))
    assert gram.routes_agree
    assert gram.matrix.entries == [[2, 1], [1, 1]]
    assert gram.rank() == 2


def test_burnside_gram_at_the_klein_group(klein):
    gram = engine.gram_matrix(parse_spec("burnside(Q)"), klein)
    assert gram.routes_agree
    assert gram.matrix.shape == (5, 5)
    assert gram.matrix.entries[0] == [4, 2, 2, 2, 1]
    # one dimension per cyclic subgroup class
    assert gram.rank() == 4


def test_character_gram_pairs_dual_characters():
    gram = engine.gram_matrix(parse_spec("repC(Q)"), make_group("C3"))
    assert gram.routes_agree
    assert sorted(map(tuple, gram.matrix.entries)) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert rank(gram.matrix) == 3


def test_constant_gram_over_f2():
    gram = engine.gram_matrix(parse_spec("const(2)"), make_group("C3"))
    assert gram.routes_agree
    assert gram.matrix.to_strings() == [["1 mod 2"]]


def test_gram_with_a_second_group():
    gram = engine.gram_matrix(parse_spec("burnside(Q)"), make_group("C2"), make_group("C2"))
    assert gram.H == "C2" and gram.L == "C2"
    assert len(gram.labels) == 5
    assert gram.routes_agree


def test_gram_of_a_shift_has_no_scalar_matrix():
    gram = engine.gram_matrix(parse_spec("shift(burnside(Q),C2)"), trivial_group(),
                              cross_check=False)
    assert gram.matrix is None
    assert len(gram.entries) == 2
    with pytest.raises(NotAFieldError):
        gram.rank()


def test_form_deflates_the_dot_product(burnside):
    C2 = make_group("C2")
    free = engine.basis_element(burnside, C2, 0)
    assert engine.form(burnside, free, free).coeffs == (2,)
    assert engine.t_deflate_to_one(burnside, free).coeffs == (1,)


def test_inflation_dot_oracle_matches_the_cut_dimension():
    A = parse_spec("cut(shift(burnside(Q),C2),eTop)")
    C2 = make_group("C2")
    assert engine.inflation_dot_cut_oracle(A, C2) == A.dim(C2) == 3
    with pytest.raises(GroupStructureError):
        engine.inflation_dot_cut_oracle(parse_spec("burnside(Q)"), C2)


def test_bilinear_values_are_memoized(burnside, mocker):
    C2 = make_group("C2")
    x = engine.basis_element(burnside, C2, 0)
    spy = mocker.spy(burnside, "times_raw")
    engine.times(burnside, x, x)
    calls = spy.call_count
    engine.times(burnside, x, x.scale(Fraction(1, 2)))
    assert spy.call_count == calls
    engine.clear_memo()
    engine.times(burnside, x, x)
    assert spy.call_count == calls * 2
