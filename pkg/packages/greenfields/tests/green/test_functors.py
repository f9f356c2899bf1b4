from fractions import Fraction

import pytest

from algebra.bisets import gset_from_subgroup, parse_word, realize, resolve_subgroup
from algebra.burnside import biset_tensor_orbits
from algebra.characters import induce_class_function
from algebra.errors import FieldMismatchError, GroupStructureError
from algebra.groups import make_group, trivial_group
from algebra.scalars import Cyclotomic, Residue
from checks.field_checks import surjecting_subgroup_class_count
from green import engine
from green.spec_parser import parse_spec

S3_WORDS = [
    "Res[C2<S3]",
    "Res[C3<S3];Ind[C3<S3]",
    "Res[C2<S3];Ind[C2<S3]",
    "Def[S3/C3]",
    "Def[S3/C3];Inf[S3/C3]",
    "Res[C3<S3];Res[1<_]",
]


@pytest.mark.parametrize(
    "spec, group, dim",
    [
        ("burnside(Q)", "S3", 4),
        ("burnside(Q)", "C2xC2", 5),
        ("repC(Q)", "S3", 3),
        ("repC(Q)", "C4", 4),
        ("repQ(Q)", "C4", 3),
        ("repQ(Q)", "C3", 2),
        ("const(2)", "C7", 1),
        ("shift(burnside(Q),C2)", "C1", 2),
        ("shift(burnside(Q),C2)", "C2", 5),
        ("cut(shift(burnside(Q),C2),eTop)", "C1", 1),
        ("cut(shift(burnside(Q),C2),eTop)", "C2", 3),
    ],
)
def test_dimensions(spec, group, dim):
    assert parse_spec(spec).dim(make_group(group)) == dim


@pytest.mark.parametrize("group", ["C1", "C2", "C3", "S3"])
def test_cut_dimension_counts_surjecting_subgroups(group):
    A = parse_spec("cut(shift(burnside(Q),C2),eTop)")
    G = make_group(group)
    assert A.dim(G) == surjecting_subgroup_class_count(G, make_group("C2"))


def test_constant_functor_rejects_bad_groups():
    A = parse_spec("const(2)")
    with pytest.raises(GroupStructureError):
        A.dim(make_group("C2"))
    with pytest.raises(GroupStructureError):
        A.dim(make_group("S3"))
    for label in ("C3", "C5", "C9", "C3xC3"):
        assert A.dim(make_group(label)) == 1


def test_constant_functor_is_constant_along_bisets():
    # every prime divisor is 1 mod q, so restriction indices act as 1
    A = parse_spec("const(3)")
    C7 = make_group("C7")
    w = parse_word("Res[1<C7]", C7)
    x = engine.basis_element(A, C7, 0)
    assert engine.act(A, w, x).coeffs == (Residue(3, 1),)
    assert engine.act(A, parse_word("Def[C7/C7]", C7), x).coeffs == (Residue(3, 1),)


@pytest.mark.parametrize("word", S3_WORDS)
def test_burnside_action_matches_concrete_bisets(word, s3):
    A = parse_spec("burnside(Q)")
    w = parse_word(word, s3)
    U = realize(w)
    for c in s3.subgroup_classes():
        x = engine.basis_element(A, s3, c.index)
        expected = biset_tensor_orbits(U, gset_from_subgroup(s3, c.representative))
        assert engine.act(A, w, x).coeffs == expected.coeffs


def _linearize(G, x):
    """Permutation character of a Burnside element, on the irreducible basis."""
    repC = parse_spec("repC(Q)")
    total = [0] * repC.dim(G)
    for c, cls in zip(x.coeffs, G.subgroup_classes()):
        if c:
            H = G if cls.order == G.order else G.subgroup_group(cls.representative)
            trivial = {h: Cyclotomic.rational(1) for h in H.elements}
            chi = repC.from_raw(G, induce_class_function(H, G, trivial))
            total = [t + c * v for t, v in zip(total, chi)]
    return tuple(total)


@pytest.mark.parametrize("word", S3_WORDS)
def test_linearization_commutes_with_bisets(word, s3):
    B, R = parse_spec("burnside(Q)"), parse_spec("repC(Q)")
    w = parse_word(word, s3)
    for x in engine.basis_elements(B, s3):
        image = engine.act(B, w, x)
        linear = engine.element(R, s3, _linearize(s3, x))
        assert engine.act(R, w, linear).coeffs == _linearize(w.target, image)


def test_rational_span_rejects_non_galois_stable_functions():
    A = parse_spec("repQ(Q)")
    C3 = make_group("C3")
    repC = parse_spec("repC(Q)")
    chi1 = repC.to_raw(C3, (0, 1, 0))
    with pytest.raises(FieldMismatchError):
        A.from_raw(C3, chi1)


def test_shift_evaluates_the_inner_functor_at_the_product():
    A = parse_spec("shift(burnside(Q),C2)")
    C3 = make_group("C3")
    assert A.basis(C3) == parse_spec("burnside(Q)").basis(make_group("C3xC2"))
    op = parse_word("Res[1<C3]", C3).factors[0]
    extended = A.extend(op)
    assert extended.source.label == "C3xC2"
    assert extended.target.order == 2
    assert A.extend(op) is extended


def test_shift_unit_is_the_inflated_unit():
    A = parse_spec("shift(burnside(Q),C2)")
    # [C1xC2 / C1xC2], the trivial C2-set
    assert engine.unit(A).coeffs == (0, 1)


def test_cut_unit_is_the_idempotent():
    A = parse_spec("cut(shift(burnside(Q),C2),eTop)")
    one = trivial_group()
    assert A.e_coeffs == (Fraction(-1, 2), 1)
    assert A.to_inner(one, engine.unit(A).coeffs) == A.e_coeffs
    assert engine.unit(A).coeffs == (1,)


def test_cut_rejects_vectors_outside_its_image():
    A = parse_spec("cut(shift(burnside(Q),C2),eTop)")
    one = trivial_group()
    # [C1xC2 / 1] is killed by e, so it is not in the image
    with pytest.raises(FieldMismatchError):
        A.from_inner(one, (1, 0))
    assert A.from_inner(one, A.e_coeffs) == (1,)


def test_cut_idempotent_must_be_idempotent():
    from green.functors import IdempotentCut

    inner = parse_spec("shift(burnside(Q),C2)")
    with pytest.raises(GroupStructureError):
        IdempotentCut(inner, (1, 1), "bogus")


def test_subgroup_resolution_for_a_cut_word(s3):
    A = parse_spec("cut(shift(burnside(Q),C2),eTop)")
    C2 = resolve_subgroup(s3, "C2")
    x = engine.basis_element(A, s3, 0)
    y = engine.act(A, parse_word("Res[C2<S3]", s3), x)
    assert y.group is C2
