import random

import pytest

from algebra.groups import make_group
from checks import properties
from checks.properties import Sampler, default_groups, property_report, random_word, run_suite
from green.spec_parser import parse_spec

SMALL = ["C1", "C2", "C3"]


@pytest.mark.parametrize(
    "name", ["category", "opposite", "bilinear", "associative", "trivial", "commutative", "shift"]
)
def test_burnside_satisfies_the_identities(name):
    result = run_suite(parse_spec("burnside(Q)"), name, samples=4, seed=7, groups=SMALL)
    assert result.failures == []
    assert result.checked + result.skipped == 4


@pytest.mark.parametrize("spec", ["repC(Q)", "const(2)"])
def test_module_associativity(spec):
    A = parse_spec(spec)
    groups = ["C1", "C3"] if spec.startswith("const") else SMALL
    result = run_suite(A, "assoc", samples=3, groups=groups)
    assert result.failures == []


def test_cut_suite_is_vacuous_off_cuts():
    result = run_suite(parse_spec("burnside(Q)"), "cut", samples=3, groups=SMALL)
    assert result.checked == 0
    assert result.failures == []


def test_cut_suite_on_a_cut():
    A = parse_spec("cut(shift(burnside(Q),C2),eTop)")
    result = run_suite(A, "cut", samples=3, groups=["C1", "C2"])
    assert result.failures == []
    assert result.checked == 3


def test_default_groups():
    assert default_groups(parse_spec("const(3)")) == ["C1", "C3", "C5"]
    groups = default_groups(parse_spec("burnside(Q)"))
    assert "C1" in groups and "S3" in groups
    assert all(make_group(g).order <= 6 for g in groups)


def test_random_words_start_at_the_group(s3):
    sampler = Sampler(parse_spec("burnside(Q)"), random.Random(3), ["S3"])
    for _ in range(10):
        w = random_word(sampler, s3)
        assert w.source is s3


def test_suites_are_seeded(mocker):
    A = parse_spec("repC(Q)")
    spy = mocker.spy(properties, "run_suite")
    first = property_report(A, ["commutative", "trivial"], samples=3, seed=11, groups=SMALL)
    second = property_report(A, ["commutative", "trivial"], samples=3, seed=11, groups=SMALL)
    assert spy.call_count == 4
    assert first.to_json() == second.to_json()
    assert first.passed
    summary = next(w for w in first.witnesses if w.kind == "summary").value
    assert summary[0] == ["suite", "checked", "skipped", "failures"]
    assert [row[0] for row in summary[1:]] == ["commutative", "trivial"]


def test_failures_are_reported(mocker):
    mocker.patch.dict(properties.SUITES, {"broken": lambda s: (False, "always")})
    report = property_report(parse_spec("burnside(Q)"), ["broken"], samples=2, groups=SMALL)
    assert report.verdict == "fail"
    failures = next(w for w in report.witnesses if w.kind == "failures")
    assert failures.label == "broken"
    assert failures.value == ["always", "always"]
