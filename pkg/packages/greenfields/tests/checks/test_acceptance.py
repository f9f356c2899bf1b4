"""Full-scope runs of the published certificates. Exact, and slow."""

from itertools import combinations_with_replacement

import pytest

from algebra.groups import make_group
from checks.field_checks import anisotropy_check, green_field_certificate, strict_condition6
from checks.properties import run_suite
from green.spec_parser import parse_spec

pytestmark = [pytest.mark.slow, pytest.mark.acceptance]

# every isomorphism type of order <= 12 the catalog can spell
UP_TO_12 = [
    "C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "C7",
    "C8", "C2xC4", "C2xC2xC2", "D8", "Q8", "C9", "C3xC3",
    "C10", "D10", "C11", "C12", "C2xC6", "D12", "A4",
]
UP_TO_8 = UP_TO_12[:14]

IDENTITY_SUITES = ["category", "opposite", "bilinear", "associative", "assoc", "trivial"]
SHIPPED = [
    "burnside(Q)",
    "repC(Q)",
    "repQ(Q)",
    "const(2)",
    "shift(burnside(Q),C2)",
    "cut(shift(burnside(Q),C2),eTop)",
]


def _witness(report, kind):
    return next(w for w in report.witnesses if w.kind == kind)


def test_characters_are_a_green_field_up_to_order_12():
    report = green_field_certificate(parse_spec("repC(Q)"), UP_TO_12)
    assert report.passed
    ranks = _witness(report, "ranks").value[1:]
    assert [row[0] for row in ranks] == UP_TO_12
    assert all(row[1] == row[2] for row in ranks)


@pytest.mark.parametrize("G, H", list(combinations_with_replacement(UP_TO_8, 2)))
def test_characters_are_strict_up_to_order_8(G, H):
    G, H = make_group(G), make_group(H)
    report = strict_condition6(parse_spec("repC(Q)"), G, H)
    assert report.passed
    m, n, d = _witness(report, "dimensions").value
    assert m == len(G.conjugacy_classes())
    assert n == len(H.conjugacy_classes())
    assert _witness(report, "rank").value == m * n == d


@pytest.mark.parametrize("L", ["C2", "C3", "C4", "C2xC2", "S3", "C5"])
def test_rational_characters_are_anisotropic(L):
    report = anisotropy_check(parse_spec("repQ(Q)"), make_group(L))
    assert report.passed
    assert _witness(report, "character-formula").value == "yes"


@pytest.mark.parametrize("spec", SHIPPED)
@pytest.mark.parametrize("suite", IDENTITY_SUITES)
def test_identities_hold_on_200_samples(spec, suite):
    result = run_suite(parse_spec(spec), suite, samples=200, seed=2024)
    assert result.failures == []
    assert result.checked + result.skipped <= 200
    assert result.checked > 0
