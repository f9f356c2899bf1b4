"""
Seeded property suites for the Green-functor identities.

Each suite draws random basis elements over small groups, checks one
identity, and reports the failing instances. Samples that would exceed the
configured bounds are skipped and counted.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

import structlog

from algebra import bisets
from algebra.errors import BoundExceededError
from algebra.groups import Group, make_group, product, quotient_group, swap, trivial_group
from checks.reports import CheckReport
from dependencies import get_settings
from green import engine
from green.engine import GreenElement, basis_element
from green.functors import ConstantField, GreenFunctor, IdempotentCut, Shift
from green.spec_parser import parse_spec

logger = structlog.get_logger()

SMALL_GROUPS = ["C1", "C2", "C3", "C2xC2", "C4", "S3", "C5", "C6"]


def default_groups(A: GreenFunctor) -> list[str]:
    if isinstance(A, ConstantField):
        return ["C1", "C3", "C5"]
    return [g for g in SMALL_GROUPS if make_group(g).order <= 6]


@dataclass
class Sampler:
    A: GreenFunctor
    rng: random.Random
    groups: list[str]
    _built: dict = field(default_factory=dict)

    def group(self) -> Group:
        label = self.rng.choice(self.groups)
        if label not in self._built:
            self._built[label] = make_group(label)
        return self._built[label]

    def element(self, G: Group, functor: GreenFunctor | None = None) -> GreenElement | None:
        functor = functor or self.A
        n = functor.dim(G)
        if n == 0:
            return None
        return basis_element(functor, G, self.rng.randrange(n))


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)


def _same(x: GreenElement, y: GreenElement) -> bool:
    return x.group is y.group and x.coeffs == y.coeffs


# -- suites, one sample each ----------------------------------------------------------
# a sample returns None when vacuous (an evaluation was zero), else (ok, description)


def category_axioms(s: Sampler):
    H, G, K, J = s.group(), s.group(), s.group(), s.group()
    A = s.A
    gamma = s.element(product(J, H))
    beta = s.element(product(H, G))
    alpha = s.element(product(G, K))
    if gamma is None or beta is None or alpha is None:
        return None
    left = engine.compose_PA(A, gamma, engine.compose_PA(A, beta, alpha))
    right = engine.compose_PA(A, engine.compose_PA(A, gamma, beta), alpha)
    unit_left = engine.compose_PA(A, engine.identity_morphism(A, G), alpha)
    unit_right = engine.compose_PA(A, alpha, engine.identity_morphism(A, K))
    ok = _same(left, right) and _same(unit_left, alpha) and _same(unit_right, alpha)
    return ok, f"{gamma.group.label} o {beta.group.label} o {alpha.group.label}"


def opposite_reverses(s: Sampler):
    H, G, K = s.group(), s.group(), s.group()
    A = s.A
    beta = s.element(product(H, G))
    alpha = s.element(product(G, K))
    if beta is None or alpha is None:
        return None
    left = engine.opposite(A, engine.compose_PA(A, beta, alpha))
    right = engine.compose_PA(A, engine.opposite(A, alpha), engine.opposite(A, beta))
    twice = engine.opposite(A, engine.opposite(A, alpha))
    return _same(left, right) and _same(twice, alpha), f"{beta.group.label}, {alpha.group.label}"


def bilinear_maps(s: Sampler):
    H, L = s.group(), s.group()
    X = product(H, L)
    alpha, beta = s.element(X), s.element(X)
    if alpha is None:
        return None
    A = s.A
    first = engine.form(A, alpha, beta)
    second = engine.form_via_composition(A, alpha, beta)
    return first.coeffs == second.coeffs, f"{X.label}"


def associative_form(s: Sampler):
    """<gamma o alpha, beta>_{L,K} = <alpha, gamma^op o beta>_{H,K}"""
    H, K, L = s.group(), s.group(), s.group()
    A = s.A
    alpha = s.element(product(H, K))
    gamma = s.element(product(L, H))
    beta = s.element(product(L, K))
    if alpha is None or gamma is None or beta is None:
        return None
    left = engine.form(A, engine.compose_PA(A, gamma, alpha), beta)
    right = engine.form(A, alpha, engine.compose_PA(A, engine.opposite(A, gamma), beta))
    return left.coeffs == right.coeffs, f"H={H.label} K={K.label} L={L.label}"


def module_assoc(s: Sampler, L: Group | None = None):
    """a o (alpha x m) = (a o alpha) x m for M = A or M = A_L."""
    A = s.A
    M = A if L is None else parse_spec(f"shift({A.spec},{L.label})")
    K, G, H = s.group(), s.group(), s.group()
    a = s.element(product(K, G))
    alpha = s.element(G)
    m = s.element(H, M)
    if a is None or alpha is None or m is None:
        return None
    left = engine.module_compose(A, M, a, engine.module_times(A, M, alpha, m))
    a_alpha = engine.from_right_one(A, engine.compose_PA(A, a, engine.as_right_one(A, alpha)))
    right = engine.module_times(A, M, a_alpha, m)
    return _same(left, right), f"M={M.spec} K={K.label} G={G.label} H={H.label}"


def trivial_group_coincidence(s: Sampler):
    A = s.A
    one = trivial_group()
    x, y = s.element(one), s.element(one)
    if x is None:
        return None
    crossed = engine.from_right_one(A, engine.times(A, x, y))
    dotted = engine.dot(A, x, y)
    composed = engine.from_right_one(
        A, engine.compose_PA(A, engine.as_right_one(A, x), engine.as_right_one(A, y))
    )
    return _same(crossed, dotted) and _same(dotted, composed), "1"


def commutativity(s: Sampler):
    A = s.A
    G, H = s.group(), s.group()
    x, y = s.element(G), s.element(H)
    if x is None or y is None:
        return None
    left = engine.times(A, x, y)
    right = engine.act_elemental(A, bisets.iso(swap(H, G)), engine.times(A, y, x))
    return _same(left, right), f"{G.label}, {H.label}"


def random_word(s: Sampler, G: Group, length: int = 2) -> bisets.BisetWord:
    """A short word of elementals starting at G."""
    factors = []
    current = G
    for _ in range(length):
        kind = s.rng.choice(["Ind", "Res", "Inf", "Def", "Iso"])
        classes = current.subgroup_classes()
        if kind == "Res":
            c = s.rng.choice(classes)
            S = current if c.order == current.order else current.subgroup_group(c.representative)
            op = bisets.res(current, S)
        elif kind == "Ind" and current.parent is not None:
            op = bisets.ind(current, current.parent)
        elif kind in ("Inf", "Def"):
            normal = [c for c in classes if c.class_size == 1]
            N = s.rng.choice(normal)
            _, pi = quotient_group(current, N.representative)
            if kind == "Def":
                op = bisets.deflate(pi)
            else:
                # inflate back up from a quotient we just built
                factors.append(bisets.deflate(pi))
                op = bisets.inf(pi)
        elif kind == "Iso" and current.factors is not None:
            op = bisets.iso(swap(*current.factors))
        else:
            continue
        factors.append(op)
        current = op.target
    if not factors:
        return bisets.BisetWord.identity(G)
    return bisets.BisetWord.of(*factors)


def shift_coherence(s: Sampler):
    A = s.A
    G, L = s.group(), s.group()
    shifted = parse_spec(f"shift({A.spec},{L.label})")
    return shifted.dim(G) == A.dim(product(G, L)), f"G={G.label} L={L.label}"


def cut_coherence(s: Sampler):
    """Actions keep the e-image; the unit of the cut is e."""
    A = s.A
    if not isinstance(A, IdempotentCut):
        return None
    G = s.group()
    x = s.element(G)
    if x is None:
        return None
    w = random_word(s, G)
    # from_raw raises when the image leaves the cut
    engine.act(A, w, x)
    ok = engine.unit(A).coeffs == A.from_inner(trivial_group(), A.e_coeffs)
    return ok, f"{G.label} {w}"


def radical_is_ideal(s: Sampler):
    """Words map radical vectors of <-,->_{X,1} into the radical at the target."""
    from algebra.matrices import radical_of_symmetric_form

    A = s.A
    X = s.group()
    gram = engine.gram_matrix(A, X, cross_check=False)
    if gram.matrix is None:
        return None
    radical = radical_of_symmetric_form(gram.matrix)
    if not radical:
        return None
    XL = product(X, trivial_group())
    r = GreenElement(A, XL, tuple(s.rng.choice(radical)))
    r = engine.from_right_one(A, r)
    w = random_word(s, X)
    image = engine.act(A, w, r)
    ok = all(
        engine.form(A, image, b).is_zero() for b in engine.basis_elements(A, w.target)
    )
    return ok, f"{X.label} {w}"


SUITES: dict[str, Callable] = {
    "category": category_axioms,
    "opposite": opposite_reverses,
    "bilinear": bilinear_maps,
    "associative": associative_form,
    "assoc": module_assoc,
    "assoc-shift": lambda s: module_assoc(s, make_group("C2")),
    "trivial": trivial_group_coincidence,
    "commutative": commutativity,
    "shift": shift_coherence,
    "cut": cut_coherence,
    "radical": radical_is_ideal,
}


def run_suite(A: GreenFunctor, name: str, samples: int | None = None, seed: int | None = None,
              groups: list[str] | None = None) -> SuiteResult:
    settings = get_settings()
    samples = samples if samples is not None else settings.property_samples
    seed = settings.seed if seed is None else seed
    groups = groups or default_groups(A)
    if isinstance(A, Shift) and name == "assoc-shift":
        groups = [g for g in groups if make_group(g).order <= 3]
    sampler = Sampler(A, random.Random(f"{seed}:{name}:{A.spec}"), groups)
    result = SuiteResult(name)
    check = SUITES[name]
    for i in range(samples):
        try:
            outcome = check(sampler)
        except BoundExceededError as err:
            result.skipped += 1
            logger.debug("Skipped sample", suite=name, sample=i, what=err.what)
            continue
        if outcome is None:
            continue
        ok, description = outcome
        result.checked += 1
        if not ok:
            result.failures.append(description)
    logger.info("Property suite finished", suite=name, spec=A.spec, checked=result.checked,
                skipped=result.skipped, failures=len(result.failures))
    return result


def property_report(A: GreenFunctor, names: list[str] | None = None, samples: int | None = None,
                    seed: int | None = None, groups: list[str] | None = None) -> CheckReport:
    names = names or list(SUITES)
    results = [run_suite(A, n, samples, seed, groups) for n in names]
    report = CheckReport(
        check="properties", spec=A.spec,
        scope=groups or default_groups(A),
        verdict="pass",
    )
    table = [["suite", "checked", "skipped", "failures"]]
    for r in results:
        table.append([r.name, str(r.checked), str(r.skipped), str(len(r.failures))])
        if r.failures:
            report.verdict = "fail"
            report.add("failures", r.name, r.failures[:10])
    report.add("summary", "suites", table)
    if any(r.skipped for r in results):
        report.caveat("samples beyond the configured bounds were skipped")
    return report
