"""
Certificates for Green-field properties of a functor.

Every verdict is bounded by the groups actually tested; a pass is evidence
over that scope, never a statement about all finite groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import structlog
from sympy import Poly

from algebra.errors import (
    BoundExceededError,
    CharacteristicError,
    FieldMismatchError,
    NotAFieldError,
    ZeroElementError,
)
from algebra.groups import Group, make_group, product, trivial_group
from algebra.matrices import (
    NO_SOLUTION,
    Matrix,
    column_space_pivots,
    factor_polynomial,
    is_positive_definite,
    minimal_polynomial,
    nullspace,
    polynomial_at_matrix,
    radical_of_symmetric_form,
    rank,
    solve_linear,
    to_poly,
)
from algebra.scalars import QQ, Cyclotomic, Field
from checks.reports import CheckReport, matrix_witness, vector_witness
from dependencies import get_settings
from green import engine
from green.engine import GreenElement, basis_elements
from green.functors import GreenFunctor, LinRepC, LinRepQSpan
from green.spec_parser import parse_spec

logger = structlog.get_logger()


# -- A(1) as an algebra ---------------------------------------------------------------


def multiplication_matrix(A: GreenFunctor, x: GreenElement) -> Matrix:
    """Left multiplication by ``x`` on A(G) under the dot product."""
    columns = [engine.dot(A, x, b).coeffs for b in basis_elements(A, x.group)]
    return Matrix.from_columns(columns, A.field)


@dataclass
class StructureConstants:
    """A commutative algebra on k^n: left multiplications by the basis vectors and the unit."""

    field: Field
    left: list[Matrix]
    unit: tuple

    @property
    def dim(self) -> int:
        return len(self.left)

    def basis_vector(self, i: int) -> tuple:
        return tuple(self.field.one if j == i else self.field.zero for j in range(self.dim))

    def times_matrix(self, v) -> Matrix:
        n = self.dim
        rows = [[self.field.zero] * n for _ in range(n)]
        for c, L in zip(v, self.left):
            if c:
                for i in range(n):
                    rows[i] = [a + c * b for a, b in zip(rows[i], L.entries[i])]
        return Matrix(rows, self.field)

    def polynomial_at(self, v, p: Poly) -> tuple:
        return tuple(polynomial_at_matrix(p, self.times_matrix(v)).apply(list(self.unit)))


def structure_at_one(A: GreenFunctor) -> StructureConstants:
    one = trivial_group()
    left = [multiplication_matrix(A, b) for b in basis_elements(A, one)]
    return StructureConstants(A.field, left, engine.unit(A).coeffs)


@dataclass
class FieldDecision:
    is_field: bool
    kind: str
    first: object = None
    second: object = None


def split_witnesses(S: StructureConstants, v) -> list[tuple]:
    """Idempotents lifted from coprime factors of the minimal polynomial of ``v``.

    A single repeated factor f^e gives the zero divisors f(v) and f(v)^(e-1) instead.
    """
    coeffs = minimal_polynomial(S.times_matrix(v))
    factors = factor_polynomial(coeffs, S.field)
    if len(factors) > 1:
        m = to_poly(coeffs, S.field)
        found = []
        for f, e in factors:
            part = f**e
            rest = m.exquo(part)
            s, _, _ = rest.gcdex(part)
            found.append(("idempotent", S.polynomial_at(v, (s * rest).rem(m)), None))
        return found
    if factors and factors[0][1] > 1:
        f, e = factors[0]
        return [("zero-divisor", S.polynomial_at(v, f), S.polynomial_at(v, f ** (e - 1)))]
    return []


def _trace_form_of(S: StructureConstants) -> Matrix:
    traces = [sum((L.entries[k][k] for k in range(S.dim)), S.field.zero) for L in S.left]
    rows = []
    for L in S.left:
        rows.append([
            sum((c * t for c, t in zip(L.column(j), traces)), S.field.zero)
            for j in range(S.dim)
        ])
    return Matrix(rows, S.field)


def _frobenius(S: StructureConstants) -> Matrix:
    x_to_p = to_poly([0] * S.field.characteristic + [1], S.field)
    columns = [S.polynomial_at(S.basis_vector(i), x_to_p) for i in range(S.dim)]
    return Matrix.from_columns(columns, S.field)


def decide_field(S: StructureConstants) -> FieldDecision:
    """Field iff the nilradical is zero and 0, 1 are the only idempotents."""
    fld = S.field
    n = S.dim
    if n == 1:
        return FieldDecision(True, "dimension", 1)

    candidates = []
    for i in range(n):
        candidates.extend(split_witnesses(S, S.basis_vector(i)))
    if candidates:
        kind, first, second = min(candidates, key=lambda c: sum(1 for x in c[1] if x))
        return FieldDecision(False, kind, first, second)

    if fld.characteristic == 0:
        radical = radical_of_symmetric_form(_trace_form_of(S))
        if radical:
            return FieldDecision(False, "nilpotent", tuple(radical[0]))
        # a reduced algebra over Q is Q[c] for c off finitely many hyperplanes,
        # and the moment curve meets each of them at most n - 1 times
        attempts = n * (n - 1) * (n - 1) // 2 + 1
        for t in range(1, attempts + 1):
            c = tuple(fld.convert(t**i) for i in range(n))
            if len(minimal_polynomial(S.times_matrix(c))) - 1 < n:
                continue
            split = split_witnesses(S, c)
            if split:
                kind, first, second = split[0]
                return FieldDecision(False, kind, first, second)
            return FieldDecision(True, "generator", c)
        raise ArithmeticError("no primitive element found for a reduced algebra")

    F = _frobenius(S)
    radical = nullspace(F)
    if radical:
        return FieldDecision(False, "nilpotent", tuple(radical[0]))
    # a reduced algebra is a product of r fields and Frobenius fixes exactly F_q^r
    shifted = Matrix(
        [[x - (fld.one if i == j else fld.zero) for j, x in enumerate(row)]
         for i, row in enumerate(F.entries)],
        fld,
    )
    fixed = nullspace(shifted)
    if len(fixed) == 1:
        return FieldDecision(True, "frobenius-fixed", 1)
    for v in fixed:
        if rank(Matrix.from_columns([v, list(S.unit)], fld)) == 2:
            kind, first, second = split_witnesses(S, v)[0]
            return FieldDecision(False, kind, first, second)
    raise ArithmeticError("Frobenius-fixed vectors are all scalar")


def is_field_at_one(A: GreenFunctor) -> CheckReport:
    one = trivial_group()
    report = CheckReport(check="field-at-one", spec=A.spec, scope=[one.label], verdict="pass")
    n = A.dim(one)
    report.add("dimension", f"{A.spec}(1)", n)
    if n == 1:
        return report

    decision = decide_field(structure_at_one(A))
    if decision.is_field:
        if decision.kind == "generator":
            report.add("generator", f"minimal polynomial of degree {n}",
                       GreenElement(A, one, decision.first).format())
        else:
            report.add(decision.kind, "fixed subalgebra dimension", decision.first)
        return report

    report.verdict = "fail"
    report.add(decision.kind, "element", vector_witness(decision.first, A.field))
    report.add("basis", f"{A.spec}(1)", A.basis(one))
    report.add("formatted", decision.kind, GreenElement(A, one, decision.first).format())
    if decision.second is not None:
        report.add(decision.kind, "partner", vector_witness(decision.second, A.field))
    logger.info("A(1) is not a field", spec=A.spec, witness=decision.kind)
    return report


def _require_field_at_one(A: GreenFunctor) -> None:
    one = trivial_group()
    if A.dim(one) == 1:
        return
    if is_field_at_one(A).verdict != "pass":
        raise NotAFieldError(f"{A.spec}(1) is not known to be a field")


# -- Green fields -----------------------------------------------------------------------


def left_inverse(A: GreenFunctor, a: GreenElement) -> GreenElement | None:
    """b in A(H) with b o a = epsilon (a read in A(H x 1), b in A(1 x H)), or None."""
    if a.is_zero():
        raise ZeroElementError("left inverses are only sought for nonzero elements")
    H = a.group
    one = trivial_group()
    a_morphism = engine.as_right_one(A, a)
    target = engine.identity_morphism(A, one)
    candidates = basis_elements(A, product(one, H))
    columns = [engine.compose_PA(A, b, a_morphism).coeffs for b in candidates]
    M = Matrix.from_columns(columns, A.field, nrows=len(target.coeffs))
    sol = solve_linear(M, list(target.coeffs))
    if sol is NO_SOLUTION:
        logger.debug("No left inverse", spec=A.spec, group=H.label)
        return None
    b = GreenElement(A, product(one, H), tuple(sol))
    return engine.from_left_one(A, b)


def green_field_certificate(A: GreenFunctor, catalog: list[str] | None = None) -> CheckReport:
    catalog = catalog or get_settings().catalog
    report = CheckReport(check="green-field", spec=A.spec, scope=list(catalog), verdict="pass")
    at_one = is_field_at_one(A)
    if at_one.verdict != "pass":
        report.verdict = at_one.verdict
        report.witnesses.extend(at_one.witnesses)
        report.caveats = list(dict.fromkeys(report.caveats + at_one.caveats))
        return report

    ranks = []
    for label in catalog:
        H = make_group(label)
        gram = engine.gram_matrix(A, H)
        n = len(gram.labels)
        r = gram.rank()
        ranks.append([H.label, str(n), str(r)])
        if not gram.routes_agree:
            report.verdict = "fail"
            report.add("disagreement", f"Gram routes at {H.label}", matrix_witness(gram.matrix))
            break
        if r < n:
            report.verdict = "fail"
            radical = radical_of_symmetric_form(gram.matrix)[0]
            report.add("gram", H.label, matrix_witness(gram.matrix))
            report.add("radical", f"{H.label} (basis of A({H.label}x1))",
                       vector_witness(radical, A.field))
            vector = GreenElement(A, product(H, trivial_group()), tuple(radical))
            inverse = left_inverse(A, engine.from_right_one(A, vector))
            report.add("left-inverse", "radical vector", "none" if inverse is None else inverse.format())
            logger.info("Degenerate form", spec=A.spec, group=H.label, dimension=n, rank=r)
            break
    report.add("ranks", "group / dimension / rank", [["group", "dim", "rank"]] + ranks)
    return report


def anisotropy_check(A: GreenFunctor, L: Group) -> CheckReport:
    """Positive definiteness of the form on A(L x L)."""
    if A.field != QQ:
        raise FieldMismatchError(f"anisotropy is checked over Q, not {A.field}")
    report = CheckReport(check="anisotropic", spec=A.spec, scope=[L.label], verdict="pass")
    gram = engine.gram_matrix(A, L, L)
    if gram.matrix is None:
        raise NotAFieldError(f"{A.spec}(1) is not one-dimensional")
    report.add("gram", f"<-,->_{{{L.label},{L.label}}}", matrix_witness(gram.matrix))
    definite = is_positive_definite(gram.matrix)
    if not definite.positive_definite:
        report.verdict = "fail"
        report.add("isotropic-direction", "vector", vector_witness(definite.witness, QQ))
    if isinstance(A, (LinRepC, LinRepQSpan)):
        formula = character_formula_gram(A, product(L, L))
        agree = formula.entries == gram.matrix.entries
        report.add("character-formula", "agrees", "yes" if agree else "no")
        if not agree:
            report.verdict = "fail"
            report.add("character-formula", "matrix", matrix_witness(formula))
    if not gram.routes_agree:
        report.verdict = "fail"
        report.add("disagreement", "Gram routes", "t(u.v) differs from Def Res(u^op o v)")
    return report


def character_formula_gram(A: GreenFunctor, P: Group) -> Matrix:
    """(1/|P|) sum_x chi_u(x) chi_v(x) over the basis characters of A(P)."""
    chars = [A.to_raw(P, A.unit_vector(P, i)) for i in range(A.dim(P))]
    elements = P.sorted_elements
    rows = []
    for u in chars:
        row = []
        for v in chars:
            total = Cyclotomic.rational(0)
            for x in elements:
                total = total + u[x] * v[x]
            row.append((total / P.order).rational_value())
        rows.append(row)
    return Matrix(rows, QQ)


# -- endomorphism algebras ---------------------------------------------------------------


def _trace_form(A: GreenFunctor, X: Group, basis: list[GreenElement], multiply) -> Matrix:
    """T_ij = trace(L_{b_i b_j}) from structure constants."""
    products = [[multiply(A, bi, bj).coeffs for bj in basis] for bi in basis]
    n = len(basis)
    traces = [sum((products[k][j][j] for j in range(n)), A.field.zero) for k in range(n)]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(sum((c * t for c, t in zip(products[i][j], traces)), A.field.zero))
        rows.append(row)
    return Matrix(rows, A.field)


def endo_semisimplicity(A: GreenFunctor, L: Group) -> CheckReport:
    """(A(L x L), o) is semisimple iff its trace form is non-degenerate (char 0)."""
    if A.field.characteristic:
        raise CharacteristicError(
            f"the trace-form radical needs characteristic 0, {A.spec} has {A.field.characteristic}"
        )
    X = product(L, L)
    basis = basis_elements(A, X)
    T = _trace_form(A, X, basis, engine.compose_PA)
    radical = radical_of_symmetric_form(T)
    report = CheckReport(check="semisimple", spec=A.spec, scope=[L.label], verdict="pass")
    report.add("dimension", f"{A.spec}({X.label})", len(basis))
    report.add("trace-form", X.label, matrix_witness(T))
    report.add("radical-dimension", X.label, len(radical))
    if radical:
        report.verdict = "fail"
        report.add("radical", "vector", vector_witness(radical[0], A.field))
    return report


# -- strictness ------------------------------------------------------------------------


def times_rank(A: GreenFunctor, G: Group, H: Group) -> tuple[int, int, int, int]:
    """(dim A(G), dim A(H), dim A(G x H), rank of the external product map)."""
    xs, ys = basis_elements(A, G), basis_elements(A, H)
    P = product(G, H)
    columns = [engine.times(A, x, y).coeffs for x in xs for y in ys]
    M = Matrix.from_columns(columns, A.field, nrows=A.dim(P))
    return len(xs), len(ys), A.dim(P), rank(M)


def strict_condition6(A: GreenFunctor, G: Group, H: Group) -> CheckReport:
    _require_field_at_one(A)
    one_dim = A.dim(trivial_group())
    m, n, d, r = times_rank(A, G, H)
    report = CheckReport(
        check="strict", spec=A.spec, scope=[f"{G.label},{H.label}"], verdict="pass"
    )
    report.add("dimensions", f"A({G.label}), A({H.label}), A({G.label}x{H.label})", [m, n, d])
    report.add("rank", "external product", r)
    report.add("deficit", "dim A(GxH) - dim A(G) dim A(H)", d - m * n)
    expected = Fraction(m * n, one_dim)
    if not (r == expected == d):
        report.verdict = "fail"
    logger.info("Strictness check", spec=A.spec, G=G.label, H=H.label, rank=r, dimension=d,
                verdict=report.verdict)
    return report


def essential_dim(A: GreenFunctor, H: Group, smaller: list[str] | None = None) -> int:
    """dim A(H x H) minus the ideal of morphisms factoring through smaller groups."""
    one = trivial_group()
    if H.order == 1:
        return A.dim(one)
    labels = smaller if smaller is not None else get_settings().catalog
    groups = {one.label: one}
    for label in labels:
        K = make_group(label)
        if K.order < H.order:
            groups.setdefault(K.label, K)
    X = product(H, H)
    vectors: list[tuple] = []
    for K in groups.values():
        lefts = basis_elements(A, product(H, K))
        rights = basis_elements(A, product(K, H))
        vectors.extend(engine.compose_PA(A, a, b).coeffs for a in lefts for b in rights)

    ends = basis_elements(A, X)

    def independent(vs):
        if not vs:
            return []
        return [vs[i] for i in column_space_pivots(Matrix.from_columns(vs, A.field, nrows=A.dim(X)))]

    # the spanning set stays a basis of the ideal so far, never more than dim A(H x H) vectors
    vectors = independent(vectors)
    while True:
        grown = list(vectors)
        for v in vectors:
            x = GreenElement(A, X, v)
            for e in ends:
                grown.append(engine.compose_PA(A, e, x).coeffs)
                grown.append(engine.compose_PA(A, x, e).coeffs)
        reduced = independent(grown)
        if len(reduced) == len(vectors):
            break
        vectors = reduced
    logger.debug("Essential algebra", spec=A.spec, group=H.label, ideal=len(vectors),
                 dimension=A.dim(X))
    return A.dim(X) - len(vectors)


def tensor_injectivity(A: GreenFunctor, G: Group, L: Group, H: Group) -> CheckReport:
    """Rank of A(G) x M(H) -> M(G x H) for M = A_L."""
    _require_field_at_one(A)
    M = parse_spec(f"shift({A.spec},{L.label})")
    xs, ms = basis_elements(A, G), basis_elements(M, H)
    P = product(G, H)
    columns = [engine.module_times(A, M, x, m).coeffs for x in xs for m in ms]
    r = rank(Matrix.from_columns(columns, M.field, nrows=M.dim(P)))
    expected = Fraction(len(xs) * len(ms), A.dim(trivial_group()))
    report = CheckReport(
        check="tensor-injective", spec=A.spec, scope=[f"{G.label},{L.label},{H.label}"],
        verdict="pass" if r == expected else "fail",
    )
    report.add("dimensions", f"A({G.label}), M({H.label}), M({P.label})",
               [len(xs), len(ms), M.dim(P)])
    report.add("rank", "module product", r)
    return report


# -- the non-strict example ---------------------------------------------------------------


def surjecting_subgroup_class_count(G: Group, K: Group) -> int:
    """Subgroup classes of G x K whose projection onto K is onto."""
    P = product(G, K)
    count = 0
    for c in P.subgroup_classes():
        image = {P.split(x)[1] for x in c.representative}
        if len(image) == K.order:
            count += 1
    return count


def example3_spec(p: int) -> str:
    return f"cut(shift(burnside(Q),C{p}xC{p}),eTop)"


def strictness_failure_report(p: int) -> CheckReport:
    """dims at C_p and C_p x C_p by two routes, and the strictness deficit p^2(p-1)."""
    spec = example3_spec(p)
    A = parse_spec(spec)
    K = A.inner.L
    Cp = make_group(f"C{p}")
    CpCp = make_group(f"C{p}xC{p}")
    report = CheckReport(
        check="example3", spec=A.spec, scope=[Cp.label, CpCp.label], verdict="pass"
    )
    expected = {Cp.label: p * p + 1, CpCp.label: p**4 + p**3 + p * p + 1}
    rows = [["group", "rank-route", "surjection-route", "expected"]]
    for G in (Cp, CpCp):
        by_rank = A.dim(G)
        by_count = surjecting_subgroup_class_count(G, K)
        rows.append([G.label, str(by_rank), str(by_count), str(expected[G.label])])
        if not (by_rank == by_count == expected[G.label]):
            report.verdict = "fail"
    report.add("dimensions", "A(G)", rows)
    report.add("inflation-dot", f"rank at {Cp.label}", engine.inflation_dot_cut_oracle(A, Cp))

    strict = strict_condition6(A, Cp, Cp)
    deficit = next(w.value for w in strict.witnesses if w.kind == "deficit")
    report.add("strictness", f"({Cp.label},{Cp.label})", strict.verdict.upper())
    report.add("deficit", "p^2(p-1)", deficit)
    if strict.verdict != "fail" or deficit != p * p * (p - 1):
        report.verdict = "fail"
    return report


def run_bounded(check, *args) -> CheckReport:
    """Run a check, turning a bound overflow into an out-of-scope verdict."""
    try:
        return check(*args)
    except BoundExceededError as err:
        name = getattr(check, "__name__", "check")
        spec = args[0].spec if args and isinstance(args[0], GreenFunctor) else ""
        report = CheckReport(check=name, spec=spec, verdict="out-of-scope-limit")
        report.add("bound", err.what, [str(err.order), str(err.bound)])
        return report
