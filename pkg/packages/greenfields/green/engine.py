"""
The Green-functor calculus, generic over functor instances.

Bilinear operations (external product, dot product, P_A composition, module
products) are expanded over basis pairs; the value on each pair is computed
once on raw values and memoized in the coordinates of the innermost
non-cut functor.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

import structlog

from algebra import bisets
from algebra.bisets import BisetWord, Elemental
from algebra.errors import FieldMismatchError, GroupStructureError, NotAFieldError
from algebra.groups import (
    Group,
    GroupHom,
    diagonal_subgroup,
    product,
    swap,
    trivial_group,
    trivial_hom,
    unit_left,
    unit_right,
)
from algebra.matrices import Matrix, rank
from green.functors import GreenFunctor, Shift

logger = structlog.get_logger()

_memo: dict[tuple, tuple] = {}
_memo_lock = threading.Lock()
_structures: dict[tuple, object] = {}


def clear_memo():
    with _memo_lock:
        _memo.clear()
        _structures.clear()


@dataclass(frozen=True)
class GreenElement:
    """An element of A(G) as exact coordinates over the labeled basis."""

    functor: GreenFunctor
    group: Group
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.functor.dim(self.group):
            raise FieldMismatchError(
                f"{len(self.coeffs)} coordinates for {self.functor.spec} at {self.group.label} "
                f"(dimension {self.functor.dim(self.group)})"
            )

    @property
    def labels(self) -> list[str]:
        return self.functor.basis(self.group)

    def _check(self, other: "GreenElement"):
        if other.functor is not self.functor or other.group is not self.group:
            raise FieldMismatchError("elements live in different evaluations")

    def __add__(self, other: "GreenElement") -> "GreenElement":
        self._check(other)
        return GreenElement(
            self.functor, self.group, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "GreenElement") -> "GreenElement":
        self._check(other)
        return GreenElement(
            self.functor, self.group, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def scale(self, c) -> "GreenElement":
        c = self.functor.field.convert(c)
        return GreenElement(self.functor, self.group, tuple(c * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def format(self) -> str:
        fld = self.functor.field
        terms = [f"{fld.format(c)}*{label}" for c, label in zip(self.coeffs, self.labels) if c]
        return " + ".join(terms) or "0"

    def to_strings(self) -> list[str]:
        return [self.functor.field.format(c) for c in self.coeffs]


@dataclass(frozen=True)
class EvaluationBasis:
    spec: str
    group: str
    labels: list

    @property
    def dimension(self) -> int:
        return len(self.labels)


def evaluate(A: GreenFunctor, G: Group) -> EvaluationBasis:
    labels = A.basis(G)
    logger.debug("Evaluated functor", spec=A.spec, group=G.label, dimension=len(labels))
    return EvaluationBasis(A.spec, G.label, list(labels))


def element(A: GreenFunctor, G: Group, coeffs) -> GreenElement:
    return GreenElement(A, G, tuple(A.field.convert(c) for c in coeffs))


def basis_element(A: GreenFunctor, G: Group, i: int) -> GreenElement:
    return GreenElement(A, G, A.unit_vector(G, i))


def basis_elements(A: GreenFunctor, G: Group) -> list[GreenElement]:
    return [basis_element(A, G, i) for i in range(A.dim(G))]


def zero(A: GreenFunctor, G: Group) -> GreenElement:
    return GreenElement(A, G, A.zero_vector(G))


def unit(A: GreenFunctor) -> GreenElement:
    """epsilon_A in A(1)"""
    one = trivial_group()
    return GreenElement(A, one, A.from_raw(one, A.unit_raw()))


def to_scalar(x: GreenElement):
    """The scalar c with x = c * epsilon_A, for one-dimensional A(1)."""
    A = x.functor
    if A.dim(x.group) != 1:
        raise NotAFieldError(f"{A.spec} at {x.group.label} is not one-dimensional")
    eps = unit(A).coeffs[0]
    return x.coeffs[0] / eps


# -- bilinear expansion -------------------------------------------------------------


def bilinear(
    key: str,
    fx: GreenFunctor,
    X: Group,
    x,
    fy: GreenFunctor,
    Y: Group,
    y,
    fout: GreenFunctor,
    out: Group,
    pair_raw: Callable[[dict, dict], dict],
) -> tuple:
    """Expand ``pair_raw`` bilinearly over basis pairs of the base functors."""
    bx, by, bo = fx.base(), fy.base(), fout.base()
    xv = fx.to_base(X, x)
    yv = fy.to_base(Y, y)
    acc = list(bo.zero_vector(out))
    for i, a in enumerate(xv):
        if not a:
            continue
        for j, b in enumerate(yv):
            if not b:
                continue
            vec = _pair(key, bx, X, i, by, Y, j, bo, out, pair_raw)
            ab = a * b
            acc = [s + ab * v if v else s for s, v in zip(acc, vec)]
    return fout.from_base(out, acc)


def _pair(key, bx, X, i, by, Y, j, bo, out, pair_raw) -> tuple:
    memo_key = (key, bx.spec, X.label, i, by.spec, Y.label, j, bo.spec, out.label)
    vec = _memo.get(memo_key)
    if vec is None:
        raw = pair_raw(bx.to_raw(X, bx.unit_vector(X, i)), by.to_raw(Y, by.unit_vector(Y, j)))
        vec = bo.from_raw(out, raw)
        with _memo_lock:
            _memo[memo_key] = vec
    return vec


def _structure(key: tuple, build: Callable[[], object]):
    value = _structures.get(key)
    if value is None:
        value = build()
        with _memo_lock:
            _structures.setdefault(key, value)
            value = _structures[key]
    return value


# -- operations ----------------------------------------------------------------------


def act(A: GreenFunctor, w: BisetWord, x: GreenElement) -> GreenElement:
    """A(w)(x), one factor at a time."""
    if x.group is not w.source:
        raise GroupStructureError(
            f"word starts at {w.source.label} but the element lives at {x.group.label}"
        )
    raw = A.to_raw(x.group, x.coeffs)
    for op in w.factors:
        raw = A.apply_raw(op, raw)
    return GreenElement(A, w.target, A.from_raw(w.target, raw))


def act_elemental(A: GreenFunctor, op: Elemental, x: GreenElement) -> GreenElement:
    return act(A, BisetWord.of(op), x)


def times(A: GreenFunctor, x: GreenElement, y: GreenElement) -> GreenElement:
    """x x y in A(G x H)"""
    G, H = x.group, y.group
    P = product(G, H)
    coeffs = bilinear(
        "times", A, G, x.coeffs, A, H, y.coeffs, A, P,
        lambda a, b: A.times_raw(G, a, H, b),
    )
    return GreenElement(A, P, coeffs)


def _dot_ops(G: Group):
    def build():
        P = product(G, G)
        D, to_g = diagonal_subgroup(G)
        return bisets.res(P, D), bisets.iso(to_g)

    return _structure(("dot", G.label), build)


def dot(A: GreenFunctor, x: GreenElement, y: GreenElement) -> GreenElement:
    """Iso o Res_Delta(G) of x x y"""
    x._check(y)
    G = x.group
    restrict, transport = _dot_ops(G)

    def pair_raw(a, b):
        return A.apply_raw(transport, A.apply_raw(restrict, A.times_raw(G, a, G, b)))

    return GreenElement(A, G, bilinear("dot", A, G, x.coeffs, A, G, y.coeffs, A, G, pair_raw))


def _factors(X: Group) -> tuple[Group, Group]:
    if X.factors is None:
        raise GroupStructureError(f"{X.label} is not a direct product")
    return X.factors


def _compose_ops(K: Group, G: Group, H: Group):
    """Res to K x Delta(G) x H inside (K x G) x (G x H), then Def onto K x H."""

    def build():
        KG, GH = product(K, G), product(G, H)
        P = product(KG, GH)
        KH = product(K, H)
        S = P.subgroup_group(
            (P.join(KG.join(k, g), GH.join(g, h))
             for k in K.elements for g in G.elements for h in H.elements),
            label=f"{P.label}[dG]",
        )

        def mapping(el):
            kg, gh = P.split(el)
            return KH.join(KG.split(kg)[0], GH.split(gh)[1])

        pi = GroupHom(S, KH, mapping, "projection", f"{S.label}->{KH.label}")
        return bisets.res(P, S), bisets.deflate(pi)

    return _structure(("compose", K.label, G.label, H.label), build)


def _module_times_raw(A: GreenFunctor, M: GreenFunctor, G: Group, H: Group):
    """Raw product A(G) x M(H) -> M(G x H) for M = A or M = A_L."""
    if M is A:
        return lambda a, m: A.times_raw(G, a, H, m)
    if isinstance(M, Shift) and M.inner is A:
        L = M.L
        HL = product(H, L)

        def build():
            src = product(G, HL)
            tgt = product(product(G, H), L)
            return bisets.iso(GroupHom(src, tgt, lambda el: el, "isomorphism",
                                       f"{src.label}->{tgt.label}"))

        reassoc = _structure(("reassoc", G.label, H.label, L.label), build)
        return lambda a, m: A.apply_raw(reassoc, A.times_raw(G, a, HL, m))
    raise GroupStructureError(f"{M.spec} is not a module handled over {A.spec}")


def module_times(A: GreenFunctor, M: GreenFunctor, x: GreenElement, m: GreenElement) -> GreenElement:
    """alpha x m in M(G x H) for alpha in A(G), m in M(H)."""
    G, H = x.group, m.group
    P = product(G, H)
    pair = _module_times_raw(A, M, G, H)
    coeffs = bilinear(f"mtimes:{M.spec}", A, G, x.coeffs, M, H, m.coeffs, M, P, pair)
    return GreenElement(M, P, coeffs)


def module_compose(A: GreenFunctor, M: GreenFunctor, a: GreenElement, m: GreenElement) -> GreenElement:
    """a o m in M(K x H) for a in A(K x G), m in M(G x H)."""
    K, G = _factors(a.group)
    G2, H = _factors(m.group)
    if G2 is not G:
        raise GroupStructureError(f"middle groups differ: {G.label} and {G2.label}")
    restrict, deflation = _compose_ops(K, G, H)
    mtimes = _module_times_raw(A, M, a.group, m.group)

    def pair_raw(x, y):
        return M.apply_raw(deflation, M.apply_raw(restrict, mtimes(x, y)))

    out = product(K, H)
    coeffs = bilinear(f"compose:{M.spec}", A, a.group, a.coeffs, M, m.group, m.coeffs, M, out,
                      pair_raw)
    return GreenElement(M, out, coeffs)


def compose_PA(A: GreenFunctor, beta: GreenElement, alpha: GreenElement) -> GreenElement:
    """beta o alpha for beta in A(K x G), alpha in A(G x H)."""
    return module_compose(A, A, beta, alpha)


def opposite(A: GreenFunctor, alpha: GreenElement) -> GreenElement:
    """Transport along the swap H x G -> G x H."""
    H, G = _factors(alpha.group)
    return act_elemental(A, bisets.iso(swap(H, G)), alpha)


def identity_morphism(A: GreenFunctor, G: Group) -> GreenElement:
    """epsilon_G = Ind_Delta(G)^{G x G} Inf_1^{Delta(G)} epsilon_A"""
    P = product(G, G)
    D, _ = diagonal_subgroup(G)
    raw = A.apply_raw(bisets.inf(trivial_hom(D)), A.unit_raw())
    raw = A.apply_raw(bisets.ind(D, P), raw)
    return GreenElement(A, P, A.from_raw(P, raw))


def t_deflate_to_one(A: GreenFunctor, u: GreenElement) -> GreenElement:
    """t_L = A(Def_1^L)"""
    return act_elemental(A, bisets.deflate(trivial_hom(u.group)), u)


def as_right_one(A: GreenFunctor, x: GreenElement) -> GreenElement:
    """A(G) -> A(G x 1)"""
    return act_elemental(A, bisets.iso(unit_right(x.group).inverse()), x)


def as_left_one(A: GreenFunctor, x: GreenElement) -> GreenElement:
    """A(G) -> A(1 x G)"""
    return act_elemental(A, bisets.iso(unit_left(x.group).inverse()), x)


def from_right_one(A: GreenFunctor, x: GreenElement) -> GreenElement:
    """A(G x 1) -> A(G)"""
    G, _ = _factors(x.group)
    return act_elemental(A, bisets.iso(unit_right(G)), x)


def from_left_one(A: GreenFunctor, x: GreenElement) -> GreenElement:
    """A(1 x G) -> A(G)"""
    _, G = _factors(x.group)
    return act_elemental(A, bisets.iso(unit_left(G)), x)


# -- bilinear forms -------------------------------------------------------------------


def form(A: GreenFunctor, u: GreenElement, v: GreenElement) -> GreenElement:
    """<u, v>_L = t_L(u . v)"""
    return t_deflate_to_one(A, dot(A, u, v))


def form_via_composition(A: GreenFunctor, alpha: GreenElement, beta: GreenElement) -> GreenElement:
    """<alpha, beta>_{H,L} = Def_1^{Delta(L)} Res^{L x L}_{Delta(L)} (alpha^op o beta)"""
    _, L = _factors(alpha.group)
    composite = compose_PA(A, opposite(A, alpha), beta)
    restrict, transport = _dot_ops(L)
    on_diagonal = act_elemental(A, restrict, composite)
    return act_elemental(A, bisets.deflate(trivial_hom(restrict.target)), on_diagonal)


@dataclass
class GramResult:
    spec: str
    H: str
    L: str
    labels: list
    entries: list
    matrix: Matrix | None
    routes_agree: bool

    def rank(self) -> int:
        if self.matrix is None:
            raise NotAFieldError(f"{self.spec}(1) is not one-dimensional; no rank over it")
        return rank(self.matrix)


def gram_matrix(A: GreenFunctor, H: Group, L: Group | None = None,
                cross_check: bool = True) -> GramResult:
    """Gram of <-,->_{H,L} on the basis of A(H x L), by t(u.v) and by Def Res(u^op o v)."""
    L = L or trivial_group()
    X = product(H, L)
    basis = basis_elements(A, X)
    n = len(basis)
    entries: list[list] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            value = form(A, basis[i], basis[j])
            entries[i][j] = value
            entries[j][i] = value if A.commutative else form(A, basis[j], basis[i])
    agree = True
    if cross_check:
        for i in range(n):
            for j in range(n):
                other = form_via_composition(A, basis[i], basis[j])
                if other.coeffs != entries[i][j].coeffs:
                    agree = False
                    logger.warning("Gram routes disagree", spec=A.spec, H=H.label, L=L.label,
                                   row=i, col=j)
    matrix = None
    one = trivial_group()
    if A.dim(one) == 1:
        matrix = Matrix(
            [[to_scalar(e) for e in row] for row in entries], A.field,
            list(A.basis(X)), list(A.basis(X)),
        )
    return GramResult(A.spec, H.label, L.label, list(A.basis(X)), entries, matrix, agree)


def inflation_dot_cut_oracle(A: GreenFunctor, G: Group) -> int:
    """Rank of u -> Inf_1^G(e) . u in the inner functor of a cut (cross-oracle)."""
    from green.functors import IdempotentCut

    if not isinstance(A, IdempotentCut):
        raise GroupStructureError(f"{A.spec} is not an idempotent cut")
    inner = A.inner
    one = trivial_group()
    e = GreenElement(inner, one, A.e_coeffs)
    inflated = act_elemental(inner, bisets.inf(trivial_hom(G)), e)
    columns = [dot(inner, inflated, b).coeffs for b in basis_elements(inner, G)]
    return rank(Matrix.from_columns(columns, inner.field, nrows=inner.dim(G)))
