"""
Green biset functor instances.

Every instance works on two levels. Coefficient vectors over the labeled
basis of an evaluation A(G) are what callers see. Raw values are the
instance's own unnormalized form, a dict in every case, which can live on
groups too large to have a computed subgroup lattice or character table
(the H x G x G x K intermediates of the P_A composition).

    Burnside       {subgroup (frozenset of elements): coefficient}
    LinRep*        {element: Cyclotomic}, a class function
    ConstantField  {None: residue}
    Shift          the inner raw value at G x L
    IdempotentCut  the inner raw value
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from fractions import Fraction

import structlog

from algebra import bisets
from algebra.bisets import Elemental
from algebra.burnside import (
    basis_labels,
    deflate_subgroup,
    inflate_subgroup,
    primitive_idempotents,
    restrict_transitive,
)
from algebra.characters import (
    apply_elemental_to_character,
    character_table,
    decompose,
    galois_orbits,
    product_class_function,
    rational_character_basis,
    rational_coefficients,
)
from algebra.errors import FieldMismatchError, GroupStructureError, SpecSyntaxError
from algebra.groups import (
    Group,
    GroupHom,
    identity_hom,
    product,
    trivial_group,
    trivial_hom,
    unit_left,
)
from algebra.matrices import Matrix, column_space_pivots, inverse, row_echelon
from algebra.scalars import QQ, Cyclotomic, Field, PrimeField, is_prime

logger = structlog.get_logger()

Raw = dict


def raw_add(x: Raw, y: Raw) -> Raw:
    out = dict(x)
    for k, v in y.items():
        out[k] = out[k] + v if k in out else v
    return out


def raw_scale(c, x: Raw) -> Raw:
    return {k: v * c for k, v in x.items()}


def raw_combination(terms) -> Raw:
    """sum c * raw over ``(c, raw)`` pairs, skipping zero coefficients"""
    out: Raw = {}
    for c, raw in terms:
        if c:
            out = raw_add(out, raw_scale(c, raw))
    return out


class GreenFunctor(ABC):
    """A commutative Green biset functor with an exact coefficient field."""

    commutative = True

    def __init__(self, spec: str, field: Field):
        self.spec = spec
        self.field = field
        self._lock = threading.RLock()
        self._basis_cache: dict[str, list[str]] = {}

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec}>"

    # -- evaluation ----------------------------------------------------------
    def basis(self, G: Group) -> list[str]:
        labels = self._basis_cache.get(G.label)
        if labels is None:
            with self._lock:
                labels = self._basis_cache.get(G.label)
                if labels is None:
                    labels = self._compute_basis(G)
                    self._basis_cache[G.label] = labels
        return labels

    def dim(self, G: Group) -> int:
        return len(self.basis(G))

    def unit_vector(self, G: Group, i: int) -> tuple:
        return tuple(self.field.one if j == i else self.field.zero for j in range(self.dim(G)))

    def zero_vector(self, G: Group) -> tuple:
        return tuple(self.field.zero for _ in range(self.dim(G)))

    @abstractmethod
    def _compute_basis(self, G: Group) -> list[str]:
        """Labels of the basis of A(G)."""

    @abstractmethod
    def to_raw(self, G: Group, coeffs) -> Raw:
        """Raw value of a coefficient vector at G."""

    @abstractmethod
    def from_raw(self, G: Group, raw: Raw) -> tuple:
        """Coefficient vector of a raw value at G."""

    @abstractmethod
    def apply_raw(self, op: Elemental, raw: Raw) -> Raw:
        """A(op) on a raw value of op.source."""

    @abstractmethod
    def times_raw(self, G: Group, x: Raw, H: Group, y: Raw) -> Raw:
        """External product A(G) x A(H) -> A(G x H) on raw values."""

    @abstractmethod
    def unit_raw(self) -> Raw:
        """The unit element of A(1)."""

    # -- ambient coordinates (overridden by cuts) ----------------------------
    def base(self) -> "GreenFunctor":
        return self

    def to_base(self, G: Group, coeffs) -> tuple:
        return tuple(coeffs)

    def from_base(self, G: Group, coeffs) -> tuple:
        return tuple(coeffs)


class Burnside(GreenFunctor):
    """kB: transitive G-sets [G/H] over subgroup classes."""

    def __init__(self, field: Field = QQ):
        super().__init__(f"burnside({field.name})", field)

    def _compute_basis(self, G: Group) -> list[str]:
        return basis_labels(G)

    def to_raw(self, G: Group, coeffs) -> Raw:
        classes = G.subgroup_classes()
        return {classes[i].representative: c for i, c in enumerate(coeffs) if c}

    def from_raw(self, G: Group, raw: Raw) -> tuple:
        out = list(self.zero_vector(G))
        for subgroup, c in raw.items():
            i = G.subgroup_class_index(subgroup)
            out[i] = out[i] + self.field.convert(c)
        return tuple(out)

    def apply_raw(self, op: Elemental, raw: Raw) -> Raw:
        out: Raw = {}

        def add(key, c):
            out[key] = out[key] + c if key in out else c

        for A, c in raw.items():
            if op.kind == "Ind":
                add(A, c)
            elif op.kind == "Res":
                for stab in restrict_transitive(op.source, A, op.target.elements):
                    add(stab, c)
            elif op.kind == "Inf":
                add(inflate_subgroup(op.hom, A), c)
            elif op.kind == "Def":
                add(deflate_subgroup(op.hom, A), c)
            else:
                add(op.hom.image(A), c)
        return {k: v for k, v in out.items() if v}

    def times_raw(self, G: Group, x: Raw, H: Group, y: Raw) -> Raw:
        P = product(G, H)
        out: Raw = {}
        for A, a in x.items():
            for B, b in y.items():
                key = P.product_subset(A, B)
                out[key] = out[key] + a * b if key in out else a * b
        return out

    def unit_raw(self) -> Raw:
        one = trivial_group()
        return {one.elements: self.field.one}


class _LinRep(GreenFunctor):
    def __init__(self, spec: str, field: Field):
        super().__init__(spec, field)

    def apply_raw(self, op: Elemental, raw: Raw) -> Raw:
        return apply_elemental_to_character(op, raw)

    def times_raw(self, G: Group, x: Raw, H: Group, y: Raw) -> Raw:
        return product_class_function(product(G, H), x, y)

    def unit_raw(self) -> Raw:
        one = trivial_group()
        return {one.identity: Cyclotomic.rational(1)}

    def _lift_rational(self, coeffs) -> list[Fraction]:
        out = []
        for c in coeffs:
            if isinstance(c, Fraction) or isinstance(c, int):
                out.append(Fraction(c))
            else:
                # residues lift to their representative in [0, q)
                out.append(Fraction(c.value))
        return out

    def _combine(self, G: Group, coeffs, rows) -> Raw:
        values = [Cyclotomic.rational(0)] * len(G.conjugacy_classes())
        for c, row in zip(self._lift_rational(coeffs), rows):
            if c:
                values = [v + w * c for v, w in zip(values, row)]
        return {x: values[G.class_index(x)] for x in G.elements}


class LinRepC(_LinRep):
    """kR_C: virtual complex characters on the irreducible basis."""

    def __init__(self, field: Field = QQ):
        super().__init__(f"repC({field.name})", field)

    def _compute_basis(self, G: Group) -> list[str]:
        return character_table(G).labels

    def to_raw(self, G: Group, coeffs) -> Raw:
        return self._combine(G, coeffs, character_table(G).irreducibles)

    def from_raw(self, G: Group, raw: Raw) -> tuple:
        return tuple(self.field.convert(c) for c in rational_coefficients(decompose(G, raw)))


class LinRepQSpan(_LinRep):
    """The Q-span of Galois-orbit sums of irreducible characters inside kR_C.

    Schur indices are not computed; they rescale basis vectors by positive
    integers and leave spans, ranks and definiteness unchanged.
    """

    def __init__(self, field: Field = QQ):
        super().__init__(f"repQ({field.name})", field)

    def _compute_basis(self, G: Group) -> list[str]:
        return [f"psi{i}" for i in range(len(galois_orbits(character_table(G))))]

    def to_raw(self, G: Group, coeffs) -> Raw:
        rows = [[Cyclotomic.rational(v) for v in row] for row in rational_character_basis(G)]
        return self._combine(G, coeffs, rows)

    def from_raw(self, G: Group, raw: Raw) -> tuple:
        coeffs = rational_coefficients(decompose(G, raw))
        out = []
        for orbit in galois_orbits(character_table(G)):
            values = {coeffs[i] for i in orbit}
            if len(values) != 1:
                raise FieldMismatchError("class function is not Galois-stable")
            out.append(self.field.convert(values.pop()))
        return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if n % p == 0 and is_prime(p)]


class ConstantField(GreenFunctor):
    """The constant functor k-bar over F_q.

    A(U) is multiplication by the number of left orbits |H\\U|; on elemental
    bisets only restriction contributes a factor, the index [G:H]. Defined on
    groups whose prime divisors are all 1 mod q.
    """

    def __init__(self, q: int):
        if not is_prime(q):
            raise SpecSyntaxError(f"const(q) needs a prime, got {q}")
        self.q = q
        super().__init__(f"const({q})", PrimeField(q))

    def check_group(self, G: Group) -> None:
        bad = [p for p in prime_divisors(G.order) if p % self.q != 1]
        if bad:
            raise GroupStructureError(
                f"{G.label} has prime divisors {bad} not congruent to 1 mod {self.q}"
            )

    def _compute_basis(self, G: Group) -> list[str]:
        self.check_group(G)
        return ["1"]

    def to_raw(self, G: Group, coeffs) -> Raw:
        return {None: self.field.convert(coeffs[0])}

    def from_raw(self, G: Group, raw: Raw) -> tuple:
        return (raw.get(None, self.field.zero),)

    def apply_raw(self, op: Elemental, raw: Raw) -> Raw:
        if op.kind == "Res" and raw:
            return {None: raw[None] * (op.source.order // op.target.order)}
        return dict(raw)

    def times_raw(self, G: Group, x: Raw, H: Group, y: Raw) -> Raw:
        if not x or not y:
            return {}
        return {None: x[None] * y[None]}

    def unit_raw(self) -> Raw:
        return {None: self.field.one}


class Shift(GreenFunctor):
    """A_L: G -> A(G x L), every elemental extended by x L."""

    def __init__(self, inner: GreenFunctor, L: Group):
        super().__init__(f"shift({inner.spec},{L.label})", inner.field)
        self.inner = inner
        self.L = L
        self._extended: dict[int, tuple] = {}
        self._diagonal: dict[tuple[str, str], tuple] = {}

    def _compute_basis(self, G: Group) -> list[str]:
        return self.inner.basis(product(G, self.L))

    def to_raw(self, G: Group, coeffs) -> Raw:
        return self.inner.to_raw(product(G, self.L), coeffs)

    def from_raw(self, G: Group, raw: Raw) -> tuple:
        return self.inner.from_raw(product(G, self.L), raw)

    def extend(self, op: Elemental) -> Elemental:
        """The elemental op x L between (source x L) and (target x L)."""
        hit = self._extended.get(id(op))
        cached = hit[1] if hit is not None else None
        if cached is None:
            L = self.L
            if op.kind == "Ind":
                cached = bisets.ind(product(op.source, L), product(op.target, L))
            elif op.kind == "Res":
                cached = bisets.res(product(op.source, L), product(op.target, L))
            else:
                ext = op.hom.times(identity_hom(L))
                cached = {"Inf": bisets.inf, "Def": bisets.deflate, "Iso": bisets.iso}[op.kind](ext)
            # keep op alive so its id is not reused
            self._extended[id(op)] = (op, cached)
        return cached

    def apply_raw(self, op: Elemental, raw: Raw) -> Raw:
        return self.inner.apply_raw(self.extend(op), raw)

    def _diagonal_ops(self, G: Group, H: Group):
        """Res to {(g, l, h, l)} inside (G x L) x (H x L), then Iso onto (G x H) x L."""
        key = (G.label, H.label)
        ops = self._diagonal.get(key)
        if ops is None:
            L = self.L
            GL, HL = product(G, L), product(H, L)
            P = product(GL, HL)
            D = P.subgroup_group(
                (P.join(GL.join(g, l), HL.join(h, l))
                 for g in G.elements for h in H.elements for l in L.elements),
                label=f"{P.label}[dL]",
            )
            GH = product(G, H)
            target = product(GH, L)

            def mapping(el):
                gl, hl = P.split(el)
                g, l_ = GL.split(gl)
                h, _ = HL.split(hl)
                return target.join(GH.join(g, h), l_)

            phi = GroupHom(D, target, mapping, "isomorphism", f"{D.label}->{target.label}")
            ops = (bisets.res(P, D), bisets.iso(phi))
            self._diagonal[key] = ops
        return ops

    def times_raw(self, G: Group, x: Raw, H: Group, y: Raw) -> Raw:
        L = self.L
        raw = self.inner.times_raw(product(G, L), x, product(H, L), y)
        for op in self._diagonal_ops(G, H):
            raw = self.inner.apply_raw(op, raw)
        return raw

    def unit_raw(self) -> Raw:
        one_l = product(trivial_group(), self.L)
        return self.inner.apply_raw(bisets.inf(trivial_hom(one_l)), self.inner.unit_raw())


class IdempotentCut(GreenFunctor):
    """e A: the image of u -> Iso(e x u) for an idempotent e of A(1).

    The basis of e A(G) is the set of pivot columns of that map's matrix in
    the inner basis; raw values are the inner functor's.
    """

    def __init__(self, inner: GreenFunctor, e_coeffs, label: str):
        super().__init__(f"cut({inner.spec},{label})", inner.field)
        self.inner = inner
        self.e_coeffs = tuple(inner.field.convert(c) for c in e_coeffs)
        self.e_label = label
        self._images: dict[str, tuple] = {}
        one = trivial_group()
        square = self.multiply_by_e(one, self.e_coeffs)
        if square != self.e_coeffs:
            raise GroupStructureError(f"{label} is not an idempotent of {inner.spec} at 1")

    def multiply_by_e(self, G: Group, u) -> tuple:
        """Inner coordinates of Iso(e x u) at G."""
        from green.engine import bilinear

        one = trivial_group()
        inner = self.inner
        iso_op = bisets.iso(unit_left(G))

        def pair_raw(er, ur):
            return inner.apply_raw(iso_op, inner.times_raw(one, er, G, ur))

        return bilinear(
            "cut-e", inner, one, self.e_coeffs, inner, G, tuple(u), inner, G, pair_raw
        )

    def action_matrix(self, G: Group) -> Matrix:
        n = self.inner.dim(G)
        columns = [self.multiply_by_e(G, self.inner.unit_vector(G, j)) for j in range(n)]
        return Matrix.from_columns(columns, self.field, nrows=n)

    def _image(self, G: Group):
        data = self._images.get(G.label)
        if data is None:
            with self._lock:
                data = self._images.get(G.label)
                if data is None:
                    M = self.action_matrix(G)
                    pivots = column_space_pivots(M)
                    columns = [M.column(j) for j in pivots]
                    if columns:
                        P = Matrix.from_columns(columns, self.field)
                        _, rows, _ = row_echelon(P.transpose())
                        square = Matrix([P.entries[r] for r in rows], self.field)
                        solver = inverse(square)
                    else:
                        rows, solver = [], None
                    data = (pivots, columns, rows, solver)
                    self._images[G.label] = data
                    logger.debug("Computed idempotent image", spec=self.spec, group=G.label,
                                 inner_dim=M.cols, dim=len(pivots))
        return data

    def _compute_basis(self, G: Group) -> list[str]:
        inner_labels = self.inner.basis(G)
        pivots = self._image(G)[0]
        return [f"e*{inner_labels[j]}" for j in pivots]

    def base(self) -> GreenFunctor:
        return self.inner.base()

    def to_base(self, G: Group, coeffs) -> tuple:
        return self.inner.to_base(G, self.to_inner(G, coeffs))

    def from_base(self, G: Group, coeffs) -> tuple:
        return self.from_inner(G, self.inner.from_base(G, coeffs))

    def to_inner(self, G: Group, coeffs) -> tuple:
        _, columns, _, _ = self._image(G)
        out = list(self.inner.zero_vector(G))
        for c, col in zip(coeffs, columns):
            if c:
                out = [o + c * v for o, v in zip(out, col)]
        return tuple(out)

    def from_inner(self, G: Group, vec) -> tuple:
        _, columns, rows, solver = self._image(G)
        if solver is None:
            if any(vec):
                raise FieldMismatchError(f"vector is outside {self.spec} at {G.label}")
            return ()
        coeffs = tuple(solver.apply([vec[r] for r in rows]))
        if self.to_inner(G, coeffs) != tuple(vec):
            raise FieldMismatchError(f"vector is outside {self.spec} at {G.label}")
        return coeffs

    def to_raw(self, G: Group, coeffs) -> Raw:
        return self.inner.to_raw(G, self.to_inner(G, coeffs))

    def from_raw(self, G: Group, raw: Raw) -> tuple:
        return self.from_inner(G, self.inner.from_raw(G, raw))

    def apply_raw(self, op: Elemental, raw: Raw) -> Raw:
        return self.inner.apply_raw(op, raw)

    def times_raw(self, G: Group, x: Raw, H: Group, y: Raw) -> Raw:
        return self.inner.times_raw(G, x, H, y)

    def unit_raw(self) -> Raw:
        return self.inner.to_raw(trivial_group(), self.e_coeffs)


def top_idempotent(inner: GreenFunctor, index: int | None = None) -> tuple:
    """e_K^K (or e_H^K for class ``index``) of kB(K), as a vector of shift(burnside, K) at 1."""
    if not isinstance(inner, Shift) or not isinstance(inner.inner, Burnside):
        raise SpecSyntaxError("idempotent cuts by e<index> need shift(burnside(F), K)")
    K1 = product(trivial_group(), inner.L)
    idempotents = primitive_idempotents(K1, inner.field)
    if index is not None and not 0 <= index < len(idempotents):
        raise SpecSyntaxError(f"{K1.label} has {len(idempotents)} idempotents, got e{index}")
    chosen = idempotents[-1 if index is None else index]
    return chosen.coeffs
