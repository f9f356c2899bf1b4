"""
Burnside rings kB(G) on the basis of transitive G-sets [G/H].

Products and idempotents go through the table of marks: the mark map is an
injective ring homomorphism into Q^r, so multiplication is entrywise on mark
vectors and an idempotent is the preimage of an indicator vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import structlog

from algebra.bisets import ConcreteBiset, balanced_product
from algebra.errors import CharacteristicError, FieldMismatchError
from algebra.groups import Group, GroupHom, perm_inv, perm_mul
from algebra.matrices import NO_SOLUTION, Matrix, solve_linear
from algebra.scalars import QQ, Field, Residue

logger = structlog.get_logger()


def basis_labels(G: Group) -> list[str]:
    return [f"[{G.label}/{c.name}]" for c in G.subgroup_classes()]


def _fixed_cosets(G: Group, gens: Iterable, B: frozenset) -> int:
    """#{gB in G/B : a gB = gB for all a}"""
    gens = list(gens)
    count = 0
    for g in G.elements:
        g_inv = perm_inv(g)
        if all(perm_mul(perm_mul(g_inv, a), g) in B for a in gens):
            count += 1
    return count // len(B)


@dataclass(frozen=True)
class MarksTable:
    """``matrix[A][B]`` is the number of A-fixed points on G/B."""

    group: Group
    matrix: Matrix

    @property
    def size(self) -> int:
        return self.matrix.rows


def table_of_marks(G: Group) -> MarksTable:
    from dependencies import get_cache_store

    def build():
        classes = G.subgroup_classes()
        rows = []
        for A in classes:
            row = []
            for B in classes:
                if B.order % A.order:
                    row.append(0)
                else:
                    row.append(_fixed_cosets(G, A.generators, B.representative))
            rows.append(row)
        logger.debug("Computed table of marks", group=G.label, size=len(rows))
        return rows

    def cached():
        return get_cache_store().get_or_build(
            G.label, "marks", build, encode=lambda rows: rows, decode=lambda rows: rows,
            persist=G.is_catalog,
        )

    rows = G._cached("marks", cached)
    labels = basis_labels(G)
    return MarksTable(G, Matrix(rows, QQ, list(labels), list(labels)))


def _as_rational(value) -> Fraction:
    if isinstance(value, Residue):
        return Fraction(value.value)
    return Fraction(value)


@dataclass(frozen=True)
class BurnsideElement:
    group: Group
    coeffs: tuple
    field: Field = QQ

    @classmethod
    def basis(cls, G: Group, index: int, field: Field = QQ) -> "BurnsideElement":
        n = len(G.subgroup_classes())
        return cls(G, tuple(field.one if i == index else field.zero for i in range(n)), field)

    @classmethod
    def from_marks(cls, G: Group, marks, field: Field = QQ) -> "BurnsideElement":
        table = table_of_marks(G)
        sol = solve_linear(table.matrix, [Fraction(m) for m in marks])
        if sol is NO_SOLUTION:
            raise FieldMismatchError(f"{marks} is not a mark vector of {G.label}")
        return cls(G, tuple(field.convert(x) for x in sol), field)

    def mark_vector(self) -> list[Fraction]:
        return table_of_marks(self.group).matrix.apply([_as_rational(c) for c in self.coeffs])

    def _check(self, other: "BurnsideElement"):
        if other.group is not self.group:
            raise FieldMismatchError(f"{self.group.label} and {other.group.label} differ")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} and {other.field} differ")

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        self._check(other)
        return BurnsideElement(
            self.group, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.field
        )

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        self._check(other)
        return BurnsideElement(
            self.group, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.field
        )

    def scale(self, c) -> "BurnsideElement":
        c = self.field.convert(c)
        return BurnsideElement(self.group, tuple(c * a for a in self.coeffs), self.field)

    def __mul__(self, other: "BurnsideElement") -> "BurnsideElement":
        return burnside_product(self, other)

    def format(self) -> str:
        labels = basis_labels(self.group)
        terms = [
            f"{self.field.format(c)}*{label}" for c, label in zip(self.coeffs, labels) if c
        ]
        return " + ".join(terms) or "0"


def burnside_product(x: BurnsideElement, y: BurnsideElement) -> BurnsideElement:
    """Multiply through the mark homomorphism."""
    x._check(y)
    product = [a * b for a, b in zip(x.mark_vector(), y.mark_vector())]
    # structure constants are integers, so the rational result reduces into F_q
    return BurnsideElement.from_marks(x.group, product, x.field)


def primitive_idempotents(G: Group, field: Field = QQ) -> list[BurnsideElement]:
    """e_H for each subgroup class H, in class order."""
    if field.characteristic:
        raise CharacteristicError(
            f"primitive idempotents need characteristic 0, got {field}"
        )
    n = len(G.subgroup_classes())
    return [
        BurnsideElement.from_marks(G, [1 if j == i else 0 for j in range(n)], field)
        for i in range(n)
    ]


# -- G-set operations on transitive basis elements -----------------------------------


def restrict_transitive(G: Group, A: frozenset, S: frozenset) -> list[frozenset]:
    """Stabilizers ``S n gAg^-1`` of the S-orbits on G/A, one per orbit."""
    A_list = list(A)
    S_list = list(S)
    seen: set = set()
    stabilizers = []
    for g in G.sorted_elements:
        if g in seen:
            continue
        coset = [perm_mul(g, a) for a in A_list]
        for s in S_list:
            for x in coset:
                seen.add(perm_mul(s, x))
        g_inv = perm_inv(g)
        stabilizers.append(
            frozenset(s for s in S_list if perm_mul(perm_mul(g_inv, s), g) in A)
        )
    return stabilizers


def inflate_subgroup(pi: GroupHom, B: frozenset) -> frozenset:
    """[Q/B] viewed through pi: G -> Q is [G/pi^-1(B)]."""
    return pi.preimage(B)


def deflate_subgroup(pi: GroupHom, A: frozenset) -> frozenset:
    """N-orbits of G/A form Q/pi(A)."""
    return pi.image(A)


def double_coset_count(H: Group, A: Iterable, B: Iterable) -> int:
    """|A \\ H / B| by enumeration."""
    A = list(A)
    B = list(B)
    seen: set = set()
    count = 0
    for h in H.sorted_elements:
        if h in seen:
            continue
        count += 1
        for a in A:
            ah = perm_mul(a, h)
            for b in B:
                seen.add(perm_mul(ah, b))
    return count


def burnside_from_gset(X: ConcreteBiset, field: Field = QQ) -> BurnsideElement:
    """Decompose the left action of ``X`` into transitive classes."""
    G = X.left
    coeffs = [0] * len(G.subgroup_classes())
    for orbit in X.left_orbits():
        coeffs[G.subgroup_class_index(X.left_stabilizer(orbit[0]))] += 1
    return BurnsideElement(G, tuple(field.convert(c) for c in coeffs), field)


def biset_tensor_orbits(U: ConcreteBiset, X: ConcreteBiset, field: Field = QQ) -> BurnsideElement:
    """(U x X)/G as an H-set, for an (H, G)-biset U and a G-set X."""
    U.verify()
    X.verify()
    return burnside_from_gset(balanced_product(U, X), field)
