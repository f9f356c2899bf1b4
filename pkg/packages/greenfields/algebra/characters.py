"""
Character tables and class functions.

Irreducible characters are computed with the Dixon-Schneider method: the
class-multiplication matrices are simultaneously diagonalized over a prime
field F_p with p = 1 (mod exponent) and p > 2 sqrt|G|, and each eigenvector is
lifted to exact cyclotomic values through eigenvalue multiplicities.

Class functions are dictionaries ``element -> Cyclotomic`` so that they can
live on groups whose conjugacy classes are never computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import structlog
from sympy.ntheory import isprime, primitive_root

from algebra.errors import FieldMismatchError, GroupStructureError
from algebra.groups import Group, perm_inv, perm_mul
from algebra.matrices import Matrix, nullspace
from algebra.scalars import Cyclotomic, PrimeField

logger = structlog.get_logger()

ClassFunction = dict


@dataclass(frozen=True)
class CharacterTable:
    group: Group
    conductor: int
    irreducibles: tuple
    degrees: tuple
    multiplicities: tuple

    @property
    def classes(self):
        return self.group.conjugacy_classes()

    @property
    def labels(self) -> list[str]:
        return [f"chi{i}" for i in range(len(self.irreducibles))]

    def value(self, i: int, el) -> Cyclotomic:
        return self.irreducibles[i][self.group.class_index(el)]

    def class_function(self, i: int) -> ClassFunction:
        row = self.irreducibles[i]
        G = self.group
        return {x: row[G.class_index(x)] for x in G.elements}

    def format_rows(self) -> list[list[str]]:
        return [[v.format() for v in row] for row in self.irreducibles]


# -- arithmetic modulo p ---------------------------------------------------------


def _choose_prime(exponent: int, order: int) -> int:
    bound = 2 * math.isqrt(order) + 2
    p = exponent + 1
    while p <= bound or not isprime(p):
        p += exponent
    return p


def _nullspace_mod(columns: list[list[int]], p: int) -> list[list[int]]:
    """Kernel of the matrix with the given columns, over F_p."""
    if not columns:
        return []
    kernel = nullspace(Matrix.from_columns(columns, PrimeField(p)))
    return [[x.value for x in v] for v in kernel]


def _class_coefficients(G: Group) -> list[list[list[int]]]:
    """``a[j][k][l]`` = #{(x, y) in C_j x C_k : xy = z_l} for fixed z_l in C_l."""
    classes = G.conjugacy_classes()
    r = len(classes)
    coeff = [[[0] * r for _ in range(r)] for _ in range(r)]
    elems = G.sorted_elements
    cls_of = {x: G.class_index(x) for x in elems}
    inverses = {x: perm_inv(x) for x in elems}
    for l_idx, C in enumerate(classes):
        z = C.representative
        for x in elems:
            coeff[cls_of[x]][cls_of[perm_mul(inverses[x], z)]][l_idx] += 1
    return coeff


def _common_eigenvectors(coeff, r: int, p: int) -> list[list[int]]:
    spaces = [[[1 if i == j else 0 for i in range(r)] for j in range(r)]]
    for j in range(1, r):
        if all(len(B) == 1 for B in spaces):
            break
        M = coeff[j]
        refined = []
        for B in spaces:
            if len(B) == 1:
                refined.append(B)
                continue
            MB = [[sum(M[k][l] * b[l] for l in range(r)) % p for k in range(r)] for b in B]
            found = 0
            for lam in range(p):
                cols = [[(mb[i] - lam * b[i]) % p for i in range(r)] for b, mb in zip(B, MB)]
                kernel = _nullspace_mod(cols, p)
                if kernel:
                    refined.append(
                        [[sum(c[t] * B[t][i] for t in range(len(B))) % p for i in range(r)]
                         for c in kernel]
                    )
                    found += len(kernel)
                if found == len(B):
                    break
            if found != len(B):
                raise ArithmeticError(f"class matrix {j} is not diagonalizable mod {p}")
        spaces = refined
    if any(len(B) != 1 for B in spaces):
        raise ArithmeticError("class matrices did not separate the characters")
    return [B[0] for B in spaces]


def character_table(G: Group) -> CharacterTable:
    """Exact irreducible characters of ``G`` (cached per group)."""
    from dependencies import get_cache_store

    G.require_lattice_bound()

    def encode(table: CharacterTable):
        return {
            "conductor": table.conductor,
            "multiplicities": [[list(m) for m in row] for row in table.multiplicities],
        }

    def decode(payload):
        return _table_from_multiplicities(
            G, payload["conductor"],
            [[tuple(m) for m in row] for row in payload["multiplicities"]],
        )

    def cached():
        return get_cache_store().get_or_build(
            G.label, "chartable", lambda: _dixon_schneider(G), encode, decode,
            persist=G.is_catalog,
        )

    return G._cached("chartable", cached)


def _dixon_schneider(G: Group) -> CharacterTable:
    classes = G.conjugacy_classes()
    r = len(classes)
    order = G.order
    e = G.exponent
    p = _choose_prime(e, order)
    z = pow(int(primitive_root(p)), (p - 1) // e, p)
    coeff = _class_coefficients(G)
    sizes = [c.size for c in classes]
    inv_class = [G.class_index(perm_inv(c.representative)) for c in classes]
    powers = [
        [G.class_index(G.power(c.representative, a)) for a in range(e)] for c in classes
    ]
    e_inv = pow(e, -1, p)
    rows = []
    for w in _common_eigenvectors(coeff, r, p):
        lead = pow(w[0], -1, p)
        omega = [(x * lead) % p for x in w]
        norm = sum(omega[j] * omega[inv_class[j]] * pow(sizes[j], -1, p) for j in range(r)) % p
        target = (order * pow(norm, -1, p)) % p
        degree = next(
            (d for d in range(1, math.isqrt(order) + 1) if (d * d) % p == target), None
        )
        if degree is None:
            raise ArithmeticError(f"no character degree found modulo {p} for {G.label}")
        chi_mod = [(degree * omega[j] * pow(sizes[j], -1, p)) % p for j in range(r)]
        row = []
        for j in range(r):
            mults = []
            for k in range(e):
                total = sum(chi_mod[powers[j][a]] * pow(z, (-a * k) % e, p) for a in range(e))
                mults.append((total * e_inv) % p)
            if sum(mults) != degree:
                raise ArithmeticError(f"eigenvalue multiplicities do not lift for {G.label}")
            row.append(tuple(mults))
        rows.append(row)
    table = _table_from_multiplicities(G, e, rows)
    logger.debug("Computed character table", group=G.label, classes=r, prime=p)
    return table


def _table_from_multiplicities(G: Group, conductor: int, rows) -> CharacterTable:
    def lift(mults) -> Cyclotomic:
        poly = [Fraction(0)] * conductor
        for k, m in enumerate(mults):
            poly[k] = Fraction(m)
        return Cyclotomic(conductor, poly)

    rows = sorted(rows, key=lambda row: (sum(row[0]), [tuple(-m for m in mults) for mults in row]))
    irreducibles = tuple(tuple(lift(m) for m in row) for row in rows)
    degrees = tuple(sum(row[0]) for row in rows)
    if sum(d * d for d in degrees) != G.order:
        raise ArithmeticError(f"character degrees of {G.label} do not square-sum to |G|")
    return CharacterTable(G, conductor, irreducibles, degrees, tuple(tuple(r) for r in rows))


# -- class functions ---------------------------------------------------------------


def class_function_inner(G: Group, f: ClassFunction, g: ClassFunction) -> Cyclotomic:
    """(1/|G|) sum f(x) conj(g(x))"""
    total = Cyclotomic.rational(0)
    for c in G.conjugacy_classes():
        x = c.representative
        fx = f.get(x)
        if fx:
            total = total + fx * g[x].conj() * c.size
    return total / G.order


def decompose(G: Group, f: ClassFunction) -> list[Cyclotomic]:
    """Coefficients of ``f`` over the irreducible characters."""
    table = character_table(G)
    classes = G.conjugacy_classes()
    weighted = [f[c.representative] * c.size for c in classes]
    coeffs = []
    for row in table.irreducibles:
        total = Cyclotomic.rational(0)
        for w, chi in zip(weighted, row):
            if w:
                total = total + w * chi.conj()
        coeffs.append(total / G.order)
    return coeffs


def galois_orbits(table: CharacterTable) -> list[list[int]]:
    """Orbits of Gal(Q(z_e)/Q) on the irreducibles, in row order."""
    n = table.conductor
    units = [a for a in range(1, n + 1) if math.gcd(a, n) == 1]
    position = {row: i for i, row in enumerate(table.irreducibles)}
    seen: set[int] = set()
    orbits = []
    for i, row in enumerate(table.irreducibles):
        if i in seen:
            continue
        orbit = sorted({position[tuple(v.galois(a) for v in row)] for a in units})
        seen |= set(orbit)
        orbits.append(orbit)
    return orbits


def rational_character_basis(G: Group) -> list[tuple[Fraction, ...]]:
    """Galois-orbit sums of irreducible characters, as rational class vectors."""
    table = character_table(G)
    basis = []
    for orbit in galois_orbits(table):
        values = []
        for j in range(len(table.classes)):
            total = Cyclotomic.rational(0)
            for i in orbit:
                total = total + table.irreducibles[i][j]
            values.append(total.rational_value())
        basis.append(tuple(values))
    return basis


def restrict_class_function(f: ClassFunction, S: frozenset) -> ClassFunction:
    return {x: f[x] for x in S}


def induce_class_function(H: Group, G: Group, f: ClassFunction) -> ClassFunction:
    """f^G(g) = (1/|H|) sum over x in G with x^-1 g x in H of f(x^-1 g x)"""
    H_elems = H.elements
    G_elems = G.sorted_elements
    inverses = {x: perm_inv(x) for x in G_elems}
    values: ClassFunction = {}
    for g in G_elems:
        if g in values:
            continue
        total = Cyclotomic.rational(0)
        conjugates = set()
        for x in G_elems:
            y = perm_mul(perm_mul(inverses[x], g), x)
            conjugates.add(y)
            if y in H_elems:
                total = total + f[y]
        value = total / H.order
        for y in conjugates:
            values[y] = value
    return values


def inflate_class_function(pi, f: ClassFunction) -> ClassFunction:
    return {x: f[pi(x)] for x in pi.source.elements}


def deflate_class_function(pi, f: ClassFunction) -> ClassFunction:
    """Average over fibres: the character of the kernel-coinvariants."""
    sums: dict = {}
    counts: dict = {}
    for x in pi.source.elements:
        y = pi(x)
        sums[y] = sums.get(y, Cyclotomic.rational(0)) + f[x]
        counts[y] = counts.get(y, 0) + 1
    return {y: sums[y] / counts[y] for y in sums}


def transport_class_function(phi, f: ClassFunction) -> ClassFunction:
    return {phi(x): v for x, v in f.items()}


def product_class_function(P: Group, f: ClassFunction, g: ClassFunction) -> ClassFunction:
    """(f x g)(a, b) = f(a) g(b) on the direct product P."""
    G, H = P.factors
    return {P.join(a, b): fa * g[b] for a, fa in f.items() for b in H.elements}


def apply_elemental_to_character(op, f: ClassFunction) -> ClassFunction:
    """Act on a class function of ``op.source`` by one elemental biset."""
    if op.kind == "Res":
        return restrict_class_function(f, op.target.elements)
    if op.kind == "Ind":
        return induce_class_function(op.source, op.target, f)
    if op.kind == "Inf":
        return inflate_class_function(op.hom, f)
    if op.kind == "Def":
        return deflate_class_function(op.hom, f)
    if op.kind == "Iso":
        return transport_class_function(op.hom, f)
    raise GroupStructureError(f"unknown elemental kind {op.kind!r}")


def rational_coefficients(values: list[Cyclotomic]) -> list[Fraction]:
    try:
        return [v.rational_value() for v in values]
    except ValueError:
        raise FieldMismatchError(
            "class function is not a rational combination of irreducibles"
        ) from None
