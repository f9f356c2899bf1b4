"""
Exact dense linear algebra over a single ``Field``.

``Matrix`` keeps entries in the library's own scalars (Fractions, Residues,
Cyclotomics) together with row and column labels; every elimination runs on a
sympy ``DomainMatrix`` over the matching domain: QQ, GF(q) or
QQ<exp(2*pi*I/n)>. Reduced row echelon forms are unique, so pivots, kernels
and witnesses are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import structlog
from sympy import Dummy, I, Poly, exp, pi
from sympy.polys.domains import QQ as QQ_DOMAIN
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from algebra.errors import FieldMismatchError
from algebra.scalars import (
    QQ,
    Cyclotomic,
    CyclotomicField,
    Field,
    Residue,
    from_domain,
    prime_domain,
    to_domain,
)

logger = structlog.get_logger()

_X = Dummy("x")


class _NoSolution:
    def __repr__(self):
        return "NO_SOLUTION"

    def __bool__(self):
        return False


NO_SOLUTION = _NoSolution()


@dataclass
class Matrix:
    """A dense matrix with row/column labels over one field."""

    entries: list[list]
    field: Field = QQ
    row_labels: list[str] = dc_field(default_factory=list)
    col_labels: list[str] = dc_field(default_factory=list)

    def __post_init__(self):
        self.entries = [[self.field.convert(x) for x in row] for row in self.entries]
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise FieldMismatchError(f"ragged matrix rows: widths {sorted(widths)}")
        if not self.row_labels:
            self.row_labels = [str(i) for i in range(self.rows)]
        if not self.col_labels:
            self.col_labels = [str(j) for j in range(self.cols)]
        if len(self.row_labels) != self.rows or len(self.col_labels) != self.cols:
            raise FieldMismatchError("label count does not match matrix shape")
        if len(set(self.row_labels)) != self.rows or len(set(self.col_labels)) != self.cols:
            raise FieldMismatchError("matrix labels must be unique")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], field: Field = QQ, nrows: int | None = None,
                     **labels) -> "Matrix":
        if not columns:
            return cls([[] for _ in range(nrows or 0)], field, **labels)
        n = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(n)], field, **labels)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], field)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else len(self.col_labels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def transpose(self) -> "Matrix":
        return Matrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.field,
            list(self.col_labels),
            list(self.row_labels),
        )

    def column(self, j: int) -> list:
        return [row[j] for row in self.entries]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def apply(self, vector: Sequence) -> list:
        if len(vector) != self.cols:
            raise FieldMismatchError(f"vector of length {len(vector)} for {self.shape} matrix")
        zero = self.field.zero
        out = []
        for row in self.entries:
            acc = zero
            for a, v in zip(row, vector):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise FieldMismatchError(f"cannot multiply over {self.field} and {other.field}")
        if self.cols != other.rows:
            raise FieldMismatchError(f"shape mismatch {self.shape} @ {other.shape}")
        product = to_domain_matrix(self) * to_domain_matrix(other)
        return Matrix(_entries(product, self.field), self.field)

    def bilinear(self, u: Sequence, v: Sequence):
        acc = self.field.zero
        for a, b in zip(u, self.apply(v)):
            if a and b:
                acc = acc + a * b
        return acc

    def to_strings(self) -> list[list[str]]:
        return [[self.field.format(x) for x in row] for row in self.entries]


# -- sympy domains ------------------------------------------------------------------


@lru_cache(maxsize=None)
def _cyclotomic_domain(n: int):
    return QQ_DOMAIN.algebraic_field(exp(2 * pi * I / n))


def domain_of(fld: Field):
    """The sympy domain doing arithmetic for ``fld``."""
    if fld.characteristic:
        return prime_domain(fld.characteristic)
    if isinstance(fld, CyclotomicField) and fld.conductor > 2:
        return _cyclotomic_domain(fld.conductor)
    return QQ_DOMAIN


def _to_element(x, fld: Field, K):
    if fld.characteristic:
        return x.element
    if isinstance(fld, CyclotomicField):
        x = fld.convert(x)
        if fld.conductor <= 2:
            return to_domain(x.rational_value())
        return K.new([to_domain(c) for c in reversed(x.coeffs)])
    return to_domain(x)


def _from_element(a, fld: Field):
    if fld.characteristic:
        return Residue.from_element(fld.characteristic, a)
    if isinstance(fld, CyclotomicField):
        if fld.conductor <= 2:
            return fld.convert(from_domain(a))
        return Cyclotomic(fld.conductor, [from_domain(c) for c in reversed(a.to_list())])
    return from_domain(a)


def to_domain_matrix(M: Matrix) -> DomainMatrix:
    _check_field(M)
    K = domain_of(M.field)
    rows = [[_to_element(x, M.field, K) for x in row] for row in M.entries]
    return DomainMatrix(rows, M.shape, K)


def _entries(D: DomainMatrix, fld: Field) -> list[list]:
    return [[_from_element(a, fld) for a in row] for row in D.to_list()]


def _check_field(M: Matrix, vector: Sequence | None = None):
    for row in M.entries:
        for x in row:
            if not M.field.contains(x):
                raise FieldMismatchError(f"entry {x!r} is not in {M.field}")
    if vector is not None:
        for x in vector:
            if not M.field.contains(M.field.convert(x)):
                raise FieldMismatchError(f"vector entry {x!r} is not in {M.field}")


# -- elimination ---------------------------------------------------------------------


def row_echelon(M: Matrix, augment: Sequence | None = None):
    """Reduced row echelon form.

    Returns ``(rows, pivots, rhs)`` where ``rows`` are the reduced rows,
    ``pivots`` the pivot column per row and ``rhs`` the transformed augment.
    """
    _check_field(M, augment)
    fld = M.field
    ncols = M.cols
    if augment is not None:
        M = Matrix(
            [list(row) + [fld.convert(b)] for row, b in zip(M.entries, augment)], fld
        )
    reduced, pivots = to_domain_matrix(M).rref()
    rows = _entries(reduced, fld)
    if augment is None:
        return rows, list(pivots), None
    rhs = [row.pop() for row in rows]
    return rows, [c for c in pivots if c < ncols], rhs


def rank(M: Matrix) -> int:
    """Exact rank."""
    if M.rows == 0 or M.cols == 0:
        return 0
    return to_domain_matrix(M).rank()


def column_space_pivots(M: Matrix) -> list[int]:
    """Indices of the pivot columns: a basis of the column space."""
    if M.rows == 0 or M.cols == 0:
        return []
    _, pivots = to_domain_matrix(M).rref()
    return list(pivots)


def solve_linear(M: Matrix, b: Sequence):
    """One solution of ``M x = b`` (free variables zero) or ``NO_SOLUTION``."""
    if len(b) != M.rows:
        raise FieldMismatchError(f"right-hand side of length {len(b)} for {M.shape} matrix")
    fld = M.field
    if M.cols == 0:
        return [] if all(not fld.convert(x) for x in b) else NO_SOLUTION
    if M.rows == 0:
        return [fld.zero] * M.cols
    _, pivots, rhs = row_echelon(M, b)
    if any(rhs[len(pivots):]):
        return NO_SOLUTION
    x = [fld.zero] * M.cols
    for i, c in enumerate(pivots):
        x[c] = rhs[i]
    return x


def nullspace(M: Matrix) -> list[list]:
    """Basis of ``{v : M v = 0}``, one vector per free column."""
    fld = M.field
    if M.cols == 0:
        return []
    if M.rows == 0:
        return [[fld.one if i == j else fld.zero for i in range(M.cols)] for j in range(M.cols)]
    return _entries(to_domain_matrix(M).nullspace(divide_last=True), fld)


def radical_of_symmetric_form(M: Matrix) -> list[list]:
    """Kernel basis of a symmetric bilinear form; empty iff non-degenerate."""
    if not M.is_square():
        raise FieldMismatchError(f"bilinear form matrix must be square, got {M.shape}")
    return nullspace(M)


def inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise FieldMismatchError(f"cannot invert a {M.shape} matrix")
    if M.rows == 0:
        return Matrix([], M.field)
    try:
        inv = to_domain_matrix(M).inv()
    except DMNonInvertibleMatrixError as e:
        raise ZeroDivisionError("matrix is singular") from e
    return Matrix(_entries(inv, M.field), M.field)


def determinant(M: Matrix):
    if not M.is_square():
        raise FieldMismatchError("determinant needs a square matrix")
    if M.rows == 0:
        return M.field.one
    return _from_element(to_domain_matrix(M).det(), M.field)


@dataclass
class DefinitenessResult:
    positive_definite: bool
    pivots: list = dc_field(default_factory=list)
    witness: list | None = None
    witness_value: object = None


def is_positive_definite(M: Matrix) -> DefinitenessResult:
    """LDL^T without row exchanges over Q.

    On the first non-positive pivot d_k the witness is ``v = L^{-T} e_k``,
    which satisfies ``v^T M v = d_k``.
    """
    if M.field != QQ:
        raise FieldMismatchError("positive-definiteness needs a rational matrix")
    if not M.is_symmetric():
        raise FieldMismatchError("positive-definiteness needs a symmetric matrix")
    n = M.rows
    L = [[Fraction(0)] * n for _ in range(n)]
    d: list[Fraction] = []
    for k in range(n):
        dk = M.entries[k][k] - sum(L[k][j] * L[k][j] * d[j] for j in range(k))
        if dk <= 0:
            # back-substitute L^T v = e_k on the leading block
            v = [Fraction(0)] * n
            v[k] = Fraction(1)
            for i in range(k - 1, -1, -1):
                v[i] = -sum(L[j][i] * v[j] for j in range(i + 1, k + 1))
            logger.debug("Non-positive pivot", index=k, pivot=str(dk))
            return DefinitenessResult(False, d + [dk], v, dk)
        d.append(dk)
        L[k][k] = Fraction(1)
        for i in range(k + 1, n):
            L[i][k] = (
                M.entries[i][k] - sum(L[i][j] * L[k][j] * d[j] for j in range(k))
            ) / dk
    return DefinitenessResult(True, d)


# -- polynomials ---------------------------------------------------------------------
# Coefficient lists run low -> high; sympy Polys are built over domain_of(field).


def to_poly(coeffs: Sequence, fld: Field = QQ) -> Poly:
    K = domain_of(fld)
    return Poly([_to_element(fld.convert(c), fld, K) for c in reversed(coeffs)], _X, domain=K)


def from_poly(p: Poly, fld: Field = QQ) -> list:
    if p.is_zero:
        return []
    return [_from_element(a, fld) for a in reversed(p.rep.to_list())]


def factor_polynomial(coeffs: Sequence, fld: Field = QQ) -> list[tuple[Poly, int]]:
    """Monic irreducible factors over ``fld`` with multiplicities."""
    p = to_poly(coeffs, fld)
    if p.degree() < 1:
        return []
    _, factors = p.factor_list()
    return [(f.monic(), e) for f, e in factors]


def polynomial_at_matrix(p: Poly, M: Matrix) -> Matrix:
    return Matrix(_entries(to_domain_matrix(M).eval_poly(p.rep.to_list()), M.field), M.field)


def minimal_polynomial(M: Matrix) -> list:
    """Monic minimal polynomial (low -> high) of a square matrix.

    Strips irreducible factors off the characteristic polynomial while the
    quotient still annihilates ``M``.
    """
    if not M.is_square():
        raise FieldMismatchError("minimal polynomial needs a square matrix")
    D = to_domain_matrix(M)
    K = D.domain
    chi = Poly(D.charpoly(), _X, domain=K)
    if chi.degree() < 1:
        return from_poly(chi, M.field)
    m = chi
    for f, e in chi.factor_list()[1]:
        for _ in range(e):
            trial = m.exquo(f)
            if not D.eval_poly(trial.rep.to_list()).is_zero_matrix:
                break
            m = trial
    return from_poly(m.monic(), M.field)


def rational_roots(poly: Sequence, fld: Field = QQ) -> list:
    """Roots of ``poly`` lying in the field itself, read off its linear factors."""
    roots = []
    for f, _ in factor_polynomial(poly, fld):
        if f.degree() == 1:
            lead, const = f.rep.to_list()
            roots.append(_from_element(-const / lead, fld))
    return sorted(roots, key=lambda r: r.value if isinstance(r, Residue) else r)
