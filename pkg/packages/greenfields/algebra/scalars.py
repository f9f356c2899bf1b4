"""
Exact scalars: rationals, cyclotomic numbers and prime-field residues.

Rationals are plain ``fractions.Fraction`` values. Cyclotomic numbers live in
Q[x]/Phi_n(x) in the power basis; operands of different conductors are
embedded into the lcm conductor before any arithmetic, and products and
inverses are sympy dense-polynomial operations over its QQ domain. Residues
wrap sympy GF(q) elements and carry their prime so that mixing two prime
fields is an error instead of a silent wrap.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from sympy import cyclotomic_poly, totient
from sympy.ntheory import isprime
from sympy.polys.densearith import dup_mul, dup_rem
from sympy.polys.densebasic import dup_strip
from sympy.polys.domains import GF
from sympy.polys.domains import QQ as QQ_DOMAIN
from sympy.polys.euclidtools import dup_invert
from sympy.polys.polyerrors import NotInvertible

from algebra.errors import CharacteristicError, FieldMismatchError, SpecSyntaxError

Rational = Fraction


def euler_phi(n: int) -> int:
    return int(totient(n))


def is_prime(n: int) -> bool:
    return bool(isprime(n))


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    return tuple(int(c) for c in reversed(cyclotomic_poly(n, polys=True).all_coeffs()))


def to_domain(value):
    """A rational as an element of sympy's QQ domain."""
    value = Fraction(value)
    return QQ_DOMAIN(value.numerator, value.denominator)


def from_domain(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


def _dense(coeffs) -> list:
    # sympy dense polynomials run high -> low
    return dup_strip([to_domain(c) for c in reversed(coeffs)])


@lru_cache(maxsize=None)
def _modulus(n: int) -> tuple:
    return tuple(QQ_DOMAIN(c) for c in reversed(cyclotomic_polynomial(n)))


def _reduce_dense(f: list, n: int) -> tuple[Fraction, ...]:
    modulus = list(_modulus(n))
    deg = len(modulus) - 1
    low = [from_domain(c) for c in reversed(dup_rem(f, modulus, QQ_DOMAIN))]
    return tuple(low + [Fraction(0)] * (deg - len(low)))


class Cyclotomic:
    """An element of Q(zeta_n) in the power basis modulo Phi_n."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs):
        self.conductor = conductor
        self.coeffs = _reduce_dense(_dense(coeffs), conductor)

    @classmethod
    def _from_dense(cls, conductor: int, f: list) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj.conductor = conductor
        obj.coeffs = _reduce_dense(f, conductor)
        return obj

    @classmethod
    def rational(cls, value) -> "Cyclotomic":
        return cls(1, [Fraction(value)])

    @classmethod
    def root(cls, n: int, k: int = 1) -> "Cyclotomic":
        """zeta_n ** k"""
        if n < 1:
            raise ValueError(f"conductor must be positive, got {n}")
        k %= n
        poly = [Fraction(0)] * (k + 1)
        poly[k] = Fraction(1)
        return cls(n, poly)

    # -- structure ---------------------------------------------------------
    def embed(self, m: int) -> "Cyclotomic":
        if m == self.conductor:
            return self
        if m % self.conductor:
            raise FieldMismatchError(
                f"cannot embed conductor {self.conductor} into conductor {m}"
            )
        step = m // self.conductor
        poly = [Fraction(0)] * (step * len(self.coeffs))
        for k, c in enumerate(self.coeffs):
            poly[k * step] = c
        return Cyclotomic(m, poly)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _permute_powers(self, a: int) -> "Cyclotomic":
        n = self.conductor
        total = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            if c:
                total[(k * a) % n] += c
        return Cyclotomic(n, total)

    def conj(self) -> "Cyclotomic":
        return self._permute_powers(-1)

    def galois(self, a: int) -> "Cyclotomic":
        """Image under zeta_n -> zeta_n ** a (a coprime to n)."""
        if gcd(a, self.conductor) != 1:
            raise ValueError(f"{a} is not a unit modulo {self.conductor}")
        return self._permute_powers(a)

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(value) -> "Cyclotomic":
        if isinstance(value, Cyclotomic):
            return value
        if isinstance(value, (int, Fraction)):
            return Cyclotomic.rational(value)
        return NotImplemented

    def _common(self, other):
        other = Cyclotomic._coerce(other)
        if other is NotImplemented:
            return NotImplemented, NotImplemented
        m = lcm(self.conductor, other.conductor)
        return self.embed(m), other.embed(m)

    def __add__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return Cyclotomic(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, [-c for c in self.coeffs])

    def __sub__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return Cyclotomic(a.conductor, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.conductor, [c * other for c in self.coeffs])
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return Cyclotomic._from_dense(
            a.conductor, dup_mul(_dense(a.coeffs), _dense(b.coeffs), QQ_DOMAIN)
        )

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inversion of zero in a cyclotomic field")
        n = self.conductor
        try:
            inv = dup_invert(_dense(self.coeffs), list(_modulus(n)), QQ_DOMAIN)
        except NotInvertible as e:
            raise ZeroDivisionError(f"{self} is not invertible modulo Phi_{n}") from e
        return Cyclotomic._from_dense(n, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Cyclotomic(self.conductor, [c / other for c in self.coeffs])
        other = Cyclotomic._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic._coerce(other) * self.inverse()

    def __eq__(self, other):
        a, b = self._common(other)
        if a is NotImplemented:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        # equal values of different conductors hash alike only when rational
        if self.is_rational():
            return hash(self.rational_value())
        return hash((self.conductor, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def sort_key(self) -> tuple:
        return (self.conductor, tuple(self.coeffs))

    def __repr__(self):
        return f"Cyclotomic({self.format()!r})"

    def __str__(self):
        return self.format()

    def format(self) -> str:
        """Exact string form, e.g. ``z5^2+1`` or ``3/2``."""
        if self.is_rational():
            return str(self.rational_value())
        n = self.conductor
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (f"z{n}" if k == 1 else f"z{n}^{k}")
            if k == 0:
                term = str(abs(c))
            elif abs(c) == 1:
                term = mono
            else:
                term = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        text = "".join(f"{s}{t}" for s, t in parts)
        return text[1:] if text.startswith("+") else text


@lru_cache(maxsize=None)
def prime_domain(q: int):
    """sympy's GF(q), shared per prime."""
    return GF(q)


class Residue:
    """An element of the prime field F_q."""

    __slots__ = ("q", "element")

    def __init__(self, q: int, value: int):
        self.q = q
        self.element = prime_domain(q)(value % q)

    @classmethod
    def from_element(cls, q: int, element) -> "Residue":
        obj = cls.__new__(cls)
        obj.q = q
        obj.element = element
        return obj

    @property
    def value(self) -> int:
        return int(self.element) % self.q

    def _other(self, other):
        K = prime_domain(self.q)
        if isinstance(other, Residue):
            if other.q != self.q:
                raise FieldMismatchError(f"cannot mix F_{self.q} and F_{other.q}")
            return other.element
        if isinstance(other, int):
            return K(other % self.q)
        if isinstance(other, Fraction):
            if other.denominator % self.q == 0:
                raise CharacteristicError(
                    f"denominator {other.denominator} is not invertible in F_{self.q}"
                )
            return K(other.numerator % self.q) / K(other.denominator % self.q)
        raise FieldMismatchError(f"cannot combine F_{self.q} with {type(other).__name__}")

    def __add__(self, other):
        return Residue.from_element(self.q, self.element + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Residue.from_element(self.q, self.element - self._other(other))

    def __rsub__(self, other):
        return Residue.from_element(self.q, self._other(other) - self.element)

    def __neg__(self):
        return Residue.from_element(self.q, -self.element)

    def __mul__(self, other):
        return Residue.from_element(self.q, self.element * self._other(other))

    __rmul__ = __mul__

    def inverse(self) -> "Residue":
        if not self.element:
            raise ZeroDivisionError(f"inversion of zero in F_{self.q}")
        return Residue.from_element(self.q, prime_domain(self.q).one / self.element)

    def __truediv__(self, other):
        o = self._other(other)
        if not o:
            raise ZeroDivisionError(f"division by zero in F_{self.q}")
        return Residue.from_element(self.q, self.element / o)

    def __rtruediv__(self, other):
        return Residue.from_element(self.q, self._other(other)) / self

    def __eq__(self, other):
        if isinstance(other, (Residue, int, Fraction)):
            try:
                return self.element == self._other(other)
            except CharacteristicError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.q, self.value))

    def __bool__(self):
        return bool(self.element)

    def __repr__(self):
        return f"Residue({self.value} mod {self.q})"

    def __str__(self):
        return f"{self.value} mod {self.q}"


class Field:
    """A coefficient field: knows its zero, one, how to convert and format."""

    name = "field"
    characteristic = 0

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def convert(self, value):
        raise NotImplementedError

    def contains(self, value) -> bool:
        raise NotImplementedError

    def format(self, value) -> str:
        return str(value)

    def parse(self, text: str):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return self.name


class RationalField(Field):
    name = "Q"

    def convert(self, value):
        if isinstance(value, Cyclotomic):
            return value.rational_value()
        if isinstance(value, Residue):
            raise FieldMismatchError("cannot convert a prime-field residue into Q")
        return Fraction(value)

    def contains(self, value) -> bool:
        return isinstance(value, (Fraction, int)) and not isinstance(value, bool)

    def parse(self, text: str):
        return Fraction(text)


class PrimeField(Field):
    def __init__(self, q: int):
        if not is_prime(q):
            raise FieldMismatchError(f"{q} is not prime")
        self.q = q
        self.name = f"F{q}"
        self.characteristic = q

    def convert(self, value):
        if isinstance(value, Residue):
            if value.q != self.q:
                raise FieldMismatchError(f"cannot mix F_{self.q} and F_{value.q}")
            return value
        if isinstance(value, Cyclotomic):
            value = value.rational_value()
        zero = Residue(self.q, 0)
        return zero + value

    def contains(self, value) -> bool:
        return isinstance(value, Residue) and value.q == self.q

    def format(self, value) -> str:
        return str(value)

    def parse(self, text: str):
        return Residue(self.q, int(text.split("mod")[0]))


class CyclotomicField(Field):
    def __init__(self, conductor: int):
        self.conductor = conductor
        self.name = f"Q(z{conductor})"

    def convert(self, value):
        if isinstance(value, Cyclotomic):
            return value.embed(lcm(value.conductor, self.conductor))
        return Cyclotomic.rational(value).embed(self.conductor)

    def contains(self, value) -> bool:
        return isinstance(value, Cyclotomic) and self.conductor % value.conductor == 0

    def parse(self, text: str):
        return self.convert(cyclotomic_eval(text))


QQ = RationalField()


def field_from_token(token: str) -> Field:
    """``Q`` -> rationals, ``F7`` -> the prime field with 7 elements."""
    if token == "Q":
        return QQ
    m = re.fullmatch(r"F(\d+)", token)
    if m:
        return PrimeField(int(m.group(1)))
    raise SpecSyntaxError(f"unknown coefficient field {token!r} (expected Q or F<prime>)")


# -- expression evaluation ----------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(z\d+)|(conj)|(.))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        tokens.append(m.group(0).strip())
        pos = m.end()
    return [t for t in tokens if t]


class _ExprParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise SpecSyntaxError(f"malformed cyclotomic expression {self.text!r}")
        self.pos += 1
        return tok

    def parse(self) -> Cyclotomic:
        value = self.sum()
        if self.peek() is not None:
            raise SpecSyntaxError(f"trailing input in {self.text!r}")
        return value

    def sum(self):
        if self.peek() == "-":
            self.take()
            value = -self.product()
        else:
            value = self.product()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.product()
            value = value + rhs if op == "+" else value - rhs
        return value

    def product(self):
        value = self.power()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.power()
            if op == "/" and not rhs:
                raise SpecSyntaxError(f"division by zero in {self.text!r}")
            value = value * rhs if op == "*" else value / rhs
        return value

    def power(self):
        base = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise SpecSyntaxError(f"exponent must be a non-negative integer, got {tok!r}")
            result = Cyclotomic.rational(1)
            for _ in range(int(tok)):
                result = result * base
            return result
        return base

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return Cyclotomic.rational(int(tok))
        if tok.startswith("z"):
            n = int(tok[1:])
            if n < 1:
                raise SpecSyntaxError(f"root of unity {tok!r} needs a positive order")
            return Cyclotomic.root(n, 1)
        if tok == "conj":
            self.take("(")
            inner = self.sum()
            self.take(")")
            return inner.conj()
        if tok == "(":
            inner = self.sum()
            self.take(")")
            return inner
        if tok == "-":
            return -self.atom()
        raise SpecSyntaxError(f"unexpected token {tok!r} in {self.text!r}")


def cyclotomic_eval(expression: str) -> Cyclotomic:
    """Evaluate ``+ - * / ^ ( ) conj()`` over rationals and roots ``z<n>``."""
    return _ExprParser(expression).parse()
