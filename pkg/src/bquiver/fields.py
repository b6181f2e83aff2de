"""Exact scalar arithmetic over the rationals and over prime fields.

Scalars are plain Python values: ``fractions.Fraction`` over the rationals
(always stored reduced), canonical representatives ``0..p-1`` (ints) over
GF(p).  Containers that hold scalars carry a :class:`Field` object and all
arithmetic is routed through it; mixing scalars from different fields raises
:class:`FieldMismatchError`.  Everything is immutable and side-effect free.
"""

from __future__ import annotations

import functools
from fractions import Fraction


class FieldMismatchError(ValueError):
    """Raised when values from two different fields meet in one computation."""


def is_prime(n: int) -> bool:
    """Trial-division primality test; fine for the characteristics used here."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Common interface of the two scalar domains.

    Concrete subclasses define ``characteristic``, ``zero``, ``one`` and the
    primitive operations.  ``coerce`` normalizes ints (and Fractions, when
    meaningful) into the canonical representation.
    """

    characteristic: int

    def coerce(self, value):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero

    def sum(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def to_json(self, a):
        """JSON-safe rendering: rationals as 'p/q' strings, GF(p) as ints."""
        raise NotImplementedError

    def require_same(self, other: "Field"):
        if self != other:
            raise FieldMismatchError(f"field mismatch: {self} vs {other}")


class RationalField(Field):
    """The rational numbers; scalars are reduced ``Fraction`` values."""

    characteristic = 0
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        raise TypeError(f"not a rational scalar: {value!r}")

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def to_json(self, a):
        return str(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField(Field):
    """GF(p) with canonical representatives ``0..p-1``."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"characteristic must be prime, got {p}")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def coerce(self, value):
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Fraction):
            return self.div(value.numerator % self.p, value.denominator % self.p)
        raise TypeError(f"not a GF({self.p}) scalar: {value!r}")

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def elements(self):
        return range(self.p)

    def to_json(self, a):
        return a

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


QQ = RationalField()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    """The prime field with p elements (cached per characteristic)."""
    return PrimeField(p)


def parse_field(text: str) -> Field:
    """Parse a field descriptor: ``QQ`` or ``GF(p)``."""
    text = text.strip()
    if text == "QQ":
        return QQ
    if text.startswith("GF(") and text.endswith(")"):
        return GF(int(text[3:-1]))
    raise ValueError(f"unknown field descriptor: {text!r}")
