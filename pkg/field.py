"""Exact scalar arithmetic over the rationals and prime fields GF(p)."""

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from sympy import isprime

from errors import FieldMismatchError, ScalarDivisionError

MAX_CHARACTERISTIC = 2**31

ScalarLike = Union["Scalar", int, Fraction, str]


class FieldKind(Enum):
    RATIONALS = "QQ"
    PRIME = "GF"


@dataclass(frozen=True)
class FieldSpec:
    kind: FieldKind
    characteristic: int = 0

    def __post_init__(self):
        if self.kind is FieldKind.RATIONALS:
            if self.characteristic != 0:
                raise ValueError("The rationals have characteristic 0")
            return
        p = self.characteristic
        if not 2 <= p < MAX_CHARACTERISTIC or not isprime(p):
            raise ValueError(
                f"GF(p) needs a prime 2 <= p < 2^31, got {self.characteristic}"
            )

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONALS, 0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(FieldKind.PRIME, int(p))

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Read "QQ", "GF(7)" or "GF 7"."""
        cleaned = text.strip()
        if cleaned.upper() == "QQ":
            return cls.rationals()
        match = re.fullmatch(r"GF\s*(?:\(\s*(\d+)\s*\)|\s(\d+))", cleaned, re.I)
        if match is None:
            raise ValueError(f"Unknown field: {text!r}. Use QQ or GF <p>")
        return cls.prime(int(match.group(1) or match.group(2)))

    @property
    def is_prime_field(self) -> bool:
        return self.kind is FieldKind.PRIME

    @property
    def zero(self) -> "Scalar":
        return self(0)

    @property
    def one(self) -> "Scalar":
        return self(1)

    def __call__(self, value: ScalarLike) -> "Scalar":
        """Coerce an int, Fraction, "a/b" text or Scalar into this field."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatchError(f"Cannot coerce {value.field} scalar into {self}")
            return value
        if isinstance(value, str):
            value = Fraction(value.strip())
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise TypeError(f"Cannot coerce {type(value).__name__} into {self}")
        if self.kind is FieldKind.RATIONALS:
            return Scalar(self, Fraction(value))
        p = self.characteristic
        value = Fraction(value)
        if value.denominator % p == 0:
            raise ScalarDivisionError(f"{value} has no image in {self}")
        residue = value.numerator * pow(value.denominator, -1, p) % p
        return Scalar(self, residue)

    def __str__(self):
        if self.kind is FieldKind.RATIONALS:
            return "QQ"
        return f"GF({self.characteristic})"


@dataclass(frozen=True)
class Scalar:
    """Immutable field element.

    Rationals are kept as a reduced Fraction with positive denominator, prime
    field elements as the canonical residue in [0, p). Build them through
    FieldSpec.__call__ rather than directly.
    """

    field: FieldSpec
    value: Union[Fraction, int]

    def _peer(self, other: ScalarLike) -> "Scalar":
        if isinstance(other, Scalar):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(
                    f"Scalars over {self.field} and {other.field} cannot be combined"
                )
            return other
        return self.field(other)

    def _wrap(self, value) -> "Scalar":
        if self.field.kind is FieldKind.PRIME:
            value %= self.field.characteristic
        return Scalar(self.field, value)

    def __add__(self, other: ScalarLike) -> "Scalar":
        return self._wrap(self.value + self._peer(other).value)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "Scalar":
        return self._wrap(self.value - self._peer(other).value)

    def __rsub__(self, other: ScalarLike) -> "Scalar":
        return self._wrap(self._peer(other).value - self.value)

    def __mul__(self, other: ScalarLike) -> "Scalar":
        return self._wrap(self.value * self._peer(other).value)

    __rmul__ = __mul__

    def __neg__(self) -> "Scalar":
        return self._wrap(-self.value)

    def __truediv__(self, other: ScalarLike) -> "Scalar":
        return self * self._peer(other).inverse()

    def inverse(self) -> "Scalar":
        if not self.value:
            raise ScalarDivisionError(f"Zero has no inverse in {self.field}")
        if self.field.kind is FieldKind.RATIONALS:
            return Scalar(self.field, 1 / self.value)
        return Scalar(self.field, pow(self.value, -1, self.field.characteristic))

    def is_zero(self) -> bool:
        return not self.value

    def is_one(self) -> bool:
        return self.value == 1

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"Scalar({self.value} in {self.field})"


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def scalar_sub(a: Scalar, b: Scalar) -> Scalar:
    return a - b


def scalar_neg(a: Scalar) -> Scalar:
    return -a


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def scalar_inv(a: Scalar) -> Scalar:
    """Multiplicative inverse; raises ScalarDivisionError for zero."""
    return a.inverse()


def scalar_div(a: Scalar, b: Scalar) -> Scalar:
    return a / b
