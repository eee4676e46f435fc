"""Exact Gaussian-rational scalars and their canonical text form."""

import math
import re
from enum import StrEnum
from fractions import Fraction
from typing import Final, Self

_UNSIGNED: Final = r"\d+(?:/\d+)?"
_FULL_PATTERN: Final = re.compile(
    rf"^(?P<real>[+-]?{_UNSIGNED})(?:(?P<sign>[+-])(?P<imag>{_UNSIGNED})?\*?i)?$",
)
_IMAGINARY_PATTERN: Final = re.compile(rf"^(?P<sign>[+-]?)(?P<imag>{_UNSIGNED})?\*?i$")

type Rational = int | Fraction
type ScalarLike = int | Fraction | GaussianRational


class Backend(StrEnum):
    EXACT = "exact"
    FLOAT = "float"


class ScalarParseError(ValueError):
    """Raised when scalar text is not in the a/b or a/b+c/d*i form."""


class GaussianRational:
    """An element a + b i of Q(i) with arbitrary-precision parts.

    Instances are immutable by convention; arithmetic accepts ints and
    Fractions on either side so numpy object arrays can mix them freely.
    """

    __slots__ = ("imag", "real")

    real: Fraction
    imag: Fraction

    def __init__(self, real: Rational = 0, imag: Rational = 0) -> None:
        self.real = real if type(real) is Fraction else Fraction(real)
        self.imag = imag if type(imag) is Fraction else Fraction(imag)

    @classmethod
    def _raw(cls, real: Fraction, imag: Fraction) -> Self:
        value = object.__new__(cls)
        value.real = real
        value.imag = imag
        return value

    @classmethod
    def coerce(cls, value: object) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, int | Fraction):
            return cls._raw(Fraction(value), _ZERO_FRACTION)
        if isinstance(value, str):
            return parse_scalar(value)
        msg = f"cannot interpret {type(value).__name__} as an exact scalar"
        raise TypeError(msg)

    def is_real(self) -> bool:
        return self.imag == 0

    def conjugate(self) -> "GaussianRational":
        if self.imag == 0:
            return self
        return GaussianRational._raw(self.real, -self.imag)

    def norm(self) -> Fraction:
        return self.real * self.real + self.imag * self.imag

    def __add__(self, other: object) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.real + other.real, self.imag + other.imag)
        if isinstance(other, int | Fraction):
            return GaussianRational._raw(self.real + other, self.imag)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: object) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.real - other.real, self.imag - other.imag)
        if isinstance(other, int | Fraction):
            return GaussianRational._raw(self.real - other, self.imag)
        return NotImplemented

    def __rsub__(self, other: object) -> "GaussianRational":
        if isinstance(other, int | Fraction):
            return GaussianRational._raw(other - self.real, -self.imag)
        return NotImplemented

    def __mul__(self, other: object) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            if other.imag == 0:
                return GaussianRational._raw(
                    self.real * other.real,
                    self.imag * other.real,
                )
            if self.imag == 0:
                return GaussianRational._raw(
                    self.real * other.real,
                    self.real * other.imag,
                )
            return GaussianRational._raw(
                self.real * other.real - self.imag * other.imag,
                self.real * other.imag + self.imag * other.real,
            )
        if isinstance(other, int | Fraction):
            return GaussianRational._raw(self.real * other, self.imag * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "GaussianRational":
        if isinstance(other, int | Fraction):
            other = GaussianRational._raw(Fraction(other), _ZERO_FRACTION)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        if other.imag == 0:
            if other.real == 0:
                msg = "division by zero Gaussian rational"
                raise ZeroDivisionError(msg)
            return GaussianRational._raw(self.real / other.real, self.imag / other.real)
        norm = other.norm()
        return GaussianRational._raw(
            (self.real * other.real + self.imag * other.imag) / norm,
            (self.imag * other.real - self.real * other.imag) / norm,
        )

    def __rtruediv__(self, other: object) -> "GaussianRational":
        if isinstance(other, int | Fraction):
            return GaussianRational._raw(Fraction(other), _ZERO_FRACTION) / self
        return NotImplemented

    def __neg__(self) -> "GaussianRational":
        return GaussianRational._raw(-self.real, -self.imag)

    def __pos__(self) -> "GaussianRational":
        return self

    def __bool__(self) -> bool:
        return bool(self.real) or bool(self.imag)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.real == other.real and self.imag == other.imag
        if isinstance(other, int | Fraction):
            return self.imag == 0 and self.real == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __complex__(self) -> complex:
        return complex(float(self.real), float(self.imag))

    def __repr__(self) -> str:
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


_ZERO_FRACTION: Final = Fraction(0)
ZERO: Final = GaussianRational(0)
ONE: Final = GaussianRational(1)
I: Final = GaussianRational(0, 1)


def _format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def format_scalar(value: GaussianRational) -> str:
    """Return the canonical text a/b or a/b+c/d*i in lowest terms."""
    real = _format_rational(value.real)
    if value.imag == 0:
        return real
    sign = "-" if value.imag < 0 else "+"
    return f"{real}{sign}{_format_rational(abs(value.imag))}*i"


def parse_scalar(text: str) -> GaussianRational:
    """Parse canonical scalar text; integers and bare imaginary parts are accepted."""
    compact = text.replace(" ", "")
    imaginary = _IMAGINARY_PATTERN.match(compact)
    if imaginary is not None:
        return GaussianRational._raw(_ZERO_FRACTION, _signed_imaginary(imaginary))
    full = _FULL_PATTERN.match(compact)
    if full is None:
        msg = f"malformed exact scalar {text!r}"
        raise ScalarParseError(msg)
    real = _parse_rational(full.group("real"))
    if full.group("sign") is None:
        return GaussianRational._raw(real, _ZERO_FRACTION)
    return GaussianRational._raw(real, _signed_imaginary(full))


def _signed_imaginary(match: re.Match[str]) -> Fraction:
    magnitude = match.group("imag")
    value = _parse_rational(magnitude) if magnitude else Fraction(1)
    return -value if match.group("sign") == "-" else value


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except ZeroDivisionError as error:
        msg = f"zero denominator in {text!r}"
        raise ScalarParseError(msg) from error


def fractional_part(value: Fraction) -> Fraction:
    """Return value - floor(value), which lies in [0, 1)."""
    return value - math.floor(value)
