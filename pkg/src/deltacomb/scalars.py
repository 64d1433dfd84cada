"""Scalar arithmetic in two modes.

Exact mode uses Gaussian rationals (complex numbers with Fraction real and
imaginary parts); arithmetic is closed and lossless.  Float mode uses the
builtin complex type with an absolute comparison tolerance FLOAT_TOL.
The mode is fixed per computation; mixing modes is rejected by the
distribution and polynomial layers.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ModeMismatchError, ParseError

__all__ = [
    "MODE_EXACT",
    "MODE_FLOAT",
    "FLOAT_TOL",
    "ExactComplex",
    "check_mode",
    "coerce_scalar",
    "scalar_zero",
    "scalar_one",
    "scalar_is_zero",
    "scalar_to_complex",
    "exact_from_complex",
    "format_rational",
    "parse_rational",
]

MODE_EXACT = "exact"
MODE_FLOAT = "float"

# Absolute tolerance for float-mode coefficient comparisons.
FLOAT_TOL = 1e-12


class ExactComplex:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return ExactComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return ExactComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other):
        if not isinstance(other, ExactComplex):
            return NotImplemented
        d = other.re * other.re + other.im * other.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactComplex(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __eq__(self, other):
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"ExactComplex({self.re!r}, {self.im!r})"

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return ExactComplex(self.re, -self.im)


def check_mode(mode):
    if mode not in (MODE_EXACT, MODE_FLOAT):
        raise ParseError(f"unknown scalar mode {mode!r}")
    return mode


def scalar_zero(mode):
    return ExactComplex(0, 0) if mode == MODE_EXACT else 0j


def scalar_one(mode):
    return ExactComplex(1, 0) if mode == MODE_EXACT else complex(1.0)


def coerce_scalar(value, mode):
    """Coerce value to the scalar representation of the given mode.

    Exact mode accepts ExactComplex, int, and Fraction (floats are rejected:
    implicit exactness of a rounded value is almost always a bug).  Float mode
    accepts anything complex() accepts, plus ExactComplex.
    """
    if mode == MODE_EXACT:
        if isinstance(value, ExactComplex):
            return value
        if isinstance(value, (int, Fraction)):
            return ExactComplex(value, 0)
        if isinstance(value, complex) or isinstance(value, float):
            raise ModeMismatchError(
                f"float value {value!r} not accepted in exact mode"
            )
        raise ModeMismatchError(f"cannot coerce {value!r} to exact scalar")
    if isinstance(value, ExactComplex):
        return complex(value)
    return complex(value)


def scalar_is_zero(value, mode):
    """Zero test: exact equality in exact mode, |value| <= FLOAT_TOL in float."""
    if mode == MODE_EXACT:
        return not value
    return abs(value) <= FLOAT_TOL


def scalar_to_complex(value):
    if isinstance(value, ExactComplex):
        return complex(value)
    return complex(value)


def exact_from_complex(z):
    """Exact Gaussian rational equal to the double z (dyadic snap, lossless)."""
    z = complex(z)
    return ExactComplex(Fraction(z.real), Fraction(z.imag))


def format_rational(q):
    """Render a Fraction as 'p' or 'p/q'."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text, location=None):
    """Parse 'p' or 'p/q' into a Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"expected rational string, got {text!r}", location)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}", location) from None
