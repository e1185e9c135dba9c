"""Exact scalars over Q(i): Gaussian rationals with arbitrary-precision parts.

Everything in this package computes over this field; there is no floating
point anywhere, so every identity check is an exact yes/no.
"""

from __future__ import annotations

from fractions import Fraction

_Rat = (int, Fraction)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Scalar:
    """A Gaussian rational re + im*i, with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @staticmethod
    def _new(re: Fraction, im: Fraction) -> "Scalar":
        s = object.__new__(Scalar)
        s.re = re
        s.im = im
        return s

    # -- predicates

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    # -- involutions

    def conj(self) -> "Scalar":
        return Scalar._new(self.re, -self.im)

    def __neg__(self) -> "Scalar":
        return Scalar._new(-self.re, -self.im)

    # -- ring operations (int and Fraction coerce silently)

    def __add__(self, other):
        if isinstance(other, Scalar):
            return Scalar._new(self.re + other.re, self.im + other.im)
        if isinstance(other, _Rat):
            return Scalar._new(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Scalar):
            return Scalar._new(self.re - other.re, self.im - other.im)
        if isinstance(other, _Rat):
            return Scalar._new(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _Rat):
            return Scalar._new(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return Scalar._new(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, _Rat):
            return Scalar._new(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _Rat):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if not n:
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar._new(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        if isinstance(other, _Rat):
            return Scalar(other) / self
        return NotImplemented

    # -- comparison / hashing

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _Rat):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"Scalar({self.re!r}, {self.im!r})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def sc(x) -> Scalar:
    """Coerce an int, Fraction or Scalar to a Scalar."""
    if isinstance(x, Scalar):
        return x
    return Scalar(x)


def rational_str(x: Fraction) -> str:
    """Render a Fraction as 'p' or 'p/q' (wire format)."""
    x = _frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse 'p' or 'p/q' into an exact Fraction.

    Raises ValueError on malformed input or zero denominator.
    """
    if not isinstance(text, str):
        raise ValueError(f"expected rational string, got {type(text).__name__}")
    parts = text.strip().split("/")
    if len(parts) == 1:
        return Fraction(int(parts[0]))
    if len(parts) == 2:
        num, den = int(parts[0]), int(parts[1])
        if den == 0:
            raise ValueError(f"zero denominator in rational {text!r}")
        return Fraction(num, den)
    raise ValueError(f"malformed rational {text!r}")
