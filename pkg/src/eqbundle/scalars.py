"""Exact Gaussian-rational scalars, the coefficient field for every computation."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["Scalar", "as_scalar", "ZERO", "ONE", "I"]


class Scalar:
    """A number ``a + b*i`` with ``a`` and ``b`` rational.

    Both parts are stored as :class:`fractions.Fraction`, so they are always
    in lowest terms with positive denominators. Instances are immutable.
    """

    __slots__ = ("_re", "_im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "_re", Fraction(re))
        object.__setattr__(self, "_im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @classmethod
    def from_quad(cls, re_num: int, re_den: int, im_num: int, im_den: int) -> Scalar:
        if re_den == 0 or im_den == 0:
            raise ZeroDivisionError("zero denominator in scalar quadruple")
        return cls(Fraction(re_num, re_den), Fraction(im_num, im_den))

    def to_quad(self) -> tuple[int, int, int, int]:
        return (self._re.numerator, self._re.denominator,
                self._im.numerator, self._im.denominator)

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    @property
    def re_num(self) -> int:
        return self._re.numerator

    @property
    def re_den(self) -> int:
        return self._re.denominator

    @property
    def im_num(self) -> int:
        return self._im.numerator

    @property
    def im_den(self) -> int:
        return self._im.denominator

    def is_zero(self) -> bool:
        return not self._re and not self._im

    def is_real(self) -> bool:
        return not self._im

    def conjugate(self) -> Scalar:
        return Scalar(self._re, -self._im)

    def __bool__(self):
        return not self.is_zero()

    def __hash__(self):
        if not self._im:
            return hash(self._re)
        return hash((self._re, self._im))

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._re == other._re and self._im == other._im

    def __neg__(self):
        return Scalar(-self._re, -self._im)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self._re + other._re, self._im + other._im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self._re - other._re, self._im - other._im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b, c, d = self._re, self._im, other._re, other._im
        if not b and not d:
            return Scalar(a * c)
        return Scalar(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        c, d = other._re, other._im
        if not c and not d:
            raise ZeroDivisionError("division by zero scalar")
        if not d:
            return Scalar(self._re / c, self._im / c)
        norm = c * c + d * d
        a, b = self._re, self._im
        return Scalar((a * c + b * d) / norm, (b * c - a * d) / norm)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ONE / (self ** -n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __complex__(self):
        return complex(float(self._re), float(self._im))

    def __float__(self):
        if self._im:
            raise TypeError(f"cannot convert non-real scalar {self} to float")
        return float(self._re)

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        re, im = self._re, self._im
        if not im:
            return str(re)
        if im == 1:
            im_s = "i"
        elif im == -1:
            im_s = "-i"
        else:
            im_s = f"{im}*i"
        if not re:
            return im_s
        sign = "" if im_s.startswith("-") else "+"
        return f"{re}{sign}{im_s}"


def _coerce(value):
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Rational)):
        return Scalar(value)
    if isinstance(value, float):
        return Scalar(Fraction(value))
    if isinstance(value, complex):
        return Scalar(Fraction(value.real), Fraction(value.imag))
    return NotImplemented


def as_scalar(value) -> Scalar:
    """Coerce ints, Fractions, and complex literals with exact parts to :class:`Scalar`."""
    result = _coerce(value)
    if result is NotImplemented:
        raise TypeError(f"cannot interpret {value!r} as an exact scalar")
    return result


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
