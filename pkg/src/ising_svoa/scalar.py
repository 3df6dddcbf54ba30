"""Exact arithmetic in Q and Q(sqrt 2).

Coefficients throughout the package are either :class:`fractions.Fraction`
(the common case) or :class:`Scalar` when a sqrt(2) shows up.  The two mix
freely: ``Scalar`` accepts ints and Fractions on either side of every
operator, so vector code never has to know which one it holds.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Scalar:
    """The number ``rat + sq * sqrt(2)`` with rational parts."""

    __slots__ = ("rat", "sq")

    def __init__(self, rat=0, sq=0):
        self.rat = _rat(rat)
        self.sq = _rat(sq)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return cls(_rat(x), 0)

    def is_rational(self) -> bool:
        return self.sq == 0

    def conjugate(self) -> "Scalar":
        """Galois conjugate ``sqrt2 -> -sqrt2``."""
        return Scalar(self.rat, -self.sq)

    def norm(self) -> Fraction:
        return self.rat * self.rat - 2 * self.sq * self.sq

    def __add__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.rat + o.rat, self.sq + o.sq)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.rat, -self.sq)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.rat - o.rat, self.sq - o.sq)

    def __rsub__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.rat, self.sq, o.rat, o.sq
        return Scalar(a * c + 2 * b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        inv = Scalar(o.rat / n, -o.sq / n)
        return self * inv

    def __rtruediv__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return Scalar(1) / (self ** -k)
        out = Scalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            o = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.rat == o.rat and self.sq == o.sq

    def __hash__(self):
        if self.sq == 0:
            return hash(self.rat)
        return hash((self.rat, self.sq))

    def __bool__(self):
        return self.rat != 0 or self.sq != 0

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


SQRT2 = Scalar(0, 1)
INV_SQRT2 = Scalar(0, Fraction(1, 2))


def is_zero(x) -> bool:
    return not x


def canonical(x):
    """Collapse a rational-valued Scalar back to a Fraction."""
    if isinstance(x, Scalar):
        return x.rat if x.sq == 0 else x
    return _rat(x)


def format_scalar(x) -> str:
    """Canonical text form: ``p/q`` or ``p/q+r/s*sqrt2``."""
    if not isinstance(x, Scalar):
        return str(_rat(x))
    if x.sq == 0:
        return str(x.rat)
    tail = f"{abs(x.sq)}*sqrt2"
    if x.rat == 0:
        return tail if x.sq > 0 else "-" + tail
    return f"{x.rat}{'+' if x.sq > 0 else '-'}{tail}"


_SCALAR_RE = re.compile(
    r"^\s*(?:(?P<rat>[+-]?\d+(?:/\d+)?)(?![\d/]*\*))?"
    r"\s*(?:(?P<sign>[+-])?\s*(?P<sq>\d+(?:/\d+)?)\*sqrt2)?\s*$"
)


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`.  Returns a Fraction when rational."""
    m = _SCALAR_RE.match(text)
    if not m or (m.group("rat") is None and m.group("sq") is None):
        raise ValueError(f"malformed scalar: {text!r}")
    rat = Fraction(m.group("rat")) if m.group("rat") is not None else Fraction(0)
    if m.group("sq") is None:
        return rat
    sq = Fraction(m.group("sq"))
    if m.group("sign") == "-":
        sq = -sq
    return Scalar(rat, sq)


def half(x) -> Fraction:
    """Validate and return a half-integer as a Fraction."""
    if isinstance(x, str):
        x = Fraction(x)
    f = _rat(x)
    if (2 * f).denominator != 1:
        raise ValueError(f"{x!r} is not a half-integer")
    return f


def doubled(x) -> int:
    """Half-integer ``x`` stored as the integer ``2x``."""
    return int(2 * half(x))


@lru_cache(maxsize=None)
def gen_binomial(r, i: int) -> Fraction:
    """r(r-1)...(r-i+1)/i! for rational r and a nonnegative integer i."""
    if i < 0:
        raise ValueError("lower index must be nonnegative")
    r = _rat(r)
    out = Fraction(1)
    for k in range(i):
        out = out * (r - k) / (k + 1)
    return out


def abs_bound(x) -> Fraction:
    """Max of |rational part| and |sqrt2 part|; zero iff x is zero."""
    if isinstance(x, Scalar):
        return max(abs(x.rat), abs(x.sq))
    return abs(_rat(x))
