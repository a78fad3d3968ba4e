"""Scalar arithmetic shared by the two numeric modes.

Exact mode keeps every coordinate and grey level as a `fractions.Fraction`.
Float mode uses plain 64-bit floats with absolute tolerances.

Distances between exact points are square roots of rationals and are
irrational in general, so `sqrt_exact` returns a plain Fraction whenever the
root is rational and otherwise a `Radical`: an exact square root of a
rational that still compares exactly against rationals and other radicals.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

# Float-mode points closer than this merge into one; quantization happens on
# a fixed 1e-12 grid so it stays below every tolerance used in tests.
DEDUP_DECIMALS = 12
DEDUP_TOL = 10.0 ** -DEDUP_DECIMALS

# Default absolute tolerance for float-mode assertions and comparisons.
DEFAULT_TOL = 1e-9

Scalar = Union[Fraction, float]


def is_exact(value) -> bool:
    """True for scalars belonging to the exact mode (ints count as exact)."""
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def parse_scalar(value, exact: bool) -> Scalar:
    """Convert a scene-file number (int, float, "a/b" or decimal string).

    In exact mode strings parse as exact rationals, so "0.1" means 1/10;
    floats are converted through their exact binary expansion.
    """
    if isinstance(value, bool):
        raise ValueError(f"not a number: {value!r}")
    if isinstance(value, str):
        value = Fraction(value)
    elif not isinstance(value, (int, float, Fraction)):
        raise ValueError(f"cannot parse scalar {value!r}")
    if exact:
        return Fraction(value)
    return float(value)


def format_scalar(value) -> str:
    """Render a scalar for CSV output: rationals exactly, floats at 17 digits."""
    if isinstance(value, Fraction) or isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def as_float(value) -> float:
    return float(value)


def _exact_square(value) -> Fraction:
    """Square of a nonnegative exact value (Fraction, int or Radical)."""
    if isinstance(value, Radical):
        return value.square
    if is_exact(value):
        if value < 0:
            raise ValueError(f"negative distance value {value!r}")
        return Fraction(value) ** 2
    raise TypeError(f"not an exact value: {value!r}")


class Radical:
    """Exact square root of a nonnegative rational.

    Construct through `sqrt_exact`, which returns a plain Fraction when the
    root is rational. Comparisons against rationals and other radicals are
    exact (performed on squares). Sums of radicals leave the representation,
    so addition is deliberately not provided; `le_sum` covers the
    triangle-inequality checks the tests need.
    """

    __slots__ = ("square",)

    def __init__(self, square):
        square = Fraction(square)
        if square < 0:
            raise ValueError("negative radicand")
        self.square = square

    def __float__(self):
        return math.sqrt(float(self.square))

    def __repr__(self):
        return f"sqrt({self.square})"

    def __hash__(self):
        return hash(("Radical", self.square))

    def __bool__(self):
        return bool(self.square)

    def _compare(self, other):
        """Return (self_key, other_key) comparable exactly, or None."""
        if isinstance(other, Radical):
            return self.square, other.square
        if is_exact(other):
            if other < 0:
                return Fraction(1), Fraction(0)  # self >= 0 > other
            return self.square, Fraction(other) ** 2
        if isinstance(other, float):
            return float(self), other
        return None

    def __eq__(self, other):
        keys = self._compare(other)
        if keys is None:
            return NotImplemented
        return keys[0] == keys[1]

    def __lt__(self, other):
        keys = self._compare(other)
        if keys is None:
            return NotImplemented
        return keys[0] < keys[1]

    def __le__(self, other):
        keys = self._compare(other)
        if keys is None:
            return NotImplemented
        return keys[0] <= keys[1]

    def __gt__(self, other):
        keys = self._compare(other)
        if keys is None:
            return NotImplemented
        return keys[0] > keys[1]

    def __ge__(self, other):
        keys = self._compare(other)
        if keys is None:
            return NotImplemented
        return keys[0] >= keys[1]

    def __mul__(self, other):
        if is_exact(other):
            if other < 0:
                raise ValueError("distance values are nonnegative")
            return sqrt_exact(self.square * Fraction(other) ** 2)
        if isinstance(other, Radical):
            return sqrt_exact(self.square * other.square)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if is_exact(other):
            if other <= 0:
                raise ZeroDivisionError("division by a nonpositive value")
            return sqrt_exact(self.square / Fraction(other) ** 2)
        if isinstance(other, Radical):
            return sqrt_exact(self.square / other.square)
        return NotImplemented

    def __rtruediv__(self, other):
        if is_exact(other):
            if other < 0:
                raise ValueError("distance values are nonnegative")
            return sqrt_exact(Fraction(other) ** 2 / self.square)
        return NotImplemented


def sqrt_exact(value) -> Union[Fraction, Radical]:
    """Exact square root of a nonnegative rational."""
    q = Fraction(value)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Fraction(0)
    root_num = math.isqrt(q.numerator)
    root_den = math.isqrt(q.denominator)
    if root_num * root_num == q.numerator and root_den * root_den == q.denominator:
        return Fraction(root_num, root_den)
    return Radical(q)


def le_sum(a, b, c) -> bool:
    """Exact test of a <= b + c for nonnegative exact distance values.

    Works for any mix of Fraction and Radical by comparing on squares:
    sqrt(sa) <= sqrt(sb) + sqrt(sc) iff sa - sb - sc <= 2*sqrt(sb*sc).
    """
    sa, sb, sc = _exact_square(a), _exact_square(b), _exact_square(c)
    t = sa - sb - sc
    if t <= 0:
        return True
    return t * t <= 4 * sb * sc


def scale(value, factor):
    """value * factor for a distance value and a nonnegative scalar."""
    if isinstance(value, float) or isinstance(factor, float):
        return float(value) * float(factor)
    if isinstance(value, Radical):
        return value * Fraction(factor)
    return Fraction(value) * Fraction(factor)
