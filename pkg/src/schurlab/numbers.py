"""Exact complex rationals and certified enclosures of irrational values."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

DEFAULT_PRECISION = Fraction(1, 10**12)

Number = Union[int, Fraction]


def as_fraction(v) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and ``{"num", "den"}`` maps."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, dict):
        return Fraction(int(v["num"]), int(v.get("den", 1)))
    if isinstance(v, float):
        raise TypeError("floats are not accepted where exact rationals are required")
    return Fraction(v)


def fraction_json(q: Fraction, digits: int = 15) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator, "decimal": decimal_str(q, digits)}


def decimal_str(q: Fraction, digits: int = 15) -> str:
    """Round-half-even decimal rendering with ``digits`` places after the point."""
    q = Fraction(q)
    scaled = round(q * 10**digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


@dataclass(frozen=True)
class ComplexRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    @classmethod
    def of(cls, v) -> "ComplexRational":
        if isinstance(v, ComplexRational):
            return v
        if isinstance(v, dict) and ("re" in v or "im" in v):
            return cls(as_fraction(v.get("re", 0)), as_fraction(v.get("im", 0)))
        if isinstance(v, (list, tuple)) and len(v) == 2:
            return cls(as_fraction(v[0]), as_fraction(v[1]))
        return cls(as_fraction(v), Fraction(0))

    def __add__(self, o):
        o = ComplexRational.of(o)
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = ComplexRational.of(o)
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return ComplexRational.of(o) - self

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, o):
        o = ComplexRational.of(o)
        return ComplexRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = ComplexRational.of(o)
        n = o.abs2()
        return ComplexRational((self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conj(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def modulus(self, prec: Fraction = DEFAULT_PRECISION) -> "Enclosure":
        return sqrt_enclosure(self.abs2(), prec)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


I = ComplexRational(0, 1)


@dataclass(frozen=True)
class Enclosure:
    """Closed interval ``[lo, hi]`` known to contain a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty enclosure")

    @classmethod
    def exact(cls, v) -> "Enclosure":
        v = Fraction(v)
        return cls(v, v)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self):
        return float(self.mid)

    def __add__(self, o):
        o = _enc(o)
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def scale(self, c) -> "Enclosure":
        c = Fraction(c)
        return Enclosure(self.lo * c, self.hi * c) if c >= 0 else Enclosure(self.hi * c, self.lo * c)

    def max(self, o) -> "Enclosure":
        o = _enc(o)
        return Enclosure(max(self.lo, o.lo), max(self.hi, o.hi))

    def contains(self, v) -> bool:
        return self.lo <= v <= self.hi

    def __repr__(self):
        if self.is_exact:
            return f"Enclosure({self.lo})"
        return f"Enclosure({float(self.mid):.15g} ± {float(self.width) / 2:.2g})"


def _enc(v) -> Enclosure:
    return v if isinstance(v, Enclosure) else Enclosure.exact(v)


def _bits_for(prec: Fraction) -> int:
    return max(8, math.ceil(math.log2(1 / float(prec)))) + 4


def sqrt_enclosure(q: Fraction, prec: Fraction = DEFAULT_PRECISION) -> Enclosure:
    """Certified bracket of ``sqrt(q)``; exact when ``q`` is a rational square."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Enclosure.exact(Fraction(rn, rd))
    k = _bits_for(prec)
    n = (q.numerator << (2 * k)) // q.denominator
    r = math.isqrt(n)
    return Enclosure(Fraction(r, 1 << k), Fraction(r + 1, 1 << k))


def iroot(n: int, p: int) -> int:
    """Floor of the ``p``-th root of a nonnegative integer."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + p - 1) // p)
    while True:
        y = ((p - 1) * x + n // x ** (p - 1)) // p
        if y >= x:
            break
        x = y
    while x**p > n:
        x -= 1
    while (x + 1) ** p <= n:
        x += 1
    return x


def root_enclosure(q: Fraction, p: int, prec: Fraction = DEFAULT_PRECISION) -> Enclosure:
    """Certified bracket of ``q ** (1/p)`` for rational ``q >= 0``."""
    q = Fraction(q)
    if p == 1:
        return Enclosure.exact(q)
    if p == 2:
        return sqrt_enclosure(q, prec)
    rn, rd = iroot(q.numerator, p), iroot(q.denominator, p)
    if rn**p == q.numerator and rd**p == q.denominator:
        return Enclosure.exact(Fraction(rn, rd))
    k = _bits_for(prec) + p
    n = (q.numerator << (p * k)) // q.denominator
    r = iroot(n, p)
    return Enclosure(Fraction(r, 1 << k), Fraction(r + 1, 1 << k))


def unit_rational(theta: float, max_den: int = 10**7) -> ComplexRational:
    """A point of modulus exactly 1 whose argument approximates ``theta``.

    Uses the rational parametrisation of the circle by ``u = tan(theta/2)``.
    """
    theta = math.remainder(theta, 2 * math.pi)
    if abs(abs(theta) - math.pi) < 1e-15:
        return ComplexRational(-1, 0)
    u = Fraction(math.tan(theta / 2)).limit_denominator(max_den)
    d = 1 + u * u
    return ComplexRational((1 - u * u) / d, 2 * u / d)


def unit_toward(w: ComplexRational, max_den: int = 10**7) -> ComplexRational:
    """Exact unit-modulus rational close to ``w / |w|``; exact when possible."""
    if not w:
        return ComplexRational(1, 0)
    if not w.im:
        return ComplexRational(1 if w.re > 0 else -1, 0)
    if not w.re:
        return ComplexRational(0, 1 if w.im > 0 else -1)
    m = sqrt_enclosure(w.abs2())
    if m.is_exact:
        return ComplexRational(w.re / m.lo, w.im / m.lo)
    return unit_rational(math.atan2(float(w.im), float(w.re)), max_den)


def root_of_unity(j: int, n2: int) -> ComplexRational:
    """Exact-modulus rational stand-in for ``exp(2*pi*i*j/n2)``; exact at quarter turns."""
    j %= n2
    if (4 * j) % n2 == 0:
        return [ComplexRational(1, 0), ComplexRational(0, 1), ComplexRational(-1, 0), ComplexRational(0, -1)][4 * j // n2]
    return unit_rational(2 * math.pi * j / n2)
