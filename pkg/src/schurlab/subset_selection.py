"""Choosing a subset of complex numbers with a large sum.

For any ``lambda_1..lambda_m`` some subset ``I`` has
``|sum_I lambda| >= (1/pi) * sum |lambda_j|`` and the constant cannot be
improved.  :func:`halfplane_select` finds the best subset exactly: an
optimal ``I`` is the set of points in an open half-plane whose boundary
contains no nonzero point, so it suffices to look at one half-plane per
arc between consecutive critical directions ``arg(lambda_j) +- pi/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .numbers import DEFAULT_PRECISION, ComplexRational, Enclosure, root_of_unity, sqrt_enclosure
from .spaces import angle_key, perturbed_sign

MAX_BRUTE_FORCE = 20
ONE_OVER_PI = 1 / math.pi


@dataclass(frozen=True)
class SelectionResult:
    subset: tuple
    subset_sum: ComplexRational
    value: Enclosure  # |subset sum|
    total: Enclosure  # sum of moduli
    ratio: Enclosure

    def __float__(self):
        return float(self.ratio)


def _ratio(value: Enclosure, total: Enclosure) -> Enclosure:
    if total.hi == 0:
        return Enclosure.exact(1)
    lo = value.lo / total.hi
    hi = value.hi / total.lo if total.lo else max(Fraction(1), lo)
    return Enclosure(lo, max(lo, hi))


def _total(lam, prec) -> Enclosure:
    acc = Enclosure.exact(0)
    for z in lam:
        if z:
            acc = acc + z.modulus(prec)
    return acc


def _result(lam, subset, prec) -> SelectionResult:
    s = ComplexRational()
    for j in subset:
        s = s + lam[j]
    value = s.modulus(prec)
    total = _total(lam, prec)
    return SelectionResult(tuple(subset), s, value, total, _ratio(value, total))


def halfplane_select(lam: Sequence, prec: Fraction = DEFAULT_PRECISION) -> SelectionResult:
    """Best subset among half-planes bounded by critical directions.

    Each critical direction ``c`` contributes the two sets obtained by
    rotating ``c`` slightly either way, which covers every arc.  Ties keep
    the candidate with the smallest critical angle.
    """
    lam = [ComplexRational.of(z) for z in lam]
    if not lam:
        raise ValueError("need at least one number")
    dirs = set()
    for z in lam:
        if z:
            dirs.add((-z.im, z.re))
            dirs.add((z.im, -z.re))
    if not dirs:
        return _result(lam, (), prec)
    best, best_set = Fraction(-1), ()
    for cr, ci in sorted(dirs, key=lambda p: angle_key(ComplexRational(*p))):
        c = ComplexRational(cr, ci)
        for ccw in (True, False):
            subset = tuple(j for j, z in enumerate(lam) if perturbed_sign(c, z, ccw) > 0)
            s = ComplexRational()
            for j in subset:
                s = s + lam[j]
            if s.abs2() > best:
                best, best_set = s.abs2(), subset
    return _result(lam, best_set, prec)


def best_subset_bruteforce(lam: Sequence, prec: Fraction = DEFAULT_PRECISION):
    """Exact maximiser of ``|sum_I lambda|`` over all subsets.

    Returns ``(subset, value enclosure)``; ties go to the lexicographically
    smallest index tuple.
    """
    lam = [ComplexRational.of(z) for z in lam]
    m = len(lam)
    if m > MAX_BRUTE_FORCE:
        raise ValueError(f"m = {m} exceeds the enumeration limit {MAX_BRUTE_FORCE}")
    den = 1
    for z in lam:
        den = math.lcm(den, z.re.denominator, z.im.denominator)
    re = [int(z.re * den) for z in lam]
    im = [int(z.im * den) for z in lam]
    mask, sr, si = 0, 0, 0
    best, best_masks = 0, [0]
    for step in range(1, 1 << m):
        j = (step & -step).bit_length() - 1
        mask ^= 1 << j
        sign = 1 if mask >> j & 1 else -1
        sr += sign * re[j]
        si += sign * im[j]
        v = sr * sr + si * si
        if v > best:
            best, best_masks = v, [mask]
        elif v == best:
            best_masks.append(mask)
    subsets = [tuple(j for j in range(m) if mk >> j & 1) for mk in best_masks]
    return min(subsets), sqrt_enclosure(Fraction(best, den * den), prec)


# ---------------------------------------------------------------------------
# roots of unity: the configuration showing 1/pi cannot be improved

_DPS = 60


def _mp_enclosure(x: mpmath.mpf) -> Enclosure:
    # x carries about 200 bits; widen outward to a dyadic grid well above its error
    scale = 1 << 160
    q = math.floor(Fraction(int(x.man)) * Fraction(2) ** int(x.exp) * scale)
    return Enclosure(Fraction(q - 1, scale), Fraction(q + 2, scale))


@dataclass(frozen=True)
class RootsWitness:
    """The ``2n`` points ``exp(i j pi / n)``; points are stored as exponent indices ``j``."""

    n: int
    points: tuple  # j means exp(i*j*pi/n)
    best_value: Enclosure  # 2 / |1 - exp(i pi/n)|
    ratio: Enclosure  # best value / (2n)
    best_subset: tuple

    def approximate_points(self) -> list[ComplexRational]:
        return [root_of_unity(j, 2 * self.n) for j in self.points]


def roots_ratio(n: int) -> Enclosure:
    """``(1/n) / |1 - exp(i pi/n)| = 1 / (2n sin(pi/2n))``, certified."""
    with mpmath.workdps(_DPS):
        return _mp_enclosure(1 / (2 * n * mpmath.sin(mpmath.pi / (2 * n))))


def roots_witness(n: int, verify: bool = True) -> RootsWitness:
    """Roots-of-unity configuration at stage ``n``.

    With ``verify`` and ``n <= 8`` the optimal subset is recomputed by brute
    force on unit-modulus rational stand-ins for the points and checked to be
    ``n`` cyclically consecutive points with the predicted value.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    with mpmath.workdps(_DPS):
        best = _mp_enclosure(1 / mpmath.sin(mpmath.pi / (2 * n)))
    ratio = roots_ratio(n)
    subset = tuple(range(n))
    if verify and n <= 8:
        pts = [root_of_unity(j, 2 * n) for j in range(2 * n)]
        found, value = best_subset_bruteforce(pts)
        if not _is_half_circle(found, 2 * n):
            raise AssertionError(f"optimal subset {found} is not a half-circle of {n} consecutive points")
        if abs(float(value) - float(best)) > 1e-6:
            raise AssertionError(f"brute force value {float(value)} differs from {float(best)}")
        subset = found
    return RootsWitness(n, tuple(range(2 * n)), best, ratio, subset)


def _is_half_circle(subset: Sequence[int], size: int) -> bool:
    half = size // 2
    if len(subset) != half:
        return False
    s = set(subset)
    return any(all((start + k) % size in s for k in range(half)) for start in range(size))
