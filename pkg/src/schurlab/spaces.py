"""Concretely computable normed spaces.

Each model knows how to evaluate its norm on a vector and how to express
``norm(linear expression) <= objective`` inside an LP, which is what the
lower l1-estimate computations in :mod:`schurlab.seq_quantities` need.

Polyhedral models return exact :class:`~fractions.Fraction` values.  Models
with complex coordinates return :class:`~schurlab.numbers.Enclosure`
brackets, and in LPs their moduli are approximated from below by linear
cuts ``|w| >= Re(conj(u) w)`` for rational unit vectors ``u``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Mapping, Optional, Sequence, Union

from .free_space import FiniteMetricSpace, free_norm_primal, free_vector
from .numbers import (
    DEFAULT_PRECISION,
    ComplexRational,
    Enclosure,
    as_fraction,
    root_enclosure,
    sqrt_enclosure,
)
from .optim import GE, LPBuilder

NormValue = Union[Fraction, Enclosure]

MAX_SIGN_DIM = 20


class ShapeError(ValueError):
    pass


def upper(v: NormValue) -> Fraction:
    return v.hi if isinstance(v, Enclosure) else Fraction(v)


def lower(v: NormValue) -> Fraction:
    return v.lo if isinstance(v, Enclosure) else Fraction(v)


def _simplify(e: Enclosure) -> NormValue:
    return e.lo if e.is_exact else e


# ---------------------------------------------------------------------------
# linear-expression helpers (dict var -> coefficient)


def _lin_add(dst: dict, src: dict, c=1) -> dict:
    for k, v in src.items():
        dst[k] = dst.get(k, Fraction(0)) + c * v
    return dst


def _neg(e: dict) -> dict:
    return {k: -v for k, v in e.items()}


def _abs_bound(b: LPBuilder, t: int, e: dict) -> None:
    """t >= |e|."""
    b.add(_lin_add({t: Fraction(1)}, e, -1), GE, 0)
    b.add(_lin_add({t: Fraction(1)}, e, 1), GE, 0)


# ---------------------------------------------------------------------------
# norm models


class NormModel:
    """Base class.  Subclasses are frozen dataclasses."""

    scalars = "real"  # scalar field of the space
    complex_coords = False  # coordinates are ComplexRational
    polyhedral = True

    def conform(self, v):
        raise NotImplementedError

    def flatten(self, v) -> list:
        return list(self.conform(v))

    def unflatten(self, coords: Sequence):
        return list(coords)

    def norm_flat(self, coords: Sequence) -> NormValue:
        raise NotImplementedError

    def norm(self, v) -> NormValue:
        return self.norm_flat(self.flatten(v))

    def zero(self):
        return self.unflatten([self._scalar(0)] * self.flat_dim)

    def _scalar(self, x):
        return ComplexRational.of(x) if self.complex_coords else as_fraction(x)

    @property
    def flat_dim(self) -> int:
        raise NotImplementedError

    def epigraph(self, b: LPBuilder, exprs: Sequence, cuts=None) -> dict:
        """Add rows so that the returned linear objective is >= the norm of ``exprs``.

        For polyhedral models minimising the objective recovers the norm
        exactly; for complex models it is a lower model built from ``cuts``.
        """
        raise NotImplementedError

    def complex_extension(self) -> "NormModel":
        """The model used when coefficients are complex."""
        if self.scalars == "complex":
            return self
        raise TypeError(f"{self} has no complex-scalar extension")


def _check_len(v, d, what="vector"):
    if len(v) != d:
        raise ShapeError(f"{what} has length {len(v)}, expected {d}")


@dataclass(frozen=True)
class L1Real(NormModel):
    d: int

    def conform(self, v):
        _check_len(v, self.d)
        return [as_fraction(x) for x in v]

    @property
    def flat_dim(self):
        return self.d

    def norm_flat(self, coords):
        return sum((abs(as_fraction(x)) for x in coords), Fraction(0))

    def epigraph(self, b, exprs, cuts=None):
        obj = {}
        for e in exprs:
            t = b.var()
            _abs_bound(b, t, e)
            obj[t] = Fraction(1)
        return obj

    def complex_extension(self):
        return L1Complex(self.d)


@dataclass(frozen=True)
class LinfReal(NormModel):
    d: int

    def conform(self, v):
        _check_len(v, self.d)
        return [as_fraction(x) for x in v]

    @property
    def flat_dim(self):
        return self.d

    def norm_flat(self, coords):
        return max((abs(as_fraction(x)) for x in coords), default=Fraction(0))

    def epigraph(self, b, exprs, cuts=None):
        s = b.var()
        for e in exprs:
            _abs_bound(b, s, e)
        return {s: Fraction(1)}

    def complex_extension(self):
        return LinfComplex(self.d)


# -- complex-coordinate models: norm = sum or max of moduli of linear atoms


DEFAULT_CUTS = (
    ComplexRational(1, 0),
    ComplexRational(0, 1),
    ComplexRational(-1, 0),
    ComplexRational(0, -1),
    ComplexRational(Fraction(3, 5), Fraction(4, 5)),
    ComplexRational(Fraction(-4, 5), Fraction(3, 5)),
    ComplexRational(Fraction(-3, 5), Fraction(-4, 5)),
    ComplexRational(Fraction(4, 5), Fraction(-3, 5)),
)


class _AtomModel(NormModel):
    """Norm = aggregate (sum or max) of moduli of complex linear forms of the coordinates."""

    scalars = "complex"
    complex_coords = True
    polyhedral = False
    aggregate = "sum"

    def conform(self, v):
        _check_len(v, self.flat_dim)
        return [ComplexRational.of(x) for x in v]

    def atom_weights(self) -> list[list[int]]:
        """Integer combination of coordinates defining each atom."""
        raise NotImplementedError

    def atoms(self, coords) -> list[ComplexRational]:
        out = []
        for w in self.atom_weights():
            acc = ComplexRational()
            for c, z in zip(w, coords):
                if c:
                    acc = acc + z * c
            out.append(acc)
        return out

    def atom_exprs(self, exprs) -> list[tuple[dict, dict]]:
        out = []
        for w in self.atom_weights():
            re, im = {}, {}
            for c, (er, ei) in zip(w, exprs):
                if c:
                    _lin_add(re, er, c)
                    _lin_add(im, ei, c)
            out.append((re, im))
        return out

    def norm_flat(self, coords, prec=DEFAULT_PRECISION):
        mods = [a.modulus(prec) for a in self.atoms([ComplexRational.of(x) for x in coords])]
        if not mods:
            return Fraction(0)
        acc = mods[0]
        for m in mods[1:]:
            acc = acc + m if self.aggregate == "sum" else acc.max(m)
        return _simplify(acc)

    def epigraph(self, b, exprs, cuts=None):
        atoms = self.atom_exprs(exprs)
        obj = {}
        top = b.var() if self.aggregate == "max" else None
        for a, (re, im) in enumerate(atoms):
            t = b.var() if top is None else top
            for u in (cuts or {}).get(a, DEFAULT_CUTS):
                # t >= Re(conj(u) w) = u.re * Re w + u.im * Im w
                row = {t: Fraction(1)}
                _lin_add(row, re, -u.re)
                _lin_add(row, im, -u.im)
                b.add(row, GE, 0)
            if top is None:
                obj[t] = Fraction(1)
        if top is not None:
            obj[top] = Fraction(1)
        return obj


@dataclass(frozen=True)
class L1Complex(_AtomModel):
    d: int
    aggregate = "sum"

    @property
    def flat_dim(self):
        return self.d

    def atom_weights(self):
        return [[int(i == j) for j in range(self.d)] for i in range(self.d)]


@dataclass(frozen=True)
class LinfComplex(_AtomModel):
    d: int
    aggregate = "max"

    @property
    def flat_dim(self):
        return self.d

    def atom_weights(self):
        return [[int(i == j) for j in range(self.d)] for i in range(self.d)]


def _sign_patterns(d: int) -> list[list[int]]:
    # first sign fixed to +1: |w| is invariant under a global sign flip
    if d == 0:
        return []
    return [[1] + list(s) for s in itertools.product((1, -1), repeat=d - 1)]


@dataclass(frozen=True)
class SignSup(NormModel):
    """Sup norm on C({-1,1}^d) of ``s -> sum_j alpha_j s_j``; a vector is ``alpha``."""

    d: int
    scalars = "complex"
    complex_coords = True
    polyhedral = False

    def __post_init__(self):
        if self.d > MAX_SIGN_DIM:
            raise ShapeError(f"d = {self.d} exceeds the enumeration limit {MAX_SIGN_DIM}")

    conform = _AtomModel.conform
    atoms = _AtomModel.atoms
    atom_exprs = _AtomModel.atom_exprs
    epigraph = _AtomModel.epigraph
    aggregate = "max"

    @property
    def flat_dim(self):
        return self.d

    def atom_weights(self):
        return _sign_patterns(self.d)

    def norm_flat(self, coords, prec=DEFAULT_PRECISION):
        return _simplify(sign_sup_norm(coords, prec=prec)[0])


@dataclass(frozen=True)
class ComplexifiedL1(NormModel):
    """Complexification of real l1^d; a vector is the list of ``x_k + i y_k``."""

    d: int
    scalars = "complex"
    complex_coords = True
    polyhedral = False

    conform = _AtomModel.conform
    atoms = _AtomModel.atoms
    atom_exprs = _AtomModel.atom_exprs
    epigraph = _AtomModel.epigraph
    aggregate = "max"

    @property
    def flat_dim(self):
        return self.d

    def atom_weights(self):
        # isometric to the sign-sup model
        return _sign_patterns(self.d)

    def norm_flat(self, coords, prec=DEFAULT_PRECISION):
        z = [ComplexRational.of(c) for c in coords]
        return _simplify(complexified_norm([c.re for c in z], [c.im for c in z], prec=prec)[0])


@dataclass(frozen=True)
class FreeSpace(NormModel):
    space: FiniteMetricSpace

    def conform(self, v):
        if isinstance(v, Mapping):
            return free_vector(self.space, v)
        _check_len(v, self.flat_dim)
        return {lab: as_fraction(c) for lab, c in zip(self.space.non_base(), v) if as_fraction(c)}

    def flatten(self, v):
        v = self.conform(v)
        return [v.get(lab, Fraction(0)) for lab in self.space.non_base()]

    def unflatten(self, coords):
        return {lab: c for lab, c in zip(self.space.non_base(), coords) if c}

    @property
    def flat_dim(self):
        return len(self.space) - 1

    def norm_flat(self, coords):
        return free_norm_primal(self.unflatten([as_fraction(c) for c in coords]), self.space)

    def epigraph(self, b, exprs, cuts=None):
        sp = self.space
        n = len(sp)
        idx = {lab: i for i, lab in enumerate(sp.labels)}
        flows = {}
        obj = {}
        for i in range(n):
            for j in range(n):
                if i != j:
                    v = b.var()
                    flows[(i, j)] = v
                    obj[v] = sp.d[i][j]
        for lab, e in zip(sp.non_base(), exprs):
            i = idx[lab]
            row = {}
            for j in range(n):
                if j != i:
                    row[flows[(i, j)]] = row.get(flows[(i, j)], 0) + 1
                    row[flows[(j, i)]] = row.get(flows[(j, i)], 0) - 1
            _lin_add(row, e, -1)
            b.add(row, "==", 0)
        return obj


@dataclass(frozen=True)
class ChainNorm(NormModel):
    """``max{|x_n|_1, |x_{n-1}|_1 + |x_n|_inf, ..., |t| + sum_j |x_j|_inf}`` on
    ``R x (l1^d)^n``.  A vector is ``(t, [x_1, ..., x_n])``."""

    n: int
    d: int

    def conform(self, v):
        t, xs = v
        if len(xs) != self.n:
            raise ShapeError(f"expected {self.n} components, got {len(xs)}")
        return as_fraction(t), [[as_fraction(c) for c in _padded(x, self.d)] for x in xs]

    def flatten(self, v):
        t, xs = self.conform(v)
        return [t] + [c for x in xs for c in x]

    def unflatten(self, coords):
        coords = list(coords)
        return coords[0], [coords[1 + j * self.d : 1 + (j + 1) * self.d] for j in range(self.n)]

    @property
    def flat_dim(self):
        return 1 + self.n * self.d

    def norm_flat(self, coords):
        t, xs = self.unflatten(coords)
        return chain_norm(t, xs)

    def epigraph(self, b, exprs, cuts=None):
        texpr = exprs[0]
        comps = [exprs[1 + j * self.d : 1 + (j + 1) * self.d] for j in range(self.n)]
        tau = b.var()
        _abs_bound(b, tau, texpr)
        l1, linf = [], []
        for comp in comps:
            s = {}
            w = b.var()
            for e in comp:
                u = b.var()
                _abs_bound(b, u, e)
                _abs_bound(b, w, e)
                s[u] = Fraction(1)
            l1.append(s)
            linf.append(w)
        top = b.var()
        n = self.n
        for start in range(n, -1, -1):
            # term: head + sum of sup norms of the later components
            row = {top: Fraction(1)}
            if start == 0:
                row[tau] = Fraction(-1)
            else:
                _lin_add(row, l1[start - 1], -1)
            for j in range(start + 1, n + 1):
                row[linf[j - 1]] = row.get(linf[j - 1], 0) - 1
            b.add(row, GE, 0)
        return {top: Fraction(1)}


def _padded(x, d):
    x = list(x)
    if len(x) > d:
        if any(x[d:]):
            raise ShapeError(f"vector has support beyond dimension {d}")
        return x[:d]
    return x + [0] * (d - len(x))


PHI_SPECS = ("max", "sum")


def _phi_key(phi):
    if phi in PHI_SPECS:
        return phi
    if isinstance(phi, tuple) and len(phi) == 2 and phi[0] == "lp" and int(phi[1]) >= 1:
        return ("lp", int(phi[1]))
    raise ValueError(f"unsupported Phi specification {phi!r}; use 'max', 'sum' or ('lp', p)")


@dataclass(frozen=True)
class PhiSum(NormModel):
    """``Phi(|x_1|, ..., |x_N|)`` on a product of component spaces."""

    components: tuple
    phi: object = "max"

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "phi", _phi_key(self.phi))
        if not self.components:
            raise ShapeError("need at least one component")

    @property
    def polyhedral(self):
        return self.phi in PHI_SPECS and all(c.polyhedral for c in self.components)

    def conform(self, v):
        if len(v) != len(self.components):
            raise ShapeError(f"expected {len(self.components)} components, got {len(v)}")
        return tuple(c.conform(x) for c, x in zip(self.components, v))

    def flatten(self, v):
        return [s for c, x in zip(self.components, self.conform(v)) for s in c.flatten(x)]

    def unflatten(self, coords):
        out, i = [], 0
        for c in self.components:
            out.append(c.unflatten(coords[i : i + c.flat_dim]))
            i += c.flat_dim
        return tuple(out)

    @property
    def flat_dim(self):
        return sum(c.flat_dim for c in self.components)

    def norm_flat(self, coords):
        return phi_sum_norm(self.phi, self.components, self.unflatten(coords))

    def epigraph(self, b, exprs, cuts=None):
        if not self.polyhedral:
            raise TypeError("LP epigraph needs a polyhedral Phi-sum")
        objs, i = [], 0
        for c in self.components:
            objs.append(c.epigraph(b, exprs[i : i + c.flat_dim]))
            i += c.flat_dim
        if self.phi == "sum":
            total = {}
            for o in objs:
                _lin_add(total, o)
            return total
        top = b.var()
        for o in objs:
            b.add(_lin_add({top: Fraction(1)}, o, -1), GE, 0)
        return {top: Fraction(1)}


def norm(model: NormModel, v) -> NormValue:
    """Norm of ``v`` in ``model``; exact for polyhedral models."""
    return model.norm(v)


# ---------------------------------------------------------------------------
# specific norms


def sign_sup_norm(alpha: Sequence, d: Optional[int] = None, prec=DEFAULT_PRECISION):
    """``max over s in {-1,1}^d of |sum_j alpha_j s_j|`` by enumeration.

    Returns ``(enclosure, maximising sign pattern)``.  Coefficients are scaled
    to a common denominator so the enumeration runs on integers.
    """
    alpha = [ComplexRational.of(a) for a in alpha]
    if d is None:
        d = len(alpha)
    if d != len(alpha):
        raise ShapeError(f"{len(alpha)} coefficients given for d = {d}")
    if d > MAX_SIGN_DIM:
        raise ShapeError(f"d = {d} exceeds the enumeration limit {MAX_SIGN_DIM}")
    if d == 0:
        return Enclosure.exact(0), ()
    den = 1
    for a in alpha:
        den = _lcm(_lcm(den, a.re.denominator), a.im.denominator)
    re = [int(a.re * den) for a in alpha]
    im = [int(a.im * den) for a in alpha]
    signs = [1] * d
    sr, si = sum(re), sum(im)
    best, best_signs = sr * sr + si * si, tuple(signs)
    # Gray code over s_2..s_d
    for step in range(1, 1 << (d - 1)):
        j = (step & -step).bit_length()  # flips coordinate j (1-based offset from s_1)
        signs[j] = -signs[j]
        sr += 2 * signs[j] * re[j]
        si += 2 * signs[j] * im[j]
        m = sr * sr + si * si
        if m > best:
            best, best_signs = m, tuple(signs)
    return sqrt_enclosure(Fraction(best, den * den), prec), best_signs


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a // gcd(a, b) * b


def _rot90(z: ComplexRational) -> ComplexRational:
    return ComplexRational(-z.im, z.re)


def _dot(u: ComplexRational, z: ComplexRational) -> Fraction:
    return u.re * z.re + u.im * z.im


def perturbed_sign(c: ComplexRational, z: ComplexRational, ccw: bool = True) -> int:
    """Sign of ``<c', z>`` for a direction ``c'`` infinitesimally rotated from ``c``."""
    s = _dot(c, z)
    if s:
        return 1 if s > 0 else -1
    s = _dot(_rot90(c), z)
    if not ccw:
        s = -s
    return (s > 0) - (s < 0)


def angle_cmp(u: ComplexRational, v: ComplexRational) -> int:
    """Exact comparison of arguments in ``[0, 2*pi)``."""

    def half(z):
        return 0 if z.im > 0 or (z.im == 0 and z.re > 0) else 1

    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    cross = u.re * v.im - u.im * v.re
    return -1 if cross > 0 else (1 if cross < 0 else 0)


angle_key = cmp_to_key(angle_cmp)


def complexified_norm(x: Sequence, y: Sequence, base: Optional[NormModel] = None, prec=DEFAULT_PRECISION):
    """``sup { |a x + b y| : a^2 + b^2 = 1 }`` for the l1 (default) or l-infinity base.

    For l1 the sup over angles of ``sum_k |Re(e^{-i theta} z_k)|`` with
    ``z_k = x_k + i y_k`` is attained at ``theta = arg W`` where
    ``W = sum_k s_k z_k`` for the sign pattern ``s`` constant on some arc
    between consecutive critical angles ``arg z_k +- pi/2``.  Those arcs are
    enumerated exactly by rotating each critical direction infinitesimally.

    Returns ``(enclosure, sign pattern)``.
    """
    x = [as_fraction(v) for v in x]
    y = [as_fraction(v) for v in y]
    if len(x) != len(y):
        raise ShapeError("x and y differ in dimension")
    if base is not None and not isinstance(base, (L1Real, LinfReal)):
        raise TypeError("complexified_norm supports l1 and l-infinity bases only")
    if base is not None and base.d != len(x):
        raise ShapeError("base dimension differs from the vectors")
    z = [ComplexRational(a, b) for a, b in zip(x, y)]
    if isinstance(base, LinfReal):
        k = max(range(len(z)), key=lambda i: z[i].abs2(), default=None)
        if k is None:
            return Enclosure.exact(0), ()
        return z[k].modulus(prec), tuple(int(i == k) for i in range(len(z)))
    best, best_s = Fraction(0), tuple(0 for _ in z)
    crit = sorted({(_rot90(w).re, _rot90(w).im) for w in z if w}, key=lambda p: angle_key(ComplexRational(*p)))
    for cr, ci in crit:
        c = ComplexRational(cr, ci)
        s = tuple(perturbed_sign(c, w) if w else 0 for w in z)
        total = ComplexRational()
        for sk, w in zip(s, z):
            if sk:
                total = total + (w if sk > 0 else -w)
        m = total.abs2()
        if m > best:
            best, best_s = m, s
    return sqrt_enclosure(best, prec), best_s


def _as_enclosure(v: NormValue) -> Enclosure:
    return v if isinstance(v, Enclosure) else Enclosure.exact(v)


def phi_sum_norm(phi, components: Sequence[NormModel], v: Sequence, prec=DEFAULT_PRECISION) -> NormValue:
    """``Phi((|v_1|_1, ..., |v_N|_N))`` for ``Phi`` in max, sum or ``('lp', p)``."""
    phi = _phi_key(phi)
    if len(components) != len(v):
        raise ShapeError(f"{len(v)} parts given for {len(components)} components")
    vals = [c.norm(x) for c, x in zip(components, v)]
    if phi == "max":
        acc = _as_enclosure(vals[0])
        for w in vals[1:]:
            acc = acc.max(w)
        return _simplify(acc)
    if phi == "sum":
        acc = Enclosure.exact(0)
        for w in vals:
            acc = acc + w
        return _simplify(acc)
    p = phi[1]
    if all(not isinstance(w, Enclosure) for w in vals):
        return _simplify(root_enclosure(sum((abs(w) ** p for w in vals), Fraction(0)), p, prec))
    lo = root_enclosure(sum((lower(w) ** p for w in vals), Fraction(0)), p, prec).lo
    hi = root_enclosure(sum((upper(w) ** p for w in vals), Fraction(0)), p, prec).hi
    return Enclosure(lo, hi)


def phi_sandwich_holds(phi, samples: Sequence[Sequence]) -> bool:
    """Check ``|t|_inf <= Phi(t) <= |t|_1`` on the given nonnegative vectors."""
    phi = _phi_key(phi)
    for t in samples:
        t = [abs(as_fraction(c)) for c in t]
        comps = [L1Real(1)] * len(t)
        val = phi_sum_norm(phi, comps, [[c] for c in t])
        if lower(val) > sum(t) or upper(val) < max(t, default=0):
            return False
    return True


def chain_norm(t, xs: Sequence[Sequence]) -> Fraction:
    """``max{|x_n|_1, |x_{n-1}|_1 + |x_n|_inf, ..., |t| + sum_j |x_j|_inf}``."""
    t = as_fraction(t)
    l1 = [sum((abs(as_fraction(c)) for c in x), Fraction(0)) for x in xs]
    linf = [max((abs(as_fraction(c)) for c in x), default=Fraction(0)) for x in xs]
    n = len(xs)
    best = abs(t) + sum(linf, Fraction(0))
    tail = Fraction(0)  # sum of sup norms of components after the current one
    for j in range(n - 1, -1, -1):
        best = max(best, l1[j] + tail)
        tail += linf[j]
    return best
