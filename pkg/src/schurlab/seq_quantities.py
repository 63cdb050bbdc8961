"""Finite-stage sequence quantities.

The asymptotic constants (oscillation, lower l1-estimates over tails and
subsequences) are not finitely computable.  What is computed here are their
values on explicit finite families, together with staged sequences that
converge to known limits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .free_space import EXAMPLES, alternating_family
from .numbers import DEFAULT_PRECISION, ComplexRational, Enclosure, I, root_of_unity, unit_toward
from .optim import EQ, LPBuilder
from .spaces import (
    DEFAULT_CUTS,
    ComplexifiedL1,
    FreeSpace,
    L1Complex,
    L1Real,
    NormModel,
    NormValue,
    SignSup,
    complexified_norm,
    lower,
    sign_sup_norm,
    upper,
)
from .subset_selection import roots_ratio

MAX_ORTHANT_MEMBERS = 14
MAX_CUT_ROUNDS = 200


@dataclass(frozen=True)
class VectorFamily:
    model: NormModel
    members: tuple
    tag: Optional[str] = None
    stage: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        for v in self.members:
            self.model.conform(v)

    def __len__(self):
        return len(self.members)

    def flat(self) -> list[list]:
        return [self.model.flatten(v) for v in self.members]


# ---------------------------------------------------------------------------
# generators


def _basis(d, k, one=1):
    return [one if i == k else 0 for i in range(d)]


def _gen_l1_basis(n):
    return VectorFamily(L1Real(n), [_basis(n, k) for k in range(n)])


def _gen_l1_basis_complex(n):
    return VectorFamily(L1Complex(n), [_basis(n, k) for k in range(n)])


def _gen_cantor(n):
    # the coordinate projections f_k(s) = s_k of the cube, restricted to n coordinates
    return VectorFamily(SignSup(n), [_basis(n, k) for k in range(n)])


def _gen_complexified(n):
    return VectorFamily(ComplexifiedL1(n), [_basis(n, k) for k in range(n)])


def _gen_rotated_pairs(n):
    # e_1, i e_1, e_2, i e_2, ... : 2n members in complex l1^n
    members = []
    for k in range(n):
        members.append(_basis(n, k))
        members.append(_basis(n, k, I))
    return VectorFamily(L1Complex(n), members)


def _gen_with_zeros(n):
    # e_1, 0, e_2, 0, ...
    members = []
    for k in range(n):
        members.append(_basis(n, k))
        members.append([0] * n)
    return VectorFamily(L1Real(n), members)


def _free_family(example):
    def gen(n):
        space = EXAMPLES[example](max(n, 3))
        return VectorFamily(FreeSpace(space), alternating_family(example, n))

    return gen


GENERATORS: dict[str, Callable[[int], VectorFamily]] = {
    "l1-basis": _gen_l1_basis,
    "l1-basis-complex": _gen_l1_basis_complex,
    "cantor-projections": _gen_cantor,
    "complexified-basis": _gen_complexified,
    "l1-basis-rotated": _gen_rotated_pairs,
    "l1-basis-zeros": _gen_with_zeros,
    "exlf-alternating": _free_family("exlf"),
    "exlf3-alternating": _free_family("exlf3"),
}


def generate(tag: str, stage: int) -> VectorFamily:
    if tag not in GENERATORS:
        raise KeyError(f"unknown generator tag {tag!r}; known: {', '.join(GENERATORS)}")
    if stage < 1:
        raise ValueError("stage must be >= 1")
    f = GENERATORS[tag](stage)
    return VectorFamily(f.model, f.members, tag, stage)


# ---------------------------------------------------------------------------
# distances


def _sub(model, x, y):
    fx, fy = model.flatten(x), model.flatten(y)
    return model.unflatten([a - b for a, b in zip(fx, fy)])


def _value_max(a: NormValue, b: NormValue) -> NormValue:
    if isinstance(a, Enclosure) or isinstance(b, Enclosure):
        a = a if isinstance(a, Enclosure) else Enclosure.exact(a)
        return a.max(b)
    return max(a, b)


def _value_min(a: NormValue, b: NormValue) -> NormValue:
    if isinstance(a, Enclosure) or isinstance(b, Enclosure):
        return Enclosure(min(lower(a), lower(b)), min(upper(a), upper(b)))
    return min(a, b)


def diam_and_separation(f: VectorFamily):
    """Largest and smallest pairwise distance ``|x_k - x_l|`` in the family."""
    if len(f) < 2:
        raise ValueError("need at least two members")
    diam = sep = None
    for x, y in itertools.combinations(f.members, 2):
        d = f.model.norm(_sub(f.model, x, y))
        diam = d if diam is None else _value_max(diam, d)
        sep = d if sep is None else _value_min(sep, d)
    return diam, sep


# ---------------------------------------------------------------------------
# lower l1-estimates


@dataclass
class LowerEstimate:
    """Minimum of ``|sum a_k x_k|`` over real ``a`` with ``sum |a_k| = 1``.

    ``value`` is exact for polyhedral models; otherwise an enclosure whose
    lower end comes from a cutting-plane LP and whose upper end is the norm
    at ``coefficients``.
    """

    value: NormValue
    coefficients: tuple


def _combination_exprs(flat, signs, betas, complex_coords):
    dim = len(flat[0]) if flat else 0
    exprs = []
    for i in range(dim):
        if complex_coords:
            re, im = {}, {}
            for k, (s, v) in enumerate(zip(signs, flat)):
                z = ComplexRational.of(v[i])
                if z.re:
                    re[betas[k]] = s * z.re
                if z.im:
                    im[betas[k]] = s * z.im
            exprs.append((re, im))
        else:
            exprs.append({betas[k]: s * v[i] for k, (s, v) in enumerate(zip(signs, flat)) if v[i]})
    return exprs


def _combine(model, flat, coeffs):
    dim = len(flat[0])
    if model.complex_coords:
        out = [ComplexRational() for _ in range(dim)]
        for a, v in zip(coeffs, flat):
            if a:
                for i in range(dim):
                    out[i] = out[i] + ComplexRational.of(v[i]) * a
        return out
    return [sum((a * v[i] for a, v in zip(coeffs, flat)), Fraction(0)) for i in range(dim)]


def _orthant_min(model, flat, signs, tol):
    """Minimise the norm over the face ``{a : sign(a_k) = s_k, sum |a_k| = 1}``.

    Complex moduli are replaced by cutting planes, refined at the current
    minimiser until the LP value (a valid lower bound) and the true norm
    there are within ``tol``.  Cut directions start coarse to keep the
    rationals small and get finer when refinement stalls.
    """
    cuts = None
    best_hi, best_coeffs, lo = None, None, None
    max_den = 1000
    for _ in range(MAX_CUT_ROUNDS):
        b = LPBuilder()
        betas = [b.var() for _ in flat]
        b.add({v: Fraction(1) for v in betas}, EQ, 1)
        exprs = _combination_exprs(flat, signs, betas, model.complex_coords)
        b.objective = model.epigraph(b, exprs, cuts)
        res = b.solve("min")
        coeffs = tuple(s * res.x[v] for s, v in zip(signs, betas))
        if model.polyhedral:
            return res.value, res.value, coeffs
        lo = res.value
        coords = _combine(model, flat, coeffs)
        val = model.norm_flat(coords)
        if best_hi is None or upper(val) < best_hi:
            best_hi, best_coeffs = upper(val), coeffs
        if best_hi - lo <= tol:
            break
        if cuts is None:
            cuts = {a: list(DEFAULT_CUTS) for a in range(len(model.atom_weights()))}
        added = False
        while not added:
            for a, w in enumerate(model.atoms(coords)):
                # under a max only atoms above the model value can be violated
                if not w or (model.aggregate == "max" and w.abs2() <= lo * lo):
                    continue
                u = unit_toward(w, max_den)
                if u not in cuts[a]:
                    cuts[a].append(u)
                    added = True
            if added or max_den >= 10**7:
                break
            max_den *= 100
        if not added:
            break
    return lo, best_hi, best_coeffs


def lower_l1_real(f: VectorFamily, tol: Fraction = DEFAULT_PRECISION, with_witness: bool = False):
    """``min { |sum_k a_k x_k| : a real, sum |a_k| = 1 }`` by orthant enumeration.

    On each orthant the sphere is a simplex and, for polyhedral norms, the
    minimum is one LP.  The first sign is fixed to ``+`` because the norm is
    even.  Complex-coordinate models are handled with cutting planes and give
    an enclosure of width at most ``tol``.
    """
    n = len(f)
    if n == 0:
        raise ValueError("empty family")
    if n > MAX_ORTHANT_MEMBERS:
        raise ValueError(f"{n} members exceed the orthant enumeration limit {MAX_ORTHANT_MEMBERS}")
    model = f.model
    if not model.polyhedral and not hasattr(model, "atom_weights"):
        raise TypeError(f"{model} has no LP description")
    flat = f.flat()
    best_lo = best_hi = None
    best_coeffs = None
    for rest in itertools.product((1, -1), repeat=n - 1):
        lo, hi, coeffs = _orthant_min(model, flat, (1,) + rest, tol)
        if best_hi is None or hi < best_hi:
            best_hi, best_coeffs = hi, coeffs
        best_lo = lo if best_lo is None else min(best_lo, lo)
    value = best_lo if best_lo == best_hi else Enclosure(best_lo, best_hi)
    est = LowerEstimate(value, best_coeffs)
    return est if with_witness else est.value


@dataclass(frozen=True)
class ComplexBracket:
    """Bracket for ``min { |sum a_k x_k| : a complex, sum |a_k| = 1 }``."""

    lower: Fraction
    upper: Fraction
    witness: tuple  # coefficients attaining ``upper`` (up to enclosure width)
    lower_method: str

    def __iter__(self):
        return iter((self.lower, self.upper))


def _norm_at(model, flat, coeffs) -> NormValue:
    return model.norm_flat(_combine(model, flat, coeffs))


def _disjoint_supports(flat) -> bool:
    seen = set()
    for v in flat:
        supp = {i for i, c in enumerate(v) if c}
        if seen & supp:
            return False
        seen |= supp
    return True


def lower_l1_complex(
    f: VectorFamily,
    phases: int = 8,
    max_split: int = 4,
    max_grid: int = 4096,
    split_tol: Fraction = Fraction(1, 10**6),
) -> ComplexBracket:
    """Bracket the complex lower l1-estimate of a finite family.

    Upper bound: the smallest norm among witnesses with coefficients of equal
    modulus ``1/N`` and phases on a grid of ``phases`` points (first phase
    fixed), the roots-of-unity coefficients ``exp(i k pi / N) / N`` for the
    cube-projection and complexified-basis generators, and the best real
    coefficients.

    Lower bound: writing ``a_k = b_k + i c_k`` gives a real combination of the
    doubled family ``{x_k, i x_k}`` with ``sum |b_k| + |c_k| >= 1``, so the real
    estimate of the doubled family is a lower bound.  It is computed when the
    doubled family has at most ``max_split`` members.  For l1 models with
    disjointly supported members the exact value ``min |x_k|`` is also a lower
    bound.
    """
    if phases < 4:
        raise ValueError("phase grid needs at least 4 points")
    model = f.model
    if model.scalars != "complex":
        model = model.complex_extension()
    f = VectorFamily(model, [_lift(model, v) for v in f.members], f.tag, f.stage)
    n = len(f)
    flat = f.flat()
    candidates = []
    if n == 1:
        candidates.append(((ComplexRational(1),), _norm_at(model, flat, [ComplexRational(1)])))
    elif (phases ** (n - 1)) <= max_grid:
        grid = [root_of_unity(j, phases) for j in range(phases)]
        for combo in itertools.product(grid, repeat=n - 1):
            coeffs = [ComplexRational(Fraction(1, n))] + [u * Fraction(1, n) for u in combo]
            candidates.append((tuple(coeffs), _norm_at(model, flat, coeffs)))
    if f.tag in ("cantor-projections", "complexified-basis"):
        coeffs = [root_of_unity(k, 2 * n) * Fraction(1, n) for k in range(n)]
        candidates.append((tuple(coeffs), _norm_at(model, flat, coeffs)))
    methods = []
    lo = Fraction(0)
    if isinstance(model, L1Complex) and _disjoint_supports(flat):
        # |sum a_k x_k| = sum |a_k| |x_k| here, so the bound is attained
        lo = min(lower(model.norm(v)) for v in f.members)
        methods.append("disjoint-support")
    elif 2 * n <= max_split:
        doubled = []
        for v in f.members:
            doubled.append(v)
            doubled.append(model.unflatten([ComplexRational.of(c) * I for c in model.flatten(v)]))
        # only the certified lower end matters, so a loose gap is enough
        real = lower_l1_real(VectorFamily(model, doubled), tol=split_tol, with_witness=True)
        lo = max(lo, lower(real.value))
        methods.append("split")
        coeffs = [ComplexRational(real.coefficients[2 * k], real.coefficients[2 * k + 1]) for k in range(n)]
        scale = sum((c.modulus().hi for c in coeffs), Fraction(0))
        if all(c.modulus().is_exact for c in coeffs):
            coeffs = [c * (1 / scale) for c in coeffs]
            candidates.append((tuple(coeffs), _norm_at(model, flat, coeffs)))
    if n <= MAX_ORTHANT_MEMBERS and (model.polyhedral or n <= 3):
        real = lower_l1_real(f, with_witness=True)
        candidates.append((tuple(ComplexRational(c) for c in real.coefficients), real.value))
    if not candidates:
        raise ValueError("no upper-bound witness could be evaluated; raise max_grid")
    witness, best = min(candidates, key=lambda c: upper(c[1]))
    hi = upper(best)
    return ComplexBracket(min(lo, hi), hi, witness, "+".join(methods) or "trivial")


def _lift(model, v):
    return model.unflatten([ComplexRational.of(c) for c in model.flatten(v)]) if model.complex_coords else v


def l1_equivalence_constant(f: VectorFamily, tol: Fraction = DEFAULT_PRECISION, **kwargs):
    """``1 / (lower l1-estimate)`` of a normalised family.

    For real-scalar models this is a Fraction (or ``inf``).  For complex
    models the lower estimate is only bracketed, so ``(lo, hi)`` bounds on the
    constant are returned, with ``hi = inf`` when no positive lower estimate
    is certified.
    """
    for k, v in enumerate(f.members):
        nv = f.model.norm(v)
        if abs(lower(nv) - 1) > tol or abs(upper(nv) - 1) > tol:
            raise ValueError(f"member {k} has norm {float(upper(nv))}, expected 1")
    if f.model.scalars == "complex":
        br = lower_l1_complex(f, **kwargs)
        lo = 1 / br.upper if br.upper else math.inf
        hi = 1 / br.lower if br.lower else math.inf
        return lo, hi
    val = lower_l1_real(f)
    if isinstance(val, Enclosure):
        return (1 / val.hi if val.hi else math.inf, 1 / val.lo if val.lo else math.inf)
    return 1 / val if val else math.inf


# ---------------------------------------------------------------------------
# gliding hump


@dataclass(frozen=True)
class HumpSelection:
    indices: tuple
    boundaries: tuple  # N_0 = m < N_1 < ...

    def check(self, y: Sequence[Sequence], eps) -> bool:
        m = self.boundaries[0]
        for k, idx in enumerate(self.indices):
            v = [abs(Fraction(c)) for c in y[idx]]
            lo, hi = self.boundaries[k], self.boundaries[k + 1]
            block = sum(v[lo:hi], Fraction(0))
            tail = sum(v[m:], Fraction(0))
            if not block > tail - eps:
                return False
        return all(a < b for a, b in zip(self.boundaries, self.boundaries[1:]))


def gliding_hump(y: Sequence[Sequence], m: int, eps) -> HumpSelection:
    """Greedy block selection with coordinates indexed from 1.

    The block of the ``k``-th accepted vector is ``(N_{k-1}, N_k]``.  A vector
    is accepted when its mass beyond ``N_{k-1}`` exceeds its tail mass beyond
    ``m`` minus ``eps``; ``N_k`` is then the smallest end capturing that much.
    Blocks may end beyond the ambient dimension when the vector has no mass
    left to capture.
    """
    if not y:
        raise ValueError("empty input")
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    indices, bounds = [], [m]
    for idx, vec in enumerate(y):
        v = [abs(Fraction(c)) for c in vec]
        tail = sum(v[m:], Fraction(0))
        prev = bounds[-1]
        if not sum(v[prev:], Fraction(0)) > tail - eps:
            continue
        acc, end = Fraction(0), prev
        while end == prev or not acc > tail - eps:
            acc += v[end] if end < len(v) else 0
            end += 1
        indices.append(idx)
        bounds.append(end)
    return HumpSelection(tuple(indices), tuple(bounds))


# ---------------------------------------------------------------------------
# staged finite-stage echo of Rosenthal's inequality


@dataclass(frozen=True)
class RosenthalReport:
    lower: NormValue
    separation: NormValue
    diameter: NormValue

    @property
    def holds(self) -> bool:
        return 2 * upper(self.lower) <= lower(self.separation) and upper(self.separation) <= upper(self.diameter)

    @property
    def tight(self) -> bool:
        return 2 * upper(self.lower) == lower(self.separation)


def rosenthal_stage_check(f: VectorFamily) -> RosenthalReport:
    """``2 * lower_l1_real(f) <= min distance <= diameter``."""
    lo = lower_l1_real(f)
    diam, sep = diam_and_separation(f)
    rep = RosenthalReport(lo, sep, diam)
    if not rep.holds:
        raise AssertionError(f"inequality chain fails: {rep}")
    return rep


# ---------------------------------------------------------------------------
# staged values


@dataclass
class StagedValues:
    tag: str
    stages: list = field(default_factory=list)  # (stage, value)
    direction: str = "none"
    target: Optional[float] = None
    tolerance: float = 0.0

    def floats(self) -> list[float]:
        return [float(v) if isinstance(v, Enclosure) else float(Fraction(v)) for _, v in self.stages]

    def monotone(self, strict: bool = False, slack: Fraction = Fraction(1, 10**12)) -> bool:
        vals = [v for _, v in self.stages]
        for a, b in zip(vals, vals[1:]):
            if self.direction == "decreasing":
                ok = upper(b) < lower(a) if strict else upper(b) <= lower(a) + slack
            elif self.direction == "increasing":
                ok = lower(b) > upper(a) if strict else lower(b) + slack >= upper(a)
            else:
                ok = True
            if not ok:
                return False
        return True

    def last_error(self) -> Optional[float]:
        if self.target is None or not self.stages:
            return None
        return abs(self.floats()[-1] - self.target)

    @property
    def ok(self) -> bool:
        err = self.last_error()
        return self.monotone() and (err is None or err <= self.tolerance)


def cantor_stage_upper(n: int) -> Enclosure:
    """Norm of ``sum_k exp(i k pi/n)/n * f_k`` in the cube sup norm: an upper bound for the stage-n estimate."""
    alpha = [root_of_unity(k, 2 * n) * Fraction(1, n) for k in range(n)]
    return sign_sup_norm(alpha)[0]


def complexified_stage_upper(n: int) -> Enclosure:
    """Same witness for the complexified l1 basis, evaluated by the angle sweep."""
    alpha = [root_of_unity(k, 2 * n) * Fraction(1, n) for k in range(n)]
    return complexified_norm([a.re for a in alpha], [a.im for a in alpha])[0]


def _l1_basis_cjr(n: int) -> Fraction:
    return lower_l1_real(generate("l1-basis", n))


def _recip(e: Enclosure) -> Enclosure:
    return Enclosure(1 / e.hi, 1 / e.lo)


# tag -> (stage function, direction, target, tolerance at the registered final stage)
STAGED = {
    "roots-ratio": (roots_ratio, "decreasing", 1 / math.pi, 2e-4),
    "cantor-dcj-upper": (cantor_stage_upper, "decreasing", 2 / math.pi, 0.005 * 2 / math.pi),
    "complexified-dcj-upper": (complexified_stage_upper, "decreasing", 2 / math.pi, 0.005 * 2 / math.pi),
    "complexified-equivalence": (lambda n: _recip(complexified_stage_upper(n)), "increasing", math.pi / 2, 0.005 * math.pi / 2),
    "l1-basis-cjr": (_l1_basis_cjr, "none", 1.0, 0.0),
}


def staged_report(tag: str, max_stage: int, start: int = 1) -> StagedValues:
    if tag not in STAGED:
        raise KeyError(f"unknown staged tag {tag!r}; known: {', '.join(STAGED)}")
    fn, direction, target, tol = STAGED[tag]
    out = StagedValues(tag, direction=direction, target=target, tolerance=tol)
    for n in range(start, max_stage + 1):
        out.stages.append((n, fn(n)))
    return out
