"""Direct sums: witnesses for the chain norm and probes of Phi-sums."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .spaces import NormModel, PhiSum, chain_norm, lower, upper


def _unit(d: int, k: int) -> list[Fraction]:
    return [Fraction(int(i == k - 1)) for i in range(d)]


@dataclass(frozen=True)
class ChainWitnessX:
    """``(1, e_k, ..., e_k)`` with ``n`` copies of ``e_k``; its chain norm is ``n + 1``."""

    n: int
    k: int
    t: Fraction
    xs: tuple

    @property
    def norm(self) -> Fraction:
        return chain_norm(self.t, self.xs)


def build_witness_x(n: int, k: int) -> ChainWitnessX:
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    e = tuple(_unit(k, k))
    w = ChainWitnessX(n, k, Fraction(1), tuple(e for _ in range(n)))
    if w.norm != n + 1:
        raise AssertionError(f"chain norm {w.norm} != {n + 1}")
    return w


@dataclass(frozen=True)
class ChainWitnessZ:
    """``((1-1/m)^n, (1-1/m)^(n-1) u, ..., (1-1/m) u, u)`` with ``u`` the average of ``m`` unit vectors."""

    n: int
    m: int
    indices: tuple
    t: Fraction
    xs: tuple

    @property
    def u(self) -> tuple:
        return self.xs[-1]

    @property
    def norm(self) -> Fraction:
        return chain_norm(self.t, self.xs)


def build_witness_z(n: int, m: int, indices: Sequence[int] | None = None) -> ChainWitnessZ:
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    indices = tuple(range(1, m + 1)) if indices is None else tuple(indices)
    if len(indices) != m:
        raise ValueError(f"expected {m} indices, got {len(indices)}")
    if len(set(indices)) != m:
        raise ValueError(f"repeated indices in {indices}")
    if min(indices) < 1:
        raise ValueError("indices start at 1")
    d = max(indices)
    u = [Fraction(0)] * d
    for k in indices:
        u[k - 1] = Fraction(1, m)
    r = 1 - Fraction(1, m)
    # component j (1-based) carries r^(n-j) u
    xs = tuple(tuple(r ** (n - j) * c for c in u) for j in range(1, n + 1))
    w = ChainWitnessZ(n, m, indices, r**n, xs)
    if sum(u) != 1 or max(u) != Fraction(1, m):
        raise AssertionError("u is not an average of distinct unit vectors")
    if w.norm != 1:
        raise AssertionError(f"chain norm {w.norm} != 1")
    return w


def telescoping_identity(n: int, m: int) -> bool:
    """``(1-1/m)^k + (1/m) sum_{j<k} (1-1/m)^j == 1`` for ``k = 1..n``, exactly."""
    if m < 1:
        raise ValueError("m must be >= 1")
    r = 1 - Fraction(1, m)
    partial = Fraction(0)
    for k in range(1, n + 1):
        partial += r ** (k - 1)
        if r**k + partial / m != 1:
            return False
    return True


@dataclass
class PhiProbeReport:
    phi: object
    component_norms: list  # per member, the tuple of component norms
    composite_norms: list
    component_separations: list
    composite_separation: object

    @property
    def consistent(self) -> bool:
        """Composite values sit between the max and the sum of the component values."""
        for comps, total in zip(self.component_norms, self.composite_norms):
            if upper(total) < max(lower(c) for c in comps) or lower(total) > sum(upper(c) for c in comps):
                return False
        return True


def phi_sum_separation_probe(phi, components: Sequence[NormModel], families: Sequence[Sequence]) -> PhiProbeReport:
    """Zip component families into a product family and compare norms and separations.

    ``families[j]`` lists the members of component ``j``; all families must
    have the same length.
    """
    if len(components) != len(families):
        raise ValueError(f"{len(families)} families for {len(components)} components")
    sizes = {len(f) for f in families}
    if len(sizes) != 1:
        raise ValueError("component families differ in length")
    model = PhiSum(tuple(components), phi)
    members = [tuple(f[i] for f in families) for i in range(sizes.pop())]
    comp_norms = [tuple(c.norm(x) for c, x in zip(components, v)) for v in members]
    composite = [model.norm(v) for v in members]

    def diff(c, x, y):
        return c.unflatten([a - b for a, b in zip(c.flatten(x), c.flatten(y))])

    comp_sep = []
    for j, c in enumerate(components):
        ds = [c.norm(diff(c, f_x, f_y)) for f_x, f_y in itertools.combinations(families[j], 2)]
        comp_sep.append(min(ds, key=upper) if ds else None)
    seps = [
        model.norm(tuple(diff(c, a, b) for c, a, b in zip(components, x, y)))
        for x, y in itertools.combinations(members, 2)
    ]
    return PhiProbeReport(model.phi, comp_norms, composite, comp_sep, min(seps, key=upper) if seps else None)
