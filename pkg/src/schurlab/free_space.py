"""Finite metric spaces and Lipschitz-free (transportation) norms.

A finitely supported element ``sum c_x delta(x)`` of the free space is a
plain mapping ``{label: Fraction}``; the base point carries no coefficient.
Its norm is computed two ways: as a min-cost transportation problem where
the base point absorbs the imbalance, and as the LP dual over the
1-Lipschitz ball of functions vanishing at the base point.
"""

from __future__ import annotations

import itertools
import math
import operator
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .numbers import as_fraction
from .optim import EQ, GE, LE, Arc, FlowNetwork, LPBuilder, min_cost_flow


class MetricError(ValueError):
    """Raised when a distance matrix is not a metric; carries the offending points."""

    def __init__(self, message: str, points: tuple = ()):
        super().__init__(message)
        self.points = points


@dataclass(frozen=True)
class FiniteMetricSpace:
    labels: tuple
    d: tuple  # tuple of tuples of Fraction
    base: int = 0
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        d = tuple(tuple(as_fraction(v) for v in row) for row in self.d)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})
        if len(self._index) != len(labels):
            raise MetricError("duplicate labels")
        if len(d) != len(labels) or any(len(row) != len(labels) for row in d):
            raise MetricError("distance matrix shape does not match labels")
        if not 0 <= self.base < len(labels):
            raise MetricError("base index out of range")
        self.validate()

    def validate(self) -> None:
        n, d = len(self.labels), self.d
        for i in range(n):
            if d[i][i] != 0:
                raise MetricError(f"d({self.labels[i]!r}, itself) != 0", (self.labels[i],))
            for j in range(i + 1, n):
                if d[i][j] != d[j][i]:
                    raise MetricError("asymmetric distances", (self.labels[i], self.labels[j]))
                if d[i][j] <= 0:
                    raise MetricError("distinct points at distance <= 0", (self.labels[i], self.labels[j]))
        # integer copy on a common denominator; d is symmetric so row k is column k
        den = 1
        for row in d:
            for v in row:
                den = math.lcm(den, v.denominator)
        q = [[v.numerator * (den // v.denominator) for v in row] for row in d]
        for i in range(n):
            for k in range(i + 1, n):
                if q[i][k] > min(map(operator.add, q[i], q[k])):
                    j = min(range(n), key=lambda j: q[i][j] + q[j][k])
                    raise MetricError(
                        "triangle inequality fails",
                        (self.labels[i], self.labels[j], self.labels[k]),
                    )

    def __len__(self):
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not a point of the space") from None

    @property
    def base_label(self):
        return self.labels[self.base]

    def dist(self, x, y) -> Fraction:
        return self.d[self.index(x)][self.index(y)]

    def non_base(self) -> list:
        return [lab for i, lab in enumerate(self.labels) if i != self.base]

    def with_star(self, radius: Fraction, star="*") -> "FiniteMetricSpace":
        """Add a point at distance ``radius`` from every point and make it the base."""
        radius = Fraction(radius)
        n = len(self.labels)
        d = [list(row) + [radius] for row in self.d]
        d.append([radius] * n + [Fraction(0)])
        return FiniteMetricSpace(self.labels + (star,), d, base=n)

    def rebased(self, label) -> "FiniteMetricSpace":
        return FiniteMetricSpace(self.labels, self.d, base=self.index(label))

    def subspace(self, labels: Iterable) -> "FiniteMetricSpace":
        labels = list(labels)
        idx = [self.index(lab) for lab in labels]
        if self.base not in idx:
            raise ValueError("subspace must contain the base point")
        d = [[self.d[i][j] for j in idx] for i in idx]
        return FiniteMetricSpace(labels, d, base=idx.index(self.base))

    def separation_band(self) -> tuple[Fraction, Fraction]:
        vals = [self.d[i][j] for i in range(len(self)) for j in range(i + 1, len(self))]
        return min(vals), max(vals)

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "d": [[{"num": v.numerator, "den": v.denominator} for v in row] for row in self.d],
            "base": self.base,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "FiniteMetricSpace":
        labels = [tuple(x) if isinstance(x, list) else x for x in obj["labels"]]
        return cls(tuple(labels), [[as_fraction(v) for v in row] for row in obj["d"]], int(obj.get("base", 0)))


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: frozenset  # of frozenset({u, v})

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        es = frozenset(frozenset(e) for e in self.edges)
        for e in es:
            if len(e) != 2:
                raise ValueError("self-loops are not allowed")
            if not e <= set(self.vertices):
                raise ValueError(f"edge {set(e)} uses an unknown vertex")
        object.__setattr__(self, "edges", es)


def graph_metric(g: Graph, base=None) -> FiniteMetricSpace:
    """Shortest-path metric by breadth-first search from every vertex."""
    adj: dict[Hashable, list] = {v: [] for v in g.vertices}
    for e in g.edges:
        u, v = tuple(e)
        adj[u].append(v)
        adj[v].append(u)
    index = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices)
    d = [[None] * n for _ in range(n)]
    for s in g.vertices:
        row = d[index[s]]
        row[index[s]] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if row[index[w]] is None:
                    row[index[w]] = row[index[u]] + 1
                    queue.append(w)
        if any(x is None for x in row):
            raise ValueError("graph is disconnected")
    b = 0 if base is None else index[base]
    return FiniteMetricSpace(g.vertices, [[Fraction(x) for x in row] for row in d], b)


# ---------------------------------------------------------------------------
# the two graph examples and the discrete 0-1 space


def exlf_distance(m: int, n: int) -> int:
    if m == n:
        return 0
    return 2 if m == -n else 1


def exlf3_distance(m: int, n: int) -> int:
    if m == n:
        return 0
    if m == -n:
        return 3
    return 1 if m * n < 0 else 2


def _pm(n: int) -> list[int]:
    return [s * k for k in range(1, n + 1) for s in (1, -1)]


def exlf_graph(n: int) -> Graph:
    verts = [0] + _pm(n)
    return Graph(verts, {frozenset((u, v)) for u, v in itertools.combinations(verts, 2) if u != -v})


def exlf3_graph(n: int) -> Graph:
    verts = _pm(n)
    return Graph(verts, {frozenset((u, v)) for u, v in itertools.combinations(verts, 2) if u * v < 0 and u != -v})


def _closed_form_space(labels, dist, base_label) -> FiniteMetricSpace:
    d = [[Fraction(dist(a, b)) for b in labels] for a in labels]
    return FiniteMetricSpace(tuple(labels), d, labels.index(base_label))


def exlf_space(n: int) -> FiniteMetricSpace:
    """Points ``0, ±1..±n`` with base 0; the closed-form metric, checked against BFS."""
    if n < 1:
        raise ValueError("n >= 1 required")
    space = _closed_form_space([0] + _pm(n), exlf_distance, 0)
    if n >= 3 and graph_metric(exlf_graph(n), base=0).d != space.d:
        raise AssertionError("truncated graph metric differs from the closed form")
    return space


def exlf3_space(n: int) -> FiniteMetricSpace:
    """Points ``±1..±n`` with base 1; the closed-form metric, checked against BFS."""
    if n < 1:
        raise ValueError("n >= 1 required")
    space = _closed_form_space(_pm(n), exlf3_distance, 1)
    if n >= 3 and graph_metric(exlf3_graph(n), base=1).d != space.d:
        raise AssertionError("truncated graph metric differs from the closed form")
    return space


def mprime_space(n: int) -> FiniteMetricSpace:
    """Discrete 0-1 metric on ``0, ±1..±n`` (shortest paths of the complete graph)."""
    return _closed_form_space([0] + _pm(n), lambda a, b: int(a != b), 0)


EXAMPLES = {"exlf": exlf_space, "exlf3": exlf3_space, "mprime": mprime_space}


# ---------------------------------------------------------------------------
# free vectors, Lipschitz functions, norms


def free_vector(space: FiniteMetricSpace, coeffs: Mapping) -> dict:
    """Normalise a coefficient map: exact rationals, zero entries and the base dropped."""
    out = {}
    for lab, c in coeffs.items():
        space.index(lab)
        c = as_fraction(c)
        if c and lab != space.base_label:
            out[lab] = out.get(lab, Fraction(0)) + c
    return {k: v for k, v in out.items() if v}


def lip_constant(f: Mapping, space: FiniteMetricSpace) -> Fraction:
    """Least Lipschitz constant ``max |f(x) - f(y)| / d(x, y)``."""
    vals = [as_fraction(f.get(lab, 0)) for lab in space.labels]
    best = Fraction(0)
    for i, j in itertools.combinations(range(len(vals)), 2):
        q = abs(vals[i] - vals[j]) / space.d[i][j]
        if q > best:
            best = q
    return best


def pairing(f: Mapping, mu: Mapping) -> Fraction:
    return sum((as_fraction(f.get(lab, 0)) * c for lab, c in mu.items()), Fraction(0))


def transport_network(mu: Mapping, space: FiniteMetricSpace) -> FlowNetwork:
    mu = free_vector(space, mu)
    supplies = [mu.get(lab, Fraction(0)) for lab in space.labels]
    supplies[space.base] = -sum(mu.values(), Fraction(0))
    n = len(space)
    arcs = [Arc(i, j, space.d[i][j]) for i in range(n) for j in range(n) if i != j]
    return FlowNetwork(supplies, arcs)


def free_norm_primal(mu: Mapping, space: FiniteMetricSpace) -> Fraction:
    """Optimal transport cost, the base point absorbing ``-sum(mu)``."""
    value, _ = min_cost_flow(transport_network(mu, space))
    return value


def lipschitz_ball(builder: LPBuilder, space: FiniteMetricSpace) -> dict:
    """Add variables ``f(x)`` for non-base points constrained to the 1-Lipschitz ball.

    Returns ``{label: var index}``.  Distances to the base become variable bounds.
    """
    var = {}
    for lab in space.non_base():
        r = space.dist(lab, space.base_label)
        var[lab] = builder.var(-r, r)
    nb = space.non_base()
    for x, y in itertools.combinations(nb, 2):
        r = space.dist(x, y)
        row = {var[x]: Fraction(1), var[y]: Fraction(-1)}
        builder.add(row, LE, r)
        builder.add(row, GE, -r)
    return var


def free_norm_dual(mu: Mapping, space: FiniteMetricSpace, return_witness: bool = False):
    """``sup { <f, mu> : f(base) = 0, Lip(f) <= 1 }`` by exact LP.

    With ``return_witness`` also returns an optimal Lipschitz function.
    """
    mu = free_vector(space, mu)
    b = LPBuilder()
    var = lipschitz_ball(b, space)
    b.objective = {var[lab]: c for lab, c in mu.items()}
    res = b.solve("max")
    if not res.optimal:
        raise RuntimeError(f"dual LP ended with status {res.status}")
    if return_witness:
        f = {lab: res.x[v] for lab, v in var.items()}
        f[space.base_label] = Fraction(0)
        return res.value, f
    return res.value


def free_norm(mu: Mapping, space: FiniteMetricSpace) -> Fraction:
    return free_norm_primal(mu, space)


def l1_mass(mu: Mapping) -> Fraction:
    return sum((abs(as_fraction(c)) for c in mu.values()), Fraction(0))


def _split_signs(x: Mapping):
    pos = sum((c for c in x.values() if c > 0), Fraction(0))
    neg = -sum((c for c in x.values() if c < 0), Fraction(0))
    return pos, neg


def exlf_norm_formula(x: Mapping) -> Fraction:
    """Closed form on the ``exlf`` space: max of the positive mass, negative
    mass and ``|x(n)| + |x(-n)|`` over n."""
    x = {k: as_fraction(v) for k, v in x.items() if k != 0}
    pos, neg = _split_signs(x)
    pair = max((abs(x.get(n, 0)) + abs(x.get(-n, 0)) for n in {abs(k) for k in x}), default=Fraction(0))
    return max(pos, neg, pair)


def mprime_norm_formula(x: Mapping) -> Fraction:
    """Closed form for the 0-1 metric with base 0: ``max(|x+|_1, |x-|_1)``."""
    x = {k: as_fraction(v) for k, v in x.items() if k != 0}
    return max(_split_signs(x))


# ---------------------------------------------------------------------------
# uniformly separated spaces


@dataclass
class SandwichReport:
    a: Fraction
    b: Fraction
    rows: list = field(default_factory=list)  # (mu, lower, norm, upper)

    @property
    def holds(self) -> bool:
        return all(lo <= v <= hi for _, lo, v, hi in self.rows)


def separated_sandwich_check(space: FiniteMetricSpace, a, b, samples: Sequence[Mapping]) -> SandwichReport:
    """Check ``(a/2)|mu|_1 <= |mu| <= (b/2)|mu|_1`` on the star extension at radius b/2."""
    a, b = Fraction(a), Fraction(b)
    lo, hi = space.separation_band()
    if lo < a or hi > b:
        raise ValueError(f"distances span [{lo}, {hi}], outside [{a}, {b}]")
    ext = space.with_star(b / 2)
    rep = SandwichReport(a, b)
    for mu in samples:
        mu = {k: as_fraction(v) for k, v in mu.items() if as_fraction(v)}
        mass = l1_mass(mu)
        rep.rows.append((mu, a / 2 * mass, free_norm_primal(mu, ext), b / 2 * mass))
    return rep


# ---------------------------------------------------------------------------
# 1-Lipschitz functions on the exlf space


@dataclass(frozen=True)
class LipClassification:
    kind: str  # "Type1", "Type2" or "NotOneLipschitz"
    c: Optional[Fraction] = None
    n: Optional[int] = None
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None

    def check_invariants(self, f: Mapping) -> bool:
        vals = {k: as_fraction(v) for k, v in f.items()}
        if self.kind == "Type1":
            return 0 <= self.c <= 1 and all(self.c - 1 <= v <= self.c for v in vals.values())
        if self.kind == "Type2":
            rest = [v for k, v in vals.items() if k not in (self.n, -self.n)]
            return (
                0 < self.a <= 1
                and 0 < self.b <= 1
                and self.a + self.b > 1
                and vals[self.n] == self.a
                and vals[-self.n] == -self.b
                and all(self.a - 1 <= v <= 1 - self.b for v in rest)
            )
        return True


def classify_lip_exlf(f: Mapping, n: int) -> LipClassification:
    """Sort ``f`` (with ``f(0) = 0``) on the ``exlf`` truncation into the two
    structural types of 1-Lipschitz functions, or reject it.

    The decision uses only the structural conditions, never the Lipschitz
    constant, so comparing with :func:`lip_constant` is a real test.
    """
    vals = {k: as_fraction(f.get(k, 0)) for k in [0] + _pm(n)}
    if vals[0] != 0:
        raise ValueError("f must vanish at 0")
    top, bottom = max(vals.values()), min(vals.values())
    if top - bottom <= 1 and 0 <= top <= 1:
        return LipClassification("Type1", c=top)
    for k in _pm(n):
        a, b = vals[k], -vals[-k]
        if not (0 < a <= 1 and 0 < b <= 1 and a + b > 1):
            continue
        rest = [v for j, v in vals.items() if j not in (k, -k)]
        if all(a - 1 <= v <= 1 - b for v in rest):
            return LipClassification("Type2", n=k, a=a, b=b)
    return LipClassification("NotOneLipschitz")


# ---------------------------------------------------------------------------
# LP certificates for the weak-oscillation bounds


@dataclass
class CertificateReport:
    space_name: str
    n: int
    eps: Optional[Fraction]
    lp1: dict = field(default_factory=dict)  # (n, m) -> optimum
    lp1_witness: dict = field(default_factory=dict)
    lp2: dict = field(default_factory=dict)  # (n, k, l) -> optimum or None when infeasible

    @property
    def lp1_max(self) -> Fraction:
        return max(self.lp1.values())

    @property
    def lp2_max(self) -> Optional[Fraction]:
        vals = [v for v in self.lp2.values() if v is not None]
        return max(vals) if vals else None

    @property
    def lp1_ok(self) -> bool:
        return all(v <= 1 for v in self.lp1.values())

    @property
    def lp2_ok(self) -> bool:
        if self.eps is None:
            return True
        return all(v is None or v <= 1 - self.eps for v in self.lp2.values())

    @property
    def ok(self) -> bool:
        return self.lp1_ok and self.lp2_ok


def _gap_row(var, p: int) -> dict:
    row = {}
    if p in var:
        row[var[p]] = Fraction(1)
    if -p in var:
        row[var[-p]] = row.get(var[-p], Fraction(0)) - 1
    return row


def exceptional_pair_certificate(
    space: FiniteMetricSpace,
    pairs: Iterable[int],
    eps=None,
    name: str = "",
) -> CertificateReport:
    """Two LP families bounding how Lipschitz functions can separate ``n`` from ``-n``.

    LP1, for each two pairs ``{n, -n} != {m, -m}``: the largest ``t`` with
    ``f(n) - f(-n) >= t`` and ``f(m) - f(-m) >= t`` over the 1-Lipschitz ball.

    LP2 (when ``eps`` is given), for each oriented pair ``n`` and points
    ``k, l`` off ``{n, -n}``: the largest ``f(k) - f(l)`` subject to
    ``f(n) - f(-n) >= 1 + eps``.  ``None`` records an infeasible program.
    """
    pairs = sorted(set(pairs))
    eps = None if eps is None else as_fraction(eps)
    rep = CertificateReport(name, max(pairs) if pairs else 0, eps)
    for p, q in itertools.combinations(pairs, 2):
        b = LPBuilder()
        var = lipschitz_ball(b, space)
        t = b.var(None, None)
        for r in (p, q):
            row = _gap_row(var, r)
            row[t] = Fraction(-1)
            b.add(row, GE, 0)
        b.objective = {t: Fraction(1)}
        res = b.solve("max")
        rep.lp1[(p, q)] = res.value
        f = {lab: res.x[v] for lab, v in var.items()}
        f[space.base_label] = Fraction(0)
        rep.lp1_witness[(p, q)] = f
    if eps is not None:
        for p in pairs:
            for n in (p, -p):
                others = [lab for lab in space.labels if lab not in (n, -n)]
                for k, l in itertools.permutations(others, 2):
                    b = LPBuilder()
                    var = lipschitz_ball(b, space)
                    b.add(_gap_row(var, n), GE, 1 + eps)
                    obj = {}
                    if k in var:
                        obj[var[k]] = Fraction(1)
                    if l in var:
                        obj[var[l]] = obj.get(var[l], Fraction(0)) - 1
                    b.objective = obj
                    res = b.solve("max")
                    rep.lp2[(n, k, l)] = res.value if res.optimal else None
    return rep


@dataclass
class WitnessReport:
    example: str
    n: int
    member_norms: list
    pair_distances: dict
    separation: Fraction
    diameter: Fraction
    certificate_bound: Fraction
    oscillation_bound: Fraction
    constant_gaps: dict


def alternating_family(example: str, n: int) -> list[dict]:
    """``delta(1), delta(-1), delta(2), ...`` on exlf; ``delta(k) - delta(-k)`` on exlf3."""
    if example == "exlf":
        return [{s * k: Fraction(1)} for k in range(1, n + 1) for s in (1, -1)]
    if example == "exlf3":
        return [{k: Fraction(1), -k: Fraction(-1)} for k in range(1, n + 1)]
    raise ValueError(f"unknown example {example!r}")


def _diff(x: Mapping, y: Mapping) -> dict:
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, Fraction(0)) - v
    return {k: v for k, v in out.items() if v}


def schur_witness_report(example: str, n: int) -> WitnessReport:
    """Exact constants of the witness sequence for the failure of c-Schur."""
    if n < 3:
        raise ValueError("n >= 3 required")
    space = EXAMPLES[example](n)
    fam = alternating_family(example, n)
    norms = [free_norm_primal(x, space) for x in fam]
    dists = {}
    for i, j in itertools.combinations(range(len(fam)), 2):
        dists[(i, j)] = free_norm_primal(_diff(fam[i], fam[j]), space)
    cert = exceptional_pair_certificate(space, range(1, n + 1), name=example)
    bound = cert.lp1_max
    if example == "exlf":
        # consecutive delta(k), delta(-k) realise the oscillation; f-values oscillate by <= bound
        pair_gap = min(dists[(2 * k, 2 * k + 1)] for k in range(n))
        osc = bound
        gaps = {"oscillation/weak-oscillation": pair_gap / osc}
    else:
        # all but one gap f(n)-f(-n) is <= 1 (and by symmetry for -f), so tail pairings differ by <= 2
        pair_gap = min(dists.values())
        osc = 2 * bound
        gaps = {
            "separation/weak-oscillation": pair_gap / osc,
            "norm/cluster-bound": min(norms) / bound,
        }
    return WitnessReport(
        example=example,
        n=n,
        member_norms=norms,
        pair_distances=dists,
        separation=min(dists.values()),
        diameter=max(dists.values()),
        certificate_bound=bound,
        oscillation_bound=osc,
        constant_gaps=gaps,
    )


# ---------------------------------------------------------------------------
# random instances


def _rand_q(rng: random.Random, lo: int, hi: int, max_den: int) -> Fraction:
    return Fraction(rng.randint(lo * max_den, hi * max_den), rng.randint(1, max_den))


def random_metric_space(rng: random.Random, n: int, dim: int = 3, max_den: int = 4) -> FiniteMetricSpace:
    """Distinct rational points of a cube under the l1 metric, plus a constant shift.

    Adding the same positive constant to all off-diagonal distances preserves
    the triangle inequality.
    """
    pts: list[tuple] = []
    while len(pts) < n:
        p = tuple(Fraction(rng.randint(0, 4 * max_den), max_den) for _ in range(dim))
        if p not in pts:
            pts.append(p)
    shift = Fraction(rng.randint(0, 3), rng.randint(1, 3))
    d = [[(sum(abs(a - b) for a, b in zip(p, q)) + shift) if p != q else Fraction(0) for q in pts] for p in pts]
    return FiniteMetricSpace(tuple(range(n)), d, base=rng.randrange(n))


def random_separated_space(rng: random.Random, n: int, a, b) -> FiniteMetricSpace:
    """Symmetric distances drawn from ``[a, b]`` with ``b <= 2a``, hence a metric."""
    a, b = Fraction(a), Fraction(b)
    if b > 2 * a:
        raise ValueError("need b <= 2a for arbitrary band distances to be metric")
    d = [[Fraction(0)] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        t = Fraction(rng.randint(0, 12), 12)
        d[i][j] = d[j][i] = a + (b - a) * t
    return FiniteMetricSpace(tuple(range(n)), d, base=0)


def random_free_vector(rng: random.Random, labels: Sequence, max_num: int = 5, max_den: int = 4, density: float = 0.7) -> dict:
    mu = {}
    for lab in labels:
        if rng.random() < density:
            v = Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))
            if v:
                mu[lab] = v
    return mu
