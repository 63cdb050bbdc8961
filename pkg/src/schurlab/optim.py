"""Exact rational LP and min-cost flow solvers.

Everything here works on :class:`fractions.Fraction` so that closed-form
norms can be compared to LP optima with ``==``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

LE, EQ, GE = "<=", "==", ">="
_RELATIONS = (LE, EQ, GE)


class Status(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` c.x subject to rows ``(a, rel, b)`` and per-variable bounds.

    ``bounds[j]`` is ``(lo, hi)``; ``None`` means unbounded on that side.
    When ``bounds`` is omitted every variable is nonnegative.
    """

    objective: Sequence[Fraction]
    constraints: Sequence[tuple[Sequence[Fraction], str, Fraction]] = ()
    sense: str = "max"
    bounds: Optional[Sequence[tuple[Optional[Fraction], Optional[Fraction]]]] = None

    def __post_init__(self):
        n = len(self.objective)
        if self.sense not in ("max", "min"):
            raise ValueError(f"unknown sense {self.sense!r}")
        for row, rel, _ in self.constraints:
            if len(row) != n:
                raise ValueError("constraint row length differs from objective length")
            if rel not in _RELATIONS:
                raise ValueError(f"unknown relation {rel!r}")
        if self.bounds is not None and len(self.bounds) != n:
            raise ValueError("bounds length differs from objective length")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def var_bounds(self, j: int):
        if self.bounds is None:
            return Fraction(0), None
        return self.bounds[j]

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        for j in range(self.num_vars):
            lo, hi = self.var_bounds(j)
            if lo is not None and x[j] < lo:
                return False
            if hi is not None and x[j] > hi:
                return False
        for row, rel, rhs in self.constraints:
            lhs = sum((a * xj for a, xj in zip(row, x) if a), Fraction(0))
            if rel == LE and lhs > rhs or rel == GE and lhs < rhs or rel == EQ and lhs != rhs:
                return False
        return True

    def evaluate(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * xj for c, xj in zip(self.objective, x) if c), Fraction(0))


@dataclass(frozen=True)
class LPResult:
    status: Status
    value: Optional[Fraction] = None
    x: Optional[tuple[Fraction, ...]] = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class LPBuilder:
    """Incremental construction of a :class:`LinearProgram` from sparse rows.

    Rows and the objective are dicts ``{var_index: coefficient}``.
    """

    def __init__(self):
        self.bounds: list[tuple[Optional[Fraction], Optional[Fraction]]] = []
        self.rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
        self.objective: dict[int, Fraction] = {}

    def var(self, lo=Fraction(0), hi=None) -> int:
        self.bounds.append((None if lo is None else Fraction(lo), None if hi is None else Fraction(hi)))
        return len(self.bounds) - 1

    def add(self, coeffs: dict[int, Fraction], rel: str, rhs) -> None:
        self.rows.append(({j: Fraction(a) for j, a in coeffs.items() if a}, rel, Fraction(rhs)))

    def build(self, sense: str = "min") -> LinearProgram:
        n = len(self.bounds)
        obj = [Fraction(0)] * n
        for j, c in self.objective.items():
            obj[j] += c
        rows = []
        for coeffs, rel, rhs in self.rows:
            row = [Fraction(0)] * n
            for j, a in coeffs.items():
                row[j] += a
            rows.append((row, rel, rhs))
        return LinearProgram(obj, rows, sense=sense, bounds=list(self.bounds))

    def solve(self, sense: str = "min") -> LPResult:
        return lp_solve(self.build(sense))


# ---------------------------------------------------------------------------
# simplex


class _Tableau:
    """Dense tableau for ``max c.x, A x = b, x >= 0`` with b >= 0.

    Row ``i`` is stored as integers ``a[i][0..n]`` (the last entry is the
    right-hand side) over a positive row denominator, so pivots run on
    Python ints instead of Fraction objects.

    Pivoting uses Dantzig's rule while the objective strictly improves and
    switches to Bland's rule after a degenerate pivot; the switch back only
    happens after a strict improvement, so no basis can repeat.
    """

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.ncols = len(rows[0]) if rows else 0
        self.rows, self.dens = [], []
        for row, b in zip(rows, rhs):
            ints, den = _scale_to_ints(list(row) + [b])
            self.rows.append(ints)
            self.dens.append(den)
        self.basis = basis

    def rhs(self, i: int) -> Fraction:
        return Fraction(self.rows[i][-1], self.dens[i])

    def delete_row(self, i: int) -> None:
        del self.rows[i], self.dens[i], self.basis[i]

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        p = prow[c]
        if p < 0:
            prow[:] = [-v for v in prow]
            p = -p
        self.dens[r] = p  # the pivot row now reads prow / p
        _reduce(prow, self.dens, r)
        p = prow[c]
        nz = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                # row/den - (f/den) * prow/p  ==  (row*p - f*prow) / (den*p)
                for j in range(len(row)):
                    row[j] *= p
                for j in nz:
                    row[j] -= f * prow[j]
                self.dens[i] *= p
                _reduce(row, self.dens, i)
        self.basis[r] = c

    def reduced_costs(self, cost: list[Fraction], allowed: list[bool]):
        """``d_j = c_j - c_B B^-1 A_j`` as an integer row over a common denominator."""
        d = list(cost)
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row, den = self.rows[i], self.dens[i]
                q = cb / den
                for j in range(self.ncols):
                    if row[j]:
                        d[j] -= q * row[j]
        for j in range(self.ncols):
            if not allowed[j]:
                d[j] = Fraction(0)
        ints, den = _scale_to_ints(d)
        return ints

    def objective_value(self, cost: list[Fraction]) -> Fraction:
        return sum((cost[b] * self.rhs(i) for i, b in enumerate(self.basis) if cost[b]), Fraction(0))

    def run(self, cost: list[Fraction], allowed: list[bool]) -> Status:
        # only signs and ratios of the reduced costs matter, so their common
        # positive denominator is dropped
        d = self.reduced_costs(cost, allowed)
        blocked = [j for j in range(self.ncols) if not allowed[j]]
        bland = False
        while True:
            if bland:
                entering = next((j for j in range(self.ncols) if d[j] > 0), None)
            else:
                entering, best = None, 0
                for j in range(self.ncols):
                    if d[j] > best:
                        entering, best = j, d[j]
            if entering is None:
                return Status.OPTIMAL
            # ratio rhs_i / a_i,e is independent of the row denominator
            leave = None
            ln = ld = 0
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    b = row[-1]
                    if leave is None:
                        better = True
                    else:
                        lhs, rhs_ = b * ld, ln * a
                        better = lhs < rhs_ or (lhs == rhs_ and self.basis[i] < self.basis[leave])
                    if better:
                        leave, ln, ld = i, b, a
            if leave is None:
                return Status.UNBOUNDED
            bland = ln == 0
            self.pivot(leave, entering)
            # d <- d - d_e * prow / prow_e, kept integral by scaling d
            prow = self.rows[leave]
            pe = prow[entering]
            f = d[entering]
            for j in range(self.ncols):
                d[j] *= pe
            for j in range(self.ncols):
                if prow[j]:
                    d[j] -= f * prow[j]
            for j in blocked:
                d[j] = 0
            g = math.gcd(*d)
            if g > 1:
                d = [v // g for v in d]


def _scale_to_ints(vals: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for v in vals:
        if v and v.denominator != 1:
            den = math.lcm(den, v.denominator)
    return [v.numerator * (den // v.denominator) if v else 0 for v in vals], den


def _reduce(row: list[int], dens: list[int], i: int) -> None:
    g = math.gcd(math.gcd(*row), dens[i])
    if g > 1:
        row[:] = [v // g for v in row]
        dens[i] //= g


def _standard_form(p: LinearProgram):
    """Map ``p`` to equality form with nonnegative variables.

    Returns (rows, rhs, relations, cost, recover) where ``recover`` maps a
    standard-form solution back to the original variables.
    """
    n = p.num_vars
    # each original var: (offset, [(std_col, coeff), ...])
    mapping: list[tuple[Fraction, list[tuple[int, int]]]] = []
    extra_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
    ncols = 0
    for j in range(n):
        lo, hi = p.var_bounds(j)
        if lo is not None:
            mapping.append((lo, [(ncols, 1)]))
            if hi is not None:
                extra_rows.append(({ncols: Fraction(1)}, LE, hi - lo))
            ncols += 1
        elif hi is not None:
            mapping.append((hi, [(ncols, -1)]))
            ncols += 1
        else:
            mapping.append((Fraction(0), [(ncols, 1), (ncols + 1, -1)]))
            ncols += 2

    def translate(row: Sequence[Fraction], rhs: Fraction):
        out: dict[int, Fraction] = {}
        for j, a in enumerate(row):
            if not a:
                continue
            off, cols = mapping[j]
            rhs -= a * off
            for col, s in cols:
                out[col] = out.get(col, Fraction(0)) + s * a
        return out, rhs

    cons = []
    for row, rel, rhs in p.constraints:
        coeffs, b = translate(row, Fraction(rhs))
        cons.append((coeffs, rel, b))
    cons.extend(extra_rows)

    sign = 1 if p.sense == "max" else -1
    cost_std: dict[int, Fraction] = {}
    const = Fraction(0)
    for j, c in enumerate(p.objective):
        if not c:
            continue
        off, cols = mapping[j]
        const += c * off
        for col, s in cols:
            cost_std[col] = cost_std.get(col, Fraction(0)) + sign * s * c

    def recover(z: list[Fraction]) -> tuple[Fraction, ...]:
        return tuple(off + sum((s * z[col] for col, s in cols), Fraction(0)) for off, cols in mapping)

    return ncols, cons, cost_std, const, recover


def lp_solve(p: LinearProgram) -> LPResult:
    """Solve ``p`` exactly by two-phase simplex.

    Infeasibility and unboundedness are reported through ``status``.
    """
    nstruct, cons, cost_std, const, recover = _standard_form(p)

    # normalise rhs >= 0 and lay out slack / artificial columns
    m = len(cons)
    norm = []
    nslack = 0
    for coeffs, rel, b in cons:
        if b < 0:
            coeffs = {j: -a for j, a in coeffs.items()}
            b = -b
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        norm.append((coeffs, rel, b))
        if rel != EQ:
            nslack += 1
    nart = sum(1 for _, rel, _ in norm if rel != LE)
    ncols = nstruct + nslack + nart
    art_start = nstruct + nslack
    rows, rhs, basis = [], [], []
    s_col, a_col = nstruct, art_start
    for coeffs, rel, b in norm:
        row = [Fraction(0)] * ncols
        for j, a in coeffs.items():
            row[j] = a
        if rel == LE:
            row[s_col] = Fraction(1)
            basis.append(s_col)
            s_col += 1
        else:
            if rel == GE:
                row[s_col] = Fraction(-1)
                s_col += 1
            row[a_col] = Fraction(1)
            basis.append(a_col)
            a_col += 1
        rows.append(row)
        rhs.append(b)

    if m == 0:
        # only sign constraints: optimum at 0 unless some cost is positive
        if any(c > 0 for c in cost_std.values()):
            return LPResult(Status.UNBOUNDED)
        z = [Fraction(0)] * nstruct
        x = recover(z)
        return LPResult(Status.OPTIMAL, p.evaluate(x), x)

    tab = _Tableau(rows, rhs, basis)
    allowed = [True] * ncols

    if nart:
        phase1 = [Fraction(0)] * ncols
        for j in range(art_start, ncols):
            phase1[j] = Fraction(-1)
        tab.run(phase1, allowed)
        if tab.objective_value(phase1) < 0:
            return LPResult(Status.INFEASIBLE)
        # drive zero-level artificials out of the basis; drop redundant rows
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= art_start:
                row = tab.rows[i]
                col = next((j for j in range(art_start) if row[j]), None)
                if col is None:
                    tab.delete_row(i)
                    continue
                tab.pivot(i, col)
            i += 1
        for j in range(art_start, ncols):
            allowed[j] = False

    cost = [Fraction(0)] * ncols
    for j, c in cost_std.items():
        cost[j] = c
    status = tab.run(cost, allowed)
    if status is Status.UNBOUNDED:
        return LPResult(Status.UNBOUNDED)
    z = [Fraction(0)] * ncols
    for i, b in enumerate(tab.basis):
        z[b] = tab.rhs(i)
    x = recover(z[:nstruct])
    return LPResult(Status.OPTIMAL, p.evaluate(x), x)


# ---------------------------------------------------------------------------
# min-cost flow


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    cost: Fraction
    capacity: Optional[Fraction] = None  # None = uncapacitated


@dataclass(frozen=True)
class FlowNetwork:
    supplies: Sequence[Fraction]
    arcs: Sequence[Arc] = field(default_factory=tuple)

    def __post_init__(self):
        if sum(self.supplies, Fraction(0)) != 0:
            raise ValueError("supplies must sum to zero")
        n = len(self.supplies)
        for a in self.arcs:
            if not (0 <= a.tail < n and 0 <= a.head < n):
                raise ValueError(f"arc {a} references a missing node")
            if a.capacity is not None and a.capacity < 0:
                raise ValueError(f"arc {a} has negative capacity")

    def as_lp(self) -> LinearProgram:
        """Node-arc formulation: min cost.flow, out - in = supply."""
        n, k = len(self.supplies), len(self.arcs)
        rows = []
        for v in range(n):
            row = [Fraction(0)] * k
            for i, a in enumerate(self.arcs):
                if a.tail == v:
                    row[i] += 1
                if a.head == v:
                    row[i] -= 1
            rows.append((row, EQ, Fraction(self.supplies[v])))
        bounds = [(Fraction(0), a.capacity) for a in self.arcs]
        return LinearProgram([Fraction(a.cost) for a in self.arcs], rows, sense="min", bounds=bounds)


def min_cost_flow(net: FlowNetwork) -> tuple[Fraction, list[Fraction]]:
    """Successive shortest paths with Dijkstra on reduced costs.

    Returns ``(cost, flow)`` with ``flow[i]`` on ``net.arcs[i]``.  Raises
    ``ValueError`` when the supplies cannot be routed.
    """
    n = len(net.supplies)
    excess = [Fraction(s) for s in net.supplies]
    # residual edges: [head, residual capacity (None = inf), cost, twin index, arc index or -1]
    graph: list[list[list]] = [[] for _ in range(n)]
    for idx, a in enumerate(net.arcs):
        if a.tail == a.head:
            if a.cost < 0 and a.capacity is None:
                raise ValueError("uncapacitated negative self-loop")
            continue
        fwd = [a.head, a.capacity, Fraction(a.cost), len(graph[a.head]), idx]
        bwd = [a.tail, Fraction(0), -Fraction(a.cost), len(graph[a.tail]), -1]
        graph[a.tail].append(fwd)
        graph[a.head].append(bwd)
    flow = [Fraction(0)] * len(net.arcs)

    potential = [Fraction(0)] * n
    if any(a.cost < 0 for a in net.arcs):
        # Bellman-Ford from a virtual root for valid initial potentials
        for _ in range(n):
            changed = False
            for u in range(n):
                for e in graph[u]:
                    if (e[1] is None or e[1] > 0) and potential[u] + e[2] < potential[e[0]]:
                        potential[e[0]] = potential[u] + e[2]
                        changed = True
            if not changed:
                break
        else:
            raise ValueError("negative-cost cycle with positive capacity")

    while any(x > 0 for x in excess):
        dist: list[Optional[Fraction]] = [None] * n
        prev: list[Optional[tuple[int, int]]] = [None] * n
        heap = []
        for v in range(n):
            if excess[v] > 0:
                dist[v] = Fraction(0)
                heap.append((Fraction(0), v))
        heapq.heapify(heap)
        done = [False] * n
        target = None
        while heap:
            dv, v = heapq.heappop(heap)
            if done[v] or dv != dist[v]:
                continue
            done[v] = True
            if excess[v] < 0:
                target = v
                break
            for ei, e in enumerate(graph[v]):
                w, cap, c = e[0], e[1], e[2]
                if cap is not None and cap <= 0:
                    continue
                nd = dv + c + potential[v] - potential[w]
                if dist[w] is None or nd < dist[w]:
                    dist[w] = nd
                    prev[w] = (v, ei)
                    heapq.heappush(heap, (nd, w))
        if target is None:
            raise ValueError("supplies cannot be routed through the network")
        dt = dist[target]
        for v in range(n):
            if dist[v] is not None:
                potential[v] += min(dist[v], dt)
            else:
                potential[v] += dt
        # bottleneck
        amount = -excess[target]
        v = target
        while prev[v] is not None:
            u, ei = prev[v]
            cap = graph[u][ei][1]
            if cap is not None:
                amount = min(amount, cap)
            v = u
        amount = min(amount, excess[v])
        source = v
        v = target
        while prev[v] is not None:
            u, ei = prev[v]
            e = graph[u][ei]
            if e[1] is not None:
                e[1] -= amount
            twin = graph[v][e[3]]
            if twin[1] is not None:
                twin[1] += amount
            if e[4] >= 0:
                flow[e[4]] += amount
            else:
                flow[twin[4]] -= amount
            v = u
        excess[source] -= amount
        excess[target] += amount

    value = sum((a.cost * f for a, f in zip(net.arcs, flow) if f), Fraction(0))
    return value, flow
