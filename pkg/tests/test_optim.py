import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from schurlab.optim import (
    EQ,
    GE,
    LE,
    Arc,
    FlowNetwork,
    LinearProgram,
    LPBuilder,
    Status,
    lp_solve,
    min_cost_flow,
)


def test_single_variable_bound():
    p = LinearProgram([1], [([1], LE, 3)], sense="max")
    res = lp_solve(p)
    assert res.status is Status.OPTIMAL and res.value == 3


def test_simplex_face():
    p = LinearProgram([1, 1], [([1, 1], LE, 1)], sense="max")
    assert lp_solve(p).value == 1


def test_infeasible_and_unbounded_are_statuses():
    assert lp_solve(LinearProgram([1], [([1], GE, 2), ([1], LE, 1)])).status is Status.INFEASIBLE
    assert lp_solve(LinearProgram([1], [([1], GE, 0)], sense="max")).status is Status.UNBOUNDED


def test_free_and_bounded_variables():
    b = LPBuilder()
    x = b.var(None, None)
    y = b.var(-2, 5)
    b.add({x: 1, y: 1}, EQ, Fraction(1, 3))
    b.objective = {x: 1}
    res = b.solve("min")
    assert res.value == Fraction(1, 3) - 5
    assert res.x[y] == 5


def test_degenerate_program_terminates():
    # classic cycling example under the textbook largest-coefficient rule
    c = [Fraction(3, 4), -150, Fraction(1, 50), -6]
    rows = [
        ([Fraction(1, 4), -60, Fraction(-1, 25), 9], LE, 0),
        ([Fraction(1, 2), -90, Fraction(-1, 50), 3], LE, 0),
        ([0, 0, 1, 0], LE, 1),
    ]
    res = lp_solve(LinearProgram(c, rows, sense="max"))
    assert res.value == Fraction(1, 20)


def test_flow_examples():
    assert min_cost_flow(FlowNetwork([1, -1], [Arc(0, 1, 1)]))[0] == 1
    arcs = [Arc(a, b, 1) for a in range(3) for b in range(3) if a != b]
    assert min_cost_flow(FlowNetwork([2, -1, -1], arcs))[0] == 2
    assert min_cost_flow(FlowNetwork([0, 0], [Arc(0, 1, 1)]))[0] == 0


def test_unbalanced_supplies_rejected():
    with pytest.raises(ValueError):
        FlowNetwork([1, 0], [Arc(0, 1, 1)])


def _random_network(rng, n):
    sup = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n - 1)]
    sup.append(-sum(sup))
    arcs = []
    for a in range(n):
        for b in range(n):
            if a != b and rng.random() < 0.7:
                arcs.append(Arc(a, b, Fraction(rng.randint(0, 6), rng.randint(1, 3))))
    # a cycle keeps every instance feasible
    arcs += [Arc(i, (i + 1) % n, 10) for i in range(n)]
    return FlowNetwork(sup, arcs)


def test_flow_matches_lp_on_random_instances():
    rng = random.Random(2024)
    for _ in range(100):
        net = _random_network(rng, rng.randint(2, 10))
        value, flow = min_cost_flow(net)
        res = lp_solve(net.as_lp())
        assert res.value == value
        # conservation holds exactly
        bal = [Fraction(0)] * len(net.supplies)
        for arc, f in zip(net.arcs, flow):
            bal[arc.tail] += f
            bal[arc.head] -= f
        assert bal == list(net.supplies)


@st.composite
def small_lps(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 4))
    coef = st.integers(-5, 5)
    obj = [draw(coef) for _ in range(n)]
    rows = [([draw(coef) for _ in range(n)], draw(st.sampled_from([LE, GE, EQ])), draw(st.integers(-6, 6))) for _ in range(m)]
    # a box keeps everything bounded
    rows += [([int(i == j) for j in range(n)], LE, 10) for i in range(n)]
    return LinearProgram(obj, rows, sense=draw(st.sampled_from(["max", "min"])))


@given(small_lps())
@settings(max_examples=150)
def test_lp_agrees_with_scipy(p):
    res = lp_solve(p)
    sign = -1 if p.sense == "max" else 1
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for row, rel, rhs in p.constraints:
        row = [float(a) for a in row]
        if rel == LE:
            A_ub.append(row), b_ub.append(float(rhs))
        elif rel == GE:
            A_ub.append([-a for a in row]), b_ub.append(-float(rhs))
        else:
            A_eq.append(row), b_eq.append(float(rhs))
    ref = linprog(
        [sign * float(c) for c in p.objective],
        A_ub=A_ub or None,
        b_ub=b_ub or None,
        A_eq=A_eq or None,
        b_eq=b_eq or None,
        bounds=[(0, None)] * p.num_vars,
        method="highs",
    )
    if ref.status == 2:
        assert res.status is Status.INFEASIBLE
    else:
        assert res.status is Status.OPTIMAL
        assert np.isclose(float(res.value), sign * ref.fun, atol=1e-7)
        # the reported solution is feasible and attains the value exactly
        assert p.is_feasible(res.x)
        assert p.evaluate(res.x) == res.value


def test_deterministic():
    rng = random.Random(5)
    net = _random_network(rng, 8)
    assert lp_solve(net.as_lp()) == lp_solve(net.as_lp())
