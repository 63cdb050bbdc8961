import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import rationals
from schurlab import free_space as fs
from schurlab.numbers import ComplexRational, Enclosure, I, root_of_unity
from schurlab.optim import LPBuilder
from schurlab.spaces import (
    ChainNorm,
    ComplexifiedL1,
    FreeSpace,
    L1Complex,
    L1Real,
    LinfComplex,
    LinfReal,
    PhiSum,
    ShapeError,
    SignSup,
    chain_norm,
    complexified_norm,
    lower,
    norm,
    phi_sum_norm,
    phi_sandwich_holds,
    sign_sup_norm,
    upper,
)

PREC = Fraction(1, 10**12)


def test_basic_norms():
    assert norm(L1Real(3), [1, -2, 3]) == 6
    assert norm(LinfReal(3), [1, -2, 3]) == 3
    assert norm(L1Complex(2), [ComplexRational(3, 4), 1]) == 6
    assert norm(LinfComplex(2), [ComplexRational(3, 4), 1]) == 5


def test_shape_errors():
    with pytest.raises(ShapeError):
        norm(L1Real(2), [1, 2, 3])
    with pytest.raises(ShapeError):
        sign_sup_norm([1] * 21)
    with pytest.raises(ShapeError):
        complexified_norm([1, 2], [1])


def test_chain_examples():
    assert chain_norm(1, [[1, 0], [1, 0]]) == 3
    u = [Fraction(1, 2), Fraction(1, 2)]
    assert chain_norm(Fraction(1, 4), [[c / 2 for c in u], u]) == 1
    assert chain_norm(0, [[0, 0], [0, 0]]) == 0
    assert norm(ChainNorm(2, 2), (1, [[1, 0], [1, 0]])) == 3


def test_free_space_model():
    sp = fs.FiniteMetricSpace(("o", "p"), [[0, 1], [1, 0]])
    assert norm(FreeSpace(sp), {"p": 1}) == 1


def test_sign_sup_examples():
    v, s = sign_sup_norm([1, 1])
    assert v == Enclosure.exact(2) and s == (1, 1)
    assert sign_sup_norm([Fraction(1, 2), Fraction(-1, 4), Fraction(1, 4)])[0] == Enclosure.exact(1)
    n = 4
    alpha = [root_of_unity(j, 2 * n) * Fraction(1, 2 * n) for j in range(2 * n)]
    value = sign_sup_norm(alpha)[0]
    # antipodal pairs double a half-circle sum: 2 * |sum_{j<n} w^j| / (2n)
    assert abs(float(value) - 1 / (n * math.sin(math.pi / (2 * n)))) < 1e-9
    assert float(value) <= 2 / math.pi + 0.02


def test_complexified_examples():
    assert complexified_norm([1, 0], [0, 0])[0] == Enclosure.exact(1)
    v = complexified_norm([1], [1])[0]
    assert v.lo ** 2 <= 2 <= v.hi ** 2 and v.width <= PREC
    assert complexified_norm([1, -1], [0, 0])[0] == Enclosure.exact(2)
    assert norm(ComplexifiedL1(2), [1, -1]) == 2


def _float_sign_sup(alpha):
    best = 0.0
    for s in itertools.product((1, -1), repeat=len(alpha)):
        best = max(best, abs(sum(si * complex(a) for si, a in zip(s, alpha))))
    return best


def _float_angle_sup(x, y, steps=20000):
    # independent oracle: dense sampling of a x + b y over the unit circle
    best = 0.0
    for k in range(steps):
        t = 2 * math.pi * k / steps
        best = max(best, sum(abs(math.cos(t) * float(a) + math.sin(t) * float(b)) for a, b in zip(x, y)))
    return best


@given(st.lists(st.tuples(rationals(), rationals()), min_size=1, max_size=7))
@settings(max_examples=60)
def test_sign_sup_against_float_enumeration(pairs):
    alpha = [ComplexRational(a, b) for a, b in pairs]
    v, s = sign_sup_norm(alpha)
    assert abs(float(v) - _float_sign_sup(alpha)) < 1e-9
    assert v.width <= PREC


@given(st.lists(st.tuples(rationals(), rationals()), min_size=1, max_size=5))
@settings(max_examples=25)
def test_complexified_against_sampling(pairs):
    x, y = [a for a, _ in pairs], [b for _, b in pairs]
    v = float(complexified_norm(x, y)[0])
    sampled = _float_angle_sup(x, y, 4000)
    assert sampled <= v + 1e-9
    # the sampled sup loses at most a second-order term
    assert v - sampled <= 1e-4 * (1 + v)


@given(st.lists(st.tuples(rationals(), rationals()), min_size=1, max_size=10))
@settings(max_examples=200)
def test_complexified_equals_sign_sup(pairs):
    x, y = [a for a, _ in pairs], [b for _, b in pairs]
    a = complexified_norm(x, y)[0]
    b = sign_sup_norm([ComplexRational(p, q) for p, q in pairs])[0]
    assert abs(a.mid - b.mid) <= PREC


@given(st.lists(rationals(), min_size=1, max_size=8))
def test_complexified_real_vector_is_l1(x):
    assert complexified_norm(x, [0] * len(x))[0] == Enclosure.exact(sum(abs(v) for v in x))


def test_phi_sum_examples():
    comps = [L1Real(1), L1Real(1)]
    assert phi_sum_norm("max", comps, [[3], [-4]]) == 4
    assert phi_sum_norm("sum", comps, [[3], [-4]]) == 7
    assert phi_sum_norm(("lp", 2), comps, [[3], [-4]]) == 5
    assert phi_sum_norm("max", [L1Real(2), L1Real(2)], [[1, 0], [1, 0]]) == 1
    with pytest.raises(ValueError):
        phi_sum_norm("median", comps, [[1], [1]])


def test_phi_sandwich():
    samples = [list(t) for t in itertools.product(range(3), repeat=3)]
    for phi in ("max", "sum", ("lp", 2), ("lp", 3)):
        assert phi_sandwich_holds(phi, samples)


# -- homogeneity and triangle inequality on random vectors for every model


def _rand_vec(model, rng):
    q = lambda: Fraction(rng.randint(-6, 6), rng.randint(1, 4))  # noqa: E731
    if isinstance(model, FreeSpace):
        return {lab: q() for lab in model.space.non_base()}
    if isinstance(model, ChainNorm):
        return (q(), [[q() for _ in range(model.d)] for _ in range(model.n)])
    if isinstance(model, PhiSum):
        return tuple(_rand_vec(c, rng) for c in model.components)
    if model.complex_coords:
        return [ComplexRational(q(), q()) for _ in range(model.flat_dim)]
    return [q() for _ in range(model.flat_dim)]


MODELS = [
    L1Real(4),
    LinfReal(4),
    L1Complex(3),
    LinfComplex(3),
    SignSup(4),
    ComplexifiedL1(4),
    FreeSpace(fs.exlf3_space(3)),
    ChainNorm(3, 2),
    PhiSum((L1Real(2), LinfReal(3)), "max"),
    PhiSum((L1Real(2), LinfReal(3)), "sum"),
    PhiSum((L1Real(2), L1Complex(2)), ("lp", 2)),
]


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
def test_norm_axioms(model):
    rng = random.Random(hash(type(model).__name__) % 1000)
    for _ in range(60):
        x, y = _rand_vec(model, rng), _rand_vec(model, rng)
        fx, fy = model.flatten(x), model.flatten(y)
        c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        nx, ny = model.norm(x), model.norm(y)
        nsum = model.norm_flat([a + b for a, b in zip(fx, fy)])
        ncx = model.norm_flat([a * c for a in fx])
        if model.polyhedral and not isinstance(nx, Enclosure):
            assert ncx == abs(c) * nx
            assert nsum <= nx + ny
        else:
            slack = 4 * PREC * (1 + abs(c))
            assert abs(float(upper(ncx)) - abs(float(c)) * float(upper(nx))) <= 1e-9
            assert lower(nsum) <= upper(nx) + upper(ny) + slack


def _lp_norm(model, coords):
    """Minimise the LP epigraph at a fixed point; equals the norm for polyhedral models."""
    b = LPBuilder()
    exprs = []
    one = b.var(1, 1)
    for c in coords:
        if model.complex_coords:
            c = ComplexRational.of(c)
            exprs.append(({one: c.re} if c.re else {}, {one: c.im} if c.im else {}))
        else:
            exprs.append({one: c} if c else {})
    b.objective = model.epigraph(b, exprs)
    return b.solve("min").value


@pytest.mark.parametrize("model", [m for m in MODELS if m.polyhedral], ids=lambda m: type(m).__name__)
def test_epigraph_matches_norm(model):
    rng = random.Random(8)
    for _ in range(15):
        x = _rand_vec(model, rng)
        assert _lp_norm(model, model.flatten(x)) == model.norm(x)


@pytest.mark.parametrize("model", [L1Complex(2), SignSup(3)], ids=lambda m: type(m).__name__)
def test_cut_epigraph_is_a_lower_model(model):
    rng = random.Random(9)
    for _ in range(10):
        x = _rand_vec(model, rng)
        assert _lp_norm(model, model.flatten(x)) <= lower(model.norm(x))


@given(st.integers(1, 4), st.lists(rationals(), min_size=12, max_size=12), rationals())
@settings(max_examples=300)
def test_chain_norm_sandwich(n, vals, t):
    xs = [vals[3 * j : 3 * j + 3] for j in range(n)]
    comps = [abs(t)] + [sum(abs(v) for v in x) for x in xs]
    v = chain_norm(t, xs)
    assert max(comps) <= v <= sum(comps)
