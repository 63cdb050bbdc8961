import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import rationals
from schurlab.numbers import ComplexRational, Enclosure, I
from schurlab.subset_selection import (
    best_subset_bruteforce,
    halfplane_select,
    roots_ratio,
    roots_witness,
)

PREC = Fraction(1, 10**12)


def test_four_roots():
    r = halfplane_select([1, I, -1, -I])
    assert r.subset == (0, 1)
    assert r.total == Enclosure.exact(4)
    assert abs(float(r.value) - math.sqrt(2)) < 1e-12
    assert abs(float(r.ratio) - math.sqrt(2) / 4) < 1e-12


def test_singleton_and_pair():
    assert halfplane_select([5]).ratio == Enclosure.exact(1)
    r = halfplane_select([3, ComplexRational(0, 4)])
    assert r.subset == (0, 1) and r.ratio == Enclosure.exact(Fraction(5, 7))


def test_zeros():
    r = halfplane_select([0, 0])
    assert r.subset == () and r.ratio == Enclosure.exact(1)
    # zeros are never selected
    assert 1 not in halfplane_select([1, 0, 2]).subset


def test_bruteforce_examples():
    subset, value = best_subset_bruteforce([1, -1])
    assert value == Enclosure.exact(1) and subset == (0,)
    _, value = best_subset_bruteforce([1, I, -1, -I])
    assert abs(float(value) - math.sqrt(2)) < 1e-12
    with pytest.raises(ValueError):
        best_subset_bruteforce([1] * 21)


def _float_brute(lam):
    # independent float oracle over all subsets
    z = [complex(x) for x in lam]
    return max(abs(sum(c)) for r in range(len(z) + 1) for c in itertools.combinations(z, r))


@given(st.lists(st.tuples(rationals(), rationals()), min_size=1, max_size=9))
@settings(max_examples=150)
def test_halfplane_matches_bruteforce(pairs):
    lam = [ComplexRational(a, b) for a, b in pairs]
    sel = halfplane_select(lam)
    _, value = best_subset_bruteforce(lam)
    assert abs(sel.value.mid - value.mid) <= PREC
    assert abs(float(value) - _float_brute(lam)) < 1e-9
    s = ComplexRational()
    for j in sel.subset:
        s = s + lam[j]
    assert s == sel.subset_sum
    if sel.total.hi > 0:
        assert float(sel.ratio.lo) >= 1 / math.pi - 1e-12


def test_boundary_points_counted():
    # the best set needs both points on one line through the origin direction
    lam = [1, 1, ComplexRational(0, 1), ComplexRational(0, -1)]
    _, value = best_subset_bruteforce(lam)
    assert abs(halfplane_select(lam).value.mid - value.mid) <= PREC


def test_tie_break_is_deterministic():
    lam = [1, I, -1, -I]
    assert halfplane_select(lam) == halfplane_select(list(lam))


@pytest.mark.parametrize("n, best, ratio", [(1, 1.0, 0.5), (2, math.sqrt(2), math.sqrt(2) / 4)])
def test_roots_small(n, best, ratio):
    w = roots_witness(n)
    assert abs(float(w.best_value) - best) < 1e-12
    assert abs(float(w.ratio) - ratio) < 1e-12
    assert len(w.points) == 2 * n


def test_roots_large_stage():
    assert abs(float(roots_ratio(64)) - 1 / math.pi) < 2e-4


def test_roots_ratio_strictly_decreasing():
    vals = [roots_ratio(n) for n in range(1, 257)]
    assert all(b.hi < a.lo for a, b in zip(vals, vals[1:]))
    assert all(v.lo > Fraction(1) / Fraction(math.pi) for v in vals[:-1] if float(v.lo) - 1 / math.pi > 1e-12)
    assert float(vals[-1].lo) > 1 / math.pi


@pytest.mark.parametrize("n", range(1, 9))
def test_roots_best_subset_is_half_circle(n):
    w = roots_witness(n)
    subset = set(w.best_subset)
    assert len(subset) == n
    assert any(all((s + k) % (2 * n) in subset for k in range(n)) for s in range(2 * n))


def test_random_oracle_agreement():
    rng = random.Random(77)
    for _ in range(200):
        m = rng.randint(1, 12)
        lam = [ComplexRational(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9), rng.randint(1, 5))) for _ in range(m)]
        _, value = best_subset_bruteforce(lam)
        assert abs(halfplane_select(lam).value.mid - value.mid) <= PREC
