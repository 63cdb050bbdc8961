import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import rationals
from schurlab.numbers import ComplexRational, Enclosure, I
from schurlab.seq_quantities import (
    GENERATORS,
    VectorFamily,
    cantor_stage_upper,
    complexified_stage_upper,
    diam_and_separation,
    generate,
    gliding_hump,
    l1_equivalence_constant,
    lower_l1_complex,
    lower_l1_real,
    rosenthal_stage_check,
    staged_report,
)
from schurlab.spaces import L1Complex, L1Real, LinfReal, lower, upper


def test_l1_basis_lower_estimate_is_one():
    for n in range(1, 7):
        assert lower_l1_real(generate("l1-basis", n)) == 1


def test_linf_basis_lower_estimate():
    # e_1, e_2 in l_inf^2: (1/2, -1/2) gives 1/2
    f = VectorFamily(LinfReal(2), [[1, 0], [0, 1]])
    assert lower_l1_real(f) == Fraction(1, 2)


def test_dependent_family_has_zero_estimate():
    f = VectorFamily(L1Real(2), [[1, 0], [1, 0]])
    est = lower_l1_real(f, with_witness=True)
    assert est.value == 0
    assert sum(abs(a) for a in est.coefficients) == 1


def test_e1_ie1_real_and_complex():
    f = generate("l1-basis-rotated", 1)
    real = lower_l1_real(f)
    assert abs(float(real) - 1 / math.sqrt(2)) < 1e-9
    assert real.width <= Fraction(1, 10**12)
    br = lower_l1_complex(f)
    assert br.upper == 0 and br.lower == 0


def test_complex_basis_bracket_is_tight():
    br = lower_l1_complex(generate("l1-basis-complex", 3))
    assert (br.lower, br.upper) == (1, 1)
    assert br.lower_method == "disjoint-support"


def test_complex_bracket_below_real_value():
    rng = random.Random(5)
    for _ in range(10):
        members = [[Fraction(rng.randint(-3, 3)) for _ in range(2)] for _ in range(2)]
        if any(not any(v) for v in members):
            continue
        f = VectorFamily(L1Real(2), members)
        br = lower_l1_complex(f)
        real = lower_l1_real(f)
        assert br.lower <= br.upper <= upper(real)


def test_split_bound_used_for_small_families():
    f = VectorFamily(L1Complex(2), [[1, I], [1, 1]])
    br = lower_l1_complex(f)
    assert "split" in br.lower_method
    assert 0 <= br.lower <= br.upper


@given(st.lists(st.lists(rationals(), min_size=3, max_size=3), min_size=1, max_size=4), st.lists(rationals(), min_size=3, max_size=3))
@settings(max_examples=40)
def test_adding_a_member_never_increases_estimate(members, extra):
    f = VectorFamily(L1Real(3), members)
    g = VectorFamily(L1Real(3), members + [extra])
    assert lower_l1_real(g) <= lower_l1_real(f)


@given(st.lists(st.lists(rationals(), min_size=2, max_size=2), min_size=2, max_size=4))
@settings(max_examples=40)
def test_estimate_at_most_smallest_member_norm(members):
    f = VectorFamily(L1Real(2), members)
    assert lower_l1_real(f) <= min(sum(abs(c) for c in v) for v in members)


def test_equivalence_constant():
    assert l1_equivalence_constant(generate("l1-basis", 4)) == 1
    assert l1_equivalence_constant(VectorFamily(L1Real(1), [[1], [-1]])) == math.inf
    with pytest.raises(ValueError):
        l1_equivalence_constant(VectorFamily(L1Real(1), [[2]]))
    lo, hi = l1_equivalence_constant(generate("l1-basis-complex", 2))
    assert lo == hi == 1


def test_diam_and_separation():
    diam, sep = diam_and_separation(generate("l1-basis", 3))
    assert diam == sep == 2
    with pytest.raises(ValueError):
        diam_and_separation(generate("l1-basis", 1))


def test_generate_rejects_unknown():
    with pytest.raises(KeyError):
        generate("nope", 2)
    with pytest.raises(ValueError):
        generate("l1-basis", 0)
    assert set(GENERATORS) >= {"l1-basis", "cantor-projections", "l1-basis-rotated", "exlf3-alternating"}


def test_zero_padded_family_has_zero_estimate():
    assert lower_l1_real(generate("l1-basis-zeros", 2)) == 0


# -- gliding hump


def test_gliding_hump_example():
    y = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    sel = gliding_hump(y, 0, Fraction(1, 10))
    assert sel.indices == (0, 1, 2)
    assert sel.boundaries == (0, 1, 2, 3)
    assert sel.check(y, Fraction(1, 10))


def test_gliding_hump_skips_vectors_without_mass_ahead():
    y = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1]]
    sel = gliding_hump(y, 0, Fraction(1, 4))
    assert sel.indices == (0, 2)
    assert sel.check(y, Fraction(1, 4))


def test_gliding_hump_rejects_bad_input():
    with pytest.raises(ValueError):
        gliding_hump([], 0, 1)
    with pytest.raises(ValueError):
        gliding_hump([[1]], 0, 0)


@given(
    st.lists(st.lists(rationals(), min_size=6, max_size=6), min_size=1, max_size=8),
    st.integers(0, 3),
    rationals(max_num=5, max_den=8, nonzero=True).map(abs),
)
@settings(max_examples=100)
def test_gliding_hump_invariant(y, m, eps):
    sel = gliding_hump(y, m, eps)
    assert sel.check(y, eps)
    assert list(sel.indices) == sorted(set(sel.indices))


# -- finite-stage Rosenthal inequality


@pytest.mark.parametrize("tag, stage", [("l1-basis", 3), ("l1-basis-zeros", 2), ("cantor-projections", 3), ("exlf3-alternating", 3)])
def test_rosenthal_registered(tag, stage):
    rep = rosenthal_stage_check(generate(tag, stage))
    assert rep.holds


def test_rosenthal_tight_on_basis():
    assert rosenthal_stage_check(generate("l1-basis", 4)).tight


# -- staged values


def test_cantor_and_complexified_agree():
    for n in range(1, 7):
        a, b = cantor_stage_upper(n), complexified_stage_upper(n)
        assert abs(float(a) - float(b)) < 1e-12


def test_first_stages():
    assert abs(float(cantor_stage_upper(1)) - 1) < 1e-12
    assert abs(float(cantor_stage_upper(2)) - 1 / math.sqrt(2)) < 1e-12


def test_staged_report_decreasing():
    rep = staged_report("cantor-dcj-upper", 8)
    assert rep.monotone(strict=True)
    assert len(rep.stages) == 8
    assert rep.floats()[0] > 2 / math.pi


def test_staged_report_unknown():
    with pytest.raises(KeyError):
        staged_report("nope", 2)


def test_l1_basis_staged_exact():
    rep = staged_report("l1-basis-cjr", 4)
    assert rep.ok and rep.last_error() == 0
