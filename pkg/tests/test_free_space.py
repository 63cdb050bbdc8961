import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import rationals
from schurlab import free_space as fs


def two_points():
    return fs.FiniteMetricSpace(("o", "p"), [[0, 1], [1, 0]], base=0)


def test_two_point_space():
    sp = two_points()
    assert fs.free_norm_primal({"p": 1}, sp) == 1
    assert fs.free_norm_dual({"p": 1}, sp) == 1


def test_metric_violation_names_the_triple():
    d = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    with pytest.raises(fs.MetricError) as err:
        fs.FiniteMetricSpace(("a", "b", "c"), d)
    assert set(err.value.points) == {"a", "b", "c"}


def test_asymmetric_distances_rejected():
    with pytest.raises(fs.MetricError):
        fs.FiniteMetricSpace((0, 1), [[0, 1], [2, 0]])


def test_json_round_trip():
    sp = fs.exlf3_space(3)
    again = fs.FiniteMetricSpace.from_json(sp.to_json())
    assert again == sp


@pytest.mark.parametrize("n", [3, 10, 50])
def test_graph_metrics_match_closed_forms(n):
    g1 = fs.graph_metric(fs.exlf_graph(n), base=0)
    for a, b in itertools.product(g1.labels, repeat=2):
        assert g1.dist(a, b) == fs.exlf_distance(a, b)
    g3 = fs.graph_metric(fs.exlf3_graph(n), base=1)
    for a, b in itertools.product(g3.labels, repeat=2):
        assert g3.dist(a, b) == fs.exlf3_distance(a, b)


def test_example_distances():
    assert fs.exlf_distance(2, -2) == 2
    assert fs.exlf_distance(2, 3) == 1
    assert fs.exlf3_distance(2, -2) == 3
    assert fs.exlf3_distance(2, -3) == 1
    assert fs.exlf3_distance(2, 3) == 2


def test_disconnected_graph_rejected():
    with pytest.raises(ValueError):
        fs.graph_metric(fs.Graph((1, 2, 3), {frozenset((1, 2))}))


def test_duality_on_random_spaces():
    rng = random.Random(11)
    for _ in range(60):
        sp = fs.random_metric_space(rng, rng.randint(2, 10))
        mu = fs.random_free_vector(rng, sp.labels)
        value, f = fs.free_norm_dual(mu, sp, return_witness=True)
        assert fs.free_norm_primal(mu, sp) == value
        # the dual witness is 1-Lipschitz and attains the value
        assert fs.lip_constant(f, sp) <= 1
        assert fs.pairing(f, mu) == value


@st.composite
def exlf_vectors(draw, n=5):
    labels = [s * k for k in range(1, n + 1) for s in (1, -1)]
    return {lab: draw(rationals()) for lab in labels}


@given(exlf_vectors())
@settings(max_examples=40)
def test_exlf_formula_matches_lp(x):
    assert fs.exlf_norm_formula(x) == fs.free_norm_dual(x, fs.exlf_space(5))


@given(exlf_vectors())
@settings(max_examples=40)
def test_mprime_formula_matches_lp(x):
    assert fs.mprime_norm_formula(x) == fs.free_norm_dual(x, fs.mprime_space(5))


def test_zero_vector():
    assert fs.free_norm_primal({}, fs.exlf_space(3)) == 0
    assert fs.free_norm_dual({}, fs.exlf_space(3)) == 0


def test_exlf_constants():
    sp = fs.exlf_space(5)
    for k in range(1, 6):
        assert fs.free_norm_primal({k: 1, -k: -1}, sp) == 2
        assert fs.free_norm_primal({k: 1}, sp) == 1


def test_mprime_pair():
    # with the base absorbing mass, two unit masses of the same sign cost 2
    assert fs.free_norm_primal({1: 1, -1: 1}, fs.mprime_space(3)) == 2
    assert fs.free_norm_primal({1: 1, -1: -1}, fs.mprime_space(3)) == 1


def test_exlf3_witness_report():
    rep = fs.schur_witness_report("exlf3", 6)
    assert set(rep.member_norms) == {3}
    assert set(rep.pair_distances.values()) == {4}
    assert rep.certificate_bound == 1


@pytest.mark.parametrize("n", [3, 4])
def test_exlf_certificate_small(n):
    cert = fs.exceptional_pair_certificate(fs.exlf_space(n), range(1, n + 1), eps=Fraction(1, 4))
    assert cert.ok
    assert cert.lp2_max == Fraction(3, 4)


@given(st.lists(rationals(max_num=3, max_den=3), min_size=11, max_size=11))
@settings(max_examples=200)
def test_lip_classification_matches_lipschitz_constant(vals):
    labels = [s * k for k in range(1, 6) for s in (1, -1)]
    f = dict(zip(labels, vals[1:]))
    f[0] = Fraction(0)
    sp = fs.exlf_space(5)
    cls = fs.classify_lip_exlf(f, 5)
    one_lip = fs.lip_constant(f, sp) <= 1
    assert (cls.kind != "NotOneLipschitz") == one_lip
    assert cls.check_invariants(f)


def test_classification_examples():
    assert fs.classify_lip_exlf({0: 0, 1: 1, -1: -1, 2: 0, -2: 0}, 2).kind == "Type2"
    assert fs.classify_lip_exlf({0: 0, 1: Fraction(1, 2), -1: Fraction(-1, 2), 2: 0, -2: 0}, 2).kind == "Type1"
    assert fs.classify_lip_exlf({0: 0, 1: 2, -1: 0, 2: 0, -2: 0}, 2).kind == "NotOneLipschitz"


def test_sandwich_on_separated_spaces():
    rng = random.Random(3)
    for _ in range(30):
        a = Fraction(rng.randint(1, 3))
        b = a + Fraction(rng.randint(0, 4 * int(a)), 4)
        sp = fs.random_separated_space(rng, rng.randint(2, 6), a, b)
        rep = fs.separated_sandwich_check(sp, a, b, [fs.random_free_vector(rng, sp.labels) for _ in range(4)])
        assert rep.holds


def test_sandwich_rejects_band_violation():
    sp = fs.exlf_space(3)
    with pytest.raises(ValueError):
        fs.separated_sandwich_check(sp, 2, 3, [{}])
