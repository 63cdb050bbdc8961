from fractions import Fraction

import pytest

from schurlab.spaces import L1Real, LinfReal
from schurlab.sums import build_witness_x, build_witness_z, phi_sum_separation_probe, telescoping_identity


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("k", [1, 3])
def test_witness_x_norm(n, k):
    w = build_witness_x(n, k)
    assert w.norm == n + 1
    assert all(x == w.xs[0] for x in w.xs)


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("m", [1, 2, 7, 64])
def test_witness_z_norm(n, m):
    w = build_witness_z(n, m)
    assert w.norm == 1
    assert sum(w.u) == 1
    assert w.t == (1 - Fraction(1, m)) ** n


def test_witness_z_custom_indices():
    w = build_witness_z(2, 3, indices=[2, 5, 9])
    assert w.norm == 1 and len(w.u) == 9


def test_witness_z_rejects_repeats():
    with pytest.raises(ValueError):
        build_witness_z(2, 2, indices=[1, 1])
    with pytest.raises(ValueError):
        build_witness_z(2, 3, indices=[1, 2])
    with pytest.raises(ValueError):
        build_witness_x(0, 1)


def test_telescoping_identity():
    assert all(telescoping_identity(n, m) for n in range(1, 9) for m in (1, 2, 3, 17, 128))
    with pytest.raises(ValueError):
        telescoping_identity(2, 0)


@pytest.mark.parametrize("phi", ["max", "sum", ("lp", 2)])
def test_phi_probe_consistent(phi):
    comps = [L1Real(2), LinfReal(2)]
    fam = [[[1, 0], [0, 1], [1, 1]], [[0, 1], [1, 0], [1, -1]]]
    rep = phi_sum_separation_probe(phi, comps, fam)
    assert rep.consistent
    assert len(rep.composite_norms) == 3


def test_phi_probe_max_values():
    rep = phi_sum_separation_probe("max", [L1Real(1), L1Real(1)], [[[1], [3]], [[2], [0]]])
    assert rep.composite_norms == [2, 3]
    assert rep.composite_separation == 2


def test_phi_probe_shape_errors():
    with pytest.raises(ValueError):
        phi_sum_separation_probe("max", [L1Real(1)], [[[1]], [[1]]])
    with pytest.raises(ValueError):
        phi_sum_separation_probe("max", [L1Real(1), L1Real(1)], [[[1]], [[1], [2]]])
