import numpy as np
import pytest

from linkorders.groups import direct_product
from linkorders.rings import HeisenbergRing, MatrixRing, RamifiedRing


def commuting_pair_count(G):
    a = np.repeat(G.codes, G.order)
    b = np.tile(G.codes, G.order)
    return int(np.count_nonzero(G.mul_codes(a, b) == G.mul_codes(b, a)))


@pytest.mark.parametrize("q_p,classes", [(2, 3), (3, 8)])
def test_gl2_class_counts(q_p, classes):
    G = MatrixRing(q_p).unit_group
    assert G.order == (q_p**2 - 1) * (q_p**2 - q_p)
    assert len(G.conjugacy_classes) == classes


@pytest.mark.parametrize(
    "G",
    [MatrixRing(2).unit_group, MatrixRing(3).unit_group, HeisenbergRing(2).unit_group, RamifiedRing(5).unit_group],
    ids=["GL2(2)", "GL2(3)", "heis(2)", "ram(5)"],
)
def test_class_count_matches_burnside(G):
    # number of classes = #{(g, h): gh = hg} / |G|
    assert len(G.conjugacy_classes) * G.order == commuting_pair_count(G)
    assert G.conjugacy_classes.sizes.sum() == G.order


def test_class_labels_are_conjugation_invariant():
    G = MatrixRing(3).unit_group
    labels = G.conjugacy_classes.labels
    rng = np.random.default_rng(2)
    g = rng.integers(0, G.order, 200)
    x = rng.integers(0, G.order, 200)
    assert np.array_equal(labels[G.conj(g, x)], labels[x])


def test_direct_product_classes_multiply():
    G, H = MatrixRing(2).unit_group, RamifiedRing(3).unit_group
    P = direct_product(G, H)
    assert P.order == G.order * H.order
    assert len(P.conjugacy_classes) == len(G.conjugacy_classes) * len(H.conjugacy_classes)
    assert len(P.conjugacy_classes) * P.order == commuting_pair_count(P)


def test_subgroup_and_cosets():
    ring = HeisenbergRing(2)
    G = ring.unit_group
    for S in (ring.U, ring.U1, ring.T, ring.H, ring.scalars):
        assert G.is_subgroup(S)
        assert G.order % S.order == 0
    reps, labels = G.left_cosets(ring.H)
    assert len(reps) == G.order // ring.H.order
    assert np.bincount(labels).tolist() == [ring.H.order] * len(reps)


@pytest.mark.parametrize("p", [2, 3])
def test_heisenberg_center_and_commutators(p):
    ring = HeisenbergRing(p)
    H = ring.H
    assert np.array_equal(H.center().codes, ring.U.codes)
    a = np.repeat(np.arange(H.order), H.order)
    b = np.tile(np.arange(H.order), H.order)
    comm = H.mul(H.mul(a, b), H.mul(H.inv(a), H.inv(b)))
    assert np.array_equal(np.unique(H.codes[comm]), ring.U1.codes)


def test_power_and_inverse():
    G = MatrixRing(3).unit_group
    for g in range(G.order):
        assert G.power(g, G.order) == G.identity
        assert int(G.mul(g, G.inv(g))) == G.identity
