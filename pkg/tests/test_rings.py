import numpy as np
import pytest
from hypothesis import given, strategies as st

from linkorders.errors import NotAUnitError, SizeCapError, TrivialCharacterError
from linkorders.rings import HeisenbergRing, LevelZeroRing, MatrixRing, RamifiedRing, RingElement

RINGS = {
    "ram2": RamifiedRing(2),
    "ram4": RamifiedRing(2, 2),
    "ram9": RamifiedRing(3, 2, 2),
    "heis2": HeisenbergRing(2),
    "heis3": HeisenbergRing(3, 1, 2),
    "mat3": MatrixRing(3),
    "lz2": LevelZeroRing(2),
    "lz3": LevelZeroRing(3),
}


@st.composite
def ring_triples(draw):
    ring = RINGS[draw(st.sampled_from(sorted(RINGS)))]
    codes = st.integers(0, ring.order - 1)
    return ring, draw(codes), draw(codes), draw(codes)


@given(ring_triples())
def test_ring_axioms(data):
    R, x, y, z = data
    assert R.mul(R.mul(x, y), z) == R.mul(x, R.mul(y, z))
    assert R.mul(x, R.add(y, z)) == R.add(R.mul(x, y), R.mul(x, z))
    assert R.mul(R.add(x, y), z) == R.add(R.mul(x, z), R.mul(y, z))
    assert R.add(x, y) == R.add(y, x)
    assert R.add(x, R.neg(x)) == R.zero
    assert R.mul(R.one, x) == x == R.mul(x, R.one)


@given(ring_triples())
def test_character_is_additive(data):
    R, x, y, _ = data
    e = R.nu_exponent(np.array([x, y, R.add(x, y)]))
    assert (e[0] + e[1]) % R.p == e[2]


@pytest.mark.parametrize("name", sorted(RINGS))
def test_inverses_and_unit_closure(name):
    R = RINGS[name]
    u = R.units()
    assert np.all(R.mul(u, R.inv(u)) == R.one)
    assert np.all(R.mul(R.inv(u), u) == R.one)
    rng = np.random.default_rng(0)
    a, b = rng.choice(u, 300), rng.choice(u, 300)
    assert np.all(R.is_unit(R.mul(a, b)))


@pytest.mark.parametrize(
    "ring,count",
    [(RamifiedRing(3), 6), (HeisenbergRing(2), 48), (LevelZeroRing(2), 18), (HeisenbergRing(3), 8 * 81), (MatrixRing(3), 48)],
)
def test_unit_counts(ring, count):
    assert len(ring.units()) == count
    assert ring.unit_group.order == count


def test_nondegenerate_pairing():
    # the only y with nu(xy) = 1 for every x is y = 0
    for R in RINGS.values():
        if R.order > 4096:
            continue
        x = R.elements()
        degenerate = [y for y in range(R.order) if not R.nu_exponent(R.mul(x, np.full_like(x, y))).any()]
        assert degenerate == [0]


@given(st.integers(0, 63), st.integers(0, 63))
def test_heisenberg_matches_literal_matrices(x, y):
    R = HeisenbergRing(2)
    prod = R.matrix(int(R.mul(x, y)))
    A, B = R.matrix(x), R.matrix(y)
    for i in range(3):
        for j in range(3):
            assert prod[i][j] == sum((A[i][k] * B[k][j] for k in range(3)), R.K.zero)


@pytest.mark.parametrize("p", [2, 3])
def test_normalized_defect_is_additive(p):
    R = HeisenbergRing(p)
    u = R.units()
    a = np.repeat(u, len(u))
    b = np.tile(u, len(u))
    d = R.normalized_defect
    k = R.k
    assert np.array_equal(d(R.mul(a, b)), k.add_table[d(a), d(b)])
    q = R.q
    assert np.count_nonzero(R.defect(u) == 0) == (q * q - 1) * q**3


def test_raw_defect_is_not_additive():
    R = HeisenbergRing(3)
    u = R.units()
    a = np.repeat(u, len(u))
    b = np.tile(u, len(u))
    k = R.k
    assert not np.array_equal(R.defect(R.mul(a, b)), k.add_table[R.defect(a), R.defect(b)])


def test_encode_decode_roundtrip():
    for R in RINGS.values():
        for code in np.random.default_rng(1).integers(0, R.order, 30):
            assert R.encode(*R.decode(int(code))) == code


def test_ring_element_wrapper():
    R = RamifiedRing(3)
    x = RingElement(R, R.encode(2, 1))
    assert (x * x.inverse()) == RingElement(R, R.one)
    with pytest.raises(NotAUnitError):
        RingElement(R, R.encode(0, 1)).inverse()
    with pytest.raises(TypeError):
        x + RingElement(RamifiedRing(2), 0)


def test_errors():
    with pytest.raises(TrivialCharacterError):
        RamifiedRing(3, 1, 0)
    with pytest.raises(TrivialCharacterError):
        HeisenbergRing(3, 1, 0)
    with pytest.raises(SizeCapError):
        HeisenbergRing(13, 1)
    R = HeisenbergRing(2)
    with pytest.raises(NotAUnitError):
        R.inv(np.array([0]))
