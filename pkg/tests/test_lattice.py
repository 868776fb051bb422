import numpy as np
import pytest
from hypothesis import given, strategies as st

from linkorders.errors import WindowError
from linkorders.lattice import (
    Laurent,
    LevelZeroModel,
    LinkingModel,
    StratumParams,
    Window,
    annihilator,
    quotient_iso,
)
from linkorders.lattice.algebras import ModelAlgebras, QuadraticExtension
from linkorders.lattice.checks import (
    check_algebras,
    check_complements,
    check_level0,
    check_linking_order,
    check_product_duals,
    check_quotient_iso,
    check_v_modules,
)
from linkorders.lattice.laurent import to_array
from linkorders.lattice.linalg import intersect, left_nullspace, nullspace, rank, rref, solve_rows
from linkorders.lattice.linking import compare_tables

PRIMES = st.sampled_from([2, 3, 5])


@st.composite
def laurents(draw, p=None):
    p = p if p is not None else draw(PRIMES)
    terms = draw(st.dictionaries(st.integers(-4, 4), st.integers(0, p - 1), max_size=5))
    return Laurent(p, terms)


@st.composite
def laurent_triples(draw):
    p = draw(PRIMES)
    return draw(laurents(p)), draw(laurents(p)), draw(laurents(p))


@given(laurent_triples())
def test_laurent_ring_axioms(xyz):
    x, y, z = xyz
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if not (x.is_zero() or y.is_zero()):
        assert (x * y).valuation == x.valuation + y.valuation


@given(PRIMES, st.integers(-5, 5), st.integers(1, 4))
def test_monomial_inverse(p, e, c):
    m = Laurent.monomial(p, e, c)
    if c % p:
        assert m * m.monomial_inverse() == 1


@st.composite
def matrices(draw):
    p = draw(PRIMES)
    rows = draw(st.integers(1, 6))
    cols = draw(st.integers(1, 7))
    flat = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    return p, np.array(flat, dtype=np.int64).reshape(rows, cols)


@given(matrices())
def test_rref_properties(data):
    p, M = data
    R, pivots = rref(M, p)
    assert np.array_equal(rref(R, p)[0], R)
    assert rank(M, p) == rank(M.T, p) == len(pivots)
    for i, c in enumerate(pivots):
        assert R[i, c] == 1 and np.count_nonzero(R[:, c]) == 1
    K = nullspace(M, p)
    assert len(K) == M.shape[1] - len(pivots)
    assert not (M @ K.T % p).any()
    assert not (left_nullspace(M, p) @ M % p).any()


@given(matrices(), st.data())
def test_intersection_dimension(data, draws):
    p, U = data
    flat = draws.draw(st.lists(st.integers(0, p - 1), min_size=3 * U.shape[1], max_size=3 * U.shape[1]))
    V = np.array(flat, dtype=np.int64).reshape(3, U.shape[1])
    W = intersect(U, V, p)
    assert len(W) == rank(U, p) + rank(V, p) - rank(np.vstack([U, V]), p)
    assert rank(np.vstack([U, W]), p) == rank(U, p)
    assert rank(np.vstack([V, W]), p) == rank(V, p)


def test_solve_rows():
    basis = np.array([[1, 0, 2], [0, 1, 1]])
    c = solve_rows(basis, np.array([[2, 1, 2]]), 3)
    assert np.array_equal(c @ basis % 3, [[2, 1, 2]])
    with pytest.raises(ValueError):
        solve_rows(basis, np.array([[0, 0, 1]]), 3)


def test_window_truncation():
    w = Window(-2, 3)
    x = (Laurent(3, {-2: 1, 2: 2, 3: 1}),)
    assert to_array(x, w, 3)[:, 0].tolist() == [1, 0, 0, 0, 2]
    with pytest.raises(WindowError):
        to_array((Laurent.monomial(3, -3),), w, 3)


def test_parameter_validation():
    with pytest.raises(WindowError):
        StratumParams(2, 1, 2, N=9)
    with pytest.raises(ValueError):
        StratumParams(3, 2, 2)
    with pytest.raises(ValueError):
        StratumParams(11, 1, 1)
    assert StratumParams(3, 1, 2).window == Window(-4, 10)


@pytest.mark.parametrize("p,e", [(2, 1), (3, 1), (2, 2), (3, 2), (5, 2)])
def test_extension_is_quadratic_and_separable(p, e):
    E = QuadraticExtension(p, e)
    u = E.element(0, 1)
    assert E.mul(u, u) == E.element(E.c0, E.c1)
    assert E.sigma(E.sigma(u)) == u
    # discriminant c1^2 + 4 c0 is nonzero, so sigma moves u
    assert E.sigma(u) != u


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("e,n", [(2, 1), (2, 3), (1, 1), (1, 2), (1, 3)])
def test_module_identities(p, e, n):
    for check in (check_algebras, check_complements, check_v_modules, check_product_duals, check_linking_order):
        r = check(p, e, n)
        assert r.passed, (check.__name__, r.witness)


def test_v_table_cells_all_exercised():
    seen = set()
    for p in (2, 3):
        for n in (1, 2, 3):
            r = check_v_modules(p, 1, n)
            assert r.passed
            seen.add((n % 2, r.details["dim V^n/V^n+1 (M2)"], r.details["dim V^n/V^n+1 (B)"]))
    assert seen == {(0, 1, 0), (1, 0, 1)}


def test_quotient_ring_shapes():
    ram = check_quotient_iso(3, 2, 1)
    assert ram.passed and ram.details["ring"] == "R_ram(q=3)"
    heis = check_quotient_iso(2, 1, 1)
    assert heis.passed and heis.details["ring"] == "R_heis(q=2)"
    assert heis.details["pairs"] == 64 * 64
    lz = check_level0(2)
    assert lz.passed and lz.details["index"] == 2**6


def test_quotient_iso_is_a_ring_isomorphism():
    iso = quotient_iso(LinkingModel(StratumParams(3, 2, 3)))
    table = compare_tables(iso, 3)
    assert table["mul_mismatches"] == 0 and table["add_mismatches"] == 0
    assert table["distinct_images"] == iso.ring.order == 9


def test_index_of_linking_ideal():
    for e, n, expected in [(2, 1, 3**2), (1, 1, 3**6), (1, 2, 3**6)]:
        m = LinkingModel(StratumParams(3, e, n))
        assert 3 ** (m.linking_order.dim - m.linking_ideal.dim) == expected


def test_annihilator_is_order_reversing():
    m = LinkingModel(StratumParams(2, 1, 1))
    L, Lo = m.linking_order, m.linking_ideal
    assert Lo <= L
    assert m.annihilator(L) <= m.annihilator(Lo)
    assert m.annihilator(Lo) == L


def test_wrong_nu_constant_breaks_duality():
    m = LinkingModel(StratumParams(2, 1, 1))
    d = m.data
    t = Laurent.monomial(2, 1)
    wrong = d.E.mul(d.nu_c, d.E.element(t))
    functional = d.emb1.nu_functional(wrong) + tuple(-x for x in d.emb2.nu_functional(wrong))
    assert annihilator(m.linking_order, functional) != m.linking_ideal


def test_wrong_v_exponent_is_detected(monkeypatch):
    monkeypatch.setattr(ModelAlgebras, "complement_exponent", lambda self, which, m: (m + 1) // 2)
    assert not check_v_modules(2, 1, 2).passed


def test_level0_model_window():
    m = LevelZeroModel(3)
    assert m.annihilator(m.linking_order) == m.linking_ideal
    with pytest.raises(WindowError):
        LevelZeroModel(3, N=5)
