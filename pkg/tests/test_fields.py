import numpy as np
import pytest
from hypothesis import given, strategies as st

from linkorders.errors import SizeCapError
from linkorders.fields import (
    field_create,
    first_irreducible_fp,
    frobenius,
    generator,
    is_irreducible_fp,
    rel_norm,
    rel_trace,
)

FIELDS = [(2, 1, 1), (3, 1, 1), (2, 2, 1), (2, 1, 2), (3, 1, 2), (2, 2, 2), (5, 1, 2), (7, 1, 2), (2, 3, 2), (3, 2, 2)]
QUADRATIC = [(p, f) for p, f, d in FIELDS if d == 2]


def field_and_pair():
    return st.sampled_from(FIELDS).flatmap(
        lambda t: st.tuples(
            st.just(t),
            st.integers(0, (t[0] ** t[1]) ** t[2] - 1),
            st.integers(0, (t[0] ** t[1]) ** t[2] - 1),
            st.integers(0, (t[0] ** t[1]) ** t[2] - 1),
        )
    )


triples = field_and_pair()


@given(triples)
def test_ring_axioms(data):
    (p, f, d), a, b, c = data
    F = field_create(p, f, d)
    x, y, z = F(a), F(b), F(c)
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == F.zero
    if a:
        assert x * x.inverse() == F.one


def test_characteristic_kills_p():
    for p, f, d in FIELDS:
        F = field_create(p, f, d)
        for x in F.elements():
            acc = F.zero
            for _ in range(p):
                acc = acc + x
            assert acc == F.zero


def test_canonical_polynomials_frozen():
    # first monic irreducibles in lexicographic order of (c0, c1, ...)
    assert first_irreducible_fp(2, 2) == (1, 1, 1)
    assert first_irreducible_fp(2, 3) == (1, 0, 1)
    assert first_irreducible_fp(3, 2) == (1, 0, 1, 1)
    assert field_create(2, 1, 2).poly == (1, 1, 1)
    assert field_create(3, 1, 2).poly == (1, 0, 1)


def test_small_fields_by_hand():
    F4 = field_create(2, 1, 2)
    g = generator(F4)
    assert g * g + g + 1 == F4.zero
    assert g * g == g + 1
    assert g + g * g == F4.one
    assert g**3 == F4.one and g != F4.one
    assert [x.index for x in field_create(3, 1, 1).elements()] == [0, 1, 2]
    assert len(field_create(2, 2, 2).elements()) == 16
    assert generator(field_create(3, 1, 1)).index == 2


def test_generator_of_f9_has_order_8():
    F9 = field_create(3, 1, 2)
    g = generator(F9)
    assert g.multiplicative_order() == 8
    assert F9.gen_index == 4  # 1 + i with i^2 = -1


@pytest.mark.parametrize("p,f", QUADRATIC)
def test_frobenius_is_field_involution(p, f):
    K = field_create(p, f, 2)
    xs = K.elements()
    for x in xs:
        assert frobenius(frobenius(x)) == x
    for x in xs[: K.q]:
        assert frobenius(x) == x
    rng = np.random.default_rng(1)
    for a, b in rng.integers(0, K.order, size=(40, 2)):
        assert frobenius(K(int(a)) * K(int(b))) == frobenius(K(int(a))) * frobenius(K(int(b)))


@pytest.mark.parametrize("p,f", QUADRATIC)
def test_trace_and_norm_counts(p, f):
    K = field_create(p, f, 2)
    q = K.q
    traces = np.bincount(K.rel_trace_table, minlength=q)
    assert (traces == q).all()
    norms = np.bincount(K.rel_norm_table[1:], minlength=q)
    assert norms[0] == 0
    assert (norms[1:] == q + 1).all()


def test_trace_of_subfield_element_doubles():
    K = field_create(3, 1, 2)
    for x in K.subfield.elements():
        assert rel_trace(K(x)) == x + x
    F4 = field_create(2, 1, 2)
    g = generator(F4)
    assert rel_trace(g) == 1
    assert rel_norm(g) == 1


def test_f9_trace_surjective_three_to_one():
    K = field_create(3, 1, 2)
    assert sorted(np.bincount(K.rel_trace_table).tolist()) == [3, 3, 3]


def test_irreducibility_brute_force():
    # x^2 + 1 splits over F_2 and F_5, not over F_3 and F_7
    assert not is_irreducible_fp((1, 0, 1), 2)
    assert is_irreducible_fp((1, 0, 1), 3)
    assert not is_irreducible_fp((1, 0, 1), 5)
    assert is_irreducible_fp((1, 0, 1), 7)


def test_caps_and_bad_arguments():
    with pytest.raises(ValueError):
        field_create(4, 1, 1)
    with pytest.raises(SizeCapError):
        field_create(17, 1, 1)
    with pytest.raises(SizeCapError):
        field_create(7, 2, 2)
    with pytest.raises(ValueError):
        field_create(3, 1, 3)


def test_tables_are_read_only():
    K = field_create(3, 1, 2)
    with pytest.raises(ValueError):
        K.mul_table[0, 0] = 1


def test_cross_field_coercion():
    K = field_create(3, 1, 2)
    k = K.subfield
    assert K(k(2)) == K(2)
    assert K(2).to_subfield() == k(2)
    with pytest.raises(ValueError):
        K(4).to_subfield()
    with pytest.raises(ZeroDivisionError):
        K.zero.inverse()
