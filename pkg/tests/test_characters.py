import cmath

import numpy as np
import pytest

from linkorders.characters import (
    AdditiveCharacter,
    MultiplicativeCharacter,
    factors_through_norm,
    gauss_sum,
    is_regular,
    is_regular_index,
    regular_indices,
    require_regular,
)
from linkorders.errors import NotRegularError
from linkorders.fields import field_create

QUADRATIC = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


def _f9_oracle_gauss(j, shift):
    """Gauss sums over F_3[i] written out with Python integers and cmath only."""

    def mul(x, y):
        return ((x[0] * y[0] - x[1] * y[1]) % 3, (x[0] * y[1] + x[1] * y[0]) % 3)

    g = (1, 1)
    powers = [(1, 0)]
    for _ in range(7):
        powers.append(mul(powers[-1], g))
    assert len(set(powers)) == 8
    total = 0
    for m, (a, b) in enumerate(powers):
        trace = (2 * a) % 3
        total += cmath.exp(2j * cmath.pi * j * m / 8) * cmath.exp(2j * cmath.pi * shift * trace / 3)
    return total


@pytest.mark.parametrize("j", range(8))
@pytest.mark.parametrize("shift", [1, 2])
def test_gauss_sum_matches_hand_written_f9(j, shift):
    K = field_create(3, 1, 2)
    tau = gauss_sum(MultiplicativeCharacter(K, j), AdditiveCharacter(K.subfield, shift))
    assert abs(tau - _f9_oracle_gauss(j, shift)) < 1e-12


@pytest.mark.parametrize("p,f", QUADRATIC)
def test_gauss_identity_and_absolute_value(p, f):
    K = field_create(p, f, 2)
    q = K.q
    for shift in range(1, q):
        nu = AdditiveCharacter(K.subfield, shift)
        for j in regular_indices(K):
            th = MultiplicativeCharacter(K, j)
            tau = gauss_sum(th, nu)
            assert abs(tau * gauss_sum(th.inverse(), nu.inverse()) - q * q) < 1e-9
            assert abs(abs(tau) - q) < 1e-9


def test_trivial_theta_gives_minus_one():
    K = field_create(5, 1, 2)
    assert abs(gauss_sum(MultiplicativeCharacter(K, 0), AdditiveCharacter(K.subfield, 1)) + 1) < 1e-12


@pytest.mark.parametrize("p,f", QUADRATIC)
def test_regular_count_and_shortcut(p, f):
    K = field_create(p, f, 2)
    q = K.q
    regular = regular_indices(K)
    assert len(regular) == q * q - q
    for j in range(K.order - 1):
        brute = factors_through_norm(MultiplicativeCharacter(K, j)) is None
        assert brute == is_regular_index(q, j)


def test_regularity_examples():
    K4 = field_create(2, 1, 2)
    assert not is_regular(MultiplicativeCharacter(K4, 0))
    assert is_regular(MultiplicativeCharacter(K4, 1))
    K9 = field_create(3, 1, 2)
    assert not is_regular(MultiplicativeCharacter(K9, 4))
    with pytest.raises(NotRegularError):
        require_regular(MultiplicativeCharacter(K9, 4))


@pytest.mark.parametrize("p,f,d", [(3, 1, 1), (2, 2, 1), (3, 1, 2), (2, 2, 2)])
def test_orthogonality(p, f, d):
    F = field_create(p, f, d)
    n = F.order
    mult = np.array([MultiplicativeCharacter(F, j).values for j in range(n - 1)])
    gram = mult[:, 1:] @ mult[:, 1:].conj().T
    assert np.allclose(gram, (n - 1) * np.eye(n - 1))
    add = np.array([AdditiveCharacter(F, s).values for s in range(n)])
    assert np.allclose(add @ add.conj().T, n * np.eye(n))


def test_character_homomorphisms():
    K = field_create(5, 1, 2)
    th = MultiplicativeCharacter(K, 7)
    nu = AdditiveCharacter(K, 3)
    rng = np.random.default_rng(0)
    for a, b in rng.integers(1, K.order, size=(50, 2)):
        x, y = K(int(a)), K(int(b))
        assert abs(th(x * y) - th(x) * th(y)) < 1e-12
        assert abs(nu(x + y) - nu(x) * nu(y)) < 1e-12
    assert th(0) == 0
    assert (th * th.inverse()).is_trivial
    assert AdditiveCharacter(K, 0).is_trivial
