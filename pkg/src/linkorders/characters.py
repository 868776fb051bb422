"""Additive and multiplicative characters of finite fields, and Gauss sums."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import NotRegularError, TrivialCharacterError
from .fields import FieldElement, FieldSpec


@lru_cache(maxsize=None)
def roots_of_unity(m: int) -> np.ndarray:
    """``exp(2*pi*i*j/m)`` for ``j = 0..m-1``, each evaluated from its exact angle."""
    table = np.exp(2j * np.pi * np.arange(m) / m)
    table.setflags(write=False)
    return table


def _as_index(field: FieldSpec, x) -> int:
    if isinstance(x, FieldElement):
        return field(x).index
    return int(x)


class AdditiveCharacter:
    """``x -> zeta_p ** Tr(shift * x)``, the trace taken down to the prime field."""

    def __init__(self, field: FieldSpec, shift=1):
        self.field = field
        self.shift = _as_index(field, shift)
        exps = field.abs_trace_table[field.mul_table[self.shift]]
        exps.setflags(write=False)
        self.exponents = exps
        self.values = roots_of_unity(field.p)[exps]

    @property
    def is_trivial(self) -> bool:
        return self.shift == 0

    def __call__(self, x) -> complex:
        return complex(self.values[_as_index(self.field, x)])

    def inverse(self) -> "AdditiveCharacter":
        return AdditiveCharacter(self.field, int(self.field.neg_table[self.shift]))

    def __eq__(self, other):
        return isinstance(other, AdditiveCharacter) and other.field is self.field and other.shift == self.shift

    def __hash__(self):
        return hash(("add", id(self.field), self.shift))

    def __repr__(self):
        return f"AdditiveCharacter(F_{self.field.order}, shift={self.shift})"


class MultiplicativeCharacter:
    """``g**m -> zeta_{Q-1} ** (index*m)`` for the canonical generator g; ``0 -> 0``."""

    def __init__(self, field: FieldSpec, index: int):
        self.field = field
        self.modulus = field.order - 1
        self.index = int(index) % self.modulus
        values = np.zeros(field.order, dtype=complex)
        values[1:] = roots_of_unity(self.modulus)[(self.index * field.log_table[1:]) % self.modulus]
        values.setflags(write=False)
        self.values = values

    @property
    def is_trivial(self) -> bool:
        return self.index == 0

    def __call__(self, x) -> complex:
        return complex(self.values[_as_index(self.field, x)])

    def inverse(self) -> "MultiplicativeCharacter":
        return MultiplicativeCharacter(self.field, -self.index)

    def __pow__(self, e: int) -> "MultiplicativeCharacter":
        return MultiplicativeCharacter(self.field, self.index * e)

    def __mul__(self, other: "MultiplicativeCharacter") -> "MultiplicativeCharacter":
        if other.field is not self.field:
            raise ValueError("characters of different fields")
        return MultiplicativeCharacter(self.field, self.index + other.index)

    def __eq__(self, other):
        return isinstance(other, MultiplicativeCharacter) and other.field is self.field and other.index == self.index

    def __hash__(self):
        return hash(("mul", id(self.field), self.index))

    def __repr__(self):
        return f"MultiplicativeCharacter(F_{self.field.order}, index={self.index})"


def _require_quadratic(theta: MultiplicativeCharacter) -> FieldSpec:
    if theta.field.degree != 2:
        raise ValueError("regularity is defined for characters of the quadratic extension")
    return theta.field


def factors_through_norm(theta: MultiplicativeCharacter) -> int | None:
    """Brute-force search for chi on k^x with theta = chi o norm.

    Returns the index of chi, or None if theta is regular.  Comparison is done
    on exponents, so it is exact: both sides are roots of unity of order
    dividing q^2 - 1.
    """
    K = _require_quadratic(theta)
    k = K.subfield
    Q1, q1 = K.order - 1, k.q - 1
    nz = np.arange(1, K.order)
    lhs = (theta.index * K.log_table[nz]) % Q1
    norm_logs = k.log_table[K.rel_norm_table[nz]]
    # chi_j(y) = zeta_{q-1}^{j log y} = zeta_{Q-1}^{j (q+1) log y}
    for j in range(q1):
        rhs = (j * (k.q + 1) * norm_logs) % Q1
        if np.array_equal(lhs, rhs):
            return j
    return None


def is_regular(theta: MultiplicativeCharacter) -> bool:
    """True iff theta does not factor through the norm k2^x -> k^x."""
    return factors_through_norm(theta) is None


def is_regular_index(q: int, index: int) -> bool:
    """Arithmetic shortcut for :func:`is_regular`: (q + 1) does not divide the index."""
    return index % (q + 1) != 0


def regular_indices(K: FieldSpec) -> list[int]:
    return [j for j in range(K.order - 1) if is_regular_index(K.q, j)]


def gauss_sum(theta: MultiplicativeCharacter, nu: AdditiveCharacter) -> complex:
    """Sum over nonzero alpha in k2 of theta(alpha) * nu(rel_trace(alpha))."""
    K = _require_quadratic(theta)
    if nu.field is not K.subfield:
        raise ValueError("nu must be a character of the subfield k")
    if nu.is_trivial:
        raise TrivialCharacterError("Gauss sum needs a nontrivial additive character")
    nz = np.arange(1, K.order)
    return complex(np.sum(theta.values[nz] * nu.values[K.rel_trace_table[nz]]))


def require_regular(theta: MultiplicativeCharacter) -> None:
    if not is_regular(theta):
        raise NotRegularError(f"{theta} factors through the norm")
