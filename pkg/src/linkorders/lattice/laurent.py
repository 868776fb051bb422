"""Finite Laurent polynomials over F_p and truncation windows.

Elements of F = F_p((t)) that occur in the lattice model are always finite
sums of monomials, so they are stored exactly; truncation to a window
``[lo, hi)`` of exponents happens only when a module is turned into an F_p
vector space.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import WindowError


class Laurent:
    """sum c_i t^i with finitely many nonzero c_i in F_p."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms=None):
        self.p = p
        clean = {}
        for e, c in (terms or {}).items():
            c %= p
            if c:
                clean[int(e)] = c
        self.terms = clean

    @classmethod
    def const(cls, p: int, c: int) -> "Laurent":
        return cls(p, {0: c})

    @classmethod
    def monomial(cls, p: int, e: int, c: int = 1) -> "Laurent":
        return cls(p, {e: c})

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Laurent(self.p, out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.p, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[int, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return Laurent(self.p, out)

    __rmul__ = __mul__

    def _lift(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            return other
        return Laurent.const(self.p, int(other))

    def shift(self, k: int) -> "Laurent":
        return Laurent(self.p, {e + k: c for e, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def valuation(self) -> float:
        return min(self.terms) if self.terms else float("inf")

    def coefficient(self, e: int) -> int:
        return self.terms.get(e, 0)

    def monomial_inverse(self) -> "Laurent":
        if len(self.terms) != 1:
            raise ValueError(f"{self} is not a monomial")
        (e, c), = self.terms.items()
        return Laurent(self.p, {-e: pow(c, self.p - 2, self.p)})

    def __eq__(self, other):
        other = self._lift(other)
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}t^{e}" for e, c in sorted(self.terms.items()))


@dataclass(frozen=True)
class Window:
    """Exponents lo <= i < hi; an element is stored as a (hi - lo, dim) array."""

    lo: int
    hi: int

    @property
    def length(self) -> int:
        return self.hi - self.lo

    def widen(self, below: int = 0, above: int = 0) -> "Window":
        return Window(self.lo - below, self.hi + above)


def to_array(x, window: Window, p: int) -> np.ndarray:
    """Coefficients of an algebra element (sequence of Laurent) on the window.

    Terms at or above ``hi`` are dropped (everything is modulo t^hi); terms
    below ``lo`` raise :class:`WindowError`.
    """
    out = np.zeros((window.length, len(x)), dtype=np.int64)
    for a, coord in enumerate(x):
        for e, c in coord.terms.items():
            if e < window.lo:
                raise WindowError(f"term t^{e} lies below the window [{window.lo}, {window.hi})")
            if e < window.hi:
                out[e - window.lo, a] = c % p
    return out


def flatten(arr: np.ndarray) -> np.ndarray:
    """Degree-major flattening: low-degree coordinates come first."""
    return arr.reshape(-1)
