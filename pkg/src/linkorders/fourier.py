"""Complex functions on finite rings and the self-dual Fourier transform

    dft(f)(y) = N**-0.5 * sum_x f(x) * nu(x * y),    N = #ring.
"""
from __future__ import annotations

import numpy as np

from .characters import roots_of_unity
from .errors import NotAUnitError, SizeCapError
from .kernels import bilinear_sum
from .rings import FiniteRing, RingElement

MAX_DFT_ORDER = 2 * 10**4


class RingFunction:
    """A complex-valued function on a ring, stored as values indexed by element code."""

    def __init__(self, ring: FiniteRing, values):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (ring.order,):
            raise ValueError(f"expected {ring.order} values, got shape {values.shape}")
        self.ring = ring
        self.values = values

    @classmethod
    def indicator(cls, ring: FiniteRing, codes) -> "RingFunction":
        v = np.zeros(ring.order, dtype=np.complex128)
        v[np.asarray(codes)] = 1
        return cls(ring, v)

    def __call__(self, x):
        if isinstance(x, RingElement):
            x = x.code
        return self.values[x]

    def __add__(self, other: "RingFunction"):
        return RingFunction(self.ring, self.values + other.values)

    def __sub__(self, other: "RingFunction"):
        return RingFunction(self.ring, self.values - other.values)

    def __mul__(self, c):
        return RingFunction(self.ring, self.values * c)

    __rmul__ = __mul__

    def __neg__(self):
        return RingFunction(self.ring, -self.values)

    def reflect(self) -> "RingFunction":
        """x -> f(-x)."""
        return RingFunction(self.ring, self.values[self.ring.neg(self.ring.elements())])

    def check_inverse(self) -> "RingFunction":
        """y -> f(y^-1) on units, 0 on non-units."""
        R = self.ring
        out = np.zeros(R.order, dtype=np.complex128)
        u = R.units()
        out[u] = self.values[R.inv(u)]
        return RingFunction(R, out)

    def max_off(self, mask) -> float:
        """Largest |f| outside the given boolean mask."""
        off = np.abs(self.values[~mask])
        return float(off.max()) if off.size else 0.0

    def is_supported_on_units(self, tol: float = 1e-9) -> bool:
        return self.max_off(self.ring.is_unit(self.ring.elements())) < tol


def _check_size(ring: FiniteRing):
    if ring.order > MAX_DFT_ORDER:
        raise SizeCapError(f"dense transform limited to rings of order <= {MAX_DFT_ORDER}, got {ring.order}")


def dft_many(ring: FiniteRing, F: np.ndarray, backend: str | None = None) -> np.ndarray:
    """Transform the columns of an (order, m) array at once."""
    _check_size(ring)
    F = np.asarray(F, dtype=np.complex128)
    comps = ring.components(ring.elements())
    out = bilinear_sum(F, comps, ring.bilinear_terms, roots_of_unity(ring.p), backend)
    return out / np.sqrt(ring.order)


def dft(f: RingFunction, backend: str | None = None) -> RingFunction:
    return RingFunction(f.ring, dft_many(f.ring, f.values[:, None], backend)[:, 0])


def dft_at(f: RingFunction, y) -> complex:
    """A single value of the transform, summed directly from ring multiplication."""
    R = f.ring
    x = R.elements()
    y = y.code if isinstance(y, RingElement) else int(y)
    return complex(np.sum(f.values * R.nu(R.mul(x, np.full_like(x, y)))) / np.sqrt(R.order))


def translate(side: str, g, f: RingFunction) -> RingFunction:
    """Left translate y -> f(g^-1 y) or right translate y -> f(y g) by a unit g."""
    R = f.ring
    g = g.code if isinstance(g, RingElement) else int(g)
    if not R.is_unit(g):
        raise NotAUnitError("translation needs a unit")
    y = R.elements()
    gs = np.full_like(y, g)
    if side == "left":
        src = R.mul(R.inv(gs), y)
    elif side == "right":
        src = R.mul(y, gs)
    else:
        raise ValueError("side must be 'left' or 'right'")
    return RingFunction(R, f.values[src])
