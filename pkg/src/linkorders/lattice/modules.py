"""O_F-modules of an algebra as F_p-subspaces of a truncation window.

A module M is represented by the image of M intersected with t^lo * Lambda
in t^lo * Lambda / t^hi * Lambda, where Lambda is the coordinate lattice.
Coordinates are flattened degree-major, so a row's leading entries are its
lowest powers of t; the reduced echelon basis is canonical.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import WindowError
from .algebras import Algebra, Element
from .laurent import Laurent, Window, to_array
from .linalg import intersect, left_nullspace, rank, rref

# extra low degrees used when a module contains whole F-lines
LINE_MARGIN = 6


def _shifts(arr: np.ndarray) -> list[np.ndarray]:
    """t^k x for k >= 0, as flattened rows, until everything falls off the window."""
    L = arr.shape[0]
    rows = []
    for k in range(L):
        shifted = np.zeros_like(arr)
        shifted[k:] = arr[: L - k]
        if shifted.any():
            rows.append(shifted.reshape(-1))
    return rows


class LatticeModule:
    """Window truncation of an O_F-module, with O_F-generators when it is a lattice."""

    def __init__(self, algebra: Algebra, window: Window, rows: np.ndarray,
                 gens: Sequence[Element] | None = None, label: str = ""):
        self.algebra, self.window, self.label = algebra, window, label
        width = window.length * algebra.dim
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, width)
        self.basis = rref(rows, algebra.p)[0] if len(rows) else rows
        self.gens = list(gens) if gens is not None else None

    # --- constructors ---------------------------------------------------------
    @classmethod
    def span(cls, algebra: Algebra, window: Window, gens: Sequence[Element] = (),
             lines: Sequence[Element] = (), label: str = "") -> "LatticeModule":
        """O_F-span of ``gens`` plus the F-span of ``lines``.

        Lines are unbounded below, so they are spanned in a wider window and
        then cut back to the elements with no terms below ``window.lo``.
        """
        p, dim = algebra.p, algebra.dim
        gens, lines = list(gens), list(lines)
        wide = window.widen(below=LINE_MARGIN) if lines else window
        rows = []
        for g in gens:
            rows += _shifts(to_array(g, wide, p))
        for ell in lines:
            v = int(min(c.valuation for c in ell))
            start = wide.lo - v
            anchored = tuple(c.shift(start) for c in ell)
            rows += _shifts(to_array(anchored, wide, p))
        width = wide.length * dim
        M = np.array(rows, dtype=np.int64).reshape(-1, width)
        if lines:
            R, pivots = rref(M, p)
            cut = LINE_MARGIN * dim
            keep = [i for i, c in enumerate(pivots) if c >= cut]
            M = R[keep][:, cut:]
        return cls(algebra, window, M, gens=None if lines else gens, label=label)

    # --- basic queries -----------------------------------------------------------
    @property
    def dim(self) -> int:
        """Dimension over F_p of the truncation."""
        return len(self.basis)

    def _same_frame(self, other: "LatticeModule"):
        if self.algebra is not other.algebra or self.window != other.window:
            raise ValueError("modules live in different algebras or windows")

    def __eq__(self, other):
        if not isinstance(other, LatticeModule):
            return NotImplemented
        self._same_frame(other)
        return self.basis.shape == other.basis.shape and bool(np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.window, self.basis.tobytes()))

    def __le__(self, other: "LatticeModule") -> bool:
        self._same_frame(other)
        if self.dim == 0:
            return True
        return rank(np.vstack([other.basis, self.basis]), self.algebra.p) == other.dim

    def __add__(self, other: "LatticeModule") -> "LatticeModule":
        self._same_frame(other)
        gens = self.gens + other.gens if self.gens is not None and other.gens is not None else None
        return LatticeModule(self.algebra, self.window, np.vstack([self.basis, other.basis]), gens)

    def __and__(self, other: "LatticeModule") -> "LatticeModule":
        self._same_frame(other)
        return LatticeModule(self.algebra, self.window, intersect(self.basis, other.basis, self.algebra.p))

    def contains(self, x: Element) -> bool:
        row = to_array(x, self.window, self.algebra.p).reshape(1, -1)
        return rank(np.vstack([self.basis, row]), self.algebra.p) == self.dim

    def vector(self, x: Element) -> np.ndarray:
        return to_array(x, self.window, self.algebra.p).reshape(-1)

    def project(self, window: Window) -> "LatticeModule":
        """Reduce modulo t^window.hi (a window with the same lower end and a lower top)."""
        if window.lo != self.window.lo or window.hi > self.window.hi:
            raise ValueError("can only lower the top of the window")
        width = window.length * self.algebra.dim
        return LatticeModule(self.algebra, window, self.basis[:, :width])

    def __repr__(self):
        name = self.label or "module"
        return f"<{name} in {self.algebra.name}, F_p-dim {self.dim} on [{self.window.lo}, {self.window.hi})>"


def module_product(W1: LatticeModule, W2: LatticeModule, label: str = "") -> LatticeModule:
    """O_F-span of all products; both factors must carry generators."""
    W1._same_frame(W2)
    if W1.gens is None or W2.gens is None:
        raise ValueError("products need O_F-generators of both factors")
    A = W1.algebra
    gens = [A.mul(x, y) for x in W1.gens for y in W2.gens]
    return LatticeModule.span(A, W1.window, gens, label=label)


def pairing_matrix(W: LatticeModule, functional: Sequence[Laurent], window: Window) -> np.ndarray:
    """P[(i, a), (j, k)] = coefficient of t^0 in nu-trace of (t^i e_a)(t^k g_j)."""
    if W.gens is None:
        raise ValueError("the annihilator needs O_F-generators")
    A = W.algebra
    values = []
    for g in W.gens:
        for a in range(A.dim):
            prod = A.mul(A.basis(a), g)
            s = Laurent(A.p)
            for lam, coord in zip(functional, prod):
                s = s + lam * coord
            values.append(s)
    lowest = min((int(v.valuation) for v in values if not v.is_zero()), default=0)
    kmax = max(0, -window.lo - lowest) + 1
    P = np.zeros((window.length, A.dim, len(W.gens), kmax), dtype=np.int64)
    for idx, s in enumerate(values):
        j, a = divmod(idx, A.dim)
        for e, c in s.terms.items():
            for i in range(window.lo, window.hi):
                k = -e - i
                if 0 <= k < kmax:
                    P[i - window.lo, a, j, k] = c
    return P.reshape(window.length * A.dim, -1)


def annihilator(W: LatticeModule, functional: Sequence[Laurent], certify: bool = True,
                label: str = "") -> LatticeModule:
    """{x in A : nu_S(x W) = 1} on W's window, certified against a window two degrees taller."""
    A = W.algebra
    p = A.p
    window = W.window
    result = LatticeModule(A, window, left_nullspace(pairing_matrix(W, functional, window), p),
                           label=label)
    if certify:
        tall = window.widen(above=2)
        W_tall = LatticeModule.span(A, tall, W.gens)
        taller = LatticeModule(A, tall, left_nullspace(pairing_matrix(W_tall, functional, tall), p))
        if taller.project(window) != result:
            raise WindowError(f"annihilator of {W.label or 'module'} changes when the window grows")
    return result
