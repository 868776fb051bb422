"""Finite groups given by element codes and vectorized multiplication.

A group here is a sorted array of integer codes together with functions that
multiply and invert arrays of codes elementwise.  Positions in the sorted code
array give the canonical enumeration used by characters and representations.
"""
from __future__ import annotations

from functools import cached_property
from typing import Callable

import numpy as np

CodeOp2 = Callable[[np.ndarray, np.ndarray], np.ndarray]
CodeOp1 = Callable[[np.ndarray], np.ndarray]


class FiniteGroup:
    def __init__(self, codes, mul: CodeOp2, inv: CodeOp1, identity: int, name: str = "G"):
        codes = np.unique(np.asarray(codes, dtype=np.int64))
        codes.setflags(write=False)
        self.codes = codes
        self.mul_codes = mul
        self.inv_codes = inv
        self.identity_code = int(identity)
        self.name = name

    @property
    def order(self) -> int:
        return len(self.codes)

    def __len__(self):
        return len(self.codes)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    # --- positions <-> codes --------------------------------------------------
    def contains(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, self.order - 1)
        return self.codes[pos] == codes

    def index(self, codes) -> np.ndarray:
        """Positions of the given codes; raises if any is not a group element."""
        codes = np.asarray(codes, dtype=np.int64)
        pos = np.searchsorted(self.codes, codes)
        pos = np.minimum(pos, self.order - 1)
        if not np.all(self.codes[pos] == codes):
            raise ValueError(f"codes not in {self.name}")
        return pos

    @property
    def identity(self) -> int:
        return int(self.index(self.identity_code))

    def mul(self, i, j) -> np.ndarray:
        return self.index(self.mul_codes(self.codes[i], self.codes[j]))

    def inv(self, i) -> np.ndarray:
        return self.index(self.inv_codes(self.codes[i]))

    def conj(self, g, x) -> np.ndarray:
        """Positions of g x g^-1."""
        gc, xc = self.codes[g], self.codes[x]
        return self.index(self.mul_codes(self.mul_codes(gc, xc), self.inv_codes(gc)))

    # --- structure ------------------------------------------------------------
    @cached_property
    def conjugacy_classes(self) -> "ClassPartition":
        labels = np.full(self.order, -1, dtype=np.int64)
        inverses = self.inv_codes(self.codes)
        reps = []
        for x in range(self.order):
            if labels[x] >= 0:
                continue
            orbit = self.index(self.mul_codes(self.mul_codes(self.codes, np.full(self.order, self.codes[x])), inverses))
            labels[np.unique(orbit)] = len(reps)
            reps.append(x)
        return ClassPartition(labels, np.array(reps, dtype=np.int64))

    def subgroup(self, codes, name: str = "K") -> "FiniteGroup":
        sub = FiniteGroup(codes, self.mul_codes, self.inv_codes, self.identity_code, name)
        self.index(sub.codes)
        return sub

    def is_subgroup(self, sub: "FiniteGroup") -> bool:
        if not self.contains(sub.codes).all():
            return False
        a = np.repeat(sub.codes, sub.order)
        b = np.tile(sub.codes, sub.order)
        return bool(sub.contains(self.mul_codes(a, self.inv_codes(b))).all())

    def left_cosets(self, sub: "FiniteGroup") -> tuple[np.ndarray, np.ndarray]:
        """Coset representatives r_i (positions) and the label i of every g in r_i K."""
        labels = np.full(self.order, -1, dtype=np.int64)
        reps = []
        for g in range(self.order):
            if labels[g] >= 0:
                continue
            members = self.index(self.mul_codes(np.full(sub.order, self.codes[g]), sub.codes))
            labels[members] = len(reps)
            reps.append(g)
        return np.array(reps, dtype=np.int64), labels

    def center(self) -> "FiniteGroup":
        central = self.conjugacy_classes.sizes[self.conjugacy_classes.labels] == 1
        return self.subgroup(self.codes[central], f"Z({self.name})")

    def is_abelian(self) -> bool:
        a = np.repeat(self.codes, self.order)
        b = np.tile(self.codes, self.order)
        return bool(np.array_equal(self.mul_codes(a, b), self.mul_codes(b, a)))

    def power(self, i: int, e: int) -> int:
        result, base = self.identity, int(i)
        while e:
            if e & 1:
                result = int(self.mul(result, base))
            base = int(self.mul(base, base))
            e >>= 1
        return result


class ClassPartition:
    """Conjugacy classes: a class label per element and a representative per class."""

    def __init__(self, labels: np.ndarray, reps: np.ndarray):
        self.labels = labels
        self.reps = reps
        self.sizes = np.bincount(labels, minlength=len(reps))

    def __len__(self):
        return len(self.reps)

    def members(self, c: int) -> np.ndarray:
        return np.nonzero(self.labels == c)[0]


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """G x H with codes ``g * stride + h`` where stride exceeds every code of H."""
    stride = int(H.codes.max()) + 1

    def split(c):
        return c // stride, c % stride

    def mul(a, b):
        ag, ah = split(a)
        bg, bh = split(b)
        return G.mul_codes(ag, bg) * stride + H.mul_codes(ah, bh)

    def inv(a):
        ag, ah = split(a)
        return G.inv_codes(ag) * stride + H.inv_codes(ah)

    codes = (G.codes[:, None] * stride + H.codes[None, :]).ravel()
    P = FiniteGroup(codes, mul, inv, G.identity_code * stride + H.identity_code, name or f"{G.name}x{H.name}")
    P.factors = (G, H, stride)
    # classes of a product are products of classes
    cg, ch = G.conjugacy_classes, H.conjugacy_classes
    labels = (cg.labels[:, None] * len(ch) + ch.labels[None, :]).ravel()
    reps_codes = (G.codes[cg.reps][:, None] * stride + H.codes[ch.reps][None, :]).ravel()
    P.__dict__["conjugacy_classes"] = ClassPartition(labels, P.index(reps_codes))
    return P
