"""Exact arithmetic in k = F_q and its quadratic extension k2 = F_{q^2}.

Elements are small integers indexing a canonical enumeration.  For the base
field ``k = F_p[x]/(m(x))`` the index of ``sum c_i x^i`` is ``sum c_i p^i``.
The quadratic extension is built as a tower ``k2 = k[y]/(y^2 + a1 y + a0)``
and the index of ``c0 + c1 y`` (``c0, c1`` in k) is ``c0 + q*c1``, so the
subfield k occupies indices ``0 .. q-1`` of k2.

All operations are table lookups; tables are built once per field and cached.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from .errors import SizeCapError

MAX_FIELD_ORDER = 256
MAX_PRIME = 13


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


# --- polynomials over F_p (coefficient lists, lowest degree first) ---------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    a = _poly_trim(a)
    m = _poly_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = (a[-1] * inv_lead) % p
        shift = len(a) - len(m)
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
        a = _poly_trim(a)
    return a


def _monic_polys(degree, p):
    """Monic polynomials of the given degree, lexicographic in (c_0, .., c_{d-1})."""
    for low in product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible_fp(poly, p) -> bool:
    """Irreducibility over F_p by exhaustive trial division."""
    d = len(poly) - 1
    if d <= 0:
        return False
    for k in range(1, d // 2 + 1):
        for div in _monic_polys(k, p):
            if not _poly_mod(poly, div, p):
                return False
    return True


def first_irreducible_fp(degree: int, p: int) -> tuple[int, ...]:
    for poly in _monic_polys(degree, p):
        if is_irreducible_fp(poly, p):
            return tuple(poly)
    raise AssertionError("unreachable: irreducibles exist in every degree")


class FieldSpec:
    """A finite field: either k = F_q or its quadratic extension over k.

    Do not build directly; use :func:`field_create`.
    """

    def __init__(self, p: int, f: int, degree: int):
        self.p = p
        self.f = f
        self.degree = degree
        self.q = p**f
        self.order = self.q**degree
        self.abs_degree = f * degree
        if degree == 1:
            self.subfield = None
            self.poly = first_irreducible_fp(f, p)
            self._build_base()
        else:
            self.subfield = field_create(p, f, 1)
            self.poly = self._first_quadratic()
            self._build_extension()
        self._build_logs()
        for name in ("add_table", "neg_table", "mul_table", "inv_table", "log_table", "exp_table", "coords"):
            getattr(self, name).setflags(write=False)

    # --- construction -----------------------------------------------------
    def _build_base(self):
        p, f, Q = self.p, self.f, self.order
        digits = np.array([[(i // p**j) % p for j in range(f)] for i in range(Q)], dtype=np.int64)
        weights = p ** np.arange(f)
        self.coords = digits
        self.add_table = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg_table = ((-digits) % p) @ weights
        mul = np.zeros((Q, Q), dtype=np.int64)
        for a in range(Q):
            for b in range(a, Q):
                r = _poly_mod(_poly_mul(list(digits[a]), list(digits[b]), p), list(self.poly), p)
                idx = sum(c * p**j for j, c in enumerate(r))
                mul[a, b] = mul[b, a] = idx
        self.mul_table = mul

    def _first_quadratic(self):
        k = self.subfield
        q = k.q
        for a0, a1 in product(range(q), repeat=2):
            # y^2 + a1 y + a0 has a root in k?
            has_root = False
            for r in range(q):
                v = k.add_table[k.add_table[k.mul_table[r, r], k.mul_table[a1, r]], a0]
                if v == 0:
                    has_root = True
                    break
            if not has_root:
                return (a0, a1, 1)
        raise AssertionError("unreachable")

    def _build_extension(self):
        k = self.subfield
        q, Q = k.q, self.order
        a0, a1, _ = self.poly
        idx = np.arange(Q)
        c0, c1 = idx % q, idx // q
        self.coords = np.concatenate([k.coords[c0], k.coords[c1]], axis=1)
        A, M, N = k.add_table, k.mul_table, k.neg_table
        self.add_table = A[c0[:, None], c0[None, :]] + q * A[c1[:, None], c1[None, :]]
        self.neg_table = N[c0] + q * N[c1]
        # (x0 + x1 y)(z0 + z1 y), with y^2 = -a1 y - a0
        x0, x1 = c0[:, None], c1[:, None]
        z0, z1 = c0[None, :], c1[None, :]
        s = M[x1, z1]
        r0 = A[M[x0, z0], N[M[s, a0]]]
        r1 = A[A[M[x0, z1], M[x1, z0]], N[M[s, a1]]]
        self.mul_table = r0 + q * r1

    def _build_logs(self):
        Q = self.order
        M = self.mul_table
        gen = None
        for g in range(1, Q):
            x, n = g, 1
            while x != 1:
                x = M[x, g]
                n += 1
            if n == Q - 1:
                gen = g
                break
        self.gen_index = int(gen)
        exp = np.zeros(Q - 1, dtype=np.int64)
        x = 1
        for i in range(Q - 1):
            exp[i] = x
            x = M[x, gen]
        log = np.full(Q, -1, dtype=np.int64)
        log[exp] = np.arange(Q - 1)
        self.exp_table = exp
        self.log_table = log
        inv = np.zeros(Q, dtype=np.int64)
        inv[1:] = exp[(-log[1:]) % (Q - 1)]
        self.inv_table = inv

    # --- derived tables ---------------------------------------------------
    def power_table(self, e: int) -> np.ndarray:
        """Index table of x -> x**e (with 0**e = 0 for e > 0)."""
        out = np.zeros(self.order, dtype=np.int64)
        nz = np.arange(1, self.order)
        out[nz] = self.exp_table[(self.log_table[nz] * e) % (self.order - 1)]
        if e == 0:
            out[0] = 1
        return out

    @property
    def frob_table(self) -> np.ndarray:
        """x -> x**q on k2."""
        self._require_quadratic()
        return _cached_table(self, "frob", lambda: self.power_table(self.q))

    @property
    def rel_trace_table(self) -> np.ndarray:
        self._require_quadratic()

        def build():
            t = self.add_table[np.arange(self.order), self.frob_table]
            assert (t < self.q).all()
            return t

        return _cached_table(self, "rel_trace", build)

    @property
    def rel_norm_table(self) -> np.ndarray:
        self._require_quadratic()

        def build():
            n = self.mul_table[np.arange(self.order), self.frob_table]
            assert (n < self.q).all()
            return n

        return _cached_table(self, "rel_norm", build)

    @property
    def abs_trace_table(self) -> np.ndarray:
        """Trace down to the prime field; values are integers in ``0..p-1``."""

        def build():
            acc = np.zeros(self.order, dtype=np.int64)
            for i in range(self.abs_degree):
                acc = self.add_table[acc, self.power_table(self.p**i)]
            assert (acc < self.p).all()
            return acc

        return _cached_table(self, "abs_trace", build)

    def _require_quadratic(self):
        if self.degree != 2:
            raise ValueError(f"{self} is not a quadratic extension")

    # --- element access ---------------------------------------------------
    def __call__(self, value) -> "FieldElement":
        """Element from an index, a coordinate sequence over F_p, or a FieldElement of k."""
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            if self.subfield is value.field:
                return FieldElement(self, value.index)
            raise ValueError("element belongs to an unrelated field")
        if isinstance(value, (int, np.integer)):
            if not 0 <= value < self.order:
                raise ValueError(f"index {value} out of range for {self}")
            return FieldElement(self, int(value))
        coords = [int(c) % self.p for c in value]
        if len(coords) != self.abs_degree:
            raise ValueError("wrong number of coordinates")
        hits = np.nonzero((self.coords == coords).all(axis=1))[0]
        return FieldElement(self, int(hits[0]))

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, i) for i in range(self.order)]

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def __repr__(self):
        if self.degree == 1:
            return f"FieldSpec(F_{self.q})"
        return f"FieldSpec(F_{self.order} over F_{self.q})"


def _cached_table(spec, name, build):
    cache = spec.__dict__.setdefault("_tables", {})
    if name not in cache:
        table = build()
        table.setflags(write=False)
        cache[name] = table
    return cache[name]


@lru_cache(maxsize=None)
def field_create(p: int, f: int = 1, degree: int = 1) -> FieldSpec:
    """Build (or fetch from cache) ``F_q`` (degree 1) or ``F_{q^2}`` (degree 2), q = p**f."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if p > MAX_PRIME:
        raise SizeCapError(f"p={p} exceeds the supported range 2..{MAX_PRIME}")
    if f < 1 or degree not in (1, 2):
        raise ValueError("need f >= 1 and degree in {1, 2}")
    if (p**f) ** degree > MAX_FIELD_ORDER:
        raise SizeCapError(f"field of order {(p**f) ** degree} exceeds the cap {MAX_FIELD_ORDER}")
    return FieldSpec(p, f, degree)


class FieldElement:
    __slots__ = ("field", "index")

    def __init__(self, field: FieldSpec, index: int):
        self.field = field
        self.index = index

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is self.field:
                return other.index
            return self.field(other).index
        if isinstance(other, (int, np.integer)):
            # integers act through the prime field
            return self.field(int(other) % self.field.p).index
        return NotImplemented

    def __add__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, int(self.field.add_table[self.index, j]))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg_table[self.index]))

    def __sub__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return self + FieldElement(self.field, int(self.field.neg_table[j]))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, int(self.field.mul_table[self.index, j]))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.index == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElement(self.field, int(self.field.inv_table[self.index]))

    def __truediv__(self, other):
        j = self._coerce(other)
        if j is NotImplemented:
            return NotImplemented
        return self * FieldElement(self.field, j).inverse()

    def __pow__(self, e: int):
        if self.index == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return self.field.one if e == 0 else self
        F = self.field
        return FieldElement(F, int(F.exp_table[(F.log_table[self.index] * e) % (F.order - 1)]))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field:
                return self.index == other.index
            try:
                return self.index == self.field(other).index
            except ValueError:
                return False
        if isinstance(other, (int, np.integer)):
            return self.index == self.field(int(other) % self.field.p).index
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.index))

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.field.coords[self.index])

    def multiplicative_order(self) -> int:
        if self.index == 0:
            raise ValueError("0 has no multiplicative order")
        F = self.field
        from math import gcd

        return (F.order - 1) // gcd(int(F.log_table[self.index]), F.order - 1)

    def in_subfield(self) -> bool:
        return self.field.degree == 2 and self.index < self.field.q

    def to_subfield(self) -> "FieldElement":
        if not self.in_subfield():
            raise ValueError(f"{self} does not lie in the subfield")
        return FieldElement(self.field.subfield, self.index)

    def __repr__(self):
        return f"{self.field.order}:{self.index}"


def frobenius(x: FieldElement) -> FieldElement:
    """x -> x**q on the quadratic extension."""
    return FieldElement(x.field, int(x.field.frob_table[x.index]))


def rel_trace(x: FieldElement) -> FieldElement:
    """x + x**q, as an element of k."""
    return FieldElement(x.field.subfield, int(x.field.rel_trace_table[x.index]))


def rel_norm(x: FieldElement) -> FieldElement:
    """x**(q+1), as an element of k."""
    return FieldElement(x.field.subfield, int(x.field.rel_norm_table[x.index]))


def generator(spec: FieldSpec) -> FieldElement:
    """The canonical primitive element (smallest index of full order)."""
    return FieldElement(spec, spec.gen_index)
