"""The three finite quotient rings and their canonical additive characters.

Every ring element is an integer code in ``range(ring.order)``; the code is
also the position of the element in the canonical enumeration, so complex
functions on a ring are plain arrays indexed by code.  All arithmetic is
vectorized over arrays of codes.

Besides arithmetic each ring exposes a *bilinear description* of its
character: component arrays ``components(codes)`` and a list of terms
``(i, j, table)`` such that the exponent of ``nu(x*y)`` is
``sum(table[cx[i], cy[j]]) mod p``.  The Fourier kernels consume this.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .characters import roots_of_unity
from .errors import NotAUnitError, SizeCapError, TrivialCharacterError
from .fields import FieldElement, field_create
from .groups import FiniteGroup

MAX_RING_ORDER = 10**6


class FiniteRing:
    """Shared behaviour; subclasses define the arithmetic."""

    order: int
    p: int
    name: str
    one: int
    zero = 0

    def _check_size(self):
        if self.order > MAX_RING_ORDER:
            raise SizeCapError(f"{self.name} has order {self.order} > {MAX_RING_ORDER}")

    # subclass interface
    def add(self, x, y): ...
    def neg(self, x): ...
    def mul(self, x, y): ...
    def is_unit(self, x): ...
    def _inv_units(self, x): ...
    def components(self, x) -> np.ndarray: ...
    bilinear_terms: list

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def inv(self, x):
        x = np.asarray(x, dtype=np.int64)
        if not np.all(self.is_unit(x)):
            raise NotAUnitError(f"non-unit passed to {self.name}.inv")
        return self._inv_units(x)

    def elements(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def nu_exponent(self, x) -> np.ndarray:
        """Exponent e with nu(x) = zeta_p**e, read off the bilinear description at y = 1."""
        x = np.asarray(x, dtype=np.int64)
        cx = self.components(x)
        c1 = self.components(np.full(x.shape, self.one, dtype=np.int64))
        acc = np.zeros(x.shape, dtype=np.int64)
        for i, j, table in self.bilinear_terms:
            acc += table[cx[..., i], c1[..., j]]
        return acc % self.p

    def nu(self, x) -> np.ndarray:
        return roots_of_unity(self.p)[self.nu_exponent(x)]

    def units(self) -> np.ndarray:
        codes = self.elements()
        return codes[self.is_unit(codes)]

    @cached_property
    def unit_group(self) -> FiniteGroup:
        return FiniteGroup(self.units(), self.mul, self.inv, self.one, f"{self.name}^x")

    def __call__(self, *parts) -> "RingElement":
        if len(parts) == 1 and isinstance(parts[0], (int, np.integer)):
            code = int(parts[0])
            if not 0 <= code < self.order:
                raise ValueError(f"code {code} out of range for {self.name}")
            return RingElement(self, code)
        return RingElement(self, int(self.encode(*parts)))

    def encode(self, *parts): ...
    def decode(self, code) -> tuple: ...

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


class RingElement:
    __slots__ = ("ring", "code")

    def __init__(self, ring: FiniteRing, code: int):
        self.ring = ring
        self.code = code

    def _other(self, other) -> int:
        if isinstance(other, RingElement) and other.ring is self.ring:
            return other.code
        raise TypeError("operands belong to different rings")

    def __add__(self, other):
        return RingElement(self.ring, int(self.ring.add(self.code, self._other(other))))

    def __sub__(self, other):
        return RingElement(self.ring, int(self.ring.sub(self.code, self._other(other))))

    def __neg__(self):
        return RingElement(self.ring, int(self.ring.neg(self.code)))

    def __mul__(self, other):
        return RingElement(self.ring, int(self.ring.mul(self.code, self._other(other))))

    def is_unit(self) -> bool:
        return bool(self.ring.is_unit(self.code))

    def inverse(self) -> "RingElement":
        return RingElement(self.ring, int(self.ring.inv(self.code)))

    @property
    def parts(self) -> tuple:
        return self.ring.decode(self.code)

    def __eq__(self, other):
        return isinstance(other, RingElement) and other.ring is self.ring and other.code == self.code

    def __hash__(self):
        return hash((id(self.ring), self.code))

    def __repr__(self):
        return f"{self.ring.name}{list(self.parts)}"


def _field_index(field, x):
    if isinstance(x, FieldElement):
        return field(x).index
    return int(x)


def _product_table(field, shift: int, sign: int = 1) -> np.ndarray:
    """``table[a, b]`` = exponent of the prime-field trace of ``sign * shift * a * b``."""
    M = field.mul_table
    s = shift if sign == 1 else int(field.neg_table[shift])
    return field.abs_trace_table[M[s][M]]


class RamifiedRing(FiniteRing):
    """k[X]/(X^2) as pairs (a, b) = a + bX, code ``a*q + b``; character (a, b) -> Psi(b)."""

    def __init__(self, p: int, f: int = 1, psi_shift=1):
        self.k = field_create(p, f, 1)
        self.p, self.q = p, self.k.q
        self.psi_shift = _field_index(self.k, psi_shift)
        if self.psi_shift == 0:
            raise TrivialCharacterError("the ramified ring needs a nontrivial Psi")
        self.order = self.q**2
        self.one = self.q
        self.name = f"R_ram(q={self.q})"
        table = _product_table(self.k, self.psi_shift)
        self.bilinear_terms = [(0, 1, table), (1, 0, table)]

    def encode(self, a, b):
        return _field_index(self.k, a) * self.q + _field_index(self.k, b)

    def decode(self, code):
        a, b = divmod(int(code), self.q)
        return (self.k(a), self.k(b))

    def split(self, x):
        x = np.asarray(x, dtype=np.int64)
        return x // self.q, x % self.q

    def components(self, x):
        a, b = self.split(x)
        return np.stack([a, b], axis=-1)

    def add(self, x, y):
        (a1, b1), (a2, b2) = self.split(x), self.split(y)
        A = self.k.add_table
        return A[a1, a2] * self.q + A[b1, b2]

    def neg(self, x):
        a, b = self.split(x)
        return self.k.neg_table[a] * self.q + self.k.neg_table[b]

    def mul(self, x, y):
        (a1, b1), (a2, b2) = self.split(x), self.split(y)
        A, M = self.k.add_table, self.k.mul_table
        return M[a1, a2] * self.q + A[M[a1, b2], M[a2, b1]]

    def is_unit(self, x):
        return self.split(x)[0] != 0

    def _inv_units(self, x):
        a, b = self.split(x)
        k = self.k
        ai = k.inv_table[a]
        return ai * self.q + k.neg_table[k.mul_table[k.mul_table[ai, ai], b]]

    def scalars(self) -> np.ndarray:
        """Codes of (a, 0), a in k^x."""
        return np.arange(1, self.q) * self.q


class HeisenbergRing(FiniteRing):
    """Triples [alpha, beta, gamma] over k2 with the law of upper-triangular matrices

        [[alpha, beta, gamma], [0, alpha^q, beta^q], [0, 0, alpha]].

    Code ``(alpha*Q + beta)*Q + gamma`` with Q = q^2; character
    ``[alpha, beta, gamma] -> nu_k(rel_trace(gamma))``.
    """

    def __init__(self, p: int, f: int = 1, nu_shift=1):
        self.K = field_create(p, f, 2)
        self.k = self.K.subfield
        self.p, self.q, self.Q = p, self.k.q, self.K.order
        self.nu_shift = _field_index(self.k, nu_shift)
        if self.nu_shift == 0:
            raise TrivialCharacterError("nu_k must be nontrivial")
        self.order = self.Q**3
        self.name = f"R_heis(q={self.q})"
        self._check_size()
        self.one = self.Q**2
        # nu_k(rel_trace(shift*c)) = zeta_p^(absolute trace of shift*c), shift in k
        table = _product_table(self.K, self.nu_shift)
        self.bilinear_terms = [(0, 2, table), (1, 3, table), (2, 0, table)]

    def encode(self, alpha, beta, gamma):
        K, Q = self.K, self.Q
        return (_field_index(K, alpha) * Q + _field_index(K, beta)) * Q + _field_index(K, gamma)

    def decode(self, code):
        a, b, c = self.split(int(code))
        return (self.K(int(a)), self.K(int(b)), self.K(int(c)))

    def split(self, x):
        x = np.asarray(x, dtype=np.int64)
        Q = self.Q
        return x // (Q * Q), (x // Q) % Q, x % Q

    def join(self, a, b, c):
        return (np.asarray(a) * self.Q + b) * self.Q + c

    def components(self, x):
        a, b, c = self.split(x)
        return np.stack([a, b, c, self.K.frob_table[b]], axis=-1)

    def add(self, x, y):
        A = self.K.add_table
        (a1, b1, c1), (a2, b2, c2) = self.split(x), self.split(y)
        return self.join(A[a1, a2], A[b1, b2], A[c1, c2])

    def neg(self, x):
        N = self.K.neg_table
        a, b, c = self.split(x)
        return self.join(N[a], N[b], N[c])

    def mul(self, x, y):
        A, M, F = self.K.add_table, self.K.mul_table, self.K.frob_table
        (a1, b1, c1), (a2, b2, c2) = self.split(x), self.split(y)
        a = M[a1, a2]
        b = A[M[a1, b2], M[b1, F[a2]]]
        c = A[A[M[a1, c2], M[b1, F[b2]]], M[c1, a2]]
        return self.join(a, b, c)

    def is_unit(self, x):
        return self.split(x)[0] != 0

    def _inv_units(self, x):
        K = self.K
        A, M, N, I, F = K.add_table, K.mul_table, K.neg_table, K.inv_table, K.frob_table
        a, b, c = self.split(x)
        ai = I[a]
        bi = N[M[M[b, F[ai]], ai]]
        ci = N[M[A[M[b, F[bi]], M[c, ai]], ai]]
        return self.join(ai, bi, ci)

    def matrix(self, x) -> list[list[FieldElement]]:
        """The literal 3x3 upper-triangular matrix of an element."""
        a, b, c = self.decode(x.code if isinstance(x, RingElement) else x)
        from .fields import frobenius

        z = self.K.zero
        return [[a, b, c], [z, frobenius(a), frobenius(b)], [z, z, a]]

    # --- distinguished subgroups of the unit group ----------------------------
    def _codes(self, alphas, betas, gammas):
        grid = np.stack(np.meshgrid(alphas, betas, gammas, indexing="ij"), axis=-1).reshape(-1, 3)
        return np.sort(self.join(grid[:, 0], grid[:, 1], grid[:, 2]))

    def _sub(self, codes, name):
        return self.unit_group.subgroup(codes, name)

    @cached_property
    def U(self) -> FiniteGroup:
        return self._sub(self._codes([1], [0], np.arange(self.Q)), "U")

    @cached_property
    def U1(self) -> FiniteGroup:
        gammas = np.nonzero(self.K.rel_trace_table == 0)[0]
        return self._sub(self._codes([1], [0], gammas), "U1")

    @cached_property
    def T(self) -> FiniteGroup:
        return self._sub(self._codes(np.arange(1, self.Q), [0], [0]), "T")

    @cached_property
    def H(self) -> FiniteGroup:
        return self._sub(self._codes([1], np.arange(self.Q), np.arange(self.Q)), "H")

    @cached_property
    def scalars(self) -> FiniteGroup:
        return self._sub(self._codes(np.arange(1, self.q), [0], [0]), "k^x")

    def torus_generator(self) -> int:
        """Code of [g, 0, 0] for the canonical generator g of k2^x."""
        return int(self.join(self.K.gen_index, 0, 0))

    def factor_unit(self, x):
        """Split units as t*h with t = [alpha, 0, 0] in T and h = [1, beta/alpha, gamma/alpha] in H."""
        K = self.K
        a, b, c = self.split(x)
        if np.any(a == 0):
            raise NotAUnitError("only units factor through T x H")
        ai = K.inv_table[a]
        return self.join(a, 0, 0), self.join(1, K.mul_table[b, ai], K.mul_table[c, ai])

    # --- defect map --------------------------------------------------------
    def defect(self, x) -> np.ndarray:
        """alpha gamma^q + alpha^q gamma - beta^(q+1), as indices into k."""
        K = self.K
        A, M, N, F = K.add_table, K.mul_table, K.neg_table, K.frob_table
        a, b, c = self.split(x)
        if np.any(a == 0):
            raise NotAUnitError("the defect map is defined on units")
        d = A[A[M[a, F[c]], M[F[a], c]], N[K.rel_norm_table[b]]]
        assert np.all(d < self.q)
        return d

    def normalized_defect(self, x) -> np.ndarray:
        """defect(x) / norm(alpha): an additive homomorphism from the unit group to k."""
        k = self.k
        a = self.split(x)[0]
        return k.mul_table[self.defect(x), k.inv_table[self.K.rel_norm_table[a]]]


class MatrixRing(FiniteRing):
    """M_2(k), code from the entries (a, b, c, d) in base q; character x -> nu(tr x)."""

    def __init__(self, p: int, f: int = 1, nu_shift=1):
        self.k = field_create(p, f, 1)
        self.p, self.q = p, self.k.q
        self.nu_shift = _field_index(self.k, nu_shift)
        if self.nu_shift == 0:
            raise TrivialCharacterError("nu must be nontrivial")
        self.order = self.q**4
        self.name = f"M2(q={self.q})"
        self.one = self.encode(1, 0, 0, 1)
        table = _product_table(self.k, self.nu_shift)
        # tr(xy) = a a' + b c' + c b' + d d'
        self.bilinear_terms = [(0, 0, table), (1, 2, table), (2, 1, table), (3, 3, table)]

    def encode(self, a, b, c, d):
        q, k = self.q, self.k
        return ((_field_index(k, a) * q + _field_index(k, b)) * q + _field_index(k, c)) * q + _field_index(k, d)

    def decode(self, code):
        return tuple(self.k(int(v)) for v in self.split(int(code)))

    def split(self, x):
        x = np.asarray(x, dtype=np.int64)
        q = self.q
        return x // q**3, (x // q**2) % q, (x // q) % q, x % q

    def join(self, a, b, c, d):
        q = self.q
        return ((np.asarray(a) * q + b) * q + c) * q + d

    def components(self, x):
        return np.stack(self.split(x), axis=-1)

    def add(self, x, y):
        A = self.k.add_table
        return self.join(*(A[u, v] for u, v in zip(self.split(x), self.split(y))))

    def neg(self, x):
        return self.join(*(self.k.neg_table[u] for u in self.split(x)))

    def mul(self, x, y):
        A, M = self.k.add_table, self.k.mul_table
        (a, b, c, d), (e, f, g, h) = self.split(x), self.split(y)
        return self.join(A[M[a, e], M[b, g]], A[M[a, f], M[b, h]], A[M[c, e], M[d, g]], A[M[c, f], M[d, h]])

    def det(self, x):
        k = self.k
        a, b, c, d = self.split(x)
        return k.add_table[k.mul_table[a, d], k.neg_table[k.mul_table[b, c]]]

    def trace(self, x):
        a, _, _, d = self.split(x)
        return self.k.add_table[a, d]

    def is_unit(self, x):
        return self.det(x) != 0

    def _inv_units(self, x):
        k = self.k
        M, N = k.mul_table, k.neg_table
        a, b, c, d = self.split(x)
        di = k.inv_table[self.det(x)]
        return self.join(M[di, d], M[di, N[b]], M[di, N[c]], M[di, a])


class LevelZeroRing(FiniteRing):
    """M_2(k) x k2 with componentwise operations; character nu(tr x - rel_trace y).

    Code ``matrix_code * q^2 + y``.
    """

    def __init__(self, p: int, f: int = 1, nu_shift=1):
        self.matrices = MatrixRing(p, f, nu_shift)
        self.K = field_create(p, f, 2)
        self.k = self.K.subfield
        self.p, self.q, self.Q = p, self.k.q, self.K.order
        self.nu_shift = self.matrices.nu_shift
        self.order = self.matrices.order * self.Q
        self.name = f"R_0(q={self.q})"
        self._check_size()
        self.one = self.matrices.one * self.Q + 1
        self.bilinear_terms = self.matrices.bilinear_terms + [(4, 4, _product_table(self.K, self.nu_shift, sign=-1))]

    def encode(self, matrix_entries, y):
        return self.matrices.encode(*matrix_entries) * self.Q + _field_index(self.K, y)

    def decode(self, code):
        m, y = divmod(int(code), self.Q)
        return (self.matrices.decode(m), self.K(y))

    def split(self, x):
        x = np.asarray(x, dtype=np.int64)
        return x // self.Q, x % self.Q

    def components(self, x):
        m, y = self.split(x)
        return np.concatenate([self.matrices.components(m), y[..., None]], axis=-1)

    def add(self, x, y):
        (m1, y1), (m2, y2) = self.split(x), self.split(y)
        return self.matrices.add(m1, m2) * self.Q + self.K.add_table[y1, y2]

    def neg(self, x):
        m, y = self.split(x)
        return self.matrices.neg(m) * self.Q + self.K.neg_table[y]

    def mul(self, x, y):
        (m1, y1), (m2, y2) = self.split(x), self.split(y)
        return self.matrices.mul(m1, m2) * self.Q + self.K.mul_table[y1, y2]

    def is_unit(self, x):
        m, y = self.split(x)
        return self.matrices.is_unit(m) & (y != 0)

    def _inv_units(self, x):
        m, y = self.split(x)
        return self.matrices.inv(m) * self.Q + self.K.inv_table[y]

    @cached_property
    def unit_group(self) -> FiniteGroup:
        from .groups import direct_product

        K = self.K
        k2x = FiniteGroup(np.arange(1, self.Q), lambda a, b: K.mul_table[a, b], lambda a: K.inv_table[a], 1, "k2^x")
        G = direct_product(self.matrices.unit_group, k2x, f"{self.name}^x")
        assert G.factors[2] == self.Q
        return G
