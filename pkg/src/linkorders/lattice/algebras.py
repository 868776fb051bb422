"""M_2(F), the quaternion algebra B = E0 + E0*pi over F = F_p((t)), and the
quadratic extension E embedded in both.

Algebra elements are tuples of :class:`Laurent` coordinates.  Multiplication
goes through a structure table computed once from the defining rule, so the
same code serves both algebras and their product.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from ..errors import WindowError
from ..fields import field_create
from .laurent import Laurent, Window

Element = tuple  # tuple[Laurent, ...]


class Algebra:
    """Finite-dimensional F-algebra given by structure constants on a basis."""

    def __init__(self, name: str, p: int, dim: int, product: Callable, trace: Sequence[Laurent],
                 one: Element, order_valuations: Sequence[int], labels: Sequence[str]):
        self.name, self.p, self.dim = name, p, dim
        self.labels = tuple(labels)
        self._one = tuple(one)
        self.trace_form = tuple(trace)
        # minimal valuation of each coordinate on the chosen order
        self.order_valuations = tuple(order_valuations)
        self.table = {}
        for a in range(dim):
            for b in range(dim):
                prod = product(self.basis(a), self.basis(b))
                nonzero = [(c, coef) for c, coef in enumerate(prod) if not coef.is_zero()]
                if nonzero:
                    self.table[a, b] = nonzero

    def zero(self) -> Element:
        return tuple(Laurent(self.p) for _ in range(self.dim))

    def one(self) -> Element:
        return self._one

    def basis(self, a: int) -> Element:
        return tuple(Laurent.const(self.p, int(a == b)) for b in range(self.dim))

    def add(self, x: Element, y: Element) -> Element:
        return tuple(u + v for u, v in zip(x, y))

    def sub(self, x: Element, y: Element) -> Element:
        return tuple(u - v for u, v in zip(x, y))

    def scale(self, c, x: Element) -> Element:
        return tuple(c * u for u in x)

    def mul(self, x: Element, y: Element) -> Element:
        out = [Laurent(self.p) for _ in range(self.dim)]
        for (a, b), terms in self.table.items():
            if x[a].is_zero() or y[b].is_zero():
                continue
            xy = x[a] * y[b]
            for c, coef in terms:
                out[c] = out[c] + coef * xy
        return tuple(out)

    def trace(self, x: Element) -> Laurent:
        total = Laurent(self.p)
        for tau, coord in zip(self.trace_form, x):
            total = total + tau * coord
        return total

    def is_zero(self, x: Element) -> bool:
        return all(c.is_zero() for c in x)

    def in_order(self, x: Element) -> bool:
        return all(c.valuation >= v for c, v in zip(x, self.order_valuations))

    def order_generators(self) -> list[Element]:
        t = Laurent.monomial
        return [tuple(t(self.p, v) if b == a else Laurent(self.p) for b in range(self.dim))
                for a, v in enumerate(self.order_valuations)]

    def __repr__(self):
        return f"Algebra({self.name})"


def product_algebra(A1: Algebra, A2: Algebra) -> Algebra:
    d1 = A1.dim

    def product(x, y):
        return A1.mul(x[:d1], y[:d1]) + A2.mul(x[d1:], y[d1:])

    return Algebra(f"{A1.name} x {A2.name}", A1.p, d1 + A2.dim, product,
                   A1.trace_form + A2.trace_form, A1.one() + A2.one(),
                   A1.order_valuations + A2.order_valuations,
                   [f"{s}_1" for s in A1.labels] + [f"{s}_2" for s in A2.labels])


def matrix_algebra(p: int, eichler: bool = False) -> Algebra:
    """M_2(F) on E11, E12, E21, E22; ``eichler`` selects the order [[O, p], [O, O]]."""

    def product(x, y):
        return (x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3])

    one = tuple(Laurent.const(p, c) for c in (1, 0, 0, 1))
    trace = tuple(Laurent.const(p, c) for c in (1, 0, 0, 1))
    return Algebra("M2(F)", p, 4, product, trace, one, (0, int(eichler), 0, 0),
                   ("E11", "E12", "E21", "E22"))


def quaternion_algebra(p: int) -> Algebra:
    """B = E0 + E0*pi with pi^2 = t and pi x = sigma(x) pi, on 1, w, pi, w*pi.

    E0 = F(w) is unramified, w a root of the canonical quadratic polynomial of
    the residue field extension.
    """
    a0, a1, _ = field_create(p, 1, 2).poly
    t = Laurent.monomial(p, 1)

    def e0_mul(x, y):
        # w^2 = -a1 w - a0
        xy2 = x[1] * y[1]
        return (x[0] * y[0] - a0 * xy2, x[0] * y[1] + x[1] * y[0] - a1 * xy2)

    def e0_sigma(x):
        return (x[0] - a1 * x[1], -x[1])

    def e0_add(x, y):
        return (x[0] + y[0], x[1] + y[1])

    def product(x, y):
        a, b, c, d = (x[0], x[1]), (x[2], x[3]), (y[0], y[1]), (y[2], y[3])
        even = e0_add(e0_mul(a, c), tuple(t * z for z in e0_mul(b, e0_sigma(d))))
        odd = e0_add(e0_mul(a, d), e0_mul(b, e0_sigma(c)))
        return even + odd

    one = tuple(Laurent.const(p, c) for c in (1, 0, 0, 0))
    trace = (Laurent.const(p, 2), Laurent.const(p, -a1), Laurent(p), Laurent(p))
    return Algebra("B", p, 4, product, trace, one, (0, 0, 0, 0), ("1", "w", "pi", "w*pi"))


@dataclass(frozen=True)
class StratumParams:
    """Ramification e, level n and truncation N of a simple stratum in the model."""

    p: int
    e: int
    n: int
    N: int | None = None

    def __post_init__(self):
        if self.p not in (2, 3, 5, 7):
            raise ValueError(f"p={self.p} is not supported by the lattice model")
        if self.e not in (1, 2):
            raise ValueError("e must be 1 or 2")
        if self.n < 0 or (self.n == 0 and self.e != 1):
            raise ValueError("n must be positive (n = 0 only for the level-zero data, e = 1)")
        if self.e == 2 and self.n % 2 == 0:
            raise ValueError("a ramified simple stratum needs odd n")
        if self.N is not None and self.N < 2 * self.n + 6:
            raise WindowError(f"N={self.N} is below 2n+6={2 * self.n + 6}")

    @property
    def top(self) -> int:
        return self.N if self.N is not None else 2 * self.n + 6

    @property
    def window(self) -> Window:
        return Window(-(self.n + 2), self.top)


class QuadraticExtension:
    """E = F(u), u^2 = c1 u + c0, with elements as pairs (a, b) = a + b u.

    Kinds: unramified (u reduces to a generator of the residue extension),
    ramified with u^2 = t (p odd) and, for p = 2, the Eisenstein polynomial
    u^2 + t u + (t^2 + t), which is separable.
    """

    def __init__(self, p: int, e: int):
        self.p, self.e = p, e
        t = Laurent.monomial(p, 1)
        if e == 1:
            a0, a1, _ = field_create(p, 1, 2).poly
            self.c0, self.c1 = Laurent.const(p, -a0), Laurent.const(p, -a1)
        elif p != 2:
            self.c0, self.c1 = t, Laurent(p)
        else:
            self.c0, self.c1 = t * t + t, t
        # valuation of the different
        self.different = 0 if e == 1 else (1 if p != 2 else 2)

    def element(self, a, b=0) -> tuple[Laurent, Laurent]:
        lift = lambda z: z if isinstance(z, Laurent) else Laurent.const(self.p, z)
        return (lift(a), lift(b))

    def mul(self, x, y):
        bb = x[1] * y[1]
        return (x[0] * y[0] + self.c0 * bb, x[0] * y[1] + x[1] * y[0] + self.c1 * bb)

    def sigma(self, x):
        return (x[0] + self.c1 * x[1], -x[1])

    def trace(self, x) -> Laurent:
        return 2 * x[0] + self.c1 * x[1]

    def uniformizer_power(self, m: int):
        """pi_E^m for m >= 0, with pi_E = t (e=1) or u (e=2) up to a unit."""
        if m < 0:
            raise ValueError("only non-negative powers are finite Laurent polynomials")
        if self.e == 1:
            return self.element(Laurent.monomial(self.p, m))
        if m % 2 == 0:
            return self.element(Laurent.monomial(self.p, m // 2))
        return self.element(0, Laurent.monomial(self.p, m // 2))

    def nu_constant(self, n: int):
        """c with nu(z) = psi_F(Tr(c z)) trivial on p_E^(n+1) but not on p_E^n."""
        if self.e == 1:
            return self.element(Laurent.monomial(self.p, -n))
        if self.p != 2:
            return self.element(0, Laurent.monomial(self.p, -(n + 1) // 2))
        return self.element(Laurent.monomial(self.p, -(n + 1) // 2))


class Embedding:
    """E inside an algebra A, the trace-form projection s_A and the nu_S functional."""

    def __init__(self, A: Algebra, E: QuadraticExtension, u: Element, complement: Element):
        self.A, self.E, self.u = A, E, u
        self._p = A.p
        # u really satisfies the minimal polynomial
        lhs = A.mul(u, u)
        rhs = A.add(A.scale(E.c1, u), A.scale(E.c0, A.one()))
        if lhs != rhs:
            raise ValueError(f"embedding of u into {A.name} does not satisfy its polynomial")
        T1 = A.trace(u)
        T2 = A.trace(lhs)
        det = (2 * T2 - T1 * T1).monomial_inverse()
        tau = [A.trace(A.basis(a)) for a in range(A.dim)]
        mu = [A.trace(A.mul(A.basis(a), u)) for a in range(A.dim)]
        # s_A(x) = a(x) + b(x) u, coordinates by Cramer's rule on the Gram matrix of 1, u
        self.proj_a = tuple(det * (T2 * tau[i] - T1 * mu[i]) for i in range(A.dim))
        self.proj_b = tuple(det * (2 * mu[i] - T1 * tau[i]) for i in range(A.dim))
        self.v0 = complement
        if not self.is_complement(complement):
            raise ValueError("the complement generator has a nonzero projection onto E")
        if not A.in_order(complement):
            raise ValueError("the complement generator is not in the order")

    def embed(self, x) -> Element:
        A = self.A
        return A.add(A.scale(x[0], A.one()), A.scale(x[1], self.u))

    def project(self, x: Element):
        a = Laurent(self._p)
        b = Laurent(self._p)
        for ca, cb, coord in zip(self.proj_a, self.proj_b, x):
            a = a + ca * coord
            b = b + cb * coord
        return (a, b)

    def is_complement(self, x: Element) -> bool:
        a, b = self.project(x)
        return a.is_zero() and b.is_zero()

    def nu_functional(self, c) -> tuple[Laurent, ...]:
        """lambda with Tr_{E/F}(c * s_A(x)) = sum_i lambda_i x_i."""
        E = self.E
        out = []
        for pa, pb in zip(self.proj_a, self.proj_b):
            out.append(E.trace(E.mul(c, (pa, pb))))
        return tuple(out)

    def complement_basis(self) -> tuple[Element, Element]:
        """v0 and u v0: an F-basis of C and O_F-generators of O_E v0."""
        return (self.v0, self.A.mul(self.u, self.v0))

    def ideal_times(self, m: int, x: Element) -> list[Element]:
        """O_F-generators of p_E^m x."""
        g = self.embed(self.E.uniformizer_power(m))
        gx = self.A.mul(g, x)
        return [gx, self.A.mul(self.u, gx)]


def _galois_matrix(E: QuadraticExtension) -> Element:
    p = E.p
    return (Laurent.const(p, 1), E.c1, Laurent(p), Laurent.const(p, -1))


class ModelAlgebras:
    """Everything the linking-order checks need for one (p, e, n)."""

    def __init__(self, params: StratumParams):
        self.params = params
        p, e = params.p, params.e
        self.p = p
        self.E = QuadraticExtension(p, e)
        E = self.E
        self.A1 = matrix_algebra(p, eichler=(e == 2))
        self.A2 = quaternion_algebra(p)
        # E acts on its basis 1, u: u*1 = u, u*u = c0 + c1 u
        u1 = (Laurent(p), E.c0, Laurent.const(p, 1), E.c1)
        self.emb1 = Embedding(self.A1, E, u1, _galois_matrix(E))
        a0, a1, _ = field_create(p, 1, 2).poly
        zero, one, t = Laurent(p), Laurent.const(p, 1), Laurent.monomial(p, 1)
        if e == 1:
            u2, v2 = (zero, one, zero, zero), (zero, zero, one, zero)
        elif p != 2:
            u2, v2 = (zero, zero, one, zero), (Laurent.const(p, a1), Laurent.const(p, 2), zero, zero)
        else:
            u2, v2 = (zero, t, one, zero), (one, zero, zero, one)
        self.emb2 = Embedding(self.A2, E, u2, v2)
        self.A = product_algebra(self.A1, self.A2)
        self.nu_c = E.nu_constant(params.n)
        lam1 = self.emb1.nu_functional(self.nu_c)
        lam2 = self.emb2.nu_functional(self.nu_c)
        self.nu_functional = lam1 + tuple(-x for x in lam2)
        self.nu_functional_1, self.nu_functional_2 = lam1, lam2

    @property
    def window(self) -> Window:
        return self.params.window

    def embeddings(self):
        return (self.emb1, self.emb2)

    def pair(self, x1: Element | None = None, x2: Element | None = None) -> Element:
        x1 = x1 if x1 is not None else self.A1.zero()
        x2 = x2 if x2 is not None else self.A2.zero()
        return tuple(x1) + tuple(x2)

    def diagonal(self, x) -> Element:
        return self.pair(self.emb1.embed(x), self.emb2.embed(x))

    def complement_exponent(self, which: int, m: int) -> int:
        """j with V_A^m = p_E^j c_A; the B-side shifts differently when E is unramified."""
        if which == 2 and self.params.e == 1:
            return m // 2
        return (m + 1) // 2
