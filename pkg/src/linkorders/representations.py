"""Representations and class functions of enumerated finite groups.

Includes the three constructions checked by the verification suites: the
one-dimensional character of the ramified ring, the Heisenberg (Weil)
representation of the Heisenberg ring's unit group, and the cuspidal
characters of GL_2(k) used at level zero.
"""
from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from .characters import AdditiveCharacter, MultiplicativeCharacter, is_regular, roots_of_unity
from .errors import ConstructionError, NotRegularError, SizeCapError, TrivialCharacterError
from .fields import field_create
from .groups import FiniteGroup
from .rings import HeisenbergRing, LevelZeroRing, MatrixRing, RamifiedRing

MAX_INDUCED_DIM = 512
RANK_TOL = 1e-8


class ClassFunction:
    """A complex function on a group, constant on conjugacy classes."""

    def __init__(self, group: FiniteGroup, class_values):
        self.group = group
        self.class_values = np.asarray(class_values, dtype=np.complex128)
        if self.class_values.shape != (len(group.conjugacy_classes),):
            raise ValueError("one value per conjugacy class expected")

    @classmethod
    def from_element_values(cls, group: FiniteGroup, values, tol: float = 1e-8) -> "ClassFunction":
        values = np.asarray(values, dtype=np.complex128)
        classes = group.conjugacy_classes
        at_reps = values[classes.reps]
        spread = np.abs(values - at_reps[classes.labels]).max()
        if spread > tol:
            raise ValueError(f"values are not constant on conjugacy classes (spread {spread:.3g})")
        return cls(group, at_reps)

    def on_elements(self) -> np.ndarray:
        return self.class_values[self.group.conjugacy_classes.labels]

    def __call__(self, position):
        return self.class_values[self.group.conjugacy_classes.labels[position]]

    def __mul__(self, other: "ClassFunction") -> "ClassFunction":
        return ClassFunction(self.group, self.class_values * other.class_values)

    def conj(self) -> "ClassFunction":
        return ClassFunction(self.group, self.class_values.conj())

    @property
    def degree(self) -> complex:
        return complex(self(self.group.identity))


def inner_product(chi1: ClassFunction, chi2: ClassFunction) -> complex:
    """|G|^-1 * sum_g chi1(g) * conj(chi2(g)), summed class by class."""
    if chi1.group is not chi2.group:
        raise ValueError("class functions on different groups")
    sizes = chi1.group.conjugacy_classes.sizes
    return complex(np.sum(sizes * chi1.class_values * chi2.class_values.conj()) / chi1.group.order)


class Representation:
    """A matrix representation, evaluated on arrays of element positions."""

    def __init__(self, group: FiniteGroup, dim: int, table: np.ndarray | None = None):
        self.group = group
        self.dim = dim
        if table is not None:
            table = np.asarray(table, dtype=np.complex128)
            if table.shape != (group.order, dim, dim):
                raise ValueError("table shape does not match group order and dimension")
        self.table = table

    def matrices(self, positions) -> np.ndarray:
        return self.table[np.asarray(positions)]

    def __call__(self, position) -> np.ndarray:
        return self.matrices(np.asarray([position]))[0]

    def traces(self, positions=None) -> np.ndarray:
        if positions is None:
            positions = np.arange(self.group.order)
        return np.trace(self.matrices(positions), axis1=1, axis2=2)

    def character(self) -> ClassFunction:
        return ClassFunction(self.group, self.traces(self.group.conjugacy_classes.reps))

    def homomorphism_error(self, pairs: np.ndarray | None = None) -> float:
        """max |R(gh) - R(g)R(h)| over the given (g, h) position pairs, or all pairs."""
        G = self.group
        if pairs is None:
            g, h = np.divmod(np.arange(G.order**2), G.order)
        else:
            g, h = pairs[:, 0], pairs[:, 1]
        worst = 0.0
        for start in range(0, len(g), 4096):
            gs, hs = g[start : start + 4096], h[start : start + 4096]
            lhs = self.matrices(G.mul(gs, hs))
            rhs = self.matrices(gs) @ self.matrices(hs)
            worst = max(worst, float(np.abs(lhs - rhs).max()))
        return worst

    def restrict(self, sub: FiniteGroup) -> "Representation":
        return Representation(sub, self.dim, self.matrices(self.group.index(sub.codes)))


def trivial_representation(G: FiniteGroup) -> Representation:
    return Representation(G, 1, np.ones((G.order, 1, 1)))


def regular_representation(G: FiniteGroup) -> Representation:
    """Permutation matrices of left multiplication on the group."""
    n = G.order
    if n > MAX_INDUCED_DIM:
        raise SizeCapError("regular representation too large")
    table = np.zeros((n, n, n))
    cols = np.arange(n)
    for g in range(n):
        table[g, G.mul(np.full(n, g), cols), cols] = 1
    return Representation(G, n, table)


def one_dimensional(G: FiniteGroup, values) -> Representation:
    return Representation(G, 1, np.asarray(values, dtype=np.complex128).reshape(-1, 1, 1))


def induce(rep: Representation, G: FiniteGroup) -> Representation:
    """Induce a representation of a subgroup K to G (block permutation form)."""
    K, d = rep.group, rep.dim
    if not G.is_subgroup(K):
        raise ValueError(f"{K.name} is not a subgroup of {G.name}")
    reps, labels = G.left_cosets(K)
    n = len(reps)
    if n * d > MAX_INDUCED_DIM:
        raise SizeCapError(f"induced dimension {n * d} exceeds {MAX_INDUCED_DIM}")
    inv_reps = G.inv(reps)
    table = np.zeros((G.order, n * d, n * d), dtype=np.complex128)
    g = np.arange(G.order)
    for j, r in enumerate(reps):
        x = G.mul(g, np.full(G.order, r))
        i = labels[x]
        k = K.index(G.codes[G.mul(inv_reps[i], x)])
        blocks = rep.matrices(k)
        for row in range(n):
            sel = i == row
            table[sel, row * d : (row + 1) * d, j * d : (j + 1) * d] = blocks[sel]
    return Representation(G, n * d, table)


def induced_character(K: FiniteGroup, values_on_K, G: FiniteGroup) -> ClassFunction:
    """Frobenius formula: |K|^-1 * sum_x chi(x g x^-1), chi extended by zero off K."""
    values_on_K = np.asarray(values_on_K, dtype=np.complex128)
    everyone = np.arange(G.order)
    out = []
    for g in G.conjugacy_classes.reps:
        conj = G.codes[G.conj(everyone, np.full(G.order, g))]
        inside = K.contains(conj)
        out.append(values_on_K[K.index(conj[inside])].sum() / K.order)
    return ClassFunction(G, out)


def extend_character(A: FiniteGroup, S: FiniteGroup, values_on_S, generators, choices=None) -> np.ndarray:
    """Extend a character of S to the abelian group A = <S, generators>.

    Each generator g is adjoined in turn: if m is least with g**m in the
    current subgroup, g is sent to an m-th root of the known value of g**m,
    namely the principal root times zeta_m**choices[i].  Returns values on A
    in A's enumeration.
    """
    known = {int(c): complex(v) for c, v in zip(S.codes, values_on_S)}
    choices = list(choices or [0] * len(generators))
    for g, r in zip(generators, choices):
        g = int(g)
        power, m = g, 1
        while power not in known:
            power = int(A.mul_codes(np.array([power]), np.array([g]))[0])
            m += 1
        if m == 1:
            continue
        target = known[power]
        root = np.exp(1j * np.angle(target) / m) * roots_of_unity(m)[r % m]
        new = {}
        gj, val = A.identity_code, 1.0 + 0j
        for _ in range(m):
            codes = np.array(list(known.keys()), dtype=np.int64)
            prods = A.mul_codes(np.full(len(codes), gj), codes)
            for c, v in zip(prods, known.values()):
                new[int(c)] = val * v
            gj = int(A.mul_codes(np.array([gj]), np.array([g]))[0])
            val = val * root
        known = new
    if len(known) != A.order:
        raise ConstructionError("generators do not span the target group")
    return np.array([known[int(c)] for c in A.codes])


# --- ramified -----------------------------------------------------------------

def build_ramified_rho(ring: RamifiedRing) -> Representation:
    """(a, b) -> Psi(b / a) on the unit group, Psi the ring's character of k."""
    G = ring.unit_group
    a, b = ring.split(G.codes)
    k = ring.k
    psi = AdditiveCharacter(k, ring.psi_shift)
    return one_dimensional(G, psi.values[k.mul_table[b, k.inv_table[a]]])


# --- Heisenberg ---------------------------------------------------------------

def admissible_psi_parameters(ring: HeisenbergRing) -> list[int]:
    """Indices b in k2 \\ k; psi_b(gamma) = nu_k(rel_trace(b * gamma))."""
    return list(range(ring.q, ring.Q))


def psi_values_on_U(ring: HeisenbergRing, b: int) -> np.ndarray:
    """Values of psi_b on U in U's enumeration."""
    K = ring.K
    gammas = ring.split(ring.U.codes)[2]
    exps = K.abs_trace_table[K.mul_table[ring.nu_shift, K.mul_table[b, gammas]]]
    return roots_of_unity(ring.p)[exps]


def _check_psi(ring: HeisenbergRing, b: int) -> None:
    if not 0 <= b < ring.Q:
        raise ValueError(f"psi parameter {b} out of range")
    if b < ring.q:
        raise TrivialCharacterError(f"psi_{b} is trivial on U1 (b lies in k)")


def polarization(ring: HeisenbergRing, direction: int = 1) -> FiniteGroup:
    """A_lambda = {[1, beta, gamma]: beta in lambda*k}, a maximal abelian subgroup of H."""
    K = ring.K
    if direction == 0:
        raise ValueError("polarization direction must be nonzero")
    betas = K.mul_table[direction, np.arange(ring.q)]
    grid_b, grid_c = np.meshgrid(betas, np.arange(ring.Q), indexing="ij")
    return ring.H.subgroup(ring.join(1, grid_b.ravel(), grid_c.ravel()), f"A_{direction}")


def build_svn_irrep(ring: HeisenbergRing, b: int, direction: int = 1, choices=None) -> Representation:
    """The q-dimensional irreducible of H over psi_b, induced from a polarization."""
    _check_psi(ring, b)
    A = polarization(ring, direction)
    k = ring.k
    # F_p basis of k, scaled into the polarization direction
    basis = [sum(ring.p**i * (j == i) for j in range(k.f)) for i in range(k.f)]
    gens = [int(ring.join(1, ring.K.mul_table[direction, e], 0)) for e in basis]
    values = extend_character(A, ring.U, psi_values_on_U(ring, b), gens, choices)
    return induce(one_dimensional(A, values), ring.H)


class WeilRepresentation(Representation):
    """rho(t0**m * h) = W**m @ V(h) on the full unit group, generated on demand."""

    def __init__(self, ring: HeisenbergRing, V: Representation, W: np.ndarray, b: int):
        super().__init__(ring.unit_group, V.dim)
        self.ring = ring
        self.b = b
        self.svn = V
        self.W = W
        Q1 = ring.Q - 1
        powers = np.empty((Q1, V.dim, V.dim), dtype=np.complex128)
        powers[0] = np.eye(V.dim)
        for m in range(1, Q1):
            powers[m] = powers[m - 1] @ W
        self.W_powers = powers

    def matrices(self, positions) -> np.ndarray:
        ring = self.ring
        codes = self.group.codes[np.asarray(positions)]
        t, h = ring.factor_unit(codes)
        m = ring.K.log_table[ring.split(t)[0]]
        return self.W_powers[m] @ self.svn.matrices(ring.H.index(h))

    def traces(self, positions=None) -> np.ndarray:
        if positions is None:
            positions = np.arange(self.group.order)
        out = np.empty(len(positions), dtype=np.complex128)
        for start in range(0, len(positions), 8192):
            chunk = self.matrices(positions[start : start + 8192])
            out[start : start + 8192] = np.trace(chunk, axis1=1, axis2=2)
        return out

    @cached_property
    def character_values(self) -> np.ndarray:
        """Trace at every unit, in unit-group enumeration."""
        return self.traces()


def _null_space(M: np.ndarray) -> np.ndarray:
    _, s, vh = np.linalg.svd(M, full_matrices=False)
    rank = int(np.sum(s > RANK_TOL * s[0])) if s.size else 0
    return vh[rank:].conj().T


def torus_target_characters(q: int) -> list[int]:
    """Indices j of characters of T = k2^x trivial on k^x and nontrivial."""
    return [(q - 1) * i for i in range(1, q + 1)]


def extend_by_intertwiners(ring: HeisenbergRing, V: Representation, b: int, tol: float = 1e-8) -> WeilRepresentation:
    """Extend V from H to T x H by the intertwiner of the torus generator.

    W is the (unique up to scalar) solution of W V(h) = V(t0 h t0^-1) W.
    Its scale is fixed by requiring triviality on k^x and that the trace on
    T is the sum of the q characters of T/k^x other than the trivial one.
    """
    H, d = ring.H, V.dim
    t0 = np.full(H.order, ring.torus_generator())
    G = ring.unit_group
    inv_t0 = G.inv_codes(t0)
    conj = H.index(G.mul_codes(G.mul_codes(t0, H.codes), inv_t0))
    Vh, Vc = V.table, V.matrices(conj)
    eye = np.eye(d)
    # row-major vec: (W V)[a, b] = sum_e W[a, e] V[e, b], (V' W)[a, b] = sum_c V'[a, c] W[c, b]
    left = np.einsum("ac,heb->habce", eye, Vh)
    right = np.einsum("hac,eb->habce", Vc, eye)
    blocks = (left - right).reshape(H.order, d * d, d * d)
    null = _null_space(blocks.reshape(-1, d * d))
    if null.shape[1] != 1:
        raise ConstructionError(f"intertwiner space has dimension {null.shape[1]}, expected 1")
    W = null[:, 0].reshape(d, d)
    q, Q1 = ring.q, ring.Q - 1
    Wq1 = np.linalg.matrix_power(W, q + 1)
    c = Wq1[0, 0]
    if np.abs(Wq1 - c * eye).max() > tol * max(1.0, abs(c)):
        raise ConstructionError("W^(q+1) is not scalar")
    m = np.arange(Q1)
    target = roots_of_unity(Q1)[np.outer(m, torus_target_characters(q)) % Q1].sum(axis=1)
    base_root = np.exp(-1j * np.angle(c) / (q + 1)) / abs(c) ** (1 / (q + 1))
    powers = [np.eye(d, dtype=np.complex128)]
    for _ in range(1, Q1):
        powers.append(powers[-1] @ W)
    traces = np.array([np.trace(P) for P in powers])
    admissible = []
    for r in range(q + 1):
        lam = base_root * roots_of_unity(q + 1)[r]
        if np.abs(lam**m * traces - target).max() < tol * d:
            admissible.append(lam)
    if len(admissible) != 1:
        raise ConstructionError(f"{len(admissible)} admissible normalizations of the intertwiner, expected 1")
    W = admissible[0] * W
    if np.abs(np.linalg.matrix_power(W, Q1) - eye).max() > tol:
        raise ConstructionError("normalized intertwiner does not have order dividing q^2 - 1")
    return WeilRepresentation(ring, V, W, b)


def build_heisenberg_rho(ring: HeisenbergRing, b: int, direction: int = 1, choices=None) -> WeilRepresentation:
    return extend_by_intertwiners(ring, build_svn_irrep(ring, b, direction, choices), b)


# --- GL_2(k) and level zero ----------------------------------------------------

@lru_cache(maxsize=None)
def gl2_ring(p: int, f: int = 1) -> MatrixRing:
    """Shared M_2(k) instance, so GL_2(k) and its classes are built once."""
    return MatrixRing(p, f)


def _classify_gl2(M: MatrixRing):
    """For each unit of M_2(k): kind code and an eigenvalue index into k2.

    Kinds: 0 central, 1 scalar times nontrivial unipotent, 2 split regular,
    3 elliptic.  The eigenvalue is the scalar (kinds 0, 1), unused for kind 2
    and one of the two conjugate eigenvalues in k2 for kind 3.
    """
    k = M.k
    K = field_create(k.p, k.f, 2)
    q = k.q
    G = M.unit_group
    a, b, c, d = M.split(G.codes)
    tr, det = M.trace(G.codes), M.det(G.codes)
    # roots in k of x^2 - tr x + det, tabulated over all (tr, det)
    z = np.arange(q)
    T, D = np.meshgrid(z, z, indexing="ij")
    roots = np.zeros((q, q), dtype=np.int64)
    some_root = np.full((q, q), -1, dtype=np.int64)
    for r in range(q):
        val = k.add_table[k.add_table[k.mul_table[r, r], k.neg_table[k.mul_table[T, r]]], D]
        hit = val == 0
        roots += hit
        some_root[hit] = r
    # elliptic eigenvalue lookup from (trace, norm)
    eig = np.full((q, q), -1, dtype=np.int64)
    outside = np.arange(q, K.order)
    eig[K.rel_trace_table[outside], K.rel_norm_table[outside]] = outside
    n_roots = roots[tr, det]
    scalar = (b == 0) & (c == 0) & (a == d)
    kind = np.where(scalar, 0, np.where(n_roots == 1, 1, np.where(n_roots == 2, 2, 3)))
    value = np.where(kind == 3, eig[tr, det], some_root[tr, det])
    if np.any(value[kind != 2] < 0):
        raise ConstructionError("failed to locate eigenvalues")
    return kind, value


def cuspidal_character(theta: MultiplicativeCharacter) -> ClassFunction:
    """Character of the cuspidal representation of GL_2(k) attached to a regular theta."""
    if theta.field.degree != 2:
        raise ValueError("theta must be a character of k2^x")
    if not is_regular(theta):
        raise NotRegularError(f"{theta} factors through the norm")
    K = theta.field
    q = K.q
    M = gl2_ring(K.p, K.f)
    G = M.unit_group
    kind, ev = _classify_gl2(M)
    th = theta.values
    vals = np.zeros(G.order, dtype=np.complex128)
    sel = kind == 0
    vals[sel] = (q - 1) * th[ev[sel]]
    sel = kind == 1
    vals[sel] = -th[ev[sel]]
    sel = kind == 3
    vals[sel] = -(th[ev[sel]] + th[K.frob_table[ev[sel]]])
    return ClassFunction.from_element_values(G, vals)


def borel_subgroup(M: MatrixRing) -> FiniteGroup:
    G = M.unit_group
    _, _, c, _ = M.split(G.codes)
    return G.subgroup(G.codes[c == 0], "B")


def principal_series_character(M: MatrixRing, i: int, j: int) -> ClassFunction:
    """Induced from the Borel character [[a, *], [0, d]] -> chi_i(a) chi_j(d)."""
    k = M.k
    B = borel_subgroup(M)
    a, _, _, d = M.split(B.codes)
    chi_i = MultiplicativeCharacter(k, i).values
    chi_j = MultiplicativeCharacter(k, j).values
    return induced_character(B, chi_i[a] * chi_j[d], M.unit_group)


def level0_rho(theta: MultiplicativeCharacter, ring: LevelZeroRing | None = None) -> ClassFunction:
    """Character of eta_theta (x) theta^-1 on GL_2(k) x k2^x."""
    cusp = cuspidal_character(theta)
    K = theta.field
    R = ring or LevelZeroRing(K.p, K.f)
    G = R.unit_group
    theta_inv = theta.inverse().values[np.arange(1, K.order)]
    vals = (cusp.on_elements()[:, None] * theta_inv[None, :]).ravel()
    return ClassFunction.from_element_values(G, vals)
