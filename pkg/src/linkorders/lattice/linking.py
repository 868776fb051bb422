"""The O_E-modules of the model, the linking order and its ideal, and the
explicit isomorphism of their quotient with a finite ring.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import ConstructionError
from ..fields import field_create
from ..rings import FiniteRing, HeisenbergRing, LevelZeroRing, RamifiedRing
from .algebras import Element, ModelAlgebras, StratumParams
from .laurent import Laurent
from .linalg import rank, solve_rows
from .modules import LatticeModule, annihilator


class LinkingModel:
    """Modules in A1 = M2(F), A2 = B and A = A1 x A2 for one (p, e, n)."""

    def __init__(self, params: StratumParams):
        self.params = params
        self.data = ModelAlgebras(params)
        self.p, self.e, self.n = params.p, params.e, params.n
        self.window = params.window

    # --- single algebra (which = 1 or 2) ---------------------------------------
    def _emb(self, which):
        return self.data.embeddings()[which - 1]

    def _span(self, which, gens=(), lines=(), label=""):
        A = self.data.A if which == 0 else self._emb(which).A
        return LatticeModule.span(A, self.window, gens, lines, label=label)

    def order(self, which: int) -> LatticeModule:
        A = self._emb(which).A
        return self._span(which, A.order_generators(), label=f"order_{which}")

    def ideal(self, which: int, m: int) -> LatticeModule:
        emb = self._emb(which)
        return self._span(which, emb.ideal_times(m, emb.A.one()), label=f"p_E^{m}")

    def complement(self, which: int) -> LatticeModule:
        return self._span(which, self._emb(which).complement_basis(), label=f"c_{which}")

    def complement_ideal(self, which: int, j: int) -> LatticeModule:
        emb = self._emb(which)
        return self._span(which, emb.ideal_times(j, emb.v0), label=f"p_E^{j} c_{which}")

    def V(self, which: int, m: int) -> LatticeModule:
        j = self.data.complement_exponent(which, m)
        mod = self.complement_ideal(which, j)
        mod.label = f"V_{which}^{m}"
        return mod

    def E_plus(self, which: int, module: LatticeModule) -> LatticeModule:
        """E + module, where module is a lattice given by generators."""
        emb = self._emb(which)
        return self._span(which, module.gens, [emb.A.one(), emb.u], label=f"E + {module.label}")

    def complement_lattice(self, which: int) -> LatticeModule:
        """C intersected with the order, computed by linear algebra."""
        emb = self._emb(which)
        C = self._span(which, lines=emb.complement_basis(), label="C")
        return C & self.order(which)

    def single_functional(self, which: int):
        return self.data.nu_functional_1 if which == 1 else self.data.nu_functional_2

    # --- product algebra ----------------------------------------------------------
    def _pair_gens(self, gens1, gens2):
        d = self.data
        return [d.pair(x1=g) for g in gens1] + [d.pair(x2=g) for g in gens2]

    def diagonal_ideal(self, m: int) -> list[Element]:
        E = self.data.E
        pm = E.uniformizer_power(m)
        return [self.data.diagonal(pm), self.data.diagonal(E.mul(pm, E.element(0, 1)))]

    def ideal_square(self, m: int) -> list[Element]:
        e1, e2 = self.data.embeddings()
        return self._pair_gens(e1.ideal_times(m, e1.A.one()), e2.ideal_times(m, e2.A.one()))

    def bold_V_gens(self, m: int) -> list[Element]:
        d = self.data
        e1, e2 = d.embeddings()
        return self._pair_gens(e1.ideal_times(d.complement_exponent(1, m), e1.v0),
                               e2.ideal_times(d.complement_exponent(2, m), e2.v0))

    def bold_V(self, m: int) -> LatticeModule:
        return self._span(0, self.bold_V_gens(m), label=f"V^{m}")

    def product_ideal(self, m1: int, m2: int) -> LatticeModule:
        e1, e2 = self.data.embeddings()
        return self._span(0, self._pair_gens(e1.ideal_times(m1, e1.A.one()), e2.ideal_times(m2, e2.A.one())),
                          label=f"p_E^{m1} x p_E^{m2}")

    @cached_property
    def linking_order(self) -> LatticeModule:
        n = self.n
        gens = self.diagonal_ideal(0) + self.ideal_square(n) + self.bold_V_gens(n)
        return self._span(0, gens, label="L_S")

    @cached_property
    def linking_ideal(self) -> LatticeModule:
        n = self.n
        gens = self.diagonal_ideal(1) + self.ideal_square(n + 1) + self.bold_V_gens(n + 1)
        return self._span(0, gens, label="L_S^o")

    def annihilator(self, module: LatticeModule, which: int = 0) -> LatticeModule:
        functional = self.data.nu_functional if which == 0 else self.single_functional(which)
        return annihilator(module, functional, label=f"({module.label})*")


class LevelZeroModel:
    """M2(O_F) x O_B and its ideal p_F M2(O_F) x P_B, with nu trivial on p_E only."""

    def __init__(self, p: int, N: int | None = None):
        self.params = StratumParams(p, 1, 0, N)
        self.p = p
        self.data = ModelAlgebras(self.params)
        self.window = self.params.window

    def _span(self, gens, label):
        return LatticeModule.span(self.data.A, self.window, gens, label=label)

    @cached_property
    def linking_order(self) -> LatticeModule:
        d = self.data
        return self._span([d.pair(x1=g) for g in d.A1.order_generators()]
                          + [d.pair(x2=g) for g in d.A2.order_generators()], "L_0")

    @cached_property
    def linking_ideal(self) -> LatticeModule:
        d = self.data
        t = Laurent.monomial(self.p, 1)
        pi = d.A2.basis(2)
        return self._span([d.pair(x1=d.A1.scale(t, g)) for g in d.A1.order_generators()]
                          + [d.pair(x2=d.A2.mul(pi, g)) for g in d.A2.order_generators()], "L_0^o")

    def annihilator(self, module: LatticeModule) -> LatticeModule:
        return annihilator(module, self.data.nu_functional, label=f"({module.label})*")


# --- quotient isomorphism ---------------------------------------------------------

@dataclass
class QuotientIso:
    """A coset-representative map from a finite ring into a linking order.

    ``lifts[i]`` is the representative of the i-th F_p-coordinate basis vector
    of the ring; ``coords`` gives the F_p-coordinates of every ring element.
    """

    ring: FiniteRing
    lifts: list
    coords: np.ndarray
    structure: np.ndarray
    nu_values: np.ndarray
    nu_shift: int
    extra: dict


def _field_coords(K, idx):
    return K.coords[np.asarray(idx)]


def ring_coordinates(ring: FiniteRing) -> np.ndarray:
    """F_p-coordinates of all elements of a finite ring over a prime field."""
    codes = ring.elements()
    if isinstance(ring, RamifiedRing):
        a, b = ring.split(codes)
        return np.stack([a, b], axis=1)
    if isinstance(ring, HeisenbergRing):
        a, b, c = ring.split(codes)
        K = ring.K
        return np.hstack([_field_coords(K, a), _field_coords(K, b), _field_coords(K, c)])
    if isinstance(ring, LevelZeroRing):
        m, y = ring.split(codes)
        return np.hstack([np.stack(ring.matrices.split(m), axis=1), _field_coords(ring.K, y)])
    raise TypeError(f"no coordinates for {ring!r}")


def _reduce(L: LatticeModule, Lo: LatticeModule, lift_rows: np.ndarray, targets: np.ndarray, p: int):
    """Coordinates of targets (in L) along the lifts, modulo Lo."""
    basis = np.vstack([lift_rows, Lo.basis])
    sol = solve_rows(basis, targets, p)
    return sol[:, : len(lift_rows)]


def build_quotient_iso(L: LatticeModule, Lo: LatticeModule, ring: FiniteRing, lifts: list,
                       functional, extra=None) -> QuotientIso:
    """Structure constants of L/Lo along the lifts; raises if the lifts are not a basis mod Lo."""
    A, p = L.algebra, L.algebra.p
    for x in lifts:
        if not L.contains(x):
            raise ConstructionError("a lifted basis element is outside the linking order")
    lift_rows = np.array([L.vector(x) for x in lifts])
    if L.dim - Lo.dim != len(lifts) or rank(np.vstack([lift_rows, Lo.basis]), p) != L.dim:
        raise ConstructionError("the lifts do not form a basis of the quotient")
    d = len(lifts)
    prods = np.array([L.vector(A.mul(x, y)) for x in lifts for y in lifts])
    structure = _reduce(L, Lo, lift_rows, prods, p).reshape(d, d, d)
    nu_values = np.array([sum((lam * c for lam, c in zip(functional, x)), Laurent(p)).coefficient(0)
                          for x in lifts]) % p
    return QuotientIso(ring, lifts, ring_coordinates(ring), structure, nu_values, 0, extra or {})


def compare_tables(iso: QuotientIso, p: int, pairs: np.ndarray | None = None) -> dict:
    """Quotient product and sum against the ring's, on all pairs or the given ones."""
    ring, X = iso.ring, iso.coords
    codes = ring.elements()
    order = len(codes)
    if pairs is None:
        r, s = np.divmod(np.arange(order * order), order)
    else:
        r, s = pairs[:, 0], pairs[:, 1]
    lookup = {tuple(row): i for i, row in enumerate(X)}
    quotient = _bilinear(X, iso.structure, r, s, pairs is None) % p
    prod_coords = X[np.searchsorted(codes, ring.mul(codes[r], codes[s]))]
    sum_coords = X[np.searchsorted(codes, ring.add(codes[r], codes[s]))]
    mul_bad = int(np.count_nonzero((quotient != prod_coords).any(axis=1)))
    add_bad = int(np.count_nonzero(((X[r] + X[s]) % p != sum_coords).any(axis=1)))
    return {"pairs": int(len(r)), "mul_mismatches": mul_bad, "add_mismatches": add_bad,
            "distinct_images": len(lookup)}


def _bilinear(X, structure, r, s, full: bool) -> np.ndarray:
    """sum_ij X[r]_i X[s]_j structure[i, j, :] for the listed pairs."""
    d = X.shape[1]
    if full:
        # left factors once per element, then one matmul per left element
        left = (X @ structure.reshape(d, d * d)).reshape(len(X), d, d)
        return np.matmul(X[None, :, :], left).reshape(-1, d)
    return np.einsum("ni,nj,ijk->nk", X[r], X[s], structure)


def match_nu_shift(iso: QuotientIso, make_ring) -> int | None:
    """Shift s in k^x for which nu_S on the quotient equals the ring's nu_R."""
    p = iso.ring.p
    values = iso.coords @ iso.nu_values % p
    for s in range(1, p):
        ring = make_ring(s)
        if np.array_equal(ring.nu_exponent(ring.elements()) % p, values):
            return s
    return None


def _lift_k2(data: ModelAlgebras, which: int, index: int) -> Element:
    """Constant lift c0 + c1 u of the k2 element with coordinates (c0, c1)."""
    K = field_create(data.p, 1, 2)
    c0, c1 = (int(c) for c in K.coords[index])
    E = data.E
    emb = data.embeddings()[which - 1]
    return emb.embed(E.element(c0, c1))


def ramified_lifts(model: LinkingModel) -> list[Element]:
    """(x, x + pi_E^n y) for the basis (1, 0), (0, 1) of k[X]/(X^2)."""
    d, E = model.data, model.data.E
    pn = E.uniformizer_power(model.n)
    one = d.diagonal(E.element(1))
    y = d.pair(x2=d.emb2.embed(pn))
    return [one, y]


def heisenberg_lifts(model: LinkingModel, lam: int) -> list[Element]:
    """Lifts of [alpha, 0, 0], [0, beta, 0], [0, 0, gamma] over the k2-basis 1, w.

    The beta part is lift(beta / lam) * v for the nonzero component v of the
    generator of V^n / V^(n+1); gamma is placed as (0, pi_E^n gamma).
    """
    d, E = model.data, model.data.E
    K = field_create(model.p, 1, 2)
    which = 1 if model.n % 2 == 0 else 2
    emb = d.embeddings()[which - 1]
    v = emb.A.mul(emb.embed(E.uniformizer_power(d.complement_exponent(which, model.n))), emb.v0)
    inv_lam = int(K.inv_table[lam])
    lifts = []
    for basis_index in (1, K.q):  # 1 and w
        lifts.append(d.pair(_lift_k2(d, 1, basis_index), _lift_k2(d, 2, basis_index)))
    for basis_index in (1, K.q):
        scaled = int(K.mul_table[basis_index, inv_lam])
        part = emb.A.mul(_lift_k2(d, which, scaled), v)
        lifts.append(d.pair(x1=part) if which == 1 else d.pair(x2=part))
    pn = E.uniformizer_power(model.n)
    for basis_index in (1, K.q):
        c0, c1 = (int(c) for c in K.coords[basis_index])
        lifts.append(d.pair(x2=d.emb2.embed(E.mul(pn, E.element(c0, c1)))))
    return lifts


def level0_lifts(model: LevelZeroModel) -> list[Element]:
    """Matrix units in M2(O_F) and the constant lifts of 1, w in O_B."""
    d = model.data
    out = [d.pair(x1=d.A1.basis(a)) for a in range(4)]
    out += [d.pair(x2=d.A2.basis(0)), d.pair(x2=d.A2.basis(1))]
    return out


def quotient_iso(model, ring_shift: int = 1) -> QuotientIso:
    """The isomorphism of L/L^o with the matching finite ring, nu shift resolved.

    For e = 1 the scaling lam of the beta part is searched over k2^x until the
    quotient multiplication agrees with the Heisenberg law.
    """
    L, Lo = model.linking_order, model.linking_ideal
    p = model.p
    functional = model.data.nu_functional
    if isinstance(model, LevelZeroModel):
        make = lambda s: LevelZeroRing(p, 1, s)
        iso = build_quotient_iso(L, Lo, make(ring_shift), level0_lifts(model), functional)
    elif model.e == 2:
        make = lambda s: RamifiedRing(p, 1, s)
        iso = build_quotient_iso(L, Lo, make(ring_shift), ramified_lifts(model), functional)
    else:
        make = lambda s: HeisenbergRing(p, 1, s)
        ring = make(ring_shift)
        iso = None
        for lam in range(1, ring.Q):
            candidate = build_quotient_iso(L, Lo, ring, heisenberg_lifts(model, lam), functional,
                                           extra={"lambda": lam})
            if _beta_products_match(candidate, p):
                iso = candidate
                break
        if iso is None:
            raise ConstructionError("no scaling of V^n/V^(n+1) matches the Heisenberg law")
    iso.nu_shift = match_nu_shift(iso, make)
    return iso


def _beta_products_match(iso: QuotientIso, p: int) -> bool:
    ring, X = iso.ring, iso.coords
    codes = ring.elements()
    alpha, _, gamma = ring.split(codes)
    betas = np.nonzero((alpha == 0) & (gamma == 0))[0]
    r, s = np.meshgrid(betas, betas, indexing="ij")
    r, s = r.ravel(), s.ravel()
    quotient = np.einsum("ni,nj,ijk->nk", X[r], X[s], iso.structure) % p
    expected = X[np.searchsorted(codes, ring.mul(codes[r], codes[s]))]
    return bool(np.array_equal(quotient, expected))
