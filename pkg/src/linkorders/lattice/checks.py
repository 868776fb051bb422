"""Exact checks of the lattice model, reported as CheckResults.

Every check counts failed sub-assertions; the tolerance is 0.5, so a check
passes exactly when nothing failed.
"""
from __future__ import annotations

import itertools

import numpy as np

from ..results import CheckResult, timed
from .algebras import StratumParams
from .laurent import Laurent
from .linking import LevelZeroModel, LinkingModel, compare_tables, quotient_iso
from .modules import LatticeModule, module_product

EXACT = 0.5
WHICH = {1: "M2", 2: "B"}


def _params(model) -> dict:
    P = model.params
    return {"p": P.p, "e": P.e, "n": P.n, "N": P.top}


def _result(name, model, failures: list, details=None) -> CheckResult:
    return CheckResult(name, _params(model), float(len(failures)), EXACT,
                       witness={"failed": failures} if failures else None, details=details or {})


def _random_laurent(rng, p, low, high):
    return Laurent(p, {e: int(rng.integers(p)) for e in range(low, high)})


def _determinant(rows, p) -> Laurent:
    """Determinant of a square matrix of Laurent polynomials (Leibniz expansion)."""
    total = Laurent(p)
    size = len(rows)
    for perm in itertools.permutations(range(size)):
        term = Laurent.const(p, _perm_sign(perm))
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        total = total + term
    return total


def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for start in range(len(perm)):
        if start in seen:
            continue
        length, j = 0, start
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        sign *= (-1) ** (length - 1)
    return sign


def _coordinate_subspace(model, which: int) -> LatticeModule:
    """A1 x 0 (which = 1) or 0 x A2 (which = 2), truncated to the window."""
    A = model.data.A
    L, dim = model.window.length, A.dim
    cols = range(4) if which == 1 else range(4, 8)
    rows = []
    for i in range(L):
        for c in cols:
            r = np.zeros(L * dim, dtype=np.int64)
            r[i * dim + c] = 1
            rows.append(r)
    return LatticeModule(A, model.window, np.array(rows))


@timed
def check_algebras(p: int, e: int, n: int, *, seed: int = 0, pairs: int = 50) -> CheckResult:
    """Galois matrix in the order with zero projection, alpha v = v sigma(alpha),
    A = E + C by dimension, and O_E v0 = C n order."""
    model = LinkingModel(StratumParams(p, e, n))
    d, E = model.data, model.data.E
    rng = np.random.default_rng(seed)
    failures = []
    sigma = d.emb1.v0
    if not (d.emb1.is_complement(sigma) and d.A1.in_order(sigma)):
        failures.append("galois matrix not in C_1 n order_1")
    for which, emb in ((1, d.emb1), (2, d.emb2)):
        A = emb.A
        for _ in range(pairs):
            alpha = E.element(_random_laurent(rng, p, -2, 3), _random_laurent(rng, p, -2, 3))
            coef = E.element(_random_laurent(rng, p, -2, 3), _random_laurent(rng, p, -2, 3))
            v = A.mul(emb.embed(coef), emb.v0)
            if not emb.is_complement(v):
                failures.append(f"{WHICH[which]}: E-multiple of v0 left C")
                break
            if A.mul(emb.embed(alpha), v) != A.mul(v, emb.embed(E.sigma(alpha))):
                failures.append(f"{WHICH[which]}: alpha v != v sigma(alpha)")
                break
        spanning = [A.one(), emb.u, *emb.complement_basis()]
        both = model._span(which, lines=spanning)
        if _determinant(spanning, p).is_zero() or both.dim != model.window.length * A.dim:
            failures.append(f"{WHICH[which]}: A != E + C on the window")
        if model.complement_lattice(which) != model.complement(which):
            failures.append(f"{WHICH[which]}: C n order != O_E v0")
    return _result("lattice.algebras", model, failures)


@timed
def check_complements(p: int, e: int, n: int) -> CheckResult:
    """cc = p_E (e = 1, A = B) or O_E, and the annihilator of c."""
    model = LinkingModel(StratumParams(p, e, n))
    failures, details = [], {}
    for which in (1, 2):
        c = model.complement(which)
        special = e == 1 and which == 2
        sq = module_product(c, c)
        expected = model.ideal(which, 1 if special else 0)
        details[f"cc_{WHICH[which]}"] = "p_E" if special else "O_E"
        if sq != expected:
            failures.append(f"cc in {WHICH[which]}")
        dual = model.annihilator(c, which)
        j = n if special else n + 1
        if dual != model.E_plus(which, model.complement_ideal(which, j)):
            failures.append(f"c* in {WHICH[which]}")
        details[f"c*_{WHICH[which]}"] = f"E + p_E^{j} c"
    return _result("lattice.complements", model, failures, details)


# V^n V^n = p_E^(n + shift) for e = 1, keyed by (algebra, n parity)
VV_TABLE = {(1, 0): 0, (1, 1): 1, (2, 0): 1, (2, 1): 0}
# dim over k_E of V^n / V^(n+1) for e = 1
VDIM_TABLE = {(1, 0): 1, (1, 1): 0, (2, 0): 0, (2, 1): 1}


@timed
def check_v_modules(p: int, e: int, n: int) -> CheckResult:
    """Products, stability, quotient dimensions and duals of V_A^n."""
    model = LinkingModel(StratumParams(p, e, n))
    failures, details = [], {}
    for which in (1, 2):
        name = WHICH[which]
        Vn, Vn1 = model.V(which, n), model.V(which, n + 1)
        sq = module_product(Vn, Vn)
        if not sq <= model.ideal(which, n):
            failures.append(f"V^n V^n not in p_E^n ({name})")
        if e == 1:
            shift = VV_TABLE[which, n % 2]
            if sq != model.ideal(which, n + shift):
                failures.append(f"V^n V^n != p_E^(n+{shift}) ({name})")
            kdim = (Vn.dim - Vn1.dim) // 2
            details[f"dim V^n/V^n+1 ({name})"] = kdim
            if kdim != VDIM_TABLE[which, n % 2] or not Vn1 <= Vn:
                failures.append(f"dim V^n/V^(n+1) ({name})")
        elif Vn != Vn1:
            failures.append(f"V^n != V^(n+1) ({name})")
        if model.annihilator(Vn, which) != model.E_plus(which, Vn1):
            failures.append(f"(V^n)* != E + V^(n+1) ({name})")
    return _result("lattice.v_modules", model, failures, details)


@timed
def check_product_duals(p: int, e: int, n: int) -> CheckResult:
    """Annihilators of Delta(O_E) and bold V^n, and bold V^n squared (e = 1)."""
    model = LinkingModel(StratumParams(p, e, n))
    d = model.data
    failures = []
    diag = model._span(0, model.diagonal_ideal(0), label="Delta(O_E)")
    C1, C2 = d.emb1.complement_basis(), d.emb2.complement_basis()
    lines = [d.diagonal(d.E.element(1)), d.diagonal(d.E.element(0, 1))]
    lines += [d.pair(x1=v) for v in C1] + [d.pair(x2=v) for v in C2]
    expected = model._span(0, model.ideal_square(n + 1), lines)
    if model.annihilator(diag) != expected:
        failures.append("Delta(O_E)* != Delta(E) + p^(n+1) x p^(n+1) + C1 x C2")
    V = model.bold_V(n)
    both_E = [d.pair(x1=d.A1.one()), d.pair(x1=d.emb1.u), d.pair(x2=d.A2.one()), d.pair(x2=d.emb2.u)]
    if model.annihilator(V) != model._span(0, model.bold_V_gens(n + 1), both_E):
        failures.append("(V^n)* != (E x E) + V^(n+1)")
    sq = module_product(V, V)
    if e == 1:
        m1, m2 = (n, n + 1) if n % 2 == 0 else (n + 1, n)
        if sq != model.product_ideal(m1, m2):
            failures.append(f"V^n V^n != p^{m1} x p^{m2}")
    elif not sq <= model.product_ideal(n, n):
        failures.append("V^n V^n not in p^n x p^n")
    return _result("lattice.product_duals", model, failures)


def _random_unit(rng, model):
    p, E = model.p, model.data.E
    a = _random_laurent(rng, p, 0, 3)
    b = _random_laurent(rng, p, 0, 3)
    if a.coefficient(0) == 0 and (model.e == 2 or b.coefficient(0) == 0):
        a = a + 1
    m = int(rng.integers(0, 3))
    return E.mul(E.uniformizer_power(m), (a, b))


@timed
def check_linking_order(p: int, e: int, n: int, *, seed: int = 0, samples: int = 20) -> CheckResult:
    """Order and ideal property, duality, index, Delta(E^x)-normalization and
    the unit part over GL2(F)."""
    model = LinkingModel(StratumParams(p, e, n))
    d = model.data
    L, Lo = model.linking_order, model.linking_ideal
    failures = []
    if not module_product(L, L) <= L:
        failures.append("L_S not closed under multiplication")
    if not (module_product(L, Lo) <= Lo and module_product(Lo, L) <= Lo):
        failures.append("L_S^o not a two-sided ideal")
    if model.annihilator(L) != Lo:
        failures.append("annihilator of L_S != L_S^o")
    index = p ** (L.dim - Lo.dim)
    expected_index = p**2 if e == 2 else p**6
    if index != expected_index:
        failures.append(f"index {index} != {expected_index}")
    rng = np.random.default_rng(seed)
    A = d.A
    for _ in range(samples):
        beta = d.diagonal(_random_unit(rng, model))
        left = LatticeModule.span(A, model.window, [A.mul(beta, g) for g in L.gens])
        right = LatticeModule.span(A, model.window, [A.mul(g, beta) for g in L.gens])
        if left != right:
            failures.append("beta L_S != L_S beta")
            break
    for which in (1, 2):
        emb = d.embeddings()[which - 1]
        part = model._span(which, emb.ideal_times(n, emb.A.one()) + model.V(which, n).gens)
        gens = [d.pair(x1=g) if which == 1 else d.pair(x2=g) for g in part.gens]
        if L & _coordinate_subspace(model, which) != model._span(0, gens):
            failures.append(f"L_S n A_{which} != p^n + V^n")
    return _result("lattice.linking_order", model, failures,
                   {"index": index, "dim_L": L.dim, "dim_Lo": Lo.dim})


@timed
def check_quotient_iso(p: int, e: int, n: int) -> CheckResult:
    """L_S / L_S^o against the ramified or Heisenberg ring, all pairs."""
    model = LinkingModel(StratumParams(p, e, n))
    iso = quotient_iso(model)
    table = compare_tables(iso, p)
    failures = []
    if table["mul_mismatches"] or table["add_mismatches"]:
        failures.append(table)
    if table["distinct_images"] != iso.ring.order:
        failures.append("coordinates not bijective")
    if iso.nu_shift is None:
        failures.append("nu_S matches no shift of the ring's character")
    details = {"ring": iso.ring.name, "nu_shift": iso.nu_shift, "pairs": table["pairs"], **iso.extra}
    return _result("lattice.quotient_iso", model, failures, details)


@timed
def check_level0(p: int, *, N: int | None = None) -> CheckResult:
    """L_0 = M2(O_F) x O_B: duality, index q^6, quotient iso and the GL2 part."""
    model = LevelZeroModel(p, N)
    L, Lo = model.linking_order, model.linking_ideal
    failures = []
    if model.annihilator(L) != Lo:
        failures.append("annihilator of L_0 != L_0^o")
    if not (module_product(L, L) <= L and module_product(L, Lo) <= Lo and module_product(Lo, L) <= Lo):
        failures.append("order/ideal property")
    index = p ** (L.dim - Lo.dim)
    if index != p**6:
        failures.append(f"index {index} != q^6")
    iso = quotient_iso(model)
    table = compare_tables(iso, p)
    if table["mul_mismatches"] or table["add_mismatches"] or table["distinct_images"] != iso.ring.order:
        failures.append(table)
    if iso.nu_shift is None:
        failures.append("nu_0 matches no shift")
    d = model.data
    integral = LatticeModule.span(d.A, model.window, [d.pair(x1=g) for g in d.A1.order_generators()])
    if L & _coordinate_subspace(model, 1) != integral:
        failures.append("L_0 n A_1 != M2(O_F)")
    return _result("lattice.level0", model, failures,
                   {"index": index, "ring": iso.ring.name, "nu_shift": iso.nu_shift})


LATTICE_GRID = [(2, 1), (2, 3), (1, 1), (1, 2), (1, 3)]


def lattice_point_checks(p: int, e: int, n: int, *, seed: int = 0) -> list[CheckResult]:
    """The six module checks at one (p, e, n)."""
    return [
        check_algebras(p, e, n, seed=seed),
        check_complements(p, e, n),
        check_v_modules(p, e, n),
        check_product_duals(p, e, n),
        check_linking_order(p, e, n, seed=seed),
        check_quotient_iso(p, e, n),
    ]


def lattice_checks(p: int, *, seed: int = 0) -> list[CheckResult]:
    """Every point of the default (e, n) grid at one p, then the level-zero check."""
    out = []
    for e, n in LATTICE_GRID:
        out += lattice_point_checks(p, e, n, seed=seed)
    out.append(check_level0(p))
    return out
