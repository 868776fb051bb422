"""Check suites for the finite identities: functional equations, Gauss sums,
torus multiplicities, the trace reduction and dimension bookkeeping.

Every check returns a :class:`CheckResult`; failures are data, not
exceptions.  Parameter errors (non-regular theta, psi trivial on U1, size
caps) do raise, before any computation starts.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Iterable

import numpy as np

from .characters import (
    AdditiveCharacter,
    MultiplicativeCharacter,
    factors_through_norm,
    gauss_sum,
    is_regular_index,
    regular_indices,
    roots_of_unity,
)
from .errors import NotRegularError, SizeCapError, TrivialCharacterError
from .fields import field_create
from .fourier import MAX_DFT_ORDER, dft_many
from .representations import (
    ClassFunction,
    admissible_psi_parameters,
    build_heisenberg_rho,
    build_ramified_rho,
    build_svn_irrep,
    cuspidal_character,
    gl2_ring,
    inner_product,
    level0_rho,
    principal_series_character,
    psi_values_on_U,
    torus_target_characters,
)
from .results import CheckResult, Report, timed
from .rings import FiniteRing, HeisenbergRing, LevelZeroRing, MatrixRing, RamifiedRing


def _c(z) -> list[float]:
    z = complex(z)
    return [round(z.real, 12), round(z.imag, 12)]


TOLERANCE_ENV = "LINKORDERS_TOLERANCE"
DEFAULT_TOLERANCE = 1e-9
DEFAULT_SAMPLES = 20
SIGN = {"ramified": 1, "unramified": -1, "level0": -1}


def tolerance_override() -> float | None:
    raw = os.environ.get(TOLERANCE_ENV)
    return float(raw) if raw else None


def default_tolerance(case: str, q: int) -> float:
    """Per-point tolerance of a functional-equation check."""
    if case == "ramified":
        return 1e-10
    return 1e-8 * q**3


# --- functional equations -------------------------------------------------------

def _test_functions(ring: FiniteRing, f: np.ndarray, samples: int, rng: np.random.Generator):
    """Columns f and L_g R_h f for random units g, h."""
    units = ring.units()
    y = ring.elements()
    cols = [f]
    pairs = []
    for _ in range(samples):
        g, h = (int(u) for u in rng.choice(units, 2))
        src = ring.mul(ring.mul(ring.inv(np.full_like(y, g)), y), np.full_like(y, h))
        cols.append(f[src])
        pairs.append((g, h))
    return np.stack(cols, axis=1), pairs


def _compare(ring: FiniteRing, F: np.ndarray, D: np.ndarray, sign: complex, tolerance: float, pairs,
             column_names=None):
    """Support and equation errors of transforms D against sign * F(y^-1)."""
    units = ring.is_unit(ring.elements())
    u = np.nonzero(units)[0]
    expected = np.zeros_like(D)
    expected[u] = sign * F[ring.inv(u)]
    support = float(np.abs(D[~units]).max()) if (~units).any() else 0.0
    eq_err = np.abs(D[u] - expected[u])
    equation = float(eq_err.max())
    witness = None
    if max(support, equation) >= tolerance:
        diff = np.abs(D - expected)
        y, col = np.unravel_index(int(np.argmax(diff)), diff.shape)
        witness = {
            "y": int(y),
            "y_parts": [repr(v) for v in ring.decode(int(y))],
            "function": column_names[col] if column_names else ("f" if col == 0 else f"L_g R_h f, (g, h) = {pairs[col - 1]}"),
            "transform": _c(D[y, col]),
            "expected": _c(expected[y, col]),
        }
    return support, equation, witness


def _flip(ring: FiniteRing, f: np.ndarray) -> np.ndarray:
    """Negative control: negate the function at the identity."""
    f = f.copy()
    f[ring.one] = -f[ring.one]
    return f


def _fe_result(case, ring, f, params, samples, seed, tolerance, inject_sign_flip, backend):
    q = ring.q
    tol = tolerance if tolerance is not None else default_tolerance(case, q)
    if inject_sign_flip:
        f = _flip(ring, f)
    rng = np.random.default_rng(seed)
    F, pairs = _test_functions(ring, f, samples, rng)
    D = dft_many(ring, F, backend)
    support, equation, witness = _compare(ring, F, D, SIGN[case], tol, pairs)
    return CheckResult(
        f"fe.{case}",
        dict(params, samples=samples, inject_sign_flip=inject_sign_flip),
        max(support, equation),
        tol,
        witness=witness,
        details={"sign": SIGN[case], "support_error": support, "equation_error": equation},
    )


def _check_ring_size(order: int):
    if order > MAX_DFT_ORDER:
        raise SizeCapError(f"ring of order {order} exceeds the dense transform cap {MAX_DFT_ORDER}")


def ramified_function(ring: RamifiedRing) -> np.ndarray:
    f = np.zeros(ring.order, dtype=np.complex128)
    rho = build_ramified_rho(ring)
    f[rho.group.codes] = rho.traces()
    return f


def heisenberg_function(ring: HeisenbergRing, b: int) -> np.ndarray:
    rho = build_heisenberg_rho(ring, b)
    f = np.zeros(ring.order, dtype=np.complex128)
    f[rho.group.codes] = rho.character_values
    return f


def level0_function(ring: LevelZeroRing, theta_index: int) -> np.ndarray:
    chi = level0_rho(MultiplicativeCharacter(ring.K, theta_index), ring)
    f = np.zeros(ring.order, dtype=np.complex128)
    f[chi.group.codes] = chi.on_elements()
    return f


@timed
def verify_functional_equation(
    case: str,
    p: int,
    f: int = 1,
    *,
    param: int,
    nu_shift: int = 1,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    tolerance: float | None = None,
    inject_sign_flip: bool = False,
    backend: str | None = None,
) -> CheckResult:
    """dft of the representation's character and of sampled translates.

    ``param`` is the Psi shift (ramified), the psi parameter b (unramified) or
    the theta index (level0).
    """
    q = p**f
    if case == "ramified":
        ring = RamifiedRing(p, f, param)
        fn = ramified_function(ring)
        params = {"p": p, "f": f, "q": q, "psi_shift": param}
    elif case == "unramified":
        _check_ring_size(q**6)
        ring = HeisenbergRing(p, f, nu_shift)
        fn = heisenberg_function(ring, param)
        params = {"p": p, "f": f, "q": q, "b": param, "nu_shift": nu_shift}
    elif case == "level0":
        _check_ring_size(q**6)
        ring = LevelZeroRing(p, f, nu_shift)
        fn = level0_function(ring, param)
        params = {"p": p, "f": f, "q": q, "theta": param, "nu_shift": nu_shift}
    else:
        raise ValueError(f"unknown case {case!r}")
    return _fe_result(case, ring, fn, params, samples, seed, tolerance, inject_sign_flip, backend)


ENTRYWISE_MAX_GROUP = 1000


@timed
def verify_matrix_coefficients(
    case: str,
    p: int,
    f: int = 1,
    *,
    param: int,
    nu_shift: int = 1,
    tolerance: float | None = None,
    backend: str | None = None,
) -> CheckResult:
    """Entrywise cross-check: every matrix coefficient x -> rho(x)[i, j] satisfies
    the functional equation, for unit groups of order at most 1000."""
    q = p**f
    if case == "ramified":
        ring = RamifiedRing(p, f, param)
        rho = build_ramified_rho(ring)
        params = {"p": p, "f": f, "q": q, "psi_shift": param}
    elif case == "unramified":
        ring = HeisenbergRing(p, f, nu_shift)
        params = {"p": p, "f": f, "q": q, "b": param, "nu_shift": nu_shift}
        if ring.unit_group.order > ENTRYWISE_MAX_GROUP:
            raise SizeCapError(f"entrywise mode needs a unit group of order <= {ENTRYWISE_MAX_GROUP}")
        rho = build_heisenberg_rho(ring, param)
    else:
        raise ValueError("entrywise mode needs explicit matrices: case ramified or unramified")
    G = rho.group
    if G.order > ENTRYWISE_MAX_GROUP:
        raise SizeCapError(f"entrywise mode needs a unit group of order <= {ENTRYWISE_MAX_GROUP}")
    mats = rho.matrices(np.arange(G.order))
    d = rho.dim
    F = np.zeros((ring.order, d * d), dtype=np.complex128)
    F[G.codes] = mats.reshape(G.order, d * d)
    names = [f"rho[{i}, {j}]" for i in range(d) for j in range(d)]
    tol = tolerance if tolerance is not None else default_tolerance(case, q)
    D = dft_many(ring, F, backend)
    support, equation, witness = _compare(ring, F, D, SIGN[case], tol, [], column_names=names)
    return CheckResult(
        f"fe.{case}.entrywise",
        params,
        max(support, equation),
        tol,
        witness=witness,
        details={"sign": SIGN[case], "coefficients": d * d},
    )


@timed
def verify_gl2_component(
    p: int,
    f: int = 1,
    *,
    theta: int,
    nu_shift: int = 1,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    tolerance: float | None = None,
) -> CheckResult:
    """q^-1 * sum_x f(x) nu(tr(xy)) = -tau(theta, nu) f(y^-1) for the cuspidal character f.

    The constant q^-1 is q times the self-dual normalization of M_2(k).
    """
    K = field_create(p, f, 2)
    th = MultiplicativeCharacter(K, theta)
    chi = cuspidal_character(th)
    M = gl2_ring(p, f) if nu_shift == 1 else MatrixRing(p, f, nu_shift)
    q = K.q
    tau = gauss_sum(th, AdditiveCharacter(K.subfield, nu_shift))
    fn = np.zeros(M.order, dtype=np.complex128)
    fn[chi.group.codes] = chi.on_elements()
    tol = tolerance if tolerance is not None else DEFAULT_TOLERANCE
    F, pairs = _test_functions(M, fn, samples, np.random.default_rng(seed))
    D = dft_many(M, F) * q  # q^-2 sum -> q^-1 sum
    support, equation, witness = _compare(M, F, D, -tau, tol, pairs)
    return CheckResult(
        "gl2.fourier",
        {"p": p, "f": f, "q": q, "theta": th.index, "nu_shift": nu_shift, "samples": samples},
        max(support, equation),
        tol,
        witness=witness,
        details={"tau": _c(tau), "constant": f"q^-1 = {1 / q:.12g}", "support_error": support, "equation_error": equation},
    )


@timed
def verify_level0_bookkeeping(p: int, f: int = 1, *, theta: int, nu_shift: int = 1, tolerance: float | None = None) -> CheckResult:
    """The GL_2 factor -tau/q times the k2 factor tau'/q composes to the sign -1."""
    K = field_create(p, f, 2)
    th = MultiplicativeCharacter(K, theta)
    if factors_through_norm(th) is not None:
        raise NotRegularError(f"theta index {theta} is not regular")
    nu = AdditiveCharacter(K.subfield, nu_shift)
    q = K.q
    tau = gauss_sum(th, nu)
    tau_dual = gauss_sum(th.inverse(), nu.inverse())
    # k2 factor: q^-1 sum_x theta^-1(x) nu(-Tr(x z)) = (tau_dual / q) theta(z), checked pointwise
    ring_vals = th.inverse().values
    z = np.arange(1, K.order)
    exps = K.abs_trace_table[K.mul_table[K.neg_table[nu_shift]][K.mul_table[np.arange(K.order)][:, z]]]
    factor = (ring_vals[:, None] * roots_of_unity(K.p)[exps]).sum(axis=0) / q
    k2_err = float(np.abs(factor - tau_dual / q * th.values[z]).max())
    sign = (-tau / q) * (tau_dual / q)
    err = max(abs(sign + 1), k2_err)
    tol = tolerance if tolerance is not None else DEFAULT_TOLERANCE
    return CheckResult(
        "level0.bookkeeping",
        {"p": p, "f": f, "q": q, "theta": th.index, "nu_shift": nu_shift},
        err,
        tol,
        witness={"composed_sign": _c(sign), "k2_factor_error": k2_err},
        details={"composed_sign": _c(sign)},
    )


# --- Gauss sums and characters ------------------------------------------------

@timed
def verify_gauss_sums(p: int, f: int = 1, *, tolerance: float | None = None) -> CheckResult:
    """tau(theta, nu) tau(theta^-1, nu^-1) = q^2 and |tau| = q for all regular theta, all nu."""
    K = field_create(p, f, 2)
    q = K.q
    worst, witness = 0.0, None
    for shift in range(1, q):
        nu = AdditiveCharacter(K.subfield, shift)
        for j in regular_indices(K):
            th = MultiplicativeCharacter(K, j)
            tau = gauss_sum(th, nu)
            prod = tau * gauss_sum(th.inverse(), nu.inverse())
            err = max(abs(prod - q * q), abs(abs(tau) - q))
            if err > worst:
                worst = err
                witness = {"theta": j, "nu_shift": shift, "tau": _c(tau), "product": _c(prod)}
    tol = tolerance if tolerance is not None else DEFAULT_TOLERANCE
    return CheckResult("gauss.identity", {"p": p, "f": f, "q": q}, worst, tol, witness=witness)


@timed
def verify_regularity_shortcut(p: int, f: int = 1) -> CheckResult:
    """(q+1) does not divide the index  <=>  no chi with theta = chi o norm (brute force)."""
    K = field_create(p, f, 2)
    bad = [j for j in range(K.order - 1) if is_regular_index(K.q, j) != (factors_through_norm(MultiplicativeCharacter(K, j)) is None)]
    return CheckResult(
        "characters.regularity",
        {"p": p, "f": f, "q": K.q},
        float(len(bad)),
        0.5,
        witness={"mismatched_indices": bad},
    )


@timed
def verify_cuspidal_character(p: int, f: int = 1, *, theta: int, tolerance: float | None = None) -> CheckResult:
    """<chi, chi> = 1, chi(1) = q - 1, and chi orthogonal to every principal series."""
    K = field_create(p, f, 2)
    chi = cuspidal_character(MultiplicativeCharacter(K, theta))
    q = K.q
    M = gl2_ring(p, f)
    norm = inner_product(chi, chi)
    ps = max(
        abs(inner_product(chi, principal_series_character(M, i, j)))
        for i in range(q - 1)
        for j in range(q - 1)
    )
    err = max(abs(norm - 1), abs(chi.degree - (q - 1)), ps)
    tol = tolerance if tolerance is not None else 1e-8
    return CheckResult(
        "gl2.cuspidal",
        {"p": p, "f": f, "q": q, "theta": theta},
        err,
        tol,
        witness={"norm": _c(norm), "degree": _c(chi.degree), "max_principal_series_overlap": ps},
        details={"degree": round(chi.degree.real, 9)},
    )


# --- ramified extras -----------------------------------------------------------

@timed
def verify_ramified_rho(p: int, f: int = 1, *, psi_shift: int = 1, tolerance: float | None = None) -> CheckResult:
    """rho is multiplicative on all pairs of units and trivial on k^x."""
    ring = RamifiedRing(p, f, psi_shift)
    rho = build_ramified_rho(ring)
    hom = rho.homomorphism_error()
    G = ring.unit_group
    scalars = float(np.abs(rho.traces(G.index(ring.scalars())) - 1).max())
    tol = tolerance if tolerance is not None else DEFAULT_TOLERANCE
    return CheckResult(
        "ramified.rho",
        {"p": p, "f": f, "q": ring.q, "psi_shift": psi_shift},
        max(hom, scalars),
        tol,
        witness={"homomorphism_error": hom, "scalar_error": scalars},
    )


# --- Heisenberg suites ------------------------------------------------------------

def _heisenberg(p, f, nu_shift, b):
    ring = HeisenbergRing(p, f, nu_shift)
    if b < ring.q:
        raise TrivialCharacterError(f"psi parameter {b} lies in k, so psi is trivial on U1")
    return ring


@timed
def verify_torus_multiplicity(p: int, f: int = 1, *, b: int, nu_shift: int = 1, tolerance: float | None = None) -> CheckResult:
    """Multiplicity of each character of T in rho_psi restricted to T."""
    ring = _heisenberg(p, f, nu_shift, b)
    rho = build_heisenberg_rho(ring, b)
    q, Q1 = ring.q, ring.Q - 1
    T = ring.T
    # T enumerated by alpha index; alpha = g^m
    alphas = ring.split(T.codes)[0]
    m = ring.K.log_table[alphas]
    traces = rho.character_values[ring.unit_group.index(T.codes)]
    chis = roots_of_unity(Q1)[np.outer(np.arange(Q1), m) % Q1]
    mult = (chis.conj() @ traces) / Q1
    expected = np.zeros(Q1)
    expected[torus_target_characters(q)] = 1
    err = float(np.abs(mult - expected).max())
    tol = tolerance if tolerance is not None else 1e-8
    return CheckResult(
        "heisenberg.torus_multiplicity",
        {"p": p, "f": f, "q": q, "b": b, "nu_shift": nu_shift},
        err,
        tol,
        witness={"multiplicities": [_c(v) for v in mult]},
        details={"multiplicities": [int(round(v.real)) for v in mult]},
    )


@timed
def verify_trace_reduction(p: int, f: int = 1, *, b: int, nu_shift: int = 1, tolerance: float | None = None) -> CheckResult:
    """Three computations of dft(f)(1): direct, class sum, and the closed double sum."""
    ring = _heisenberg(p, f, nu_shift, b)
    rho = build_heisenberg_rho(ring, b)
    q = ring.q
    G = ring.unit_group
    chi = rho.character_values
    nu_units = ring.nu(G.codes)
    scale = float(q) ** -3
    direct = complex(np.sum(chi * nu_units) * scale)

    classes = G.conjugacy_classes
    alpha = ring.split(G.codes[classes.reps])[0]
    outside = alpha >= q
    contrib = classes.sizes * chi[classes.reps] * nu_units[classes.reps] * scale
    class_sum = complex(contrib[outside].sum())
    inside = complex(contrib[~outside].sum())

    K = ring.K
    t_alphas = np.arange(q, ring.Q)
    gammas = np.arange(ring.Q)
    A, C = np.meshgrid(t_alphas, gammas, indexing="ij")
    tu = ring.join(A, 0, K.mul_table[A, C])  # [a,0,0][1,0,c] = [a,0,ac]
    psi_u = psi_values_on_U(ring, b)[ring.U.index(ring.join(1, 0, C))]
    closed = complex(-(psi_u * ring.nu(tu)).sum() / q)

    errors = [abs(direct + q), abs(class_sum + q), abs(closed + q), abs(inside)]
    tol = tolerance if tolerance is not None else 1e-8 * q**3
    return CheckResult(
        "heisenberg.trace_reduction",
        {"p": p, "f": f, "q": q, "b": b, "nu_shift": nu_shift},
        max(errors),
        tol,
        witness={"direct": _c(direct), "class_sum": _c(class_sum), "closed_form": _c(closed), "k_eigenvalue_part": _c(inside)},
        details={"value": _c(direct), "expected": -q},
    )


@timed
def verify_class_census(p: int, f: int = 1, *, b: int, nu_shift: int = 1, tolerance: float | None = None) -> CheckResult:
    """Classes with alpha outside k: size q^2, one representative t*u, character -psi(u)."""
    ring = _heisenberg(p, f, nu_shift, b)
    rho = build_heisenberg_rho(ring, b)
    q = ring.q
    G = ring.unit_group
    classes = G.conjugacy_classes
    a, beta, _ = ring.split(G.codes)
    tu_mask = (a >= q) & (beta == 0)
    psi = psi_values_on_U(ring, b)
    worst, witness, bad_size = 0.0, None, 0
    n_outside = 0
    for c in range(len(classes)):
        members = classes.members(c)
        if a[members[0]] < q:
            continue
        n_outside += 1
        tu = members[tu_mask[members]]
        if classes.sizes[c] != q * q or len(tu) != 1:
            bad_size += 1
            witness = {"class_rep": int(G.codes[members[0]]), "size": int(classes.sizes[c]), "t_u_members": len(tu)}
            continue
        code = int(G.codes[tu[0]])
        _, u = ring.factor_unit(np.array([code]))
        expected = -psi[ring.U.index(u)[0]]
        err = abs(rho.character_values[tu[0]] - expected)
        if err > worst:
            worst = err
    tol = tolerance if tolerance is not None else 1e-8
    return CheckResult(
        "heisenberg.class_census",
        {"p": p, "f": f, "q": q, "b": b, "nu_shift": nu_shift},
        float("inf") if bad_size else worst,
        tol,
        witness=witness,
        details={"classes_outside_k": n_outside, "expected_count": (q * q - q) * q * q},
    )


@timed
def verify_svn(p: int, f: int = 1, *, b: int, nu_shift: int = 1, tolerance: float | None = None) -> CheckResult:
    """dim = q, irreducibility, and equal characters from two polarizations and extensions."""
    ring = _heisenberg(p, f, nu_shift, b)
    q = ring.q
    V1 = build_svn_irrep(ring, b, direction=1)
    other_direction = ring.K.gen_index
    V2 = build_svn_irrep(ring, b, direction=other_direction, choices=[1] * ring.k.f)
    chi1, chi2 = V1.character(), V2.character()
    rho = build_heisenberg_rho(ring, b)
    chi_rho = ClassFunction(ring.unit_group, rho.character_values[ring.unit_group.conjugacy_classes.reps])
    errs = {
        "dimension": abs(V1.dim - q) + abs(rho.dim - q),
        "svn_norm": abs(inner_product(chi1, chi1) - 1),
        "rho_norm": abs(inner_product(chi_rho, chi_rho) - 1),
        "uniqueness": float(np.abs(chi1.class_values - chi2.class_values).max()),
        "central_on_U": float(np.abs(V1.restrict(ring.U).traces() - q * psi_values_on_U(ring, b)).max()),
    }
    tol = tolerance if tolerance is not None else 1e-8
    return CheckResult(
        "heisenberg.stone_von_neumann",
        {"p": p, "f": f, "q": q, "b": b, "nu_shift": nu_shift},
        max(errs.values()),
        tol,
        witness=errs,
        details={"dim": V1.dim},
    )


@timed
def verify_dimension_sum(p: int, f: int = 1, *, nu_shift: int = 1) -> CheckResult:
    """Sum over admissible psi of dim rho_psi equals q^2 (q - 1)."""
    ring = HeisenbergRing(p, f, nu_shift)
    q = ring.q
    total = sum(build_svn_irrep(ring, b).dim for b in admissible_psi_parameters(ring))
    return CheckResult(
        "heisenberg.dimension_sum",
        {"p": p, "f": f, "q": q},
        float(abs(total - q * q * (q - 1))),
        0.5,
        details={"total": total, "expected": q * q * (q - 1)},
    )


@timed
def verify_nonunit_absorption(p: int, f: int = 1, *, nu_shift: int = 1) -> CheckResult:
    """Every non-unit y of the Heisenberg ring has u*y = y for some u in U other than 1."""
    ring = HeisenbergRing(p, f, nu_shift)
    codes = ring.elements()
    nonunits = codes[~ring.is_unit(codes)]
    u = int(ring.join(1, 0, 1))
    moved = int(np.count_nonzero(ring.mul(np.full_like(nonunits, u), nonunits) != nonunits))
    return CheckResult("heisenberg.nonunit_absorption", {"p": p, "f": f, "q": ring.q}, float(moved), 0.5)


# --- suites ------------------------------------------------------------------------

CASES = ("ramified", "unramified", "level0", "lattice")
RAMIFIED_GRID = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]
SMALL_GRID = [(2, 1), (3, 1)]
EXTENDED_GRID = [(2, 2), (5, 1)]


def default_grid(case: str, extended: bool = False) -> list[dict]:
    """Parameter points swept when no p is given."""
    if case == "ramified":
        return [{"p": p, "f": f} for p, f in RAMIFIED_GRID]
    if case in ("unramified", "level0"):
        pts = SMALL_GRID + (EXTENDED_GRID if extended else [])
        return [{"p": p, "f": f} for p, f in pts]
    if case == "lattice":
        return [{"p": 2, "f": 1}, {"p": 3, "f": 1}]
    raise ValueError(f"unknown case {case!r}")


def _ramified_tasks(pt, opts):
    p, f = pt["p"], pt.get("f", 1)
    k = field_create(p, f, 1)
    shifts = [pt["psi_shift"]] if pt.get("psi_shift") is not None else list(range(1, k.q))
    for s in shifts:
        if not 0 < s < k.q:
            raise TrivialCharacterError(f"Psi shift {s} must be a nonzero element index of k")
    tasks = []
    for s in shifts:
        tasks.append(partial(verify_functional_equation, "ramified", p, f, param=s, samples=opts["samples"],
                             seed=opts["seed"], tolerance=opts["tolerance"],
                             inject_sign_flip=opts["inject_sign_flip"], backend=opts["backend"]))
        tasks.append(partial(verify_ramified_rho, p, f, psi_shift=s, tolerance=opts["tolerance"]))
    tasks.append(partial(verify_matrix_coefficients, "ramified", p, f, param=shifts[0],
                         tolerance=opts["tolerance"], backend=opts["backend"]))
    return tasks


def _small_or_extended(q: int, opts, case: str):
    if q <= 3:
        return False
    if not opts["extended"]:
        raise SizeCapError(f"the {case} suite at q={q} runs only with --extended")
    if q**6 > MAX_DFT_ORDER:
        raise SizeCapError(f"ring of order q^6 = {q**6} exceeds the dense transform cap {MAX_DFT_ORDER}")
    return True


def _unramified_tasks(pt, opts):
    p, f = pt["p"], pt.get("f", 1)
    K = field_create(p, f, 2)
    q = K.q
    nu = pt.get("nu_shift") or 1
    if not 0 < nu < q:
        raise TrivialCharacterError(f"nu shift {nu} must be a nonzero element index of k")
    extended = _small_or_extended(q, opts, "unramified")
    if pt.get("b") is not None:
        bs = [pt["b"]]
        if bs[0] < q:
            raise TrivialCharacterError(f"psi parameter {bs[0]} lies in k, so psi is trivial on U1")
        if bs[0] >= K.order:
            raise ValueError(f"psi parameter {bs[0]} is not an element index of k2")
    else:
        bs = list(range(q, K.order))[:1] if extended else list(range(q, K.order))
    tol = opts["tolerance"]
    tasks = []
    for b in bs:
        tasks.append(partial(verify_functional_equation, "unramified", p, f, param=b, nu_shift=nu,
                             samples=opts["samples"], seed=opts["seed"], tolerance=tol,
                             inject_sign_flip=opts["inject_sign_flip"], backend=opts["backend"]))
        tasks.append(partial(verify_torus_multiplicity, p, f, b=b, nu_shift=nu, tolerance=tol))
        if not extended:
            tasks += [
                partial(verify_trace_reduction, p, f, b=b, nu_shift=nu, tolerance=tol),
                partial(verify_class_census, p, f, b=b, nu_shift=nu, tolerance=tol),
                partial(verify_svn, p, f, b=b, nu_shift=nu, tolerance=tol),
                partial(verify_matrix_coefficients, "unramified", p, f, param=b, nu_shift=nu,
                        tolerance=tol, backend=opts["backend"]),
            ]
    if not extended:
        tasks.append(partial(verify_dimension_sum, p, f, nu_shift=nu))
    tasks.append(partial(verify_nonunit_absorption, p, f, nu_shift=nu))
    return tasks


def _level0_tasks(pt, opts):
    p, f = pt["p"], pt.get("f", 1)
    K = field_create(p, f, 2)
    q = K.q
    nu = pt.get("nu_shift") or 1
    if not 0 < nu < q:
        raise TrivialCharacterError(f"nu shift {nu} must be a nonzero element index of k")
    extended = _small_or_extended(q, opts, "level0")
    if pt.get("theta") is not None:
        thetas = [pt["theta"] % (K.order - 1)]
        if not is_regular_index(q, thetas[0]):
            raise NotRegularError(f"theta index {pt['theta']} factors through the norm")
    else:
        thetas = regular_indices(K)[:1] if extended else regular_indices(K)
    tol = opts["tolerance"]
    tasks = []
    for th in thetas:
        tasks.append(partial(verify_functional_equation, "level0", p, f, param=th, nu_shift=nu,
                             samples=opts["samples"], seed=opts["seed"], tolerance=tol,
                             inject_sign_flip=opts["inject_sign_flip"], backend=opts["backend"]))
        if not extended:
            tasks += [
                partial(verify_gl2_component, p, f, theta=th, nu_shift=nu, samples=opts["samples"],
                        seed=opts["seed"], tolerance=tol),
                partial(verify_level0_bookkeeping, p, f, theta=th, nu_shift=nu, tolerance=tol),
                partial(verify_cuspidal_character, p, f, theta=th, tolerance=tol),
            ]
    tasks += [partial(verify_gauss_sums, p, f, tolerance=tol), partial(verify_regularity_shortcut, p, f)]
    return tasks


def _lattice_tasks(pt, opts):
    from .lattice.algebras import StratumParams
    from .lattice.checks import LATTICE_GRID, lattice_point_checks, check_level0

    p = pt["p"]
    if pt.get("f", 1) != 1:
        raise ValueError("the lattice model works over F_p((t)), so f must be 1")
    e, n = pt.get("e"), pt.get("n")
    grid = [(ee, nn) for ee, nn in LATTICE_GRID if (e is None or ee == e) and (n is None or nn == n)]
    if e is not None and n is not None:
        grid = [(e, n)]
    for ee, nn in grid:
        StratumParams(p, ee, nn)
    tasks = [partial(lattice_point_checks, p, ee, nn, seed=opts["seed"]) for ee, nn in grid]
    tasks.append(partial(check_level0, p))
    return tasks


TASK_BUILDERS = {
    "ramified": _ramified_tasks,
    "unramified": _unramified_tasks,
    "level0": _level0_tasks,
    "lattice": _lattice_tasks,
}


def plan_suite(case: str, grid: Iterable[dict], *, samples: int = DEFAULT_SAMPLES, seed: int = 0,
               tolerance: float | None = None, extended: bool = False, inject_sign_flip: bool = False,
               backend: str | None = None) -> list[Callable]:
    """Validate every point and return the check thunks; raises before anything runs."""
    opts = {"samples": samples, "seed": seed, "tolerance": tolerance, "extended": extended,
            "inject_sign_flip": inject_sign_flip, "backend": backend}
    cases = CASES if case == "all" else (case,)
    for c in cases:
        if c not in TASK_BUILDERS:
            raise ValueError(f"unknown case {c!r}")
    tasks = []
    grid = list(grid)
    for c in cases:
        for pt in grid:
            if c == "lattice" and (pt.get("f", 1) != 1 or pt["p"] > 7) and case == "all":
                continue
            tasks += TASK_BUILDERS[c](pt, opts)
    return tasks


def _call(task) -> list[CheckResult]:
    out = task()
    return out if isinstance(out, list) else [out]


def run_suite(case: str, grid: Iterable[dict], *, samples: int = DEFAULT_SAMPLES, seed: int = 0,
              tolerance: float | None = None, extended: bool = False, inject_sign_flip: bool = False,
              backend: str | None = None, workers: int = 1, config: dict | None = None) -> Report:
    """Run all applicable checks over the grid; results keep declaration order."""
    grid = list(grid)
    tasks = plan_suite(case, grid, samples=samples, seed=seed, tolerance=tolerance, extended=extended,
                       inject_sign_flip=inject_sign_flip, backend=backend)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_call, tasks))
    else:
        batches = [_call(t) for t in tasks]
    params = config if config is not None else {"case": case, "grid": grid}
    report = Report(case, params, seed, tolerance)
    for batch in batches:
        report.checks.extend(batch)
    return report
