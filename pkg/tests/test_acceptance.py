"""Acceptance run: one PASS/FAIL line per criterion, at the stated tolerances.

Run with ``pytest tests/test_acceptance.py -v``; the lines are printed even
without ``-s``.
"""
import time

import numpy as np
import pytest

from linkorders.characters import MultiplicativeCharacter, regular_indices
from linkorders.errors import NotRegularError, TrivialCharacterError
from linkorders.fields import field_create
from linkorders.lattice.checks import lattice_checks
from linkorders.representations import (
    ClassFunction,
    admissible_psi_parameters,
    build_heisenberg_rho,
    build_ramified_rho,
    cuspidal_character,
    inner_product,
    level0_rho,
)
from linkorders.rings import HeisenbergRing, RamifiedRing
from linkorders.verification import (
    RAMIFIED_GRID,
    plan_suite,
    verify_class_census,
    verify_dimension_sum,
    verify_functional_equation,
    verify_gauss_sums,
    verify_gl2_component,
    verify_svn,
    verify_torus_multiplicity,
    verify_trace_reduction,
)

SMALL = [(2, 1), (3, 1)]
EXTENDED = [(2, 2), (5, 1)]


@pytest.fixture
def announce(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
        assert ok, detail

    return emit


def _fe_errors(r):
    return r.details["support_error"], r.details["equation_error"]


def test_criterion_1_ramified_functional_equation(announce):
    worst_support = worst_equation = slowest = 0.0
    for p, f in RAMIFIED_GRID:
        q = p**f
        start = time.perf_counter()
        for shift in range(1, q):
            r = verify_functional_equation("ramified", p, f, param=shift, samples=20, tolerance=1e-9)
            s, e = _fe_errors(r)
            worst_support, worst_equation = max(worst_support, s), max(worst_equation, e)
        slowest = max(slowest, time.perf_counter() - start)
    ok = worst_support < 1e-10 and worst_equation < 1e-9 and slowest < 1.0
    announce(1, "ramified, eps=+1, q in {2,3,4,5,7,8,9}", ok,
             f"support {worst_support:.2e}, equation {worst_equation:.2e}, slowest q {slowest:.2f}s")


def _fe_sweep(case, points, params_of):
    """Worst relative-to-tolerance error over the points and the elapsed time per point."""
    worst, times = 0.0, {}
    for p, f in points:
        q = p**f
        start = time.perf_counter()
        for param in params_of(p, f):
            r = verify_functional_equation(case, p, f, param=param, tolerance=1e-8 * q**3)
            worst = max(worst, r.max_abs_error / r.tolerance)
        times[q] = time.perf_counter() - start
    return worst, times


def test_criterion_2_unramified_functional_equation(announce):
    def psis(p, f):
        ring = HeisenbergRing(p, f)
        params = admissible_psi_parameters(ring)
        assert len(params) == ring.q**2 - ring.q
        return params if ring.q <= 3 else params[:1]

    small, t_small = _fe_sweep("unramified", SMALL, psis)
    ext, t_ext = _fe_sweep("unramified", EXTENDED, psis)
    ok = max(small, ext) < 1 and sum(t_small.values()) < 5 and t_ext[5] < 180
    announce(2, "unramified, eps=-1, q in {2,3} all psi, q in {4,5} one psi", ok,
             f"worst error/tolerance {max(small, ext):.1e}, q<=3 {sum(t_small.values()):.2f}s, "
             f"q=4 {t_ext[4]:.2f}s, q=5 {t_ext[5]:.2f}s")


def test_criterion_3_level0_functional_equation(announce):
    def thetas(p, f):
        regular = regular_indices(field_create(p, f, 2))
        return regular if p**f <= 3 else regular[:1]

    small, t_small = _fe_sweep("level0", SMALL, thetas)
    ext, t_ext = _fe_sweep("level0", EXTENDED, thetas)
    gl2 = 0.0
    for p, f in SMALL:
        for th in thetas(p, f):
            gl2 = max(gl2, verify_gl2_component(p, f, theta=th, tolerance=1e-9).max_abs_error)
    ok = max(small, ext) < 1 and gl2 <= 1e-9 and sum(t_small.values()) < 5 and t_ext[5] < 180
    announce(3, "level zero, eps=-1, plus the GL2 factor -tau f(y^-1)", ok,
             f"worst error/tolerance {max(small, ext):.1e}, GL2 factor {gl2:.2e}, q=5 {t_ext[5]:.2f}s")


def test_criterion_4_gauss_sums(announce):
    start = time.perf_counter()
    worst = max(verify_gauss_sums(p, f, tolerance=1e-9).max_abs_error for p, f in RAMIFIED_GRID)
    elapsed = time.perf_counter() - start
    announce(4, "tau(theta,nu) tau(theta^-1,nu^-1) = q^2 and |tau| = q, q <= 9", worst < 1e-9 and elapsed < 1,
             f"worst {worst:.2e}, {elapsed:.2f}s")


def test_criterion_5_torus_multiplicities(announce):
    worst, integral = 0.0, True
    for p, f in SMALL:
        ring = HeisenbergRing(p, f)
        q = ring.q
        for b in admissible_psi_parameters(ring):
            r = verify_torus_multiplicity(p, f, b=b, tolerance=1e-8)
            worst = max(worst, r.max_abs_error)
            mult = np.array(r.details["multiplicities"])
            # exactly the q nontrivial characters trivial on k^x
            integral &= mult.sum() == q and set(mult.tolist()) <= {0, 1}
    announce(5, "multiplicity one on the q nontrivial characters of T/k^x", worst < 1e-8 and integral,
             f"residual {worst:.2e}")


def test_criterion_6_trace_reduction(announce):
    worst_trace = worst_census = 0.0
    for p, f in SMALL:
        for b in admissible_psi_parameters(HeisenbergRing(p, f)):
            worst_trace = max(worst_trace, verify_trace_reduction(p, f, b=b).max_abs_error)
            worst_census = max(worst_census, verify_class_census(p, f, b=b).max_abs_error)
    ok = worst_trace < 1e-8 and worst_census < 1e-8
    announce(6, "three computations of dft(f)(1) equal -q; class census", ok,
             f"trace {worst_trace:.2e}, census {worst_census:.2e}")


def test_criterion_7_dimension_bookkeeping(announce):
    errors = []
    for p, f in SMALL:
        ring = HeisenbergRing(p, f)
        q = ring.q
        errors.append(verify_dimension_sum(p, f).max_abs_error)
        for b in admissible_psi_parameters(ring):
            errors.append(verify_svn(p, f, b=b).max_abs_error)
            rho = build_heisenberg_rho(ring, b)
            errors.append(abs(rho.dim - q))
        K = field_create(p, f, 2)
        for j in regular_indices(K):
            th = MultiplicativeCharacter(K, j)
            chi = cuspidal_character(th)
            errors.append(abs(inner_product(chi, chi) - 1))
            lz = level0_rho(th)
            errors.append(abs(inner_product(lz, lz) - 1))
        ram = RamifiedRing(p, f)
        chi = ClassFunction.from_element_values(ram.unit_group, build_ramified_rho(ram).traces())
        errors.append(abs(inner_product(chi, chi) - 1))
    worst = max(errors)
    announce(7, "dim rho = q, sum q^2(q-1), <chi,chi> = 1, Stone-von Neumann", worst < 1e-8,
             f"{len(errors)} quantities, worst {worst:.2e}")


def test_criterion_8_lattice_suite(announce):
    start = time.perf_counter()
    results = lattice_checks(2) + lattice_checks(3)
    elapsed = time.perf_counter() - start
    failed = [f"{r.name}{r.params}" for r in results if not r.passed]
    ok = not failed and elapsed < 10
    announce(8, "lattice module identities, linking order duality, quotient isomorphisms, p in {2,3}", ok,
             f"{len(results) - len(failed)}/{len(results)} exact checks, {elapsed:.2f}s"
             + (f", failed {failed}" if failed else ""))


def _raises(exc, fn):
    try:
        fn()
    except exc:
        return True
    return False


def test_criterion_9_negative_controls(announce):
    flips = [
        verify_functional_equation("ramified", 3, param=1, inject_sign_flip=True),
        verify_functional_equation("unramified", 2, param=2, inject_sign_flip=True),
        verify_functional_equation("level0", 3, param=1, inject_sign_flip=True),
    ]
    caught_flips = all(not r.passed and r.witness is not None for r in flips)
    non_regular = _raises(NotRegularError, lambda: plan_suite("level0", [{"p": 3, "theta": 4}])) and _raises(
        NotRegularError, lambda: cuspidal_character(MultiplicativeCharacter(field_create(3, 1, 2), 4))
    )
    trivial_psi = _raises(TrivialCharacterError, lambda: plan_suite("unramified", [{"p": 3, "b": 2}])) and _raises(
        TrivialCharacterError, lambda: build_heisenberg_rho(HeisenbergRing(3), 1)
    )
    ok = caught_flips and non_regular and trivial_psi
    announce(9, "sign flip, non-regular theta and psi trivial on U1 never pass silently", ok,
             f"sign flips caught {caught_flips}, non-regular raises {non_regular}, trivial psi raises {trivial_psi}")
