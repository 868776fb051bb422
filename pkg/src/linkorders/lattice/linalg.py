"""Linear algebra over F_p on integer numpy arrays."""
from __future__ import annotations

import numpy as np


def rref(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of M over F_p, without zero rows, and its pivot columns."""
    A = np.array(M, dtype=np.int64) % p
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        factors = A[:, c].copy()
        factors[r] = 0
        hit = np.nonzero(factors)[0]
        if hit.size:
            A[hit] = (A[hit] - factors[hit, None] * A[r]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M: np.ndarray, p: int) -> int:
    return len(rref(M, p)[1]) if M.size else 0


def nullspace(M: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    R, pivots = rref(M, p) if M.shape[0] else (np.zeros((0, n), dtype=np.int64), [])
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, fcol in enumerate(free):
        basis[i, fcol] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-R[r, fcol]) % p
    return basis


def left_nullspace(M: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning {x : x M = 0}."""
    return nullspace(np.asarray(M).T, p)


def intersect(U: np.ndarray, V: np.ndarray, p: int) -> np.ndarray:
    """Row space of U intersected with row space of V, in RREF."""
    if len(U) == 0 or len(V) == 0:
        return np.zeros((0, U.shape[1] if U.ndim == 2 else V.shape[1]), dtype=np.int64)
    coeffs = left_nullspace(np.vstack([U, -V]), p)
    if len(coeffs) == 0:
        return np.zeros((0, U.shape[1]), dtype=np.int64)
    return rref(coeffs[:, : len(U)] @ U % p, p)[0]


def solve_rows(basis: np.ndarray, targets: np.ndarray, p: int) -> np.ndarray:
    """Coefficients c with c @ basis = targets (basis rows independent); raises if unsolvable."""
    n = len(basis)
    aug = np.hstack([basis.T % p, np.asarray(targets).T % p])
    R, pivots = rref(aug, p)
    if any(pc >= n for pc in pivots):
        raise ValueError("target is not in the row space")
    if len(pivots) != n:
        raise ValueError("basis rows are dependent")
    return R[:n, n:].T.copy()
