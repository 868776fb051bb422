"""Dense Fourier kernels on finite rings.

Both backends compute, for every output row y,

    out[y, :] = sum_x zeta_p ** E(x, y) * F[x, :]

with ``E(x, y) = sum_t tables[t][cx[x, i_t], cy[y, j_t]] mod p``.  The numpy
path gathers zeta[E] and multiplies by F; the numba path sums F within each of
the p exponent classes first, so it needs only additions in the inner loop.
It parallelizes over y alone, so results do not depend on the thread count.
"""
from __future__ import annotations

import numpy as np

from . import _accel

_BLOCK_ELEMENTS = 1 << 22


def _pack(terms):
    size = max(t[2].shape[0] for t in terms)
    tables = np.zeros((len(terms), size, size), dtype=np.int64)
    for n, (_, _, table) in enumerate(terms):
        tables[n, : table.shape[0], : table.shape[1]] = table
    left = np.array([t[0] for t in terms], dtype=np.int64)
    right = np.array([t[1] for t in terms], dtype=np.int64)
    return tables, left, right


def bilinear_sum_numpy(F, comps, terms, zeta):
    N = comps.shape[0]
    out = np.empty((N, F.shape[1]), dtype=np.complex128)
    p = len(zeta)
    block = max(1, _BLOCK_ELEMENTS // N)
    for start in range(0, N, block):
        stop = min(N, start + block)
        E = np.zeros((stop - start, N), dtype=np.int64)
        for i, j, table in terms:
            E += table[comps[None, :, i], comps[start:stop, None, j]]
        out[start:stop] = zeta[E % p] @ F
    return out


if _accel.numba is not None:
    from numba import njit, prange

    @njit(parallel=True, cache=True)
    def _bilinear_sum_jit(F_re, F_im, comps, tables, left, right, zeta_re, zeta_im):
        N, m = F_re.shape
        nterms, size, _ = tables.shape
        p = zeta_re.shape[0]
        # x-side components per term, contiguous in x
        cx = np.empty((nterms, N), dtype=np.int64)
        for t in range(nterms):
            for x in range(N):
                cx[t, x] = comps[x, left[t]]
        out_re = np.zeros((N, m))
        out_im = np.zeros((N, m))
        for y in prange(N):
            column = np.empty((nterms, size), dtype=np.int64)
            for t in range(nterms):
                b = comps[y, right[t]]
                for a in range(size):
                    column[t, a] = tables[t, a, b]
            # E(x, y) takes only p values: bucket F by exponent, then weight once
            acc_re = np.zeros((p, m))
            acc_im = np.zeros((p, m))
            for x in range(N):
                e = 0
                for t in range(nterms):
                    e += column[t, cx[t, x]]
                e %= p
                for c in range(m):
                    acc_re[e, c] += F_re[x, c]
                    acc_im[e, c] += F_im[x, c]
            for e in range(p):
                zr = zeta_re[e]
                zi = zeta_im[e]
                for c in range(m):
                    out_re[y, c] += zr * acc_re[e, c] - zi * acc_im[e, c]
                    out_im[y, c] += zr * acc_im[e, c] + zi * acc_re[e, c]
        return out_re, out_im

    def bilinear_sum_numba(F, comps, terms, zeta):
        tables, left, right = _pack(terms)
        F = np.ascontiguousarray(F, dtype=np.complex128)
        re, im = _bilinear_sum_jit(
            np.ascontiguousarray(F.real),
            np.ascontiguousarray(F.imag),
            np.ascontiguousarray(comps, dtype=np.int64),
            tables,
            left,
            right,
            np.ascontiguousarray(zeta.real),
            np.ascontiguousarray(zeta.imag),
        )
        return re + 1j * im
else:  # pragma: no cover
    bilinear_sum_numba = None


def bilinear_sum(F, comps, terms, zeta, backend: str | None = None):
    """Dispatch to ``backend`` ('numba' or 'numpy'); default follows the environment flag."""
    if backend is None:
        backend = "numba" if _accel.numba_enabled() else "numpy"
    if backend == "numba":
        if bilinear_sum_numba is None:
            raise RuntimeError("numba backend requested but numba is not installed")
        return bilinear_sum_numba(F, comps, terms, zeta)
    if backend == "numpy":
        return bilinear_sum_numpy(F, comps, terms, zeta)
    raise ValueError(f"unknown backend {backend!r}")
