"""Hot numerical kernels with two interchangeable implementations.

The double-contour integrals contract O(n^2) tables of small matrices;
these loops dominate the tiling-kernel runtime.  A numba implementation
is used when available, with a pure-numpy einsum fallback.  Selection:

    CDSURFACE_BACKEND=numpy   force the numpy fallback
    CDSURFACE_BACKEND=numba   force numba (ImportError if missing)

Default: numba if importable, else numpy.
"""

from __future__ import annotations

import os

import numpy as np

_env = os.environ.get("CDSURFACE_BACKEND", "").strip().lower()

if _env == "numpy":
    HAS_NUMBA = False
else:
    try:
        import numba as nb
        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - depends on environment
        if _env == "numba":
            raise
        HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


# --- numpy reference implementations ------------------------------------

def kernel_table_numpy(A, B):
    """K[k, j] = sum_d A[d, k] @ B[d, j].

    A: (D, nw, r, r), B: (D, nz, r, r) -> (nw, nz, r, r)."""
    return np.einsum("dkab,djbc->kjac", A, B, optimize=True)


def double_contract_numpy(cw, Lw, K, Rz, cz):
    """sum_{k,j} cw[k] cz[j] Lw[k] @ K[k, j] @ Rz[j] -> (r, r).

    cw: (nw,), Lw: (nw, r, r), K: (nw, nz, r, r), Rz: (nz, r, r), cz: (nz,)."""
    return np.einsum("k,kab,kjbc,jcd,j->ad", cw, Lw, K, Rz, cz,
                     optimize=True)


def scalar_double_contract_numpy(u, K, v):
    """u^T K v = sum_{k,j} u[k] K[k, j] v[j] for a scalar table K."""
    return u @ K @ v


if HAS_NUMBA:

    @nb.njit(cache=True)
    def _kernel_table_nb(A, B):
        D, nw, r, _ = A.shape
        nz = B.shape[1]
        out = np.zeros((nw, nz, r, r), dtype=np.complex128)
        for d in range(D):
            for k in range(nw):
                for j in range(nz):
                    for a in range(r):
                        for b in range(r):
                            acc = 0.0 + 0.0j
                            for c in range(r):
                                acc += A[d, k, a, c] * B[d, j, c, b]
                            out[k, j, a, b] += acc
        return out

    @nb.njit(cache=True)
    def _double_contract_nb(cw, Lw, K, Rz, cz):
        nw, nz, r, _ = K.shape
        out = np.zeros((r, r), dtype=np.complex128)
        tmp = np.zeros((r, r), dtype=np.complex128)
        for k in range(nw):
            tmp[:, :] = 0.0
            for j in range(nz):
                for a in range(r):
                    for b in range(r):
                        acc = 0.0 + 0.0j
                        for c in range(r):
                            acc += K[k, j, a, c] * Rz[j, c, b]
                        tmp[a, b] += cz[j] * acc
            for a in range(r):
                for b in range(r):
                    acc = 0.0 + 0.0j
                    for c in range(r):
                        acc += Lw[k, a, c] * tmp[c, b]
                    out[a, b] += cw[k] * acc
        return out

    @nb.njit(cache=True)
    def _scalar_double_contract_nb(u, K, v):
        nw, nz = K.shape
        out = 0.0 + 0.0j
        for k in range(nw):
            acc = 0.0 + 0.0j
            for j in range(nz):
                acc += K[k, j] * v[j]
            out += u[k] * acc
        return out

    def kernel_table(A, B):
        return _kernel_table_nb(np.ascontiguousarray(A, dtype=complex),
                                np.ascontiguousarray(B, dtype=complex))

    def double_contract(cw, Lw, K, Rz, cz):
        return _double_contract_nb(
            np.ascontiguousarray(cw, dtype=complex),
            np.ascontiguousarray(Lw, dtype=complex),
            np.ascontiguousarray(K, dtype=complex),
            np.ascontiguousarray(Rz, dtype=complex),
            np.ascontiguousarray(cz, dtype=complex))

    def scalar_double_contract(u, K, v):
        return _scalar_double_contract_nb(
            np.ascontiguousarray(u, dtype=complex),
            np.ascontiguousarray(K, dtype=complex),
            np.ascontiguousarray(v, dtype=complex))

else:
    kernel_table = kernel_table_numpy
    double_contract = double_contract_numpy
    scalar_double_contract = scalar_double_contract_numpy
