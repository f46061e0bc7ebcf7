"""Hot modular kernels: numba-compiled with a vectorised numpy fallback.

The backend is chosen once at import time.  Set ``OMEGA_NIJ_NUMBA=0`` to
force the numpy path (numba is also skipped when it is not importable).
``OMEGA_NIJ_THREADS`` caps numba's thread pool.

All kernels work on ``int64`` arrays holding residues in ``[0, p)`` with
``p < 2**31`` so that a single product fits in 63 bits.
"""
from __future__ import annotations

import os

import numpy as np

MAX_MODULUS = 2**31

_want_numba = os.environ.get("OMEGA_NIJ_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _want_numba:
        raise ImportError("numba disabled by OMEGA_NIJ_NUMBA")
    import numba
    from numba import njit, prange

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def _thread_cap():
    raw = os.environ.get("OMEGA_NIJ_THREADS")
    if not raw:
        return None
    try:
        n = int(raw)
    except ValueError:
        return None
    return max(1, n)


# ---------------------------------------------------------------- numpy path


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a), -1, p)


def rref_mod_p_numpy(A: np.ndarray, p: int):
    """Reduced row echelon form of ``A`` modulo ``p`` (in place).

    Returns the pivot column indices.  Rows ``0..rank-1`` of ``A`` hold the
    reduced rows afterwards.
    """
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = _inv_mod(A[r, c], p)
        if inv != 1:
            A[r] = (A[r] * inv) % p
        f = A[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            prow = A[r, c:]
            A[hit, c:] = (A[hit, c:] - (f[hit, None] * prow[None, :]) % p) % p
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


def matmul_mod_p_numpy(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """``A @ B mod p`` without int64 overflow (16-bit limb split of ``B``)."""
    lo = B & 0xFFFF
    hi = B >> 16
    # each partial sum is < cols * 2**31 * 2**16; chunk the inner dimension
    k = A.shape[1]
    step = max(1, (1 << 62) // ((1 << 31) * (1 << 16)))
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        a = A[:, s:s + step]
        part_lo = (a @ lo[s:s + step]) % p
        part_hi = (a @ hi[s:s + step]) % p
        out = (out + part_lo + (part_hi * (1 << 16)) % p) % p
    return out


# ---------------------------------------------------------------- numba path

if HAVE_NUMBA:
    # the bundled TBB is often too old; prefer OpenMP, then numba's own pool
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    cap = _thread_cap()
    if cap is not None:
        numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))

    @njit(cache=True)
    def _inv_mod_nb(a, p):
        t, newt = 0, 1
        r, newr = p, a % p
        while newr != 0:
            q = r // newr
            t, newt = newt, t - q * newt
            r, newr = newr, r - q * newr
        if t < 0:
            t += p
        return t

    @njit(cache=True, parallel=True)
    def _eliminate_rows_nb(A, r, c, p):
        rows, cols = A.shape
        for i in prange(rows):
            if i == r:
                continue
            f = A[i, c]
            if f == 0:
                continue
            for j in range(c, cols):
                v = A[r, j]
                if v != 0:
                    x = A[i, j] - (f * v) % p
                    if x < 0:
                        x += p
                    A[i, j] = x

    @njit(cache=True)
    def _rref_mod_p_nb(A, p):
        rows, cols = A.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if A[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(cols):
                    tmp = A[r, j]
                    A[r, j] = A[piv, j]
                    A[piv, j] = tmp
            inv = _inv_mod_nb(A[r, c], p)
            if inv != 1:
                for j in range(c, cols):
                    A[r, j] = (A[r, j] * inv) % p
            _eliminate_rows_nb(A, r, c, p)
            pivots[r] = c
            r += 1
        return pivots[:r]

    @njit(cache=True, parallel=True)
    def _matmul_mod_p_nb(A, B, p):
        n, k = A.shape
        m = B.shape[1]
        out = np.zeros((n, m), dtype=np.int64)
        for i in prange(n):
            for t in range(k):
                a = A[i, t]
                if a == 0:
                    continue
                for j in range(m):
                    b = B[t, j]
                    if b != 0:
                        out[i, j] = (out[i, j] + a * b) % p
        return out

    def rref_mod_p(A: np.ndarray, p: int):
        return _rref_mod_p_nb(A, np.int64(p))

    def matmul_mod_p(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
        return _matmul_mod_p_nb(np.ascontiguousarray(A), np.ascontiguousarray(B), np.int64(p))

else:
    rref_mod_p = rref_mod_p_numpy
    matmul_mod_p = matmul_mod_p_numpy


def check_modulus(p: int):
    if not 2 <= p < MAX_MODULUS:
        raise ValueError(f"modular kernels need 2 <= p < 2**31, got {p}")
