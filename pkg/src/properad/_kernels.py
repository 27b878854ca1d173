"""Integer kernels for the combinatorial audits.

The exact rational code paths never touch these.  They cover the two loops
that dominate the exhaustive checks: squaring integer differential matrices
and ranking integer matrices modulo a large prime.  Each kernel exists as a
numba ``@njit`` function and as a plain numpy function; set
``PROPERAD_DISABLE_NUMBA=1`` to force the numpy path.
"""

import os

import numpy as np

PRIME = 2147483647  # 2**31 - 1; products of residues fit in int64

_DISABLED = os.environ.get("PROPERAD_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by PROPERAD_DISABLE_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def _matmul_py(a, b):
    return a @ b


def _rank_mod_p_py(a, p):
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(m[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, c]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        below = np.nonzero(m[rank + 1:, c])[0] + rank + 1
        for r in below:
            f = int(m[r, c])
            m[r] = (m[r] - f * m[rank]) % p
        rank += 1
    return rank


def _is_zero_py(a):
    return not np.any(a)


if HAVE_NUMBA:

    @njit(cache=True)
    def _matmul_nb(a, b):
        n, k = a.shape
        m = b.shape[1]
        out = np.zeros((n, m), dtype=np.int64)
        for i in range(n):
            for t in range(k):
                x = a[i, t]
                if x == 0:
                    continue
                for j in range(m):
                    out[i, j] += x * b[t, j]
        return out

    @njit(cache=True)
    def _powmod(base, exp, p):
        result = 1
        base %= p
        while exp > 0:
            if exp & 1:
                result = (result * base) % p
            base = (base * base) % p
            exp >>= 1
        return result

    @njit(cache=True)
    def _rank_mod_p_nb(a, p):
        rows, cols = a.shape
        m = np.empty((rows, cols), dtype=np.int64)
        for i in range(rows):
            for j in range(cols):
                m[i, j] = a[i, j] % p
        rank = 0
        for c in range(cols):
            if rank == rows:
                break
            piv = -1
            for r in range(rank, rows):
                if m[r, c] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(cols):
                    tmp = m[rank, j]
                    m[rank, j] = m[piv, j]
                    m[piv, j] = tmp
            inv = _powmod(m[rank, c], p - 2, p)
            for j in range(cols):
                m[rank, j] = (m[rank, j] * inv) % p
            for r in range(rank + 1, rows):
                f = m[r, c]
                if f != 0:
                    for j in range(cols):
                        m[r, j] = (m[r, j] - f * m[rank, j]) % p
            rank += 1
        return rank

    @njit(cache=True)
    def _is_zero_nb(a):
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                if a[i, j] != 0:
                    return False
        return True


def int_matmul(a, b):
    """Integer matrix product in int64 (entries are assumed not to overflow)."""
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if HAVE_NUMBA:
        return _matmul_nb(a, b)
    return _matmul_py(a, b)


def rank_mod_p(a, p=PRIME):
    """Rank of an integer matrix over GF(p)."""
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    if HAVE_NUMBA:
        return int(_rank_mod_p_nb(a, p))
    return int(_rank_mod_p_py(a, p))


def is_zero(a):
    a = np.ascontiguousarray(a, dtype=np.int64)
    if a.size == 0:
        return True
    if HAVE_NUMBA:
        return bool(_is_zero_nb(a))
    return bool(_is_zero_py(a))


def square_is_zero(d):
    """True when the square integer matrix ``d`` satisfies d @ d == 0."""
    return is_zero(int_matmul(d, d))


# pure-numpy references, kept importable for the benchmark and the tests
matmul_numpy = _matmul_py
rank_mod_p_numpy = _rank_mod_p_py
