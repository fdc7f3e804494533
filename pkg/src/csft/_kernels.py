"""Integer hot loops, compiled with numba when available.

Set ``CSFT_DISABLE_NUMBA=1`` to force the pure numpy versions.  Both
variants compute identical results; the test-suite runs them against
each other.
"""

import os

import numpy as np

_DISABLED = os.environ.get("CSFT_DISABLE_NUMBA", "").strip() not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag
    HAVE_NUMBA = False


# -- numpy versions ------------------------------------------------------------

def matmul_mod_numpy(a, b, p):
    """``a @ b mod p`` for int64 matrices with entries in ``[0, p)``."""
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # accumulate one rank-1 update at a time so nothing overflows
    for k in range(a.shape[1]):
        out = (out + np.outer(a[:, k], b[k, :])) % p
    return out


def compose_lifts_numpy(f_lifts, g_lifts, g_sign, m1, k1):
    """Compose many lifts at once.

    ``f_lifts`` has shape ``(F, n+1)`` with values in ``Z``; ``g_lifts`` has
    shape ``(G, m+1)``.  Returns ``(F, G, n+1)`` with entry ``[a, b, i]`` equal
    to the periodic extension of ``g_lifts[b]`` (sign ``g_sign[b]``, period
    ``m1 -> k1``) evaluated at ``f_lifts[a, i]``.
    """
    q, r = np.divmod(f_lifts, m1)                      # (F, n+1)
    base = g_lifts[:, r]                               # (G, F, n+1)
    shift = g_sign[:, None, None] * q[None, :, :] * k1
    return np.transpose(base + shift, (1, 0, 2))


def monotone_ok_numpy(lifts, signs, period_out):
    """Which rows are monotone in their sign and wind at most once."""
    d = np.diff(lifts, axis=1) * signs[:, None]
    span = (lifts[:, -1] - lifts[:, 0]) * signs
    return np.all(d >= 0, axis=1) & (span <= period_out)


# -- numba versions ------------------------------------------------------------

if HAVE_NUMBA:
    @njit(cache=True)
    def _matmul_mod_jit(a, b, p, batch):
        # ``batch`` products fit in an int64 before a reduction is needed
        n, k = a.shape
        m = b.shape[1]
        out = np.zeros((n, m), dtype=np.int64)
        for i in range(n):
            row = out[i]
            pending = 0
            for t in range(k):
                ait = a[i, t]
                if ait == 0:
                    continue
                for j in range(m):
                    row[j] += ait * b[t, j]
                pending += 1
                if pending == batch:
                    for j in range(m):
                        row[j] %= p
                    pending = 0
            for j in range(m):
                row[j] %= p
        return out

    @njit(cache=True)
    def _compose_lifts_jit(f_lifts, g_lifts, g_sign, m1, k1):
        nf, n1 = f_lifts.shape
        ng = g_lifts.shape[0]
        out = np.empty((nf, ng, n1), dtype=np.int64)
        for a in range(nf):
            for i in range(n1):
                x = f_lifts[a, i]
                q = x // m1
                r = x - q * m1
                for b in range(ng):
                    out[a, b, i] = g_lifts[b, r] + g_sign[b] * q * k1
        return out

    @njit(cache=True)
    def _monotone_ok_jit(lifts, signs, period_out):
        rows, cols = lifts.shape
        out = np.ones(rows, dtype=np.bool_)
        for r in range(rows):
            s = signs[r]
            for c in range(cols - 1):
                if s * (lifts[r, c + 1] - lifts[r, c]) < 0:
                    out[r] = False
                    break
            if s * (lifts[r, cols - 1] - lifts[r, 0]) > period_out:
                out[r] = False
        return out


def matmul_mod(a, b, p):
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if HAVE_NUMBA and p < (1 << 31):
        # leave room for one residue below p plus the batch of products
        batch = max(1, ((1 << 63) - 1 - p) // max((p - 1) ** 2, 1))
        return _matmul_mod_jit(a, b, np.int64(p), np.int64(min(batch, 1 << 62)))
    return matmul_mod_numpy(a, b, p)


def compose_lifts(f_lifts, g_lifts, g_sign, m1, k1):
    f_lifts = np.ascontiguousarray(f_lifts, dtype=np.int64)
    g_lifts = np.ascontiguousarray(g_lifts, dtype=np.int64)
    g_sign = np.ascontiguousarray(g_sign, dtype=np.int64)
    if HAVE_NUMBA:
        return _compose_lifts_jit(f_lifts, g_lifts, g_sign, np.int64(m1), np.int64(k1))
    return compose_lifts_numpy(f_lifts, g_lifts, g_sign, m1, k1)


def monotone_ok(lifts, signs, period_out):
    lifts = np.ascontiguousarray(lifts, dtype=np.int64)
    signs = np.ascontiguousarray(signs, dtype=np.int64)
    if HAVE_NUMBA:
        return _monotone_ok_jit(lifts, signs, np.int64(period_out))
    return monotone_ok_numpy(lifts, signs, period_out)
