"""Pure-Python / numpy kernels for permanents and vanishing-permanent sweeps.

This is the fallback used when the compiled extension is unavailable; the
two implementations expose the same functions and must agree exactly.

Pattern encoding shared with the compiled kernels and `signmat`: an n x n
sign matrix is packed into an int with bit (n*n - 1 - (n*i + j)) set iff
entry (i, j) is +1.  Comparing encoded ints therefore orders matrices by
their row-major entry sequence with -1 < +1, which is the canonical-form
ordering.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "pure"

# int64 Ryser accumulators are provably overflow-free only while
# 2^n * n^n < 2^63; beyond that callers must use exact big-int paths.
MAX_INT64_N = 13


def ryser_permanent(a: np.ndarray) -> int:
    """Exact permanent of a small integer matrix via Ryser/Gray-code, int64 arithmetic."""
    n = a.shape[0]
    if a.shape[1] != n:
        raise ValueError("matrix must be square")
    if n > MAX_INT64_N:
        raise ValueError(f"int64 kernel limited to n <= {MAX_INT64_N}")
    return int(batch_permanent(np.asarray(a, dtype=np.int8)[None, :, :])[0])


def batch_permanent(mats: np.ndarray) -> np.ndarray:
    """Permanents of a (B, n, n) int batch; exact while n <= MAX_INT64_N."""
    mats = np.asarray(mats, dtype=np.int64)
    b, n, n2 = mats.shape
    if n != n2:
        raise ValueError("matrices must be square")
    if n > MAX_INT64_N:
        raise ValueError(f"int64 kernel limited to n <= {MAX_INT64_N}")
    rowsums = np.zeros((b, n), dtype=np.int64)
    total = np.zeros(b, dtype=np.int64)
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray = k ^ (k >> 1)
        if gray & (1 << j):
            rowsums += mats[:, :, j]
        else:
            rowsums -= mats[:, :, j]
        prod = rowsums.prod(axis=1)
        if gray.bit_count() & 1:
            total -= prod
        else:
            total += prod
    if n & 1:
        np.negative(total, out=total)
    return total


def _decode_batch(patterns: np.ndarray, n: int) -> np.ndarray:
    """Unpack encoded patterns into (B, n, n) +-1 matrices."""
    shifts = (n * n - 1 - np.arange(n * n, dtype=np.int64)).reshape(n, n)
    bits = (patterns[:, None, None] >> shifts[None, :, :]) & 1
    return (2 * bits - 1).astype(np.int64)

def _inner_to_full(inner: np.ndarray, n: int) -> np.ndarray:
    """Embed (n-1)^2-bit interior patterns into full patterns with +1 first row/column."""
    full = np.zeros(inner.shape, dtype=np.int64)
    for i in range(1, n):
        for j in range(1, n):
            src = (n - 1) * (n - 1) - 1 - ((i - 1) * (n - 1) + (j - 1))
            dst = n * n - 1 - (i * n + j)
            full |= ((inner >> src) & 1) << dst
    top = 0
    for j in range(n):
        top |= 1 << (n * n - 1 - j)
    for i in range(n):
        top |= 1 << (n * n - 1 - i * n)
    return full | top


def find_vanishing(n: int, normalized: bool) -> np.ndarray:
    """Encoded patterns of all n x n sign matrices with permanent zero.

    Exhaustive mode sweeps all 2^(n^2) matrices; normalized mode fixes the
    first row and column to +1 and sweeps the 2^((n-1)^2) interior
    patterns.  Returns a sorted int64 array of full-matrix encodings.
    """
    bits = (n - 1) * (n - 1) if normalized else n * n
    total = 1 << bits
    chunk = 1 << 16
    found = []
    for start in range(0, total, chunk):
        raw = np.arange(start, min(start + chunk, total), dtype=np.int64)
        patterns = _inner_to_full(raw, n) if normalized else raw
        mats = _decode_batch(patterns, n)
        per = batch_permanent(mats)
        found.append(patterns[per == 0])
    out = np.concatenate(found) if found else np.zeros(0, dtype=np.int64)
    out.sort()
    return out
