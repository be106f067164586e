# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for permanents and vanishing-permanent sweeps.

Mirrors `_purekernels` exactly (same functions, same pattern encoding);
see that module for the encoding contract.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"

MAX_INT64_N = 13


cdef long long _ryser(const signed char* a, int n) noexcept nogil:
    cdef long long rowsums[16]
    cdef long long total = 0
    cdef long long prod
    cdef unsigned long long k, gray
    cdef int i, j, bit
    for i in range(n):
        rowsums[i] = 0
    for k in range(1, (<unsigned long long>1) << n):
        j = 0
        while not (k >> j) & 1:
            j += 1
        gray = k ^ (k >> 1)
        if (gray >> j) & 1:
            for i in range(n):
                rowsums[i] += a[i * n + j]
        else:
            for i in range(n):
                rowsums[i] -= a[i * n + j]
        prod = 1
        for i in range(n):
            prod *= rowsums[i]
        bit = 0
        while gray:
            bit ^= gray & 1
            gray >>= 1
        if bit:
            total -= prod
        else:
            total += prod
    if n & 1:
        total = -total
    return total


def ryser_permanent(a) -> int:
    """Exact permanent of a small integer matrix via Ryser/Gray-code, int64 arithmetic."""
    cdef cnp.ndarray[cnp.int8_t, ndim=2, mode="c"] m = np.ascontiguousarray(a, dtype=np.int8)
    cdef int n = m.shape[0]
    if m.shape[1] != n:
        raise ValueError("matrix must be square")
    if n > MAX_INT64_N:
        raise ValueError(f"int64 kernel limited to n <= {MAX_INT64_N}")
    return int(_ryser(<const signed char*>m.data, n))


def batch_permanent(mats) -> np.ndarray:
    """Permanents of a (B, n, n) int batch; exact while n <= MAX_INT64_N."""
    cdef cnp.ndarray[cnp.int8_t, ndim=3, mode="c"] ms = np.ascontiguousarray(mats, dtype=np.int8)
    cdef Py_ssize_t b = ms.shape[0]
    cdef int n = ms.shape[1]
    if ms.shape[2] != n:
        raise ValueError("matrices must be square")
    if n > MAX_INT64_N:
        raise ValueError(f"int64 kernel limited to n <= {MAX_INT64_N}")
    out = np.empty(b, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] o = out
    cdef const signed char* base = <const signed char*>ms.data
    cdef Py_ssize_t t
    with nogil:
        for t in range(b):
            o[t] = _ryser(base + t * n * n, n)
    return out


def find_vanishing(int n, bint normalized) -> np.ndarray:
    """Encoded patterns of all n x n sign matrices with permanent zero.

    Exhaustive mode sweeps all 2^(n^2) matrices; normalized mode fixes the
    first row and column to +1 and sweeps the 2^((n-1)^2) interior
    patterns.  Returns a sorted int64 array of full-matrix encodings.
    """
    cdef int bits = (n - 1) * (n - 1) if normalized else n * n
    if bits >= 48:
        raise ValueError("sweep too large")
    cdef unsigned long long total = (<unsigned long long>1) << bits
    cdef unsigned long long raw, full
    cdef signed char entries[256]
    cdef int i, j, src, dst
    cdef unsigned long long top = 0
    if normalized:
        for j in range(n):
            top |= (<unsigned long long>1) << (n * n - 1 - j)
        for i in range(n):
            top |= (<unsigned long long>1) << (n * n - 1 - i * n)
    found = []
    for raw in range(total):
        if normalized:
            full = top
            for i in range(1, n):
                for j in range(1, n):
                    src = (n - 1) * (n - 1) - 1 - ((i - 1) * (n - 1) + (j - 1))
                    dst = n * n - 1 - (i * n + j)
                    full |= ((raw >> src) & 1) << dst
        else:
            full = raw
        for i in range(n):
            for j in range(n):
                if (full >> (n * n - 1 - (i * n + j))) & 1:
                    entries[i * n + j] = 1
                else:
                    entries[i * n + j] = -1
        if _ryser(entries, n) == 0:
            found.append(full)
    out = np.array(found, dtype=np.int64)
    out.sort()
    return out
