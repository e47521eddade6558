# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loop of the exhaustive indicator search.

Sets of source elements are bitsets of 64-bit words, so a histogram bin is
one popcount per word.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long x) nogil


def prefix_counts(codes, sizes):
    """See :func:`discrete_hbl._kernels_py.prefix_counts`."""
    cdef int64_t[:, ::1] c = np.ascontiguousarray(codes, dtype=np.int64)
    cdef int64_t[::1] sz = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef Py_ssize_t N = c.shape[0]
    cdef Py_ssize_t m = c.shape[1]
    cdef Py_ssize_t last = m - 1
    cdef Py_ssize_t nlast = sz[last]
    cdef Py_ssize_t nouter = m - 1
    cdef Py_ssize_t W = (N + 63) // 64
    cdef Py_ssize_t T = 1, maxk = 1
    cdef Py_ssize_t j, x, t, k, i, w, b, mask
    for j in range(nouter):
        T *= (1 << sz[j]) - 1
        if (1 << sz[j]) > maxk:
            maxk = 1 << sz[j]
    out_arr = np.zeros((T, nlast), dtype=np.int64)
    cdef int64_t[:, ::1] out = out_arr

    # sets[j, mask, w]: elements whose j-th image lies in the subset ``mask``
    cdef uint64_t[:, :, ::1] sets = np.zeros((max(nouter, 1), maxk, W), dtype=np.uint64)
    cdef uint64_t[:, ::1] fibers = np.zeros((max(nlast, 1), W), dtype=np.uint64)
    for j in range(nouter):
        for x in range(N):
            sets[j, 1 << c[x, j], x >> 6] |= (<uint64_t>1) << (x & 63)
        for mask in range(1, 1 << sz[j]):
            b = mask & (-mask)
            if b != mask:
                for w in range(W):
                    sets[j, mask, w] = sets[j, b, w] | sets[j, mask ^ b, w]
    for x in range(N):
        fibers[c[x, last], x >> 6] |= (<uint64_t>1) << (x & 63)

    # prefix[j + 1] = prefix[j] & sets[j, masks[j]]
    cdef uint64_t[:, ::1] prefix = np.zeros((nouter + 1, W), dtype=np.uint64)
    cdef int64_t[::1] masks = np.ones(max(nouter, 1), dtype=np.int64)
    cdef int64_t[::1] hist = np.zeros(max(nlast, 1), dtype=np.int64)
    cdef int64_t v, acc
    cdef Py_ssize_t dirty = 0
    for x in range(N):
        prefix[0, x >> 6] |= (<uint64_t>1) << (x & 63)
    for t in range(T):
        for j in range(dirty, nouter):
            for w in range(W):
                prefix[j + 1, w] = prefix[j, w] & sets[j, masks[j], w]
        for b in range(nlast):
            v = 0
            for w in range(W):
                v += popcount64(prefix[nouter, w] & fibers[b, w])
            # insertion into the descending histogram
            i = b - 1
            while i >= 0 and hist[i] < v:
                hist[i + 1] = hist[i]
                i -= 1
            hist[i + 1] = v
        acc = 0
        for k in range(nlast):
            acc += hist[k]
            out[t, k] = acc
        # odometer over mask tuples, last outer coordinate fastest
        j = nouter - 1
        while j >= 0:
            if masks[j] < (1 << sz[j]) - 1:
                masks[j] += 1
                break
            masks[j] = 1
            j -= 1
        dirty = j if j > 0 else 0
    return out_arr
