# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Bit-packed GF(2) elimination kernels.

Matrices arrive as C-contiguous uint64 arrays, one row of packed words
per logical row (little-endian bit order: column c lives in word c//64,
bit c%64).  Both kernels mutate their input in place.
"""

from libc.stdint cimport int64_t, uint64_t

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    static inline int topomemo_hibit64(unsigned long long x) {
        return 63 - __builtin_clzll(x);
    }
    """
    int topomemo_hibit64(unsigned long long x) nogil


def rref_packed(cnp.uint64_t[:, ::1] m, Py_ssize_t ncols):
    """Row-reduce ``m`` in place; returns the pivot column list.

    Pivots are scanned in ascending column order within ``ncols``;
    trailing bits are treated as augmentation and only XORed along.
    After the call the first ``len(pivots)`` rows hold the reduced rows
    in pivot order.
    """
    cdef Py_ssize_t nrows = m.shape[0]
    cdef Py_ssize_t nwords = m.shape[1]
    cdef Py_ssize_t done = 0, col, r, w, pivot_row, word_i
    cdef uint64_t bit, tmp
    pivots = []
    for col in range(ncols):
        if done == nrows:
            break
        word_i = col >> 6
        bit = (<uint64_t>1) << (col & 63)
        pivot_row = -1
        for r in range(done, nrows):
            if m[r, word_i] & bit:
                pivot_row = r
                break
        if pivot_row < 0:
            continue
        if pivot_row != done:
            for w in range(nwords):
                tmp = m[done, w]
                m[done, w] = m[pivot_row, w]
                m[pivot_row, w] = tmp
        for r in range(nrows):
            if r != done and (m[r, word_i] & bit):
                for w in range(nwords):
                    m[r, w] ^= m[done, w]
        pivots.append(col)
        done += 1
    return pivots


cdef inline int64_t _row_low(cnp.uint64_t[:, ::1] m, Py_ssize_t j,
                             Py_ssize_t nwords) nogil:
    cdef Py_ssize_t w
    for w in range(nwords - 1, -1, -1):
        if m[j, w]:
            return (<int64_t>w << 6) + topomemo_hibit64(m[j, w])
    return -1


def column_reduce_packed(cnp.uint64_t[:, ::1] m, Py_ssize_t nbits):
    """Persistence-style left-to-right low reduction, in place.

    Row ``j`` of ``m`` holds column ``j``'s bits.  Returns an int64
    array of final lows (-1 where the column emptied).
    """
    cdef Py_ssize_t ncols = m.shape[0]
    cdef Py_ssize_t nwords = m.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] owner_arr = np.full(
        nbits if nbits > 0 else 1, -1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] lows_arr = np.empty(
        ncols, dtype=np.int64)
    cdef cnp.int64_t[:] owner = owner_arr
    cdef cnp.int64_t[:] lows = lows_arr
    cdef Py_ssize_t j, w, k
    cdef int64_t low
    for j in range(ncols):
        low = _row_low(m, j, nwords)
        while low >= 0 and owner[low] >= 0:
            k = owner[low]
            for w in range(nwords):
                m[j, w] ^= m[k, w]
            low = _row_low(m, j, nwords)
        if low >= 0:
            owner[low] = j
        lows[j] = low
    return lows_arr
