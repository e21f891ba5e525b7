# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: bit-sliced simulation and ASAP Toffoli-layer counting."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int32_t, int64_t
from libc.stdlib cimport calloc, free

cnp.import_array()


def simulate(const int32_t[:, ::1] table, uint64_t[:, ::1] state, Py_ssize_t start=0, stop=None):
    cdef Py_ssize_t m = table.shape[0]
    cdef Py_ssize_t end = m if stop is None else stop
    cdef Py_ssize_t nwords = state.shape[1]
    cdef Py_ssize_t g, j
    cdef int32_t k, c0, c1, t
    with nogil:
        for g in range(start, end):
            k = table[g, 0]
            c0 = table[g, 1]
            c1 = table[g, 2]
            t = table[g, 3]
            if k == 2:
                for j in range(nwords):
                    state[t, j] ^= state[c0, j] & state[c1, j]
            elif k == 1:
                for j in range(nwords):
                    state[t, j] ^= state[c0, j]
            else:
                for j in range(nwords):
                    state[t, j] ^= <uint64_t>0xFFFFFFFFFFFFFFFF


def toffoli_depth(const int32_t[:, ::1] table, Py_ssize_t width):
    cdef Py_ssize_t m = table.shape[0]
    cdef Py_ssize_t g, count = 0
    cdef int64_t layer
    cdef int32_t k, c0, c1, t
    cdef long long *last = <long long *> calloc(width + 1, sizeof(long long))
    cdef char *stage = <char *> calloc(m + 2, sizeof(char))
    if last == NULL or stage == NULL:
        free(last)
        free(stage)
        raise MemoryError()
    with nogil:
        for g in range(m):
            k = table[g, 0]
            c0 = table[g, 1]
            c1 = table[g, 2]
            t = table[g, 3]
            if k == 2:
                layer = last[c0]
                if last[c1] > layer:
                    layer = last[c1]
                if last[t] > layer:
                    layer = last[t]
                layer += 1
                last[c0] = layer
                last[c1] = layer
                last[t] = layer
                if not stage[layer]:
                    stage[layer] = 1
                    count += 1
            elif k == 1:
                layer = last[c0]
                if last[t] > layer:
                    layer = last[t]
                layer += 1
                last[c0] = layer
                last[t] = layer
            else:
                last[t] += 1
    free(last)
    free(stage)
    return count
