# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Must stay bit-identical to ``_kernels_py``."""
import numpy as np

from libc.stdint cimport uint64_t, uint32_t, int64_t, uint8_t

cdef uint64_t GOLDEN_GAMMA = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def splitmix64_next(state):
    cdef uint64_t s = <uint64_t>(state & 0xFFFFFFFFFFFFFFFF)
    s += GOLDEN_GAMMA
    return s, _mix(s)


def shuffle_indices(Py_ssize_t n, seed, bint sattolo):
    cdef uint64_t state = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t z
    cdef Py_ssize_t i, j
    cdef uint32_t tmp
    out = np.arange(n, dtype=np.uint32)
    cdef uint32_t[::1] order = out
    with nogil:
        i = n - 1
        while i > 0:
            state += GOLDEN_GAMMA
            z = _mix(state)
            if sattolo:
                j = <Py_ssize_t>(z % <uint64_t>i)
            else:
                j = <Py_ssize_t>(z % <uint64_t>(i + 1))
            tmp = order[i]
            order[i] = order[j]
            order[j] = tmp
            i -= 1
    return out


cdef inline Py_ssize_t _pmod(int64_t a, Py_ssize_t n) nogil:
    cdef int64_t m = a % n
    if m < 0:
        m += n
    return <Py_ssize_t>m


def schedule_matrix(const uint32_t[::1] order, Py_ssize_t n):
    out = np.empty((n, n), dtype=np.int64)
    cdef int64_t[:, ::1] m = out
    cdef Py_ssize_t r, x, t
    with nogil:
        for r in range(n):
            for x in range(n):
                t = _pmod(<int64_t>order[r] - x, n)
                m[r, x] = -1 if t == x else t
    return out


def round_step(const uint32_t[::1] order, Py_ssize_t n, Py_ssize_t true_round,
               const uint8_t[::1] alive, const int64_t[::1] believed,
               uint8_t[:, ::1] seen):
    cdef Py_ssize_t x, t, scheduled
    cdef int64_t b
    cdef int64_t true_value = order[true_round]
    cdef Py_ssize_t new_edges = 0, idle = 0, live = 0, opportunities = 0
    targets_arr = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] targets = targets_arr
    with nogil:
        for x in range(n):
            b = believed[x]
            if alive[x] and b >= 0:
                targets[x] = _pmod(<int64_t>order[b] - x, n)
        for x in range(n):
            if not alive[x]:
                continue
            live += 1
            scheduled = _pmod(true_value - x, n)
            if scheduled == x:
                continue
            if x < scheduled and alive[scheduled]:
                opportunities += 1
            t = targets[x]
            if t >= 0 and t != x and targets[t] == x:
                if x < t and not seen[x, t]:
                    seen[x, t] = 1
                    new_edges += 1
            else:
                idle += 1
    return new_edges, idle, live, opportunities
