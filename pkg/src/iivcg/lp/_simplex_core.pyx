# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled simplex kernel; same contract as ``_simplex_py``.

Row updates run on 64-bit integers with overflow checks.  A row whose
entries or intermediate products do not fit falls back to Python ints, so
results are identical to the pure-Python kernel.
"""
from libc.stdlib cimport free, malloc
from math import gcd

cdef extern from "Python.h":
    long long PyLong_AsLongLongAndOverflow(object obj, int *overflow) except? -1

cdef extern from *:
    bint __builtin_mul_overflow(long long a, long long b, long long *res) nogil
    bint __builtin_sub_overflow(long long a, long long b, long long *res) nogil

cdef enum:
    _OPTIMAL = 0
    _UNBOUNDED = 1

OPTIMAL = _OPTIMAL
UNBOUNDED = _UNBOUNDED


cdef int _reduce(list row) except -1:
    cdef object g = gcd(*row)
    cdef Py_ssize_t j, width
    if g > 1:
        width = len(row)
        for j in range(width):
            row[j] = row[j] // g
    return 0


cdef inline long long _gcd64(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef bint _load(list row, long long *out, Py_ssize_t width):
    """Copy ``row`` into ``out``; False if some entry does not fit in 64 bits."""
    cdef int over = 0
    cdef Py_ssize_t j
    for j in range(width):
        out[j] = PyLong_AsLongLongAndOverflow(row[j], &over)
        # keep clear of LLONG_MIN so negation cannot overflow
        if over or out[j] == -9223372036854775807 - 1:
            return False
    return True


cdef bint _update_loaded(list row, long long *prow, Py_ssize_t *nz, Py_ssize_t nnz,
                         Py_ssize_t width, long long p, long long *buf):
    """``row = reduce(row * p - f * prow)`` in 64-bit arithmetic, with ``row``
    preloaded into ``buf`` and ``f`` stored at ``buf[width]``.

    Returns False (leaving ``row`` untouched) on any overflow.
    """
    cdef long long f, t, g = 0
    cdef Py_ssize_t j, k
    f = buf[width]  # the pivot-column entry, stashed by the caller
    for j in range(width):
        if __builtin_mul_overflow(buf[j], p, &buf[j]):
            return False
    for k in range(nnz):
        j = nz[k]
        if __builtin_mul_overflow(f, prow[j], &t):
            return False
        if __builtin_sub_overflow(buf[j], t, &buf[j]):
            return False
        if buf[j] == -9223372036854775807 - 1:
            return False
    for j in range(width):
        if buf[j]:
            g = _gcd64(g, buf[j])
            if g == 1:
                break
    if g > 1:
        for j in range(width):
            buf[j] = buf[j] // g
    for j in range(width):
        row[j] = buf[j]
    return True


cdef void _update_slow(list row, list prow, list nz_list, object f, object p) except *:
    cdef list new = [x * p for x in row]
    cdef Py_ssize_t j
    for j in nz_list:
        new[j] = new[j] - f * prow[j]
    _reduce(new)
    row[:] = new


cpdef pivot(list rows, list objs, Py_ssize_t r, Py_ssize_t c):
    cdef list prow = rows[r]
    cdef Py_ssize_t width = len(prow)
    cdef Py_ssize_t j, k, nnz
    cdef object p = prow[c]
    cdef object f
    cdef list row, group
    cdef long long *pv = NULL
    cdef long long *buf = NULL
    cdef Py_ssize_t *nz = NULL
    cdef bint fast
    if p < 0:
        for j in range(width - 1):
            prow[j] = -prow[j]
        p = -p
    prow[width - 1] = p
    _reduce(prow)
    p = prow[c]
    nz_list = [j for j in range(width - 1) if prow[j]]
    nnz = len(nz_list)
    pv = <long long *> malloc(width * sizeof(long long))
    buf = <long long *> malloc((width + 1) * sizeof(long long))
    nz = <Py_ssize_t *> malloc((nnz + 1) * sizeof(Py_ssize_t))
    if pv == NULL or buf == NULL or nz == NULL:
        free(pv); free(buf); free(nz)
        raise MemoryError()
    try:
        fast = _load(prow, pv, width)
        for k in range(nnz):
            nz[k] = nz_list[k]
        for group in (rows, objs):
            for row in group:
                if row is prow:
                    continue
                f = row[c]
                if not f:
                    continue
                if fast and _load(row, buf, width):
                    buf[width] = buf[c]
                    if _update_loaded(row, pv, nz, nnz, width, pv[c], buf):
                        continue
                _update_slow(row, prow, nz_list, f, p)
    finally:
        free(pv)
        free(buf)
        free(nz)


cpdef tuple simplex(list rows, list objs, list basis, Py_ssize_t allowed):
    cdef list obj = objs[0]
    cdef Py_ssize_t rhs = len(obj) - 2
    cdef Py_ssize_t j, i, col, best, nrows
    cdef list row
    cdef object a, num, bn, bd, lhs, rhs_
    while True:
        col = -1
        for j in range(allowed):
            if obj[j] < 0:
                col = j
                break
        if col < 0:
            return _OPTIMAL, -1
        best = -1
        bn = 0
        bd = 0
        nrows = len(rows)
        for i in range(nrows):
            row = rows[i]
            a = row[col]
            if a > 0:
                num = row[rhs]
                if best < 0:
                    best = i
                    bn = num
                    bd = a
                    continue
                lhs = num * bd
                rhs_ = bn * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best]):
                    best = i
                    bn = num
                    bd = a
        if best < 0:
            return _UNBOUNDED, col
        pivot(rows, objs, best, col)
        basis[best] = col
