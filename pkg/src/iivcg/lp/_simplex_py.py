"""Pure-Python simplex kernel.

Tableau rows are lists of Python ints ``[n_0, ..., n_{N-1}, n_rhs, d]``: the
row's rational entries are ``n_j / d`` with a shared positive denominator
``d``.  Rows are kept in lowest terms after every pivot, so the arithmetic is
exact and stays on machine-level integer operations instead of ``Fraction``
objects.

This module and ``_simplex_core.pyx`` implement the same two functions with
identical pivoting decisions; ``_kernel`` picks one at import time.
"""
from math import gcd

OPTIMAL = 0
UNBOUNDED = 1


def _reduce(row):
    g = gcd(*row)
    if g > 1:
        row[:] = [x // g for x in row]


def pivot(rows, objs, r, c):
    """Pivot the tableau on entry ``(r, c)`` in place.

    ``objs`` are objective rows updated alongside ``rows``; they use the same
    layout.
    """
    prow = rows[r]
    p = prow[c]
    # normalised pivot row is prow[:-1] / p
    if p < 0:
        prow[:-1] = [-x for x in prow[:-1]]
        p = -p
    prow[-1] = p
    _reduce(prow)
    p = prow[c]
    nz = [j for j in range(len(prow) - 1) if prow[j]]
    for group in (rows, objs):
        for row in group:
            if row is prow:
                continue
            f = row[c]
            if not f:
                continue
            new = [x * p for x in row]
            for j in nz:
                new[j] -= f * prow[j]
            _reduce(new)
            row[:] = new


def simplex(rows, objs, basis, allowed):
    """Run Bland's-rule primal simplex from a feasible basis.

    ``objs[0]`` holds the reduced costs being minimised; columns at index
    ``allowed`` or beyond never enter the basis.  Returns ``(status, col)``
    where ``col`` is the unbounded direction's entering column.
    """
    obj = objs[0]
    rhs = len(obj) - 2
    while True:
        col = -1
        for j in range(allowed):
            if obj[j] < 0:
                col = j
                break
        if col < 0:
            return OPTIMAL, -1
        best = -1
        bn = bd = 0
        for i, row in enumerate(rows):
            a = row[col]
            if a > 0:
                num = row[rhs]
                if best < 0:
                    best, bn, bd = i, num, a
                    continue
                lhs = num * bd
                rhs_ = bn * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best]):
                    best, bn, bd = i, num, a
        if best < 0:
            return UNBOUNDED, col
        pivot(rows, objs, best, col)
        basis[best] = col
