"""Exact linear algebra helpers and brute-force vertex enumeration.

These are independent of the simplex code and double as its test oracle.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence


def solve_linear(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """Solve the square system ``a x = b`` by Gaussian elimination.

    Returns ``None`` when ``a`` is singular.
    """
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n] for row in m]


def enumerate_vertices(
    a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> list[tuple[Fraction, ...]]:
    """All vertices of ``{x : a x <= b}``, deduplicated, in discovery order.

    Tries every subset of ``dim`` rows as the active set, so only use it on
    small systems.  Nonnegativity must be included as rows if wanted.
    """
    if not a:
        return []
    dim = len(a[0])
    seen: dict[tuple[Fraction, ...], None] = {}
    for rows in combinations(range(len(a)), dim):
        x = solve_linear([a[i] for i in rows], [b[i] for i in rows])
        if x is None:
            continue
        if all(sum(c * v for c, v in zip(row, x)) <= rhs for row, rhs in zip(a, b)):
            seen.setdefault(tuple(x), None)
    return list(seen)
