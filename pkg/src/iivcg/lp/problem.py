"""Exact linear programs over the rationals.

``solve`` runs a two-phase primal simplex with Bland's anti-cycling rule on an
integer tableau (see ``_simplex_py``).  Every optimum is re-substituted into
the original constraints before it is returned.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from . import _kernel

LE = "<="
GE = ">="
EQ = "=="
_FLIP = {LE: GE, GE: LE, EQ: EQ}

Bound = tuple[Optional[Fraction], Optional[Fraction]]


class LPError(ValueError):
    """Malformed linear program."""


def as_fraction(x) -> Fraction:
    """Exact conversion; floats go through their shortest decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in _FLIP:
            raise LPError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(as_fraction(a) for a in self.coeffs))
        object.__setattr__(self, "rhs", as_fraction(self.rhs))

    def holds(self, x: Sequence[Fraction]) -> bool:
        lhs = sum((a * v for a, v in zip(self.coeffs, x) if a), Fraction(0))
        return _compare(lhs, self.relation, self.rhs)


def _compare(lhs, rel, rhs) -> bool:
    if rel == LE:
        return lhs <= rhs
    if rel == GE:
        return lhs >= rhs
    return lhs == rhs


@dataclass(frozen=True)
class LinearProgram:
    """``sense`` ("min" or "max") of ``objective · x`` subject to the
    constraints and per-variable ``bounds``.

    ``bounds`` defaults to ``(0, None)`` for every variable; ``None`` marks a
    missing bound, so ``(None, None)`` is a free variable.
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...] = ()
    bounds: Optional[tuple[Bound, ...]] = None
    sense: str = "min"

    def __post_init__(self):
        obj = tuple(as_fraction(c) for c in self.objective)
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(self.constraints))
        n = len(obj)
        if self.sense not in ("min", "max"):
            raise LPError(f"sense must be 'min' or 'max', got {self.sense!r}")
        for i, con in enumerate(self.constraints):
            if len(con.coeffs) != n:
                raise LPError(f"constraint {i} has {len(con.coeffs)} coefficients, expected {n}")
        if self.bounds is None:
            bounds = ((Fraction(0), None),) * n
        else:
            if len(self.bounds) != n:
                raise LPError(f"got {len(self.bounds)} bounds for {n} variables")
            bounds = tuple(
                (None if lo is None else as_fraction(lo), None if hi is None else as_fraction(hi))
                for lo, hi in self.bounds
            )
        object.__setattr__(self, "bounds", bounds)

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        for (lo, hi), v in zip(self.bounds, x):
            if (lo is not None and v < lo) or (hi is not None and v > hi):
                return False
        return all(con.holds(x) for con in self.constraints)

    def value_at(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x) if c), Fraction(0))


@dataclass(frozen=True)
class LPResult:
    """Outcome of ``solve``.

    For ``status == "optimal"``, ``duals`` holds one multiplier per original
    constraint such that ``objective - Σ duals[i] * coeffs_i`` is explained by
    the active variable bounds alone (Lagrangian sign convention).
    """

    status: str
    value: Optional[Fraction] = None
    point: Optional[tuple[Fraction, ...]] = None
    duals: Optional[tuple[Fraction, ...]] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


INFEASIBLE = LPResult("infeasible")
UNBOUNDED = LPResult("unbounded")


def _to_int_row(values: Sequence[Fraction]) -> list[int]:
    d = lcm(*(v.denominator for v in values)) if values else 1
    return [v.numerator * (d // v.denominator) for v in values] + [d]


def solve(lp: LinearProgram) -> LPResult:
    n = lp.num_vars
    sign = 1 if lp.sense == "min" else -1
    cost = [sign * c for c in lp.objective]

    # Fold single-variable rows into bounds; remember which row set each bound.
    lo = [b[0] for b in lp.bounds]
    hi = [b[1] for b in lp.bounds]
    lo_src: list[Optional[tuple[int, Fraction]]] = [None] * n
    hi_src: list[Optional[tuple[int, Fraction]]] = [None] * n
    kept: list[int] = []
    for i, con in enumerate(lp.constraints):
        nz = [(j, a) for j, a in enumerate(con.coeffs) if a]
        if not nz:
            if not _compare(Fraction(0), con.relation, con.rhs):
                return INFEASIBLE
            continue
        if len(nz) > 1:
            kept.append(i)
            continue
        j, a = nz[0]
        bound = con.rhs / a
        rel = con.relation if a > 0 else _FLIP[con.relation]
        if rel in (GE, EQ) and (lo[j] is None or bound > lo[j]):
            lo[j], lo_src[j] = bound, (i, a)
        if rel in (LE, EQ) and (hi[j] is None or bound < hi[j]):
            hi[j], hi_src[j] = bound, (i, a)
    for j in range(n):
        if lo[j] is not None and hi[j] is not None and lo[j] > hi[j]:
            return INFEASIBLE

    # x_j = offset_j + sum(s * z_col for col, s in terms_j)
    offset = [Fraction(0)] * n
    terms: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    ncols = 0
    ub_rows: list[tuple[int, Fraction]] = []
    for j in range(n):
        if lo[j] is not None and hi[j] is not None and lo[j] == hi[j]:
            offset[j] = lo[j]
        elif lo[j] is not None:
            offset[j] = lo[j]
            terms[j] = [(ncols, 1)]
            if hi[j] is not None:
                ub_rows.append((ncols, hi[j] - lo[j]))
            ncols += 1
        elif hi[j] is not None:
            offset[j] = hi[j]
            terms[j] = [(ncols, -1)]
            ncols += 1
        else:
            terms[j] = [(ncols, 1), (ncols + 1, -1)]
            ncols += 2
    nstruct = ncols

    # Standard rows: (coeffs over structural columns, relation, rhs, source row or None)
    std: list[tuple[list[Fraction], str, Fraction, Optional[int]]] = []
    for i in kept:
        con = lp.constraints[i]
        coeffs = [Fraction(0)] * nstruct
        rhs = con.rhs
        for j, a in enumerate(con.coeffs):
            if not a:
                continue
            rhs -= a * offset[j]
            for col, s in terms[j]:
                coeffs[col] += s * a
        if not any(coeffs):
            if not _compare(Fraction(0), con.relation, rhs):
                return INFEASIBLE
            continue
        std.append((coeffs, con.relation, rhs, i))
    for col, width in ub_rows:
        coeffs = [Fraction(0)] * nstruct
        coeffs[col] = Fraction(1)
        std.append((coeffs, LE, width, None))

    flipped = []
    for k, (coeffs, rel, rhs, src) in enumerate(std):
        if rhs < 0:
            std[k] = ([-a for a in coeffs], _FLIP[rel], -rhs, src)
            flipped.append(True)
        else:
            flipped.append(False)

    nslack = sum(1 for _, rel, _, _ in std if rel != EQ)
    nart = sum(1 for _, rel, _, _ in std if rel != LE)
    art_start = nstruct + nslack
    width = art_start + nart
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    ident: list[int] = []
    scol, acol = nstruct, art_start
    for coeffs, rel, rhs, _ in std:
        row = coeffs + [Fraction(0)] * (width - nstruct) + [rhs]
        if rel == LE:
            row[scol] = Fraction(1)
            basis.append(scol)
            ident.append(scol)
            scol += 1
        else:
            if rel == GE:
                row[scol] = Fraction(-1)
                scol += 1
            row[acol] = Fraction(1)
            basis.append(acol)
            ident.append(acol)
            acol += 1
        rows.append(row)

    struct_cost = [Fraction(0)] * nstruct
    const = Fraction(0)
    for j in range(n):
        if cost[j]:
            const += cost[j] * offset[j]
            for col, s in terms[j]:
                struct_cost[col] += s * cost[j]
    obj2 = struct_cost + [Fraction(0)] * (width - nstruct + 1)

    kernel = _kernel.active()
    irows = [_to_int_row(r) for r in rows]
    iobj2 = _to_int_row(obj2)

    if nart:
        obj1 = [Fraction(0)] * (width + 1)
        for j in range(art_start, width):
            obj1[j] = Fraction(1)
        for row, b in zip(rows, basis):
            if b >= art_start:
                for j, v in enumerate(row):
                    if v:
                        obj1[j] -= v
        iobj1 = _to_int_row(obj1)
        kernel.simplex(irows, [iobj1, iobj2], basis, width)
        if iobj1[-2] != 0:
            return INFEASIBLE
        # drive zero-level artificials out of the basis; drop redundant rows
        r = 0
        while r < len(irows):
            if basis[r] >= art_start:
                col = next((j for j in range(art_start) if irows[r][j]), -1)
                if col < 0:
                    # redundant equality: its multiplier stays 0
                    del irows[r], basis[r], ident[r], std[r], flipped[r]
                    continue
                kernel.pivot(irows, [iobj2], r, col)
                basis[r] = col
            r += 1

    status, _ = kernel.simplex(irows, [iobj2], basis, art_start)
    if status == kernel.UNBOUNDED:
        return UNBOUNDED

    z = [Fraction(0)] * nstruct
    for row, b in zip(irows, basis):
        if b < nstruct:
            z[b] = Fraction(row[-2], row[-1])
    x = tuple(offset[j] + sum((s * z[col] for col, s in terms[j]), Fraction(0)) for j in range(n))

    d2 = iobj2[-1]
    y = [Fraction(0)] * len(lp.constraints)
    for k, (_, _, _, src) in enumerate(std):
        if src is None:
            continue
        yk = -Fraction(iobj2[ident[k]], d2)
        y[src] = -yk if flipped[k] else yk
    folded = set(range(len(lp.constraints))) - set(kept)
    if folded:
        for j in range(n):
            dj = cost[j] - sum((y[i] * lp.constraints[i].coeffs[j] for i in kept), Fraction(0))
            if dj > 0 and lo_src[j] is not None:
                i, a = lo_src[j]
                y[i] += dj / a
            elif dj < 0 and hi_src[j] is not None:
                i, a = hi_src[j]
                y[i] += dj / a
    if sign < 0:
        y = [-v for v in y]

    if not lp.is_feasible_point(x):
        raise AssertionError("simplex returned an infeasible point")
    value = lp.value_at(x)
    if sign * value != const - Fraction(iobj2[-2], d2):
        raise AssertionError("objective value disagrees with the final tableau")
    return LPResult("optimal", value, x, tuple(y))
