"""Valuation domains: boxes and polytopes in the nonnegative orthant."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .lp import GE, LE, Constraint, LinearProgram, as_fraction, solve
from .lp.vertices import enumerate_vertices


class DomainError(ValueError):
    """Invalid valuation domain."""


@dataclass(frozen=True)
class Box:
    """Coordinatewise interval ``lower <= x <= upper``; ``None`` upper means unbounded."""

    lower: tuple[Fraction, ...]
    upper: tuple[Optional[Fraction], ...]

    def __post_init__(self):
        lower = tuple(as_fraction(v) for v in self.lower)
        upper = tuple(None if v is None else as_fraction(v) for v in self.upper)
        if len(lower) != len(upper):
            raise DomainError("box lower and upper have different lengths")
        for i, (lo, hi) in enumerate(zip(lower, upper)):
            if lo < 0:
                raise DomainError(f"box lower bound {i} is negative")
            if hi is not None and hi < lo:
                raise DomainError(f"box upper bound {i} is below the lower bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def orthant(cls, dim: int, lower=0) -> "Box":
        return cls((lower,) * dim, (None,) * dim)

    @classmethod
    def cube(cls, dim: int, lo, hi) -> "Box":
        return cls((lo,) * dim, (hi,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def bounded(self) -> bool:
        return all(hi is not None for hi in self.upper)


@dataclass(frozen=True)
class Polytope:
    """``{x >= 0 : coeffs_i · x <= rhs_i}``."""

    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    dim: int

    def __post_init__(self):
        rows = []
        for i, (coeffs, rhs) in enumerate(self.rows):
            coeffs = tuple(as_fraction(c) for c in coeffs)
            if len(coeffs) != self.dim:
                raise DomainError(f"polytope row {i} has {len(coeffs)} coefficients, expected {self.dim}")
            rows.append((coeffs, as_fraction(rhs)))
        object.__setattr__(self, "rows", tuple(rows))

    @property
    def bounded(self) -> bool:
        return all(coordinate_range(self, i)[1] is not None for i in range(self.dim))


Domain = Union[Box, Polytope]


def contains(d: Domain, v: Sequence[Fraction]) -> bool:
    if len(v) != d.dim:
        return False
    if isinstance(d, Box):
        return all(lo <= x and (hi is None or x <= hi) for x, lo, hi in zip(v, d.lower, d.upper))
    if any(x < 0 for x in v):
        return False
    return all(sum(c * x for c, x in zip(coeffs, v)) <= rhs for coeffs, rhs in d.rows)


def domain_constraints(d: Domain, var_offset: int, num_vars: int) -> list[Constraint]:
    """Constraints placing variables ``var_offset .. var_offset+dim-1`` inside ``d``.

    Boxes emit ``x_i >= lower_i`` and, where present, ``x_i <= upper_i``;
    polytopes emit their rows plus ``x_i >= 0``.
    """
    def unit(i):
        c = [Fraction(0)] * num_vars
        c[var_offset + i] = Fraction(1)
        return c

    out = []
    if isinstance(d, Box):
        for i, (lo, hi) in enumerate(zip(d.lower, d.upper)):
            out.append(Constraint(unit(i), GE, lo))
            if hi is not None:
                out.append(Constraint(unit(i), LE, hi))
        return out
    for coeffs, rhs in d.rows:
        c = [Fraction(0)] * num_vars
        c[var_offset:var_offset + d.dim] = coeffs
        out.append(Constraint(c, LE, rhs))
    for i in range(d.dim):
        out.append(Constraint(unit(i), GE, 0))
    return out


def _free_lp(objective, d: Domain, sense="min") -> LinearProgram:
    return LinearProgram(
        objective,
        domain_constraints(d, 0, d.dim),
        bounds=((None, None),) * d.dim,
        sense=sense,
    )


def is_nonempty(d: Domain) -> bool:
    if isinstance(d, Box):
        return True
    return solve(_free_lp([0] * d.dim, d)).optimal


def coordinate_range(d: Domain, i: int) -> tuple[Fraction, Optional[Fraction]]:
    """Smallest and largest value of coordinate ``i`` over ``d`` (``None`` if unbounded)."""
    if isinstance(d, Box):
        return d.lower[i], d.upper[i]
    c = [Fraction(0)] * d.dim
    c[i] = Fraction(1)
    lo = solve(_free_lp(c, d))
    hi = solve(_free_lp(c, d, "max"))
    if not lo.optimal:
        raise DomainError("polytope is empty")
    return lo.value, hi.value if hi.optimal else None


def truncated(d: Domain, bound: Fraction) -> Domain:
    """``d`` intersected with ``[0, bound]^dim`` where ``d`` is unbounded."""
    if isinstance(d, Box):
        return Box(d.lower, tuple(max(lo, bound) if hi is None else hi for lo, hi in zip(d.lower, d.upper)))
    rows = list(d.rows)
    for i in range(d.dim):
        if coordinate_range(d, i)[1] is None:
            c = [Fraction(0)] * d.dim
            c[i] = Fraction(1)
            rows.append((tuple(c), bound))
    return Polytope(tuple(rows), d.dim)


def vertices(d: Domain) -> list[tuple[Fraction, ...]]:
    """Extreme points of a bounded domain (box corners or polytope vertices)."""
    if isinstance(d, Box):
        if not d.bounded:
            raise DomainError("unbounded box has no finite vertex set")
        pts: list[tuple[Fraction, ...]] = [()]
        for lo, hi in zip(d.lower, d.upper):
            pts = [p + (x,) for p in pts for x in dict.fromkeys((lo, hi))]
        return pts
    a = [list(c) for c, _ in d.rows]
    b = [rhs for _, rhs in d.rows]
    for i in range(d.dim):
        row = [Fraction(0)] * d.dim
        row[i] = Fraction(-1)
        a.append(row)
        b.append(Fraction(0))
    return enumerate_vertices(a, b)


def minimal_point(d: Domain) -> tuple[Fraction, ...]:
    """A point of ``d`` with smallest coordinate sum (the lower corner for boxes)."""
    if isinstance(d, Box):
        return d.lower
    res = solve(_free_lp([1] * d.dim, d))
    if not res.optimal:
        raise DomainError("polytope is empty")
    return res.point
