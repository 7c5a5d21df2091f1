"""Exact rational linear programming."""
from ._kernel import name as kernel_name, use as use_kernel
from .problem import (
    EQ,
    GE,
    LE,
    Constraint,
    LinearProgram,
    LPError,
    LPResult,
    as_fraction,
    solve,
)

__all__ = [
    "EQ",
    "GE",
    "LE",
    "Constraint",
    "LinearProgram",
    "LPError",
    "LPResult",
    "as_fraction",
    "kernel_name",
    "solve",
    "use_kernel",
]
