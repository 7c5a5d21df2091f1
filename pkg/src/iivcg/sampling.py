"""Deterministic point sets inside valuation domains."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Optional

from .domains import Box, Domain, Polytope, contains, coordinate_range, truncated, vertices
from .model import Profile, Setting, Valuation

RANDOM_DENOMINATOR = 64


def truncation_bound(setting: Setting) -> Fraction:
    """Cap used in place of missing upper bounds: ``4 * (max cost + max finite bound + 1)``."""
    finite = [Fraction(0)]
    for d in setting.domains:
        for i in range(d.dim):
            lo, hi = coordinate_range(d, i)
            finite.append(lo)
            if hi is not None:
                finite.append(hi)
    return 4 * (max(setting.costs) + max(finite) + 1)


def bounded(d: Domain, bound: Fraction) -> Domain:
    if d.bounded:
        return d
    return truncated(d, bound)


def lattice(d: Domain, resolution: int) -> list[Valuation]:
    """Evenly spaced points per coordinate over the bounding box, kept if inside ``d``."""
    axes = []
    for i in range(d.dim):
        lo, hi = coordinate_range(d, i)
        if hi == lo or resolution < 2:
            axes.append((lo,))
        else:
            step = (hi - lo) / (resolution - 1)
            axes.append(tuple(lo + step * t for t in range(resolution)))
    pts = [tuple(p) for p in product(*axes)]
    if isinstance(d, Box):
        return pts
    return [p for p in pts if contains(d, p)]


def random_points(d: Domain, count: int, rng: random.Random) -> list[Valuation]:
    """Seeded random rational points inside a bounded domain."""
    if count <= 0:
        return []
    out = []
    if isinstance(d, Box):
        for _ in range(count):
            out.append(tuple(
                lo + (hi - lo) * Fraction(rng.randint(0, RANDOM_DENOMINATOR), RANDOM_DENOMINATOR)
                for lo, hi in zip(d.lower, d.upper)
            ))
        return out
    verts = vertices(d)
    for _ in range(count):
        weights = [rng.randint(0, RANDOM_DENOMINATOR) for _ in verts]
        if not any(weights):
            weights[0] = 1
        total = sum(weights)
        out.append(tuple(
            sum(Fraction(w, total) * v[i] for w, v in zip(weights, verts)) for i in range(d.dim)
        ))
    return out


def domain_points(
    d: Domain,
    resolution: int,
    randoms: int,
    rng: random.Random,
    bound: Fraction,
    extra: tuple[Valuation, ...] = (),
) -> tuple[Valuation, ...]:
    """Lattice, polytope vertices, random points and ``extra``, deduplicated in that order."""
    box = bounded(d, bound)
    pts = list(lattice(box, resolution))
    if isinstance(box, Polytope):
        pts += vertices(box)
    pts += random_points(box, randoms, rng)
    pts += list(extra)
    return tuple(dict.fromkeys(pts))


def sample_profiles(
    points: tuple[tuple[Valuation, ...], ...],
    count: int,
    rng: random.Random,
    first: Optional[list[Profile]] = None,
) -> list[Profile]:
    """``first`` followed by random picks from the per-principal point sets."""
    out = list(dict.fromkeys(first or []))
    seen = set(out)
    tries = 0
    total = 1
    for p in points:
        total *= len(p)
    while len(out) < count + len(first or []) and len(seen) < total and tries < 20 * (count + 1):
        tries += 1
        prof = tuple(rng.choice(p) for p in points)
        if prof not in seen:
            seen.add(prof)
            out.append(prof)
    return out
