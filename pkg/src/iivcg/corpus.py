"""Seeded random small settings for property testing."""
from __future__ import annotations

import random
from fractions import Fraction

from .domains import Box
from .model import Action, Principal, Setting


def random_distribution_row(rng: random.Random, m: int) -> tuple[Fraction, ...]:
    weights = [rng.randint(0, 4) for _ in range(m)]
    if not any(weights):
        weights[rng.randrange(m)] = 1
    total = sum(weights)
    return tuple(Fraction(w, total) for w in weights)


def random_box(rng: random.Random, m: int) -> Box:
    lower, upper = [], []
    for _ in range(m):
        lo = Fraction(rng.randint(0, 8), 2) if rng.random() < 0.5 else Fraction(0)
        lower.append(lo)
        upper.append(lo + Fraction(rng.randint(0, 8), 2))
    return Box(tuple(lower), tuple(upper))


def random_setting(rng: random.Random, max_n: int = 3, max_q: int = 4, max_m: int = 3) -> Setting:
    """A setting with ``n <= max_n`` principals, ``q <= max_q`` actions and
    ``m <= max_m`` outcomes, bounded box domains and small rational data."""
    n = rng.randint(1, max_n)
    q = rng.randint(1, max_q)
    m = rng.randint(1, max_m)
    costs = [Fraction(0)] + [Fraction(c, 4) for c in rng.sample(range(1, 25), q - 1)]
    rng.shuffle(costs)
    return Setting(
        actions=tuple(Action(f"a{j + 1}", c) for j, c in enumerate(costs)),
        outcomes=tuple(f"o{o + 1}" for o in range(m)),
        distribution=tuple(random_distribution_row(rng, m) for _ in range(q)),
        principals=tuple(Principal(f"p{l + 1}", random_box(rng, m)) for l in range(n)),
    )


def corpus(size: int = 100, seed: int = 0) -> list[Setting]:
    rng = random.Random(seed)
    return [random_setting(rng) for _ in range(size)]
