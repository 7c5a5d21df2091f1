"""First-price contracts: each principal pays her bid for the realised outcome.

Equilibrium checks are relative to a finite deviation grid, so a pass means
"no profitable deviation among the candidates", not a proof.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .model import (
    PaymentRule,
    Profile,
    Setting,
    agent_best_response,
    expected_value,
    max_welfare,
    replace_bid,
    welfare,
)
from .sampling import domain_points, truncation_bound

DEFAULT_RESOLUTION = 9


class FirstPriceRule(PaymentRule):
    name = "fp"

    def table(self, profile: Profile):
        return tuple(profile)


def fp_rule() -> FirstPriceRule:
    return FirstPriceRule()


@dataclass(frozen=True)
class DeviationGrid:
    """Candidate bids per principal."""

    candidates: tuple[tuple[tuple[Fraction, ...], ...], ...]
    resolution: int
    bound: Fraction


def deviation_grid(
    setting: Setting,
    profile: Profile,
    resolution: int = DEFAULT_RESOLUTION,
    bound: Optional[Fraction] = None,
) -> DeviationGrid:
    """Lattice of ``resolution`` points per coordinate plus vertices plus the current bid.

    Unbounded coordinates are cut at ``bound`` (default: the audit truncation bound).
    """
    bound = truncation_bound(setting) if bound is None else Fraction(bound)
    rng = random.Random(0)
    cands = tuple(
        domain_points(d, resolution, 0, rng, bound, extra=(profile[l],))
        for l, d in enumerate(setting.domains)
    )
    return DeviationGrid(cands, resolution, bound)


def principal_utility(setting: Setting, values: Profile, profile: Profile, l: int, action: int) -> Fraction:
    row = setting.distribution[action]
    return expected_value(row, values[l]) - expected_value(row, profile[l])


@dataclass(frozen=True)
class Equilibrium:
    action: int
    checked: int


@dataclass(frozen=True)
class Deviation:
    principal: int
    bid: tuple[Fraction, ...]
    gain: Fraction


def fp_equilibrium_check(
    setting: Setting, values: Profile, profile: Profile, grid: DeviationGrid
):
    """First strictly profitable unilateral deviation on the grid, else ``Equilibrium``.

    ``values`` are the true valuations; ``profile`` the bids under test.
    """
    rule = FirstPriceRule()
    action = agent_best_response(setting, profile, rule)
    checked = 0
    for l in range(setting.n):
        base = principal_utility(setting, values, profile, l, action)
        for bid in grid.candidates[l]:
            if bid == profile[l]:
                continue
            dev = replace_bid(profile, l, bid)
            a = agent_best_response(setting, dev, rule)
            gain = principal_utility(setting, values, dev, l, a) - base
            checked += 1
            if gain > 0:
                return Deviation(l, bid, gain)
    return Equilibrium(action, checked)


@dataclass(frozen=True)
class PoAReport:
    eq_action: int
    eq_welfare: Fraction
    opt_welfare: Fraction

    @property
    def ratio(self) -> Fraction:
        # optimal welfare is >= 0; when it is 0 the equilibrium is optimal too
        if self.opt_welfare == 0:
            return Fraction(1)
        return self.eq_welfare / self.opt_welfare


class NotAnEquilibrium(ValueError):
    pass


def poa_report(
    setting: Setting, truthful: Profile, equilibrium: Profile, grid: Optional[DeviationGrid] = None
) -> PoAReport:
    """Welfare of the induced action versus the optimum, both under true values.

    Refuses (``NotAnEquilibrium``) if the profile fails the grid check.
    """
    if grid is None:
        grid = deviation_grid(setting, equilibrium)
    check = fp_equilibrium_check(setting, truthful, equilibrium, grid)
    if isinstance(check, Deviation):
        raise NotAnEquilibrium(
            f"principal {check.principal} gains {check.gain} by bidding {tuple(map(str, check.bid))}"
        )
    return PoAReport(check.action, welfare(setting, check.action, truthful), max_welfare(setting, truthful))


def pos_utility_bound(gamma: Fraction, eps: Fraction) -> Fraction:
    """Upper bound on the single principal's utility when a costlier action is induced."""
    return 1 - Fraction(eps) / (1 - Fraction(gamma))


def pos_utility_bound_check(
    setting: Setting, bids: Iterable[Sequence[Fraction]], min_action: int = 1
) -> Optional[tuple[Fraction, tuple[Fraction, ...], int]]:
    """Best truthful-value utility over bids inducing an action with index ``>= min_action``.

    Returns ``(utility, bid, action)`` for the maximiser, or ``None`` when no
    bid induces such an action.
    """
    rule = FirstPriceRule()
    values = setting.truthful_profile()
    best = None
    for bid in bids:
        prof = (tuple(bid),)
        a = agent_best_response(setting, prof, rule)
        if a < min_action:
            continue
        u = principal_utility(setting, values, prof, 0, a)
        if best is None or u > best[0]:
            best = (u, prof[0], a)
    return best


def bid_grid(lo: Sequence[Fraction], hi: Sequence[Fraction], points: int) -> list[tuple[Fraction, ...]]:
    """``points`` evenly spaced values per coordinate between ``lo`` and ``hi``."""
    axes = [
        [l + (h - l) * Fraction(t, points - 1) for t in range(points)] if points > 1 else [l]
        for l, h in zip(lo, hi)
    ]
    out: list[tuple[Fraction, ...]] = [()]
    for axis in axes:
        out = [p + (x,) for p in out for x in axis]
    return out
