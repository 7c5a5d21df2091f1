"""Common agency settings, welfare and agent behaviour.

Actions, outcomes and principals are addressed by 0-based index; names are
kept for input and output only.  Valuations and bids are tuples of
``Fraction`` over outcomes, and a profile is a tuple of them, one per
principal.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .domains import Domain, contains, is_nonempty
from .lp import as_fraction

Valuation = tuple[Fraction, ...]
Profile = tuple[Valuation, ...]


class SettingError(ValueError):
    """A setting, profile or payment input violates the model's invariants."""


def as_valuation(v: Sequence, m: Optional[int] = None) -> Valuation:
    out = tuple(as_fraction(x) for x in v)
    if m is not None and len(out) != m:
        raise SettingError(f"valuation has {len(out)} entries, expected {m}")
    if any(x < 0 for x in out):
        raise SettingError("valuations must be nonnegative")
    return out


@dataclass(frozen=True)
class Action:
    name: str
    cost: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cost", as_fraction(self.cost))


@dataclass(frozen=True)
class Principal:
    name: str
    domain: Domain
    valuation: Optional[Valuation] = None


@dataclass(frozen=True)
class Setting:
    """A common agency instance.

    Attributes:
        actions: Agent actions with pairwise distinct nonnegative costs, one of them 0.
        outcomes: Outcome names.
        distribution: Row ``j`` is the outcome distribution of action ``j``.
        principals: Each with a valuation domain and, optionally, a true valuation.
    """

    actions: tuple[Action, ...]
    outcomes: tuple[str, ...]
    distribution: tuple[tuple[Fraction, ...], ...]
    principals: tuple[Principal, ...]
    _zero_action: int = field(default=-1, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "principals", tuple(self.principals))
        dist = tuple(tuple(as_fraction(p) for p in row) for row in self.distribution)
        object.__setattr__(self, "distribution", dist)
        q, m, n = len(self.actions), len(self.outcomes), len(self.principals)
        if q < 1 or m < 1 or n < 1:
            raise SettingError("need at least one action, one outcome and one principal")
        if len(set(self.outcomes)) != m:
            raise SettingError("outcome names must be distinct")
        if len(dist) != q:
            raise SettingError(f"distribution has {len(dist)} rows, expected one per action ({q})")
        for j, row in enumerate(dist):
            if len(row) != m:
                raise SettingError(f"distribution row {j} has {len(row)} entries, expected {m}")
            if any(p < 0 or p > 1 for p in row):
                raise SettingError(f"distribution row {j} has an entry outside [0, 1]")
            if sum(row) != 1:
                raise SettingError(f"distribution row {j} sums to {sum(row)}, expected 1")
        costs = [a.cost for a in self.actions]
        if any(c < 0 for c in costs):
            raise SettingError("action costs must be nonnegative")
        if len(set(costs)) != q:
            raise SettingError("action costs must be pairwise distinct")
        if 0 not in costs:
            raise SettingError("one action must have cost 0")
        object.__setattr__(self, "_zero_action", costs.index(0))
        principals = []
        for i, p in enumerate(self.principals):
            if p.domain.dim != m:
                raise SettingError(f"principal {i} domain has dimension {p.domain.dim}, expected {m}")
            if not is_nonempty(p.domain):
                raise SettingError(f"principal {i} domain is empty")
            if p.valuation is not None:
                v = as_valuation(p.valuation, m)
                if not contains(p.domain, v):
                    raise SettingError(f"principal {i} valuation lies outside its domain")
                p = Principal(p.name, p.domain, v)
            principals.append(p)
        object.__setattr__(self, "principals", tuple(principals))

    @property
    def n(self) -> int:
        return len(self.principals)

    @property
    def q(self) -> int:
        return len(self.actions)

    @property
    def m(self) -> int:
        return len(self.outcomes)

    @property
    def costs(self) -> tuple[Fraction, ...]:
        return tuple(a.cost for a in self.actions)

    @property
    def domains(self) -> tuple[Domain, ...]:
        return tuple(p.domain for p in self.principals)

    @property
    def zero_action(self) -> int:
        return self._zero_action

    def action_index(self, name: str) -> int:
        for j, a in enumerate(self.actions):
            if a.name == name:
                return j
        raise SettingError(f"unknown action {name!r}")

    def outcome_index(self, name: str) -> int:
        try:
            return self.outcomes.index(name)
        except ValueError:
            raise SettingError(f"unknown outcome {name!r}") from None

    def truthful_profile(self) -> Profile:
        if any(p.valuation is None for p in self.principals):
            raise SettingError("setting does not record every principal's valuation")
        return tuple(p.valuation for p in self.principals)

    def check_profile(self, profile: Sequence[Sequence]) -> Profile:
        """Convert and validate a bid profile against the domains."""
        if len(profile) != self.n:
            raise SettingError(f"profile has {len(profile)} bids, expected {self.n}")
        out = []
        for i, (bid, p) in enumerate(zip(profile, self.principals)):
            try:
                v = as_valuation(bid, self.m)
            except SettingError as exc:
                raise SettingError(f"bid {i}: {exc}") from None
            if not contains(p.domain, v):
                raise SettingError(f"bid {i} lies outside principal {i}'s domain")
            out.append(v)
        return tuple(out)


def expected_value(row: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    """``Σ_o row(o) v(o)``."""
    if len(row) != len(v):
        raise SettingError(f"dimension mismatch: {len(row)} probabilities, {len(v)} values")
    return sum((p * x for p, x in zip(row, v) if p and x), Fraction(0))


def replace_bid(profile: Profile, i: int, bid: Valuation) -> Profile:
    return profile[:i] + (bid,) + profile[i + 1:]


def zero_bid(setting: Setting, profile: Profile, i: int) -> Profile:
    return replace_bid(profile, i, (Fraction(0),) * setting.m)


def declared_value(setting: Setting, a: int, profile: Profile) -> Fraction:
    """Total expected declared value of action ``a``, before cost."""
    row = setting.distribution[a]
    return sum((expected_value(row, b) for b in profile), Fraction(0))


def welfare(setting: Setting, a: int, profile: Profile) -> Fraction:
    return declared_value(setting, a, profile) - setting.actions[a].cost


def welfares(setting: Setting, profile: Profile) -> tuple[Fraction, ...]:
    total = [sum(col, Fraction(0)) for col in zip(*profile)]
    return tuple(expected_value(row, total) - a.cost for row, a in zip(setting.distribution, setting.actions))


def _argmax_cost(setting: Setting, scores: Sequence) -> int:
    best = max(scores)
    return max((j for j, s in enumerate(scores) if s == best), key=lambda j: setting.actions[j].cost)


def efficient_action(setting: Setting, profile: Profile) -> int:
    """Welfare-maximising action; ties go to the costliest action."""
    return _argmax_cost(setting, welfares(setting, profile))


def max_welfare(setting: Setting, profile: Profile) -> Fraction:
    return max(welfares(setting, profile))


class PaymentRule(ABC):
    """A contract: maps a bid profile to every principal's payment at every outcome."""

    name = "contract"

    @abstractmethod
    def table(self, profile: Profile) -> tuple[tuple[Fraction, ...], ...]:
        """``table[l][o]`` is principal ``l``'s payment when outcome ``o`` occurs."""

    def __call__(self, profile: Profile, o: int) -> tuple[Fraction, ...]:
        return tuple(row[o] for row in self.table(profile))


def agent_utilities(setting: Setting, table: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...]:
    total = [sum(col, Fraction(0)) for col in zip(*table)]
    return tuple(expected_value(row, total) - a.cost for row, a in zip(setting.distribution, setting.actions))


def best_response_to_table(setting: Setting, profile: Profile, table) -> int:
    utils = agent_utilities(setting, table)
    wels = welfares(setting, profile)
    return max(range(setting.q), key=lambda j: (utils[j], wels[j], setting.actions[j].cost))


def agent_best_response(setting: Setting, profile: Profile, rule: PaymentRule) -> int:
    """Utility-maximising action; ties by declared welfare, then by cost."""
    return best_response_to_table(setting, profile, rule.table(profile))


def in_incentive_set(setting: Setting, w: Sequence[Fraction], a: int) -> bool:
    """Whether ``a`` maximises ``F_a · w - cost(a)`` (no tie-breaking)."""
    vals = [expected_value(row, w) - act.cost for row, act in zip(setting.distribution, setting.actions)]
    return vals[a] == max(vals)


__all__ = [
    "Action",
    "PaymentRule",
    "Principal",
    "Profile",
    "Setting",
    "SettingError",
    "Valuation",
    "agent_best_response",
    "agent_utilities",
    "as_valuation",
    "best_response_to_table",
    "declared_value",
    "efficient_action",
    "expected_value",
    "in_incentive_set",
    "max_welfare",
    "replace_bid",
    "welfare",
    "welfares",
    "zero_bid",
]
