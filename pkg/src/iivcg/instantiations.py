"""Closed-form IIVCG contracts: auction-inspired and graph-weighted."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .domains import Box, Polytope, vertices
from .lp import as_fraction
from .model import (
    PaymentRule,
    Profile,
    Setting,
    Valuation,
    efficient_action,
    expected_value,
    max_welfare,
    replace_bid,
    welfare,
    zero_bid,
)


class GraphError(ValueError):
    """Invalid correlation graph."""


@dataclass(frozen=True)
class CorrelationGraph:
    """``weights[k][l]`` is the weight ``d(k, l)`` of edge ``k -> l``.

    Every column sums to 1, the diagonal is 0, and all weights lie in [0, 1].
    """

    weights: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        w = tuple(tuple(as_fraction(x) for x in row) for row in self.weights)
        n = len(w)
        if n < 2:
            raise GraphError("a correlation graph needs at least two principals")
        for k, row in enumerate(w):
            if len(row) != n:
                raise GraphError(f"weight row {k} has {len(row)} entries, expected {n}")
            if row[k] != 0:
                raise GraphError(f"self-loop weight d({k + 1},{k + 1}) must be 0")
            if any(x < 0 or x > 1 for x in row):
                raise GraphError(f"weight row {k} has an entry outside [0, 1]")
        for l in range(n):
            total = sum(row[l] for row in w)
            if total != 1:
                raise GraphError(f"weights into principal {l + 1} sum to {total}, expected 1")
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.weights)

    def d(self, k: int, l: int) -> Fraction:
        return self.weights[k][l]


def build_uniform_graph(n: int, kind: str = "cycle") -> CorrelationGraph:
    """Cycle graph (``d(l, l+1) = 1``) or complete graph (``d = 1/(n-1)``)."""
    if n < 2:
        raise GraphError("need n >= 2")
    if kind == "cycle":
        return CorrelationGraph(tuple(
            tuple(Fraction(1 if k == (l + 1) % n else 0) for k in range(n)) for l in range(n)
        ))
    if kind == "complete":
        w = Fraction(1, n - 1)
        return CorrelationGraph(tuple(
            tuple(Fraction(0) if k == l else w for k in range(n)) for l in range(n)
        ))
    raise GraphError(f"unknown graph kind {kind!r}")


def shifted_valuation(v: Sequence[Fraction]) -> Valuation:
    low = min(v)
    return tuple(x - low for x in v)


def weighted_valuation(g: CorrelationGraph, profile: Profile, l: int) -> Valuation:
    """``Σ_k d(l, k) · shifted(b^k)``; does not depend on ``b^l``."""
    m = len(profile[0])
    out = [Fraction(0)] * m
    for k, bid in enumerate(profile):
        d = g.d(l, k)
        if d:
            for o, x in enumerate(shifted_valuation(bid)):
                out[o] += d * x
    return tuple(out)


class AuctionInspiredRule(PaymentRule):
    """``t^l(b, o) = max_a Wel^a(b^{-l}, 0) - Wel^{a*(b)}(b) + b^l(o)``.

    Each principal pays her externality in expectation; IR but not LL.
    """

    name = "auction"

    def __init__(self, setting: Setting):
        self.setting = setting

    def table(self, profile: Profile):
        s = self.setting
        star = efficient_action(s, profile)
        achieved = welfare(s, star, profile)
        rows = []
        for l, bid in enumerate(profile):
            base = max_welfare(s, zero_bid(s, profile, l)) - achieved
            rows.append(tuple(base + x for x in bid))
        return tuple(rows)


class WeightedRule(PaymentRule):
    """G-weighted contract: principal ``l``'s own bid is replaced by her
    graph-weighted proxy in the pivot term.  Always LL; IR exactly when the
    setting is G-correlated.
    """

    name = "weighted"

    def __init__(self, setting: Setting, graph: CorrelationGraph):
        if graph.n != setting.n:
            raise GraphError(f"graph has {graph.n} vertices, setting has {setting.n} principals")
        self.setting = setting
        self.graph = graph

    def table(self, profile: Profile):
        s = self.setting
        star = efficient_action(s, profile)
        rows = []
        for l in range(s.n):
            proxy = weighted_valuation(self.graph, profile, l)
            swapped = replace_bid(profile, l, proxy)
            base = max_welfare(s, swapped) - welfare(s, star, swapped)
            row = tuple(base + x for x in proxy)
            if any(t < 0 for t in row):
                raise AssertionError("weighted contract produced a negative payment")
            rows.append(row)
        return tuple(rows)


def auction_inspired_payment(setting: Setting, profile: Profile, o: int) -> tuple[Fraction, ...]:
    return AuctionInspiredRule(setting)(profile, o)


def weighted_payment(setting: Setting, g: CorrelationGraph, profile: Profile, o: int) -> tuple[Fraction, ...]:
    return WeightedRule(setting, g)(profile, o)


def g_correlation_violation(setting: Setting, g: CorrelationGraph, profile: Profile, l: int) -> Fraction:
    """How much welfare with ``l``'s proxy exceeds the true optimum (``<= 0`` is fine)."""
    swapped = replace_bid(profile, l, weighted_valuation(g, profile, l))
    return max_welfare(setting, swapped) - max_welfare(setting, profile)


def g_correlation_falsify(
    setting: Setting, g: CorrelationGraph, samples: Iterable[Profile]
) -> Optional[tuple[int, Profile]]:
    """First sampled ``(l, profile)`` breaking G-correlation, else ``None``.

    ``None`` only means no sample broke the condition.
    """
    for profile in samples:
        for l in range(setting.n):
            if g_correlation_violation(setting, g, profile, l) > 0:
                return l, profile
    return None


@dataclass(frozen=True)
class SufficientConditions:
    """Which of the two known sufficient conditions for G-correlation hold.

    ``graph`` is a witness graph when either holds and ``n >= 2``.
    """

    same_expected_value: bool
    narrow_box: bool
    graph: Optional[CorrelationGraph] = None

    @property
    def any(self) -> bool:
        return self.same_expected_value or self.narrow_box


def _singleton(d) -> Optional[Valuation]:
    if isinstance(d, Box):
        return d.lower if d.lower == d.upper else None
    if isinstance(d, Polytope) and d.bounded:
        pts = vertices(d)
        return pts[0] if len(pts) == 1 else None
    return None


def sufficient_condition_check(setting: Setting) -> SufficientConditions:
    points = [_singleton(d) for d in setting.domains]
    same_ev = all(p is not None for p in points) and all(
        len({expected_value(row, p) for p in points}) == 1 for row in setting.distribution
    )
    narrow = False
    first = setting.domains[0]
    if isinstance(first, Box) and first.bounded and all(d == first for d in setting.domains):
        lo, hi = set(first.lower), set(first.upper)
        if len(lo) == 1 and len(hi) == 1:
            (a,), (b,) = lo, hi
            narrow = b - a <= a
    graph = build_uniform_graph(setting.n, "cycle") if (same_ev or narrow) and setting.n >= 2 else None
    return SufficientConditions(same_ev, narrow, graph)
