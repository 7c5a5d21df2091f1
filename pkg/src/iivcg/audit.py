"""Brute-force property checks for payment rules on finite grids.

For each principal ``l`` and each sampled context (the other principals'
bids), the rule is evaluated once per grid point ``x`` of ``l``'s domain with
``l`` bidding ``x``.  Truthfulness then compares, for every pair of grid
points, reporting the true value against misreporting the other one.  All
comparisons are exact.  Counterexamples are the first failure in (context,
principal, point) order.
"""
from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .engine import Alg1Rule, ContractEngine, ContractParams, ImpossibleError, others_sum
from .model import (
    PaymentRule,
    Profile,
    Setting,
    best_response_to_table,
    efficient_action,
    expected_value,
    replace_bid,
)
from .sampling import domain_points, sample_profiles, truncation_bound

DEFAULT_RESOLUTION = 5
DEFAULT_RANDOMS = 32
DEFAULT_CONTEXTS = 8
SEED_ENV = "IIVCG_SEED"

PROPERTIES = ("truthful", "ir", "ll", "aggregate_ll", "efficiency", "identity")


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def fmt(x: Fraction) -> str:
    return str(x)


def fmt_vec(v) -> list[str]:
    return [fmt(x) for x in v]


@dataclass(frozen=True)
class AuditGrid:
    """Per-principal candidate points plus the sampled joint contexts."""

    points: tuple[tuple[tuple[Fraction, ...], ...], ...]
    contexts: tuple[Profile, ...]
    resolution: int
    randoms: int
    bound: Fraction
    seed: int

    def metadata(self) -> dict:
        return {
            "resolution": self.resolution,
            "random_points": self.randoms,
            "points_per_principal": [len(p) for p in self.points],
            "contexts": len(self.contexts),
            "truncation_bound": fmt(self.bound),
            "seed": self.seed,
        }


def build_grid(
    setting: Setting,
    resolution: int = DEFAULT_RESOLUTION,
    randoms: int = DEFAULT_RANDOMS,
    contexts: int = DEFAULT_CONTEXTS,
    bound: Optional[Fraction] = None,
    seed: Optional[int] = None,
    extra_profiles: tuple[Profile, ...] = (),
) -> AuditGrid:
    """Box lattice + polytope vertices + seeded random points per principal.

    Contexts always start with the all-lowest profile, the truthful profile
    when known, and ``extra_profiles``; the rest are random picks.
    """
    seed = default_seed() if seed is None else seed
    bound = truncation_bound(setting) if bound is None else Fraction(bound)
    rng = random.Random(seed)
    extras_by_l = [tuple(p[l] for p in extra_profiles) for l in range(setting.n)]
    truthful = None
    if all(p.valuation is not None for p in setting.principals):
        truthful = setting.truthful_profile()
        extras_by_l = [e + (truthful[l],) for l, e in enumerate(extras_by_l)]
    points = tuple(
        domain_points(d, resolution, randoms, rng, bound, extra=extras_by_l[l])
        for l, d in enumerate(setting.domains)
    )
    first = [tuple(p[0] for p in points)]
    if truthful is not None:
        first.append(truthful)
    first += list(extra_profiles)
    ctx = sample_profiles(points, contexts, rng, first)
    return AuditGrid(points, tuple(ctx), resolution, randoms, bound, seed)


@dataclass(frozen=True)
class Status:
    passed: bool
    checked: int
    counterexample: Optional[dict] = None

    def to_json(self) -> dict:
        out = {"status": "pass" if self.passed else "fail", "checked": self.checked}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class AuditReport:
    contract: str
    grid: AuditGrid
    results: dict[str, Status] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s.passed for k, s in self.results.items() if k != "aggregate_ll")

    def to_json(self) -> dict:
        return {
            "contract": self.contract,
            "grid": self.grid.metadata(),
            "results": {k: v.to_json() for k, v in self.results.items()},
            "passed": self.passed,
        }


@dataclass(frozen=True)
class Evaluation:
    table: Optional[tuple[tuple[Fraction, ...], ...]]
    action: Optional[int]
    efficient: int
    params: Optional[ContractParams] = None
    impossible: Optional[ImpossibleError] = None


class Evaluator:
    """Caches rule evaluations per profile."""

    def __init__(self, setting: Setting, rule: PaymentRule):
        self.setting = setting
        self.rule = rule
        self.cache: dict[Profile, Evaluation] = {}

    def __call__(self, profile: Profile) -> Evaluation:
        hit = self.cache.get(profile)
        if hit is not None:
            return hit
        s = self.setting
        eff = efficient_action(s, profile)
        if isinstance(self.rule, Alg1Rule):
            engine = self.rule.engine
            params = engine.contract_params(profile)
            if not params.feasible:
                ev = Evaluation(None, None, eff, params, ImpossibleError(params, profile))
            else:
                table = engine.table_from_params(params, profile)
                ev = Evaluation(table, best_response_to_table(s, profile, table), eff, params)
        else:
            table = self.rule.table(profile)
            ev = Evaluation(table, best_response_to_table(s, profile, table), eff)
        self.cache[profile] = ev
        return ev


def _profile_json(profile: Profile) -> list[list[str]]:
    return [fmt_vec(b) for b in profile]


def _impossible_json(ev: Evaluation, profile: Profile) -> dict:
    p = ev.params
    return {
        "reason": "impossible",
        "profile": _profile_json(profile),
        "action": p.star,
        "k": fmt(p.k),
        "sum_m": fmt(sum(p.m_bounds)),
    }


def _rows(setting: Setting, grid: AuditGrid, evaluate: Evaluator):
    """Yields ``(context index, l, point index, profile, evaluation)`` in audit order."""
    for c, ctx in enumerate(grid.contexts):
        for l in range(setting.n):
            for i, x in enumerate(grid.points[l]):
                prof = replace_bid(ctx, l, x)
                yield c, l, i, prof, evaluate(prof)


def audit_truthful(setting: Setting, rule: PaymentRule, grid: AuditGrid, evaluate: Optional[Evaluator] = None) -> Status:
    """No grid misreport beats the truthful report, for every sampled context."""
    evaluate = evaluate or Evaluator(setting, rule)
    checked = 0
    for c, ctx in enumerate(grid.contexts):
        for l in range(setting.n):
            pts = grid.points[l]
            # outcome: (action, expected payment) when l reports x
            reports = []
            for x in pts:
                prof = replace_bid(ctx, l, x)
                ev = evaluate(prof)
                if ev.table is None:
                    return Status(False, checked, _impossible_json(ev, prof))
                row = setting.distribution[ev.action]
                reports.append((row, expected_value(row, ev.table[l])))
            for i, v in enumerate(pts):
                row, pay = reports[i]
                truth = expected_value(row, v) - pay
                for j, x in enumerate(pts):
                    if i == j:
                        continue
                    checked += 1
                    drow, dpay = reports[j]
                    lie = expected_value(drow, v) - dpay
                    if lie > truth:
                        return Status(False, checked, {
                            "principal": l,
                            "profile": _profile_json(replace_bid(ctx, l, v)),
                            "truth": fmt_vec(v),
                            "deviation": fmt_vec(x),
                            "truthful_utility": fmt(truth),
                            "deviation_utility": fmt(lie),
                        })
    return Status(True, checked)


def audit_ir(setting: Setting, rule: PaymentRule, grid: AuditGrid, evaluate: Optional[Evaluator] = None) -> Status:
    """Truthful expected utility is nonnegative at every grid point."""
    evaluate = evaluate or Evaluator(setting, rule)
    checked = 0
    for c, l, i, prof, ev in _rows(setting, grid, evaluate):
        if ev.table is None:
            return Status(False, checked, _impossible_json(ev, prof))
        row = setting.distribution[ev.action]
        u = expected_value(row, prof[l]) - expected_value(row, ev.table[l])
        checked += 1
        if u < 0:
            return Status(False, checked, {"principal": l, "profile": _profile_json(prof), "utility": fmt(u)})
    return Status(True, checked)


def audit_ll(
    setting: Setting, rule: PaymentRule, grid: AuditGrid, evaluate: Optional[Evaluator] = None
) -> tuple[Status, Status]:
    """``(per-principal LL, aggregate LL)``: payments (or their sum) never negative."""
    evaluate = evaluate or Evaluator(setting, rule)
    checked = 0
    strict: Optional[Status] = None
    aggregate: Optional[Status] = None
    for c, l, i, prof, ev in _rows(setting, grid, evaluate):
        if ev.table is None:
            bad = Status(False, checked, _impossible_json(ev, prof))
            return strict or bad, aggregate or bad
        checked += 1
        if strict is None:
            for k, row in enumerate(ev.table):
                for o, t in enumerate(row):
                    if t < 0:
                        strict = Status(False, checked, {
                            "principal": k, "outcome": setting.outcomes[o],
                            "profile": _profile_json(prof), "payment": fmt(t),
                        })
                        break
                if strict is not None:
                    break
        if aggregate is None:
            for o in range(setting.m):
                total = sum((row[o] for row in ev.table), Fraction(0))
                if total < 0:
                    aggregate = Status(False, checked, {
                        "outcome": setting.outcomes[o], "profile": _profile_json(prof), "total": fmt(total),
                    })
                    break
        if strict is not None and aggregate is not None:
            break
    return strict or Status(True, checked), aggregate or Status(True, checked)


def audit_efficiency(setting: Setting, rule: PaymentRule, grid: AuditGrid, evaluate: Optional[Evaluator] = None) -> Status:
    """The agent's best response is the declared-welfare-maximising action."""
    evaluate = evaluate or Evaluator(setting, rule)
    checked = 0
    for c, l, i, prof, ev in _rows(setting, grid, evaluate):
        if ev.table is None:
            return Status(False, checked, _impossible_json(ev, prof))
        checked += 1
        if ev.action != ev.efficient:
            return Status(False, checked, {
                "profile": _profile_json(prof),
                "agent_action": setting.actions[ev.action].name,
                "efficient_action": setting.actions[ev.efficient].name,
            })
    return Status(True, checked)


def expected_payment_identity(
    setting: Setting, params: ContractParams, profile: Profile, table
) -> Optional[dict]:
    """First principal whose expected payment differs from ``h - Wel^star(b^{-l}, 0)``."""
    s = setting
    row = s.distribution[params.star]
    cost = s.actions[params.star].cost
    for l in range(s.n):
        got = expected_value(row, table[l])
        want = params.h[l] - (expected_value(row, others_sum(profile, l, s.m)) - cost)
        if got != want:
            return {"principal": l, "profile": _profile_json(profile), "expected_payment": fmt(got), "required": fmt(want)}
    return None


def audit_expected_payment_identity(
    setting: Setting, params: ContractParams, profile: Profile, table
) -> Status:
    bad = expected_payment_identity(setting, params, profile, table)
    return Status(bad is None, setting.n, bad)


def audit_identity_grid(setting: Setting, rule: Alg1Rule, grid: AuditGrid, evaluate: Optional[Evaluator] = None) -> Status:
    evaluate = evaluate or Evaluator(setting, rule)
    checked = 0
    for c, l, i, prof, ev in _rows(setting, grid, evaluate):
        if ev.table is None:
            return Status(False, checked, _impossible_json(ev, prof))
        checked += 1
        bad = expected_payment_identity(setting, ev.params, prof, ev.table)
        if bad is not None:
            return Status(False, checked, bad)
    return Status(True, checked)


def run_audit(setting: Setting, rule: PaymentRule, grid: AuditGrid, properties=PROPERTIES) -> AuditReport:
    """Every requested property on one shared evaluation cache."""
    evaluate = Evaluator(setting, rule)
    report = AuditReport(rule.name, grid)
    props = set(properties)
    if "truthful" in props:
        report.results["truthful"] = audit_truthful(setting, rule, grid, evaluate)
    if "ir" in props:
        report.results["ir"] = audit_ir(setting, rule, grid, evaluate)
    if "ll" in props or "aggregate_ll" in props:
        ll, agg = audit_ll(setting, rule, grid, evaluate)
        if "ll" in props:
            report.results["ll"] = ll
        if "aggregate_ll" in props:
            report.results["aggregate_ll"] = agg
    if "efficiency" in props:
        report.results["efficiency"] = audit_efficiency(setting, rule, grid, evaluate)
    if "identity" in props and isinstance(rule, Alg1Rule):
        report.results["identity"] = audit_identity_grid(setting, rule, grid, evaluate)
    return report


def alg1_audit(setting: Setting, grid: AuditGrid, engine: Optional[ContractEngine] = None) -> AuditReport:
    return run_audit(setting, Alg1Rule(engine or ContractEngine(setting)), grid)
