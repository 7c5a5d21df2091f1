"""Parameterised benchmark settings.

* ``poa``: three actions that each deterministically yield their own
  outcome; first-price bidding has an equilibrium with welfare ``1`` while
  the optimum is ``n - 2``.
* ``pos``: one principal, ``q`` actions whose costs rise steeply; every
  first-price equilibrium induces the cheapest action.
* ``weighted``: three principals with ``[10, 15]^2`` domains, used to
  illustrate the G-weighted contract.
* ``tradeoff``: one principal, two actions; no IIVCG contract is both LL
  and IR.
"""
from __future__ import annotations

from fractions import Fraction

from .domains import Box
from .instantiations import CorrelationGraph
from .model import Action, Principal, Setting

F = Fraction


def _check(cond: bool, msg: str):
    if not cond:
        raise ValueError(msg)


def poa_setting(n: int = 10, gamma=F(1, 2), eps=F(1, 4)) -> Setting:
    gamma, eps = F(gamma), F(eps)
    _check(n > 3, "poa needs n > 3 principals")
    _check(0 < eps < gamma < 1, "poa needs 0 < eps < gamma < 1")
    inf = None
    principals = [
        Principal("p1", Box((0, 0, 0), (0, 0, inf)), (0, 0, 1 + gamma)),
        Principal("p2", Box((0, 0, 0), (0, inf, 0)), (0, 1 + eps, 0)),
    ] + [Principal(f"p{l}", Box((0, 0, 0), (inf, 0, 0)), (1, 0, 0)) for l in range(3, n + 1)]
    return Setting(
        actions=(Action("a1", 0), Action("a2", eps), Action("a3", gamma)),
        outcomes=("o1", "o2", "o3"),
        distribution=((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        principals=tuple(principals),
    )


def poa_equilibrium(n: int = 10, gamma=F(1, 2), eps=F(1, 4)):
    """The bid profile that induces the costliest action in equilibrium."""
    gamma, eps = F(gamma), F(eps)
    zero = (F(0),) * 3
    return ((F(0), F(0), 1 + gamma), (F(0), 1 + eps, F(0))) + (zero,) * (n - 2)


def pos_costs(q: int, gamma, eps) -> tuple[Fraction, ...]:
    return tuple(gamma ** (1 - i) - i + (i - 1) * (gamma + eps) for i in range(1, q + 1))


def pos_setting(q: int = 3, gamma=F(1, 4), eps=F(1, 12)) -> Setting:
    gamma, eps = F(gamma), F(eps)
    _check(q >= 2, "pos needs q >= 2 actions")
    _check(0 < gamma < F(1, q), "pos needs 0 < gamma < 1/q")
    _check(0 < eps <= F(1, q) - gamma, "pos needs 0 < eps <= 1/q - gamma")
    costs = pos_costs(q, gamma, eps)
    dist = tuple((1 - gamma ** (q - i), gamma ** (q - i)) for i in range(1, q + 1))
    return Setting(
        actions=tuple(Action(f"a{i}", c) for i, c in enumerate(costs, 1)),
        outcomes=("o1", "o2"),
        distribution=dist,
        principals=(Principal("p1", Box.orthant(2, q), (F(q), q + gamma ** (1 - q))),),
    )


def weighted_setting() -> Setting:
    box = Box.cube(2, 10, 15)
    return Setting(
        actions=(Action("a1", 0), Action("a2", 1)),
        outcomes=("o1", "o2"),
        distribution=((1, 0), (F(1, 4), F(3, 4))),
        principals=(
            Principal("p1", box, (11, 13)),
            Principal("p2", box, (12, 14)),
            Principal("p3", box, (10, 11)),
        ),
    )


def weighted_graph() -> CorrelationGraph:
    """Completion of the partial three-principal graph with d(1,2)=4/5, d(1,3)=1/2."""
    return CorrelationGraph((
        (0, F(4, 5), F(1, 2)),
        (F(1, 2), 0, F(1, 2)),
        (F(1, 2), F(1, 5), 0),
    ))


def tradeoff_setting(eps=F(1, 10)) -> Setting:
    eps = F(eps)
    _check(eps > 0, "tradeoff needs eps > 0")
    return Setting(
        actions=(Action("a1", 0), Action("a2", eps)),
        outcomes=("o1", "o2"),
        distribution=((F(1, 2), F(1, 2)), (0, 1)),
        principals=(Principal("p1", Box.orthant(2)),),
    )


EXAMPLES = {
    "poa": poa_setting,
    "pos": pos_setting,
    "weighted": weighted_setting,
    "tradeoff": tradeoff_setting,
}
