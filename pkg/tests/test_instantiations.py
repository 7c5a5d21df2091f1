import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from iivcg import catalog
from iivcg.corpus import random_setting
from iivcg.domains import Box
from iivcg.instantiations import (
    AuctionInspiredRule,
    CorrelationGraph,
    GraphError,
    WeightedRule,
    auction_inspired_payment,
    build_uniform_graph,
    g_correlation_falsify,
    g_correlation_violation,
    shifted_valuation,
    sufficient_condition_check,
    weighted_payment,
    weighted_valuation,
)
from iivcg.model import (
    Action,
    Principal,
    Setting,
    agent_best_response,
    efficient_action,
    expected_value,
    max_welfare,
    welfare,
    zero_bid,
)

seeds = st.integers(min_value=0, max_value=10**6)


def test_shifted_valuations():
    assert shifted_valuation((F(12), F(14))) == (0, 2)
    assert shifted_valuation((F(10), F(11))) == (0, 1)
    assert shifted_valuation((F(5), F(5), F(5))) == (0, 0, 0)


def test_uniform_graphs():
    cyc = build_uniform_graph(3, "cycle")
    assert [cyc.d(0, 1), cyc.d(1, 2), cyc.d(2, 0)] == [1, 1, 1]
    assert [cyc.d(1, 0), cyc.d(2, 1), cyc.d(0, 2)] == [0, 0, 0]
    comp = build_uniform_graph(3, "complete")
    assert all(comp.d(k, l) == (0 if k == l else F(1, 2)) for k in range(3) for l in range(3))
    for kind in ("cycle", "complete"):
        g = build_uniform_graph(2, kind)
        assert g.d(0, 1) == g.d(1, 0) == 1
    with pytest.raises(GraphError):
        build_uniform_graph(1)
    with pytest.raises(GraphError):
        build_uniform_graph(3, "star")


def test_graph_validation():
    with pytest.raises(GraphError, match="self-loop"):
        CorrelationGraph(((1, 1), (0, 0)))
    with pytest.raises(GraphError, match="sum"):
        CorrelationGraph(((0, F(1, 2)), (1, 0)))
    with pytest.raises(GraphError):
        CorrelationGraph(((0,),))
    with pytest.raises(GraphError):
        CorrelationGraph(((0, 1, 0), (1, 0)))


def test_weighted_example_proxy_and_payment():
    s = catalog.weighted_setting()
    g = catalog.weighted_graph()
    v = s.truthful_profile()
    assert weighted_valuation(g, v, 0) == (0, F(21, 10))
    assert [weighted_payment(s, g, v, o)[0] for o in range(2)] == [0, F(21, 10)]
    assert g_correlation_violation(s, g, v, 0) == F(993, 40) - F(143, 4)


def test_constant_valuations_pay_nothing():
    s = catalog.weighted_setting()
    g = catalog.weighted_graph()
    b = ((F(10), F(10)), (F(12), F(12)), (F(15), F(15)))
    rule = WeightedRule(s, g)
    assert rule.table(b) == ((0, 0),) * 3
    assert agent_best_response(s, b, rule) == s.zero_action
    assert g_correlation_falsify(s, g, [b]) is None


def test_weighted_rule_rejects_wrong_size_graph():
    with pytest.raises(GraphError):
        WeightedRule(catalog.weighted_setting(), build_uniform_graph(2))


def test_auction_payments():
    s = catalog.pos_setting()
    assert auction_inspired_payment(s, ((F(0), F(0)),), 0) == (0,)
    t = catalog.tradeoff_setting()
    assert auction_inspired_payment(t, ((F(0), F(3, 10)),), 0) == (F(-1, 5),)


def test_auction_expected_payment_is_externality():
    s = catalog.weighted_setting()
    v = s.truthful_profile()
    star = efficient_action(s, v)
    table = AuctionInspiredRule(s).table(v)
    for l in range(3):
        without = zero_bid(s, v, l)
        externality = max_welfare(s, without) - welfare(s, star, without)
        assert expected_value(s.distribution[star], table[l]) == externality


def _asymmetric_setting():
    return Setting(
        actions=(Action("a1", 0), Action("a2", 1)),
        outcomes=("o1", "o2"),
        distribution=((1, 0), (0, 1)),
        principals=(
            Principal("small", Box.cube(2, 0, 1)),
            Principal("large", Box.cube(2, 0, 100)),
        ),
    )


def test_falsifier_finds_violation():
    s = _asymmetric_setting()
    g = build_uniform_graph(2)
    pts = [[(F(x), F(y)) for x, y in itertools.product(*(d.lower[i:i + 1] + d.upper[i:i + 1] for i in range(2)))]
           for d in s.domains]
    found = g_correlation_falsify(s, g, itertools.product(*pts))
    assert found is not None
    l, prof = found
    assert g_correlation_violation(s, g, prof, l) > 0


def test_sufficient_conditions():
    c = sufficient_condition_check(catalog.weighted_setting())
    assert c.narrow_box and c.any and c.graph is not None
    c = sufficient_condition_check(catalog.tradeoff_setting())
    assert not c.same_expected_value and not c.narrow_box and c.graph is None
    same = Setting(
        actions=(Action("a1", 0), Action("a2", 1)),
        outcomes=("o1", "o2"),
        distribution=((1, 0), (0, 1)),
        principals=(Principal("p", Box.cube(2, 3, 3), (3, 3)), Principal("r", Box.cube(2, 3, 3), (3, 3))),
    )
    c = sufficient_condition_check(same)
    assert c.same_expected_value and c.graph.n == 2


def _profile(rng, s):
    return tuple(
        tuple(lo + (hi - lo) * F(rng.randint(0, 4), 4) for lo, hi in zip(d.lower, d.upper)) for d in s.domains
    )


@settings(max_examples=40)
@given(seeds)
def test_auction_ir_and_efficiency(seed):
    rng = random.Random(seed)
    s = random_setting(rng)
    b = _profile(rng, s)
    rule = AuctionInspiredRule(s)
    table = rule.table(b)
    a = agent_best_response(s, b, rule)
    assert a == efficient_action(s, b)
    for l in range(s.n):
        assert expected_value(s.distribution[a], b[l]) - expected_value(s.distribution[a], table[l]) >= 0


@settings(max_examples=40)
@given(seeds)
def test_weighted_ll_and_efficiency(seed):
    rng = random.Random(seed)
    s = random_setting(rng, max_n=3)
    if s.n < 2:
        s = Setting(s.actions, s.outcomes, s.distribution, s.principals * 2)
    b = _profile(rng, s)
    rule = WeightedRule(s, build_uniform_graph(s.n, rng.choice(("cycle", "complete"))))
    table = rule.table(b)
    assert all(t >= 0 for row in table for t in row)
    assert agent_best_response(s, b, rule) == efficient_action(s, b)
