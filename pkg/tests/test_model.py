import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from iivcg import catalog
from iivcg.corpus import random_setting
from iivcg.domains import Box
from iivcg.firstprice import FirstPriceRule
from iivcg.model import (
    Action,
    Principal,
    Setting,
    SettingError,
    agent_best_response,
    as_valuation,
    declared_value,
    efficient_action,
    expected_value,
    in_incentive_set,
    max_welfare,
    replace_bid,
    welfare,
    welfares,
    zero_bid,
)
from oracles import efficient_oracle, welfare_oracle

seeds = st.integers(min_value=0, max_value=10**6)


def test_expected_value():
    assert expected_value((F(1, 4), F(3, 4)), (12, 14)) == F(27, 2)
    assert expected_value((1, 0, 0), (7, 8, 9)) == 7
    assert expected_value((F(1, 2), F(1, 2)), (0, 0)) == 0


def test_weighted_example_welfare():
    s = catalog.weighted_setting()
    v = s.truthful_profile()
    assert welfare(s, 1, v) == F(143, 4)
    assert welfare(s, 0, v) == 33
    assert welfare(s, 0, replace_bid(v, 0, (0, F(21, 10)))) == 22
    assert efficient_action(s, v) == 1
    assert max_welfare(s, v) == F(143, 4)


def test_zero_valuations_pick_zero_cost_action():
    s = catalog.pos_setting()
    zero = ((F(0), F(0)),)
    assert welfare(s, s.zero_action, zero) == 0
    assert efficient_action(s, zero) == s.zero_action


def test_welfare_tie_goes_to_costlier_action():
    s = Setting(
        actions=(Action("a1", 0), Action("a2", 1)),
        outcomes=("o1", "o2"),
        distribution=((1, 0), (0, 1)),
        principals=(Principal("p", Box.orthant(2)),),
    )
    b = ((F(0), F(1)),)
    assert welfares(s, b) == (0, 0)
    assert efficient_action(s, b) == 1


def test_first_price_best_responses():
    s = catalog.poa_setting(4)
    assert agent_best_response(s, catalog.poa_equilibrium(4), FirstPriceRule()) == 2
    zero = tuple((F(0),) * 3 for _ in range(4))
    assert agent_best_response(s, zero, FirstPriceRule()) == s.zero_action
    pos = catalog.pos_setting()
    assert agent_best_response(pos, ((F(3), F(3)),), FirstPriceRule()) == 0


def test_incentive_sets():
    pos = catalog.pos_setting()
    assert in_incentive_set(pos, (0, 0), pos.zero_action)
    q, g, e = 3, F(1, 4), F(1, 12)
    j = 2
    w = (0, g ** (1 - q) - g ** (j - q) + g ** (j - q) * e / (1 - g))
    assert in_incentive_set(pos, w, j - 1)
    t = catalog.tradeoff_setting()
    for delta in (F(1), F(1, 10), F(1, 10**9)):
        assert not in_incentive_set(t, (0, 2 * F(1, 10) - delta), 1)
    assert in_incentive_set(t, (0, F(1, 5)), 1)


def _base(**kw):
    args = dict(
        actions=(Action("a1", 0), Action("a2", 1)),
        outcomes=("o1", "o2"),
        distribution=((1, 0), (F(1, 2), F(1, 2))),
        principals=(Principal("p", Box.orthant(2)),),
    )
    args.update(kw)
    return Setting(**args)


def test_validation_messages():
    with pytest.raises(SettingError, match="row 1 sums to 3/4"):
        _base(distribution=((1, 0), (F(1, 2), F(1, 4))))
    with pytest.raises(SettingError, match="row 0 has 3 entries"):
        _base(distribution=((1, 0, 0), (F(1, 2), F(1, 2))))
    with pytest.raises(SettingError, match="distinct"):
        _base(actions=(Action("a1", 0), Action("a2", 0)))
    with pytest.raises(SettingError, match="cost 0"):
        _base(actions=(Action("a1", 1), Action("a2", 2)))
    with pytest.raises(SettingError, match="dimension"):
        _base(principals=(Principal("p", Box.orthant(3)),))
    with pytest.raises(SettingError, match="outside its domain"):
        _base(principals=(Principal("p", Box((1, 1), (2, 2)), (0, 0)),))
    with pytest.raises(SettingError):
        as_valuation((1, -1))


def test_lookup_and_profiles():
    s = catalog.weighted_setting()
    assert s.action_index("a2") == 1
    assert s.outcome_index("o2") == 1
    with pytest.raises(SettingError):
        s.outcome_index("o9")
    with pytest.raises(SettingError):
        s.check_profile(((10, 10), (10, 10)))
    with pytest.raises(SettingError):
        s.check_profile(((10, 10), (10, 10), (9, 10)))
    assert s.check_profile(((10, 10),) * 3) == ((10, 10),) * 3


def _profile(rng, s):
    out = []
    for d in s.domains:
        out.append(tuple(lo + (hi - lo) * F(rng.randint(0, 4), 4) for lo, hi in zip(d.lower, d.upper)))
    return tuple(out)


@given(seeds)
def test_welfare_and_efficiency_match_oracle(seed):
    rng = random.Random(seed)
    s = random_setting(rng)
    b = _profile(rng, s)
    for a in range(s.q):
        assert welfare(s, a, b) == welfare_oracle(s.distribution, s.costs, b, a)
    assert efficient_action(s, b) == efficient_oracle(s.distribution, s.costs, b)


@given(seeds)
def test_zero_replacement_identity(seed):
    rng = random.Random(seed)
    s = random_setting(rng)
    b = _profile(rng, s)
    l = rng.randrange(s.n)
    for a in range(s.q):
        lhs = welfare(s, a, b)
        rhs = welfare(s, a, zero_bid(s, b, l)) + expected_value(s.distribution[a], b[l])
        assert lhs == rhs
        assert declared_value(s, a, b) - s.costs[a] == lhs


@given(seeds, st.integers(min_value=0, max_value=20))
def test_incentive_set_shift_invariant(seed, shift):
    rng = random.Random(seed)
    s = random_setting(rng)
    w = tuple(F(rng.randint(0, 12), 2) for _ in range(s.m))
    shifted = tuple(x + shift for x in w)
    for a in range(s.q):
        assert in_incentive_set(s, w, a) == in_incentive_set(s, shifted, a)
    assert any(in_incentive_set(s, w, a) for a in range(s.q))
