import json
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from iivcg import catalog
from iivcg.cli import bundled_path
from iivcg.corpus import random_setting
from iivcg.domains import Polytope
from iivcg.fileio import (
    dumps,
    graph_from_json,
    graph_to_json,
    load_setting,
    loads,
    parse_number,
    profile_from_json,
    profile_to_json,
    save_setting,
    setting_from_json,
    setting_to_json,
)
from iivcg.model import Principal, Setting, SettingError


def test_parse_number():
    assert parse_number("3/7", "x") == F(3, 7)
    assert parse_number(0.25, "x") == F(1, 4)
    assert parse_number(0.1, "x") == F(1, 10)
    assert parse_number(4, "x") == 4
    for bad in (True, None, "abc", "1/0", [1]):
        with pytest.raises(SettingError):
            parse_number(bad, "x")


def test_decimal_literals_read_exactly():
    text = json.dumps(setting_to_json(catalog.tradeoff_setting())).replace('"1/10"', "0.1")
    s = setting_from_json(json.loads(text, parse_float=F))
    assert s.costs == (0, F(1, 10))
    assert setting_from_json(loads(text)).costs == (0, F(1, 10))


@pytest.mark.parametrize("name", sorted(catalog.EXAMPLES))
def test_round_trip_examples(name, tmp_path):
    s = catalog.EXAMPLES[name]()
    path = tmp_path / "s.json"
    save_setting(s, path)
    assert load_setting(path) == s


@given(st.integers(min_value=0, max_value=10**6))
def test_round_trip_random(seed):
    s = random_setting(random.Random(seed))
    assert setting_from_json(json.loads(dumps(setting_to_json(s)))) == s


def test_polytope_round_trip():
    base = catalog.tradeoff_setting()
    dom = Polytope((((1, 1), F(5, 2)),), 2)
    s = Setting(base.actions, base.outcomes, base.distribution, (Principal("p", dom, (F(1), F(1, 3))),))
    assert setting_from_json(json.loads(dumps(setting_to_json(s)))) == s


def test_bundled_files_match_catalog():
    assert load_setting(bundled_path("tradeoff.json")) == catalog.tradeoff_setting()
    assert load_setting(bundled_path("poa_example.json")) == catalog.poa_setting(10)
    assert load_setting(bundled_path("pos_example.json")) == catalog.pos_setting()
    assert load_setting(bundled_path("weighted_example.json")) == catalog.weighted_setting()
    g = json.loads(bundled_path("weighted_graph.json").read_text())
    assert graph_from_json(g) == catalog.weighted_graph()


def test_error_messages():
    obj = setting_to_json(catalog.tradeoff_setting())
    obj["distribution"][1] = ["1/2", "1/4"]
    with pytest.raises(SettingError, match="row 1"):
        setting_from_json(obj)
    obj = setting_to_json(catalog.tradeoff_setting())
    del obj["outcomes"]
    with pytest.raises(SettingError, match="outcomes"):
        setting_from_json(obj)
    obj = setting_to_json(catalog.tradeoff_setting())
    obj["principals"][0]["domain"]["type"] = "ball"
    with pytest.raises(SettingError, match="unknown domain"):
        setting_from_json(obj)
    obj = setting_to_json(catalog.tradeoff_setting())
    obj["principals"][0]["domain"]["lower"] = ["-1", "0"]
    with pytest.raises(SettingError, match="negative"):
        setting_from_json(obj)
    with pytest.raises(SettingError):
        graph_from_json({"weights": [[0, 1], [1, 1]]})


def test_profiles_and_graphs():
    s = catalog.weighted_setting()
    b = profile_from_json({"bids": [[11, 13], ["12", "14"], [10.5, 11]]}, s)
    assert b[2] == (F(21, 2), 11)
    assert profile_to_json(b)["bids"][2] == ["21/2", "11"]
    with pytest.raises(SettingError):
        profile_from_json({"bids": [[11, 13]]}, s)
    with pytest.raises(SettingError):
        profile_from_json({}, s)
    g = catalog.weighted_graph()
    assert graph_from_json(graph_to_json(g)) == g
