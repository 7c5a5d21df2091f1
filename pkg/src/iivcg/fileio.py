"""JSON file formats for settings, bid profiles and correlation graphs.

Numbers may be JSON integers, decimal literals (read exactly, so ``0.25`` is
``1/4``) or strings such as ``"3/7"``.  Output always writes rationals as
strings so nothing passes through floating point.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

from .domains import Box, DomainError, Polytope
from .instantiations import CorrelationGraph, GraphError
from .model import Action, Principal, Profile, Setting, SettingError

PathLike = Union[str, Path]


def parse_number(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or x is None:
        raise SettingError(f"{where}: expected a number, got {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise SettingError(f"{where}: cannot read {x!r} as a rational") from None
    if isinstance(x, float):
        return Fraction(repr(x))
    raise SettingError(f"{where}: expected a number, got {type(x).__name__}")


def _numbers(xs: Any, where: str) -> tuple[Fraction, ...]:
    if not isinstance(xs, list):
        raise SettingError(f"{where}: expected a list")
    return tuple(parse_number(x, f"{where}[{i}]") for i, x in enumerate(xs))


def _matrix(rows: Any, where: str) -> tuple[tuple[Fraction, ...], ...]:
    if not isinstance(rows, list):
        raise SettingError(f"{where}: expected a list of rows")
    return tuple(_numbers(r, f"{where} row {i}") for i, r in enumerate(rows))


def loads(text: str) -> Any:
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise SettingError(f"invalid JSON: {exc}") from None


def _domain_from_json(obj: Any, m: int, where: str):
    if not isinstance(obj, dict):
        raise SettingError(f"{where}: expected an object")
    kind = obj.get("type")
    try:
        if kind == "box":
            lower = _numbers(obj.get("lower"), f"{where}.lower")
            upper_raw = obj.get("upper", [None] * len(lower))
            if upper_raw is None:
                upper_raw = [None] * len(lower)
            if not isinstance(upper_raw, list):
                raise SettingError(f"{where}.upper: expected a list")
            upper = tuple(
                None if u is None else parse_number(u, f"{where}.upper[{i}]") for i, u in enumerate(upper_raw)
            )
            return Box(lower, upper)
        if kind == "polytope":
            rows = obj.get("rows", [])
            if not isinstance(rows, list):
                raise SettingError(f"{where}.rows: expected a list")
            parsed = []
            for i, r in enumerate(rows):
                if not isinstance(r, dict):
                    raise SettingError(f"{where}.rows[{i}]: expected an object")
                parsed.append((_numbers(r.get("coeffs"), f"{where}.rows[{i}].coeffs"),
                               parse_number(r.get("rhs"), f"{where}.rows[{i}].rhs")))
            return Polytope(tuple(parsed), m)
    except DomainError as exc:
        raise SettingError(f"{where}: {exc}") from None
    raise SettingError(f"{where}: unknown domain type {kind!r}")


def setting_from_json(obj: Any) -> Setting:
    if not isinstance(obj, dict):
        raise SettingError("setting file must hold a JSON object")
    for key in ("actions", "outcomes", "distribution", "principals"):
        if key not in obj:
            raise SettingError(f"missing key {key!r}")
    actions = []
    if not isinstance(obj["actions"], list):
        raise SettingError("actions: expected a list")
    for j, a in enumerate(obj["actions"]):
        if not isinstance(a, dict) or "name" not in a:
            raise SettingError(f"actions[{j}]: expected an object with name and cost")
        actions.append(Action(str(a["name"]), parse_number(a.get("cost"), f"actions[{j}].cost")))
    outcomes = obj["outcomes"]
    if not isinstance(outcomes, list):
        raise SettingError("outcomes: expected a list of names")
    outcomes = tuple(str(o) for o in outcomes)
    dist = _matrix(obj["distribution"], "distribution")
    principals = []
    if not isinstance(obj["principals"], list):
        raise SettingError("principals: expected a list")
    for i, p in enumerate(obj["principals"]):
        if not isinstance(p, dict):
            raise SettingError(f"principals[{i}]: expected an object")
        dom = _domain_from_json(p.get("domain"), len(outcomes), f"principals[{i}].domain")
        val = p.get("valuation")
        val = None if val is None else _numbers(val, f"principals[{i}].valuation")
        principals.append(Principal(str(p.get("name", f"p{i + 1}")), dom, val))
    return Setting(tuple(actions), outcomes, dist, tuple(principals))


def _s(x: Fraction) -> str:
    return str(x)


def domain_to_json(d) -> dict:
    if isinstance(d, Box):
        return {"type": "box", "lower": [_s(x) for x in d.lower],
                "upper": [None if x is None else _s(x) for x in d.upper]}
    return {"type": "polytope", "rows": [{"coeffs": [_s(c) for c in coeffs], "rhs": _s(rhs)} for coeffs, rhs in d.rows]}


def setting_to_json(s: Setting) -> dict:
    principals = []
    for p in s.principals:
        entry = {"name": p.name, "domain": domain_to_json(p.domain)}
        if p.valuation is not None:
            entry["valuation"] = [_s(x) for x in p.valuation]
        principals.append(entry)
    return {
        "actions": [{"name": a.name, "cost": _s(a.cost)} for a in s.actions],
        "outcomes": list(s.outcomes),
        "distribution": [[_s(p) for p in row] for row in s.distribution],
        "principals": principals,
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


def load_setting(path: PathLike) -> Setting:
    return setting_from_json(loads(Path(path).read_text()))


def save_setting(s: Setting, path: PathLike) -> None:
    Path(path).write_text(dumps(setting_to_json(s)))


def profile_from_json(obj: Any, setting: Setting) -> Profile:
    rows = obj.get("bids") if isinstance(obj, dict) else obj
    if rows is None:
        raise SettingError("bid file needs a 'bids' matrix")
    return setting.check_profile(_matrix(rows, "bids"))


def profile_to_json(profile: Profile) -> dict:
    return {"bids": [[_s(x) for x in b] for b in profile]}


def load_profile(path: PathLike, setting: Setting) -> Profile:
    return profile_from_json(loads(Path(path).read_text()), setting)


def graph_from_json(obj: Any) -> CorrelationGraph:
    rows = obj.get("weights") if isinstance(obj, dict) else obj
    if rows is None:
        raise SettingError("graph file needs a 'weights' matrix")
    try:
        return CorrelationGraph(_matrix(rows, "weights"))
    except GraphError as exc:
        raise SettingError(str(exc)) from None


def graph_to_json(g: CorrelationGraph) -> dict:
    return {"weights": [[_s(x) for x in row] for row in g.weights]}


def load_graph(path: PathLike) -> CorrelationGraph:
    return graph_from_json(loads(Path(path).read_text()))
