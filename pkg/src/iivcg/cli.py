"""Exact contract design for common agency: existence checks, payments and audits.

Exit codes: 0 success / Possible, 1 other error, 2 invalid input,
3 Impossible, 4 a checked property failed.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import catalog
from .audit import build_grid, default_seed, run_audit
from .domains import coordinate_range
from .engine import DEFAULT_STRICT_EPS, Alg1Rule, ContractEngine, ImpossibleError
from .fileio import (
    dumps,
    graph_to_json,
    load_graph,
    load_profile,
    load_setting,
    parse_number,
    profile_to_json,
    save_setting,
    setting_to_json,
)
from .firstprice import (
    Deviation,
    FirstPriceRule,
    bid_grid,
    deviation_grid,
    fp_equilibrium_check,
    poa_report,
    pos_utility_bound_check,
)
from .instantiations import AuctionInspiredRule, GraphError, WeightedRule
from .model import SettingError
from .sampling import truncation_bound

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_IMPOSSIBLE = 3
EXIT_FAILED = 4


class UsageError(Exception):
    pass


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("iivcg") / "data" / name))


def resolve(path: str) -> Path:
    """``path`` itself if it exists, else the bundled fixture of that name."""
    p = Path(path)
    if p.exists():
        return p
    b = bundled_path(p.name)
    if b.exists():
        return b
    raise UsageError(f"no such file: {path}")


def rational(text: str) -> Fraction:
    try:
        return parse_number(text, "argument")
    except SettingError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def show(x: Fraction) -> str:
    return str(x) if x.denominator == 1 else f"{x} (~{float(x):.6g})"


def _out(args, payload: dict, lines: Sequence[str]) -> None:
    if args.json:
        sys.stdout.write(dumps(payload))
    else:
        print("\n".join(lines))


def _profile_strs(profile) -> list[list[str]]:
    return profile_to_json(profile)["bids"]


def cmd_check(args) -> int:
    s = load_setting(resolve(args.setting))
    v = ContractEngine(s, args.strict_eps).alg2_exists()
    if v.possible:
        _out(args, {"verdict": "Possible", "notes": list(v.notes)},
             ["Possible"] + [f"note: {n}" for n in v.notes])
        return EXIT_OK
    payload = {
        "verdict": "Impossible",
        "action": s.actions[v.action].name,
        "witness": _profile_strs(v.witness),
        "k": str(v.k),
        "sum_m": str(v.sum_m),
    }
    _out(args, payload, [
        "Impossible",
        f"action: {s.actions[v.action].name}",
        "witness bids: " + "; ".join("(" + ", ".join(b) + ")" for b in payload["witness"]),
        f"required expected payment k: {show(v.k)}",
        f"summed IR budgets: {show(v.sum_m)}",
    ])
    return EXIT_IMPOSSIBLE


def make_rule(args, s):
    kind = args.contract
    if kind == "alg1":
        return Alg1Rule(ContractEngine(s, getattr(args, "strict_eps", DEFAULT_STRICT_EPS)))
    if kind == "auction":
        return AuctionInspiredRule(s)
    if kind == "fp":
        return FirstPriceRule()
    if kind == "weighted":
        if not args.graph:
            raise UsageError("--graph is required for the weighted contract")
        try:
            return WeightedRule(s, load_graph(resolve(args.graph)))
        except GraphError as exc:
            raise SettingError(str(exc)) from None
    raise UsageError(f"unknown contract {kind!r}")


def cmd_pay(args) -> int:
    s = load_setting(resolve(args.setting))
    profile = load_profile(resolve(args.bids), s)
    o = s.outcome_index(args.outcome)
    rule = make_rule(args, s)
    try:
        pays = rule(profile, o)
    except ImpossibleError as exc:
        p = exc.params
        _out(args, {"result": "Impossible", "action": s.actions[p.star].name,
                    "k": str(p.k), "sum_m": str(sum(p.m_bounds))},
             ["Impossible", f"action: {s.actions[p.star].name}",
              f"required expected payment k: {show(p.k)}", f"summed IR budgets: {show(sum(p.m_bounds))}"])
        return EXIT_IMPOSSIBLE
    names = [p.name for p in s.principals]
    _out(args, {"contract": rule.name, "outcome": args.outcome,
                "payments": {n: str(t) for n, t in zip(names, pays)}},
         [f"{n}: {show(t)}" for n, t in zip(names, pays)])
    return EXIT_OK


def cmd_audit(args) -> int:
    s = load_setting(resolve(args.setting))
    rule = make_rule(args, s)
    grid = build_grid(s, resolution=args.grid, randoms=args.randoms, contexts=args.contexts,
                      bound=args.bound, seed=args.seed)
    report = run_audit(s, rule, grid)
    lines = [f"contract: {rule.name}"]
    meta = grid.metadata()
    lines.append("grid: " + ", ".join(f"{k}={v}" for k, v in meta.items()))
    for name, st in report.results.items():
        lines.append(f"{name}: {'pass' if st.passed else 'FAIL'} ({st.checked} checks)")
        if st.counterexample:
            lines.append(f"  counterexample: {st.counterexample}")
    _out(args, report.to_json(), lines)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_example(args) -> int:
    name = args.name
    if name == "poa":
        s = catalog.poa_setting(args.n, args.gamma or Fraction(1, 2), args.eps or Fraction(1, 4))
    elif name == "pos":
        s = catalog.pos_setting(args.q, args.gamma or Fraction(1, 4), args.eps or Fraction(1, 12))
    elif name == "weighted":
        s = catalog.weighted_setting()
    elif name == "tradeoff":
        s = catalog.tradeoff_setting(args.eps or Fraction(1, 10))
    else:
        raise UsageError(f"unknown example {name!r}")
    if args.output:
        save_setting(s, args.output)
    else:
        sys.stdout.write(dumps(setting_to_json(s)))
    if args.graph_out:
        if name != "weighted":
            raise UsageError("--graph-out only applies to the weighted example")
        Path(args.graph_out).write_text(dumps(graph_to_json(catalog.weighted_graph())))
    return EXIT_OK


def cmd_firstprice(args) -> int:
    s = load_setting(resolve(args.setting))
    values = s.truthful_profile()
    if args.mode == "pos":
        if s.n != 1:
            raise UsageError("pos mode needs a single-principal setting")
        bound = args.bound if args.bound is not None else truncation_bound(s)
        lo = [coordinate_range(s.domains[0], i)[0] for i in range(s.m)]
        best = pos_utility_bound_check(s, bid_grid(lo, [bound] * s.m, args.points))
        base = pos_utility_bound_check(s, [lo], 0)
        payload = {
            "grid_points": args.points ** s.m,
            "max_utility_costlier_actions": None if best is None else str(best[0]),
            "maximiser": None if best is None else [str(x) for x in best[1]],
            "lowest_bid_utility": str(base[0]),
        }
        _out(args, payload, [
            "max utility over bids inducing costlier actions: " + ("none" if best is None else show(best[0])),
            f"utility of the lowest bid: {show(base[0])}",
        ])
        return EXIT_OK
    if not args.bids:
        raise UsageError("--bids is required")
    profile = load_profile(resolve(args.bids), s)
    grid = deviation_grid(s, profile, args.grid, args.bound)
    if args.mode == "check":
        res = fp_equilibrium_check(s, values, profile, grid)
        if isinstance(res, Deviation):
            _out(args, {"equilibrium": False, "principal": s.principals[res.principal].name,
                        "bid": [str(x) for x in res.bid], "gain": str(res.gain)},
                 [f"not an equilibrium: {s.principals[res.principal].name} gains {show(res.gain)} "
                  f"by bidding ({', '.join(map(str, res.bid))})"])
            return EXIT_FAILED
        _out(args, {"equilibrium": True, "action": s.actions[res.action].name, "deviations_checked": res.checked},
             [f"equilibrium on the grid; agent takes {s.actions[res.action].name} ({res.checked} deviations checked)"])
        return EXIT_OK
    try:
        rep = poa_report(s, values, profile, grid)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    _out(args, {"eq_action": s.actions[rep.eq_action].name, "eq_welfare": str(rep.eq_welfare),
                "opt_welfare": str(rep.opt_welfare), "ratio": str(rep.ratio)},
         [f"equilibrium welfare: {show(rep.eq_welfare)}", f"optimal welfare: {show(rep.opt_welfare)}",
          f"ratio: {show(rep.ratio)}"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iivcg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, strict=False):
        p.add_argument("--json", action="store_true", help="structured output")
        if strict:
            p.add_argument("--strict-eps", type=rational, default=DEFAULT_STRICT_EPS,
                           help="margin for strict efficiency (default 2^-20)")

    p = sub.add_parser("check", help="decide whether an LL+IR IIVCG contract exists")
    p.add_argument("setting")
    common(p, strict=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("pay", help="payments for one bid profile and outcome")
    p.add_argument("setting")
    p.add_argument("--bids", required=True)
    p.add_argument("--outcome", required=True)
    p.add_argument("--contract", choices=("alg1", "auction", "weighted"), required=True)
    p.add_argument("--graph")
    common(p, strict=True)
    p.set_defaults(func=cmd_pay)

    p = sub.add_parser("audit", help="grid audit of a contract's properties")
    p.add_argument("setting")
    p.add_argument("--contract", choices=("alg1", "auction", "weighted", "fp"), required=True)
    p.add_argument("--graph")
    p.add_argument("--grid", type=int, default=5, help="lattice points per coordinate")
    p.add_argument("--randoms", type=int, default=32, help="random points per principal")
    p.add_argument("--contexts", type=int, default=8, help="sampled profiles of the other principals")
    p.add_argument("--bound", type=rational, default=None, help="cap for unbounded domains")
    p.add_argument("--seed", type=int, default=None, help="default: $IIVCG_SEED or 0")
    common(p, strict=True)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("example", help="write a bundled example setting")
    p.add_argument("name", choices=sorted(catalog.EXAMPLES))
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--gamma", type=rational)
    p.add_argument("--eps", type=rational)
    p.add_argument("-o", "--output")
    p.add_argument("--graph-out")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("firstprice", help="first-price equilibrium tools")
    p.add_argument("mode", choices=("check", "poa", "pos"))
    p.add_argument("setting")
    p.add_argument("--bids")
    p.add_argument("--grid", type=int, default=9)
    p.add_argument("--points", type=int, default=50, help="bid grid points per coordinate (pos)")
    p.add_argument("--bound", type=rational, default=None)
    common(p)
    p.set_defaults(func=cmd_firstprice)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", "absent") is None:
        args.seed = default_seed()
    try:
        return args.func(args)
    except SettingError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
