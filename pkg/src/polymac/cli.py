"""Command-line workbench.

Subcommands: sign, verify, distance, pmax, extremal, attack, sweep.
Exit codes: 0 success (all bound checks pass), 1 usage error, 2 verify
rejected the tag, 3 an exact advantage exceeded an applicable bound.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from .attack import EnumerationBudgetError
from .bounds import FORMULA_GENERAL, FORMULA_MU, FORMULA_SIMPLIFIED, FORMULA_UNIFORM
from .distributions import (
    Distribution,
    max_top_mass,
    max_top_mass_bruteforce,
    extremal_distribution,
    stat_distance,
    uniform,
)
from .field import PrimeField
from .mac import MacParams, VerifyResult, sign, verify
from .report import (
    DEFAULT_SEED,
    VARIANTS,
    AdvantageReport,
    ExperimentConfig,
    fraction_str,
    parse_rational,
    run_experiment,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_REJECT = 2
EXIT_BOUND_VIOLATION = 3

SWEEP_COLUMNS = [
    "p",
    "l",
    "k1_family",
    "k2_family",
    "delta1",
    "delta1_exact",
    "delta2",
    "delta2_exact",
    "exact_oblivious",
    "exact_oblivious_exact",
    "exact_adaptive",
    "exact_adaptive_exact",
    "bound_eq2",
    "bound_eq2_exact",
    "bound_eq9",
    "bound_eq9_exact",
    "bound_eq10_applicable",
    "bound_eq10",
    "bound_eq10_exact",
    "mu_bound",
    "mu_bound_exact",
    "all_pass",
    "error",
]


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad usage; remap to 1, which this
    tool reserves for usage errors (2 means verify rejected)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip() != ""]


def _str_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip() != ""]


def _emit_json(payload: Any) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _build_parser() -> _Parser:
    parser = _Parser(prog="polymac", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p: _Parser, choices=("human", "json")) -> None:
        p.add_argument("--format", choices=choices, default="human")

    p_sign = sub.add_parser("sign", help="compute a tag")
    p_verify = sub.add_parser("verify", help="check a (message, tag) pair")
    for p_cmd in (p_sign, p_verify):
        p_cmd.add_argument("--p", type=int, required=True, help="prime modulus")
        p_cmd.add_argument("--l", type=int, required=True, help="maximal message length")
        p_cmd.add_argument("--k1", type=int, required=True)
        p_cmd.add_argument("--k2", type=int, required=True)
        p_cmd.add_argument("--msg", type=_int_list, required=True,
                           help="comma-separated field elements")
        p_cmd.add_argument("--fixed-degree", action="store_true",
                           help="leading key term uses max_len+1 for every message")
        add_format(p_cmd)
    p_verify.add_argument("--tag", type=int, required=True)

    p_dist = sub.add_parser("distance", help="statistical distance between distributions")
    p_dist.add_argument("--probs", type=_str_list, required=True,
                        help="comma-separated exact rationals")
    p_dist.add_argument("--other", type=_str_list, default=None,
                        help="second distribution (default: uniform)")
    add_format(p_dist)

    p_pmax = sub.add_parser(
        "pmax", help="largest mass s outcomes can carry at a distance from uniform"
    )
    p_pmax.add_argument("--n", type=int, required=True)
    p_pmax.add_argument("--delta", required=True, help="exact rational, e.g. 1/5")
    p_pmax.add_argument("--s", type=int, default=None, help="single s value")
    p_pmax.add_argument("--s-range", default=None, metavar="A:B",
                        help="inclusive range of s values (default: all of 1..n-1)")
    p_pmax.add_argument("--oracle", type=int, default=None, metavar="DENOM",
                        help="also brute-force over the 1/DENOM grid")
    p_pmax.add_argument("--oracle-mode", choices=("exact", "at_most"), default="exact")
    add_format(p_pmax, ("human", "json", "csv"))

    p_ext = sub.add_parser("extremal", help="the distribution attaining pmax")
    p_ext.add_argument("--n", type=int, required=True)
    p_ext.add_argument("--delta", required=True)
    add_format(p_ext)

    p_attack = sub.add_parser("attack", help="run one attack-game experiment")
    p_attack.add_argument("--config", default=None, metavar="FILE",
                          help="JSON file with defaults; flags override")
    p_attack.add_argument("--p", type=int, default=None)
    p_attack.add_argument("--l", type=int, default=None)
    p_attack.add_argument("--k1-dist", default=None,
                          help="uniform | extremal:<d> | point:<i> | explicit:<...>")
    p_attack.add_argument("--k2-dist", default=None)
    p_attack.add_argument("--variants", type=_str_list, default=None,
                          help=f"comma list from {', '.join(VARIANTS)}")
    p_attack.add_argument("--exact", action=argparse.BooleanOptionalAction, default=None)
    p_attack.add_argument("--mc-trials", type=int, default=None)
    p_attack.add_argument("--probe-full-length", action=argparse.BooleanOptionalAction,
                          default=None)
    p_attack.add_argument("--fixed-degree", action=argparse.BooleanOptionalAction,
                          default=None)
    p_attack.add_argument("--seed", type=int, default=None)
    p_attack.add_argument("--timings", action="store_true",
                          help="include wall-clock timings in JSON output")
    add_format(p_attack)

    p_sweep = sub.add_parser("sweep", help="grid of experiments, one CSV row per cell")
    p_sweep.add_argument("--config", default=None, metavar="FILE")
    p_sweep.add_argument("--primes", type=_int_list, default=None)
    p_sweep.add_argument("--lengths", type=_int_list, default=None)
    p_sweep.add_argument("--families", type=_str_list, default=None,
                         help="uniform | extremal | point:<i> | explicit:<...> "
                              "(extremal expands over the delta grid)")
    p_sweep.add_argument("--delta-grid", type=_str_list, default=None,
                         help="deltas for extremal families; '<k>/p' allowed")
    p_sweep.add_argument("--probe-full-length", action=argparse.BooleanOptionalAction,
                         default=None)
    p_sweep.add_argument("--fixed-degree", action=argparse.BooleanOptionalAction,
                         default=None)
    p_sweep.add_argument("--seed", type=int, default=None)
    return parser


def _parse_distribution_arg(tokens: list[str]) -> Distribution:
    return Distribution(Fraction(t) for t in tokens)


def cmd_sign(args: argparse.Namespace) -> int:
    params = MacParams(PrimeField(args.p), args.l, args.fixed_degree)
    tag = sign(params, params.key(args.k1, args.k2), params.message(args.msg))
    if args.format == "json":
        _emit_json({"tag": tag.t.value})
    else:
        print(tag.t.value)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    params = MacParams(PrimeField(args.p), args.l, args.fixed_degree)
    result = verify(
        params,
        params.key(args.k1, args.k2),
        params.message(args.msg),
        params.tag(args.tag),
    )
    if args.format == "json":
        _emit_json({"verdict": result.value})
    else:
        print(result.value)
    return EXIT_OK if result is VerifyResult.ACCEPT else EXIT_REJECT


def cmd_distance(args: argparse.Namespace) -> int:
    first = _parse_distribution_arg(args.probs)
    second = _parse_distribution_arg(args.other) if args.other else uniform(first.n)
    d = stat_distance(first, second)
    if args.format == "json":
        _emit_json({"distance": {"exact": fraction_str(d), "decimal": float(d)}})
    else:
        print(f"{fraction_str(d)} = {float(d):.6g}")
    return EXIT_OK


def cmd_pmax(args: argparse.Namespace) -> int:
    delta = parse_rational(args.delta)
    if args.s is not None:
        s_values = [args.s]
    elif args.s_range is not None:
        low, _, high = args.s_range.partition(":")
        s_values = list(range(int(low), int(high) + 1))
    else:
        s_values = list(range(1, args.n))
    rows = []
    for s in s_values:
        closed = max_top_mass(args.n, s, delta)
        row: dict[str, Any] = {
            "s": s,
            "closed": float(closed),
            "closed_exact": fraction_str(closed),
        }
        if args.oracle is not None:
            oracle = max_top_mass_bruteforce(
                args.n, s, delta, args.oracle, args.oracle_mode
            )
            row["oracle"] = float(oracle)
            row["oracle_exact"] = fraction_str(oracle)
            row["match"] = oracle == closed
        rows.append(row)
    if args.format == "json":
        _emit_json({"n": args.n, "delta": fraction_str(delta), "rows": rows})
    elif args.format == "csv":
        writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    else:
        for row in rows:
            line = f"s={row['s']}: closed {row['closed_exact']} = {row['closed']:.6g}"
            if "oracle" in row:
                line += (
                    f", oracle {row['oracle_exact']} = {row['oracle']:.6g}, "
                    f"match={row['match']}"
                )
            print(line)
    return EXIT_OK


def cmd_extremal(args: argparse.Namespace) -> int:
    delta = parse_rational(args.delta)
    dist = extremal_distribution(args.n, delta)
    measured = stat_distance(dist, uniform(args.n))
    if args.format == "json":
        _emit_json(
            {
                "n": args.n,
                "delta": fraction_str(measured),
                "probs": [fraction_str(q) for q in dist.probs],
            }
        )
    else:
        print(" ".join(fraction_str(q) for q in dist.probs))
        print(f"distance to uniform: {fraction_str(measured)} = {float(measured):.6g}")
    return EXIT_OK


def _load_config_file(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError("config file must contain a JSON object")
    return data


def _merged(args: argparse.Namespace, file_cfg: dict[str, Any],
            key: str, default: Any) -> Any:
    flag = getattr(args, key)
    if flag is not None:
        return flag
    return file_cfg.get(key, default)


def cmd_attack(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    p = _merged(args, file_cfg, "p", None)
    l = _merged(args, file_cfg, "l", None)
    if p is None or l is None:
        raise ValueError("both p and l are required (flags or config file)")
    variants = _merged(args, file_cfg, "variants", list(VARIANTS))
    config = ExperimentConfig(
        p=int(p),
        l=int(l),
        k1_spec=_merged(args, file_cfg, "k1_dist", "uniform"),
        k2_spec=_merged(args, file_cfg, "k2_dist", "uniform"),
        variants=tuple(variants),
        exact=bool(_merged(args, file_cfg, "exact", True)),
        mc_trials=int(_merged(args, file_cfg, "mc_trials", 0)),
        probe_full_length=bool(_merged(args, file_cfg, "probe_full_length", False)),
        fixed_degree=bool(_merged(args, file_cfg, "fixed_degree", False)),
        seed=int(_merged(args, file_cfg, "seed", DEFAULT_SEED)),
    )
    report = run_experiment(config)
    if args.format == "json":
        _emit_json(report.to_json_dict(include_timings=args.timings))
    else:
        for line in report.human_lines():
            print(line)
    return EXIT_OK if report.all_pass else EXIT_BOUND_VIOLATION


def expand_families(families: list[str], delta_grid: list[str]) -> list[str]:
    """Expand family templates into concrete per-prime distribution specs;
    'extremal' fans out over the delta grid."""
    specs: list[str] = []
    for family in families:
        if family == "extremal":
            specs.extend(f"extremal:{d}" for d in delta_grid)
        else:
            specs.append(family)
    return specs


def _sweep_row(report: AdvantageReport) -> dict[str, Any]:
    cfg = report.config
    row: dict[str, Any] = {
        "p": cfg.p,
        "l": cfg.l,
        "k1_family": cfg.k1_spec,
        "k2_family": cfg.k2_spec,
        "error": "",
    }

    def put(column: str, value: Fraction) -> None:
        row[column] = repr(float(value))
        row[f"{column}_exact"] = fraction_str(value)

    put("delta1", report.delta1)
    put("delta2", report.delta2)
    put("exact_oblivious", report.exact_advantages["oblivious"])
    put("exact_adaptive", report.exact_advantages["adaptive_optimal"])
    put("bound_eq2", report.bounds[FORMULA_UNIFORM].raw)
    put("bound_eq9", report.bounds[FORMULA_GENERAL].raw)
    row["bound_eq10_applicable"] = report.bounds[FORMULA_SIMPLIFIED].applicable
    put("bound_eq10", report.bounds[FORMULA_SIMPLIFIED].raw)
    put("mu_bound", report.bounds[FORMULA_MU].raw)
    row["all_pass"] = report.all_pass
    return row


def cmd_sweep(args: argparse.Namespace) -> int:
    file_cfg = _load_config_file(args.config)
    primes = _merged(args, file_cfg, "primes", [3, 5])
    lengths = _merged(args, file_cfg, "lengths", [1, 2])
    families = _merged(args, file_cfg, "families", ["uniform", "extremal"])
    delta_grid = _merged(args, file_cfg, "delta_grid", ["0", "1/p", "2/p"])
    probe_full = bool(_merged(args, file_cfg, "probe_full_length", False))
    fixed_degree = bool(_merged(args, file_cfg, "fixed_degree", False))
    seed = int(_merged(args, file_cfg, "seed", DEFAULT_SEED))
    specs = expand_families(list(families), list(delta_grid))

    writer = csv.DictWriter(sys.stdout, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    any_violation = False
    for p in primes:
        for l in lengths:
            for k1_spec in specs:
                for k2_spec in specs:
                    base = {
                        "p": p,
                        "l": l,
                        "k1_family": k1_spec,
                        "k2_family": k2_spec,
                    }
                    try:
                        config = ExperimentConfig(
                            p=p,
                            l=l,
                            k1_spec=k1_spec,
                            k2_spec=k2_spec,
                            probe_full_length=probe_full,
                            fixed_degree=fixed_degree,
                            seed=seed,
                        )
                        report = run_experiment(config)
                    except (ValueError, EnumerationBudgetError) as exc:
                        row = dict.fromkeys(SWEEP_COLUMNS, "")
                        row.update(base)
                        row["error"] = str(exc)
                        writer.writerow(row)
                        continue
                    row = _sweep_row(report)
                    if not report.all_pass:
                        any_violation = True
                    writer.writerow(row)
    return EXIT_BOUND_VIOLATION if any_violation else EXIT_OK


_COMMANDS = {
    "sign": cmd_sign,
    "verify": cmd_verify,
    "distance": cmd_distance,
    "pmax": cmd_pmax,
    "extremal": cmd_extremal,
    "attack": cmd_attack,
    "sweep": cmd_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, TypeError, OSError, EnumerationBudgetError) as exc:
        print(f"polymac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
