"""Command-line surface.

Payload (JSON or CSV) goes to stdout and is byte-identical across runs for
identical flags; a metadata envelope (version, timestamp, input echo) goes
to stderr.  Exit codes: 0 ok, 2 validation error, 3 computation error,
4 oracle infeasible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import __version__, kernel, oracle
from .bounds import bound_BE, bound_BE_shevtsova, bound_EE1
from .errors import (ConvolutionLimitError, DomainError, EdgeworthError,
                     InvalidProfileError, NotFoundError, QuadratureError,
                     SettingMismatchError)
from .inference import (BoundSpec, classify_distortion, n_max, pvalue_bracket)
from .moments import (MomentProfile, RegularityAssumption, make_profile,
                      profile_to_dict)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_COMPUTATION = 3
EXIT_ORACLE = 4

TABLE_ROWS = ["existing", "thm21", "thm21_unskewed", "cor32", "cor32_unskewed"]

FIGURE1_CURVES = ["shevtsova_inid", "shevtsova_iid", "thm21_inid",
                  "thm21_inid_unskewed", "thm21_iid", "thm21_iid_unskewed"]
FIGURE2_CURVES = ["shevtsova_inid", "shevtsova_iid", "cor31_inid",
                  "cor31_inid_unskewed", "cor32_iid", "cor32_iid_unskewed"]


def _emit(payload: str, args_echo: dict) -> None:
    sys.stdout.write(payload)
    if not payload.endswith("\n"):
        sys.stdout.write("\n")
    echo = {k: v for k, v in args_echo.items() if k != "fn"}
    meta = {"tool": "edgeworth", "version": __version__,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "input": echo}
    print(json.dumps(meta, default=str), file=sys.stderr)


def _parse_regularity(text: str) -> RegularityAssumption:
    if text in ("none", ""):
        return RegularityAssumption.none()
    if text.startswith("poly:"):
        try:
            c0, p = (float(v) for v in text[5:].split(","))
        except ValueError as exc:
            raise InvalidProfileError(f"bad poly regularity {text!r}") from exc
        return RegularityAssumption.polynomial_tail(c0, p)
    if text.startswith("kappa:"):
        try:
            kap = float(text[6:])
        except ValueError as exc:
            raise InvalidProfileError(f"bad kappa regularity {text!r}") from exc
        return RegularityAssumption.iid_char_sup(kap)
    raise InvalidProfileError(
        f"regularity must be none, poly:C0,p or kappa:v, got {text!r}")


def _profile_args(sub: argparse.ArgumentParser, with_n: bool = True) -> None:
    if with_n:
        sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--K4", type=float, required=True)
    sub.add_argument("--K3", type=float, default=None)
    sub.add_argument("--K3tilde", type=float, default=None)
    sub.add_argument("--lambda3", type=float, default=None)
    sub.add_argument("--setting", choices=["inid", "iid"], default="iid")
    sub.add_argument("--no-skew", action="store_true")
    sub.add_argument("--regularity", default="none")
    sub.add_argument("--eps", type=float, default=0.1)


def _build_profile(args) -> MomentProfile:
    return make_profile(n=args.n, K4=args.K4, K3=args.K3,
                        K3_tilde=args.K3tilde, lambda3=args.lambda3,
                        setting=args.setting, no_skew=args.no_skew)


def _csv_payload(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _fmt6(x: float) -> str:
    return f"{x:.6g}"


def cmd_bound(args) -> int:
    profile = _build_profile(args)
    reg = _parse_regularity(args.regularity)
    if args.baseline == "shevtsova":
        result = bound_BE_shevtsova(profile)
    elif args.target == "be":
        result = bound_BE(profile, reg, eps=args.eps)
    else:
        result = bound_EE1(profile, reg, eps=args.eps)
    payload = json.dumps({"profile": profile_to_dict(profile),
                          "result": json.loads(result.to_json())})
    _emit(payload, vars(args) | {"command": "bound"})
    return EXIT_OK


def _table_spec(row: str, K4: float, kappa: float) -> BoundSpec:
    if row == "existing":
        return BoundSpec(theorem="shevtsova", setting="iid", K4=K4)
    if row == "thm21":
        return BoundSpec(theorem="thm21", setting="iid", K4=K4)
    if row == "thm21_unskewed":
        return BoundSpec(theorem="thm21", setting="iid", K4=K4, no_skew=True)
    reg = RegularityAssumption.iid_char_sup(kappa)
    if row == "cor32":
        return BoundSpec(theorem="cor32", setting="iid", K4=K4, regularity=reg)
    return BoundSpec(theorem="cor32", setting="iid", K4=K4, no_skew=True,
                     regularity=reg)


def cmd_nmax_table(args) -> int:
    alphas = [float(a) for a in args.alphas.split(",")]
    rows = []
    for row in TABLE_ROWS:
        spec = _table_spec(row, args.K4, args.kappa)
        vals = []
        for alpha in alphas:
            v = n_max(alpha, spec)
            vals.append("none" if v is None else v)
        rows.append([row] + vals)
    payload = _csv_payload(["bound"] + [f"alpha_{a}" for a in alphas], rows)
    _emit(payload, vars(args) | {"command": "nmax-table"})
    return EXIT_OK


def _parse_grid(text: str) -> np.ndarray:
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError as exc:
        raise InvalidProfileError(f"bad n-grid {text!r}; use min:max:count") from exc
    if not (3 <= lo < hi and count >= 2):
        raise InvalidProfileError(f"bad n-grid {text!r}")
    grid = np.unique(np.rint(np.logspace(np.log10(lo), np.log10(hi),
                                         count)).astype(int))
    return grid[grid >= 3]


def _figure_specs(figure: int, K4: float, kappa: float, C0: float, p: float):
    if figure == 1:
        return {
            "shevtsova_inid": BoundSpec(theorem="shevtsova", setting="inid", K4=K4),
            "shevtsova_iid": BoundSpec(theorem="shevtsova", setting="iid", K4=K4),
            "thm21_inid": BoundSpec(theorem="thm21", setting="inid", K4=K4),
            "thm21_inid_unskewed": BoundSpec(theorem="thm21", setting="inid",
                                             K4=K4, no_skew=True),
            "thm21_iid": BoundSpec(theorem="thm21", setting="iid", K4=K4),
            "thm21_iid_unskewed": BoundSpec(theorem="thm21", setting="iid",
                                            K4=K4, no_skew=True),
        }
    poly = RegularityAssumption.polynomial_tail(C0, p)
    kap = RegularityAssumption.iid_char_sup(kappa)
    return {
        "shevtsova_inid": BoundSpec(theorem="shevtsova", setting="inid", K4=K4),
        "shevtsova_iid": BoundSpec(theorem="shevtsova", setting="iid", K4=K4),
        "cor31_inid": BoundSpec(theorem="cor31", setting="inid", K4=K4,
                                regularity=poly),
        "cor31_inid_unskewed": BoundSpec(theorem="cor31", setting="inid",
                                         K4=K4, no_skew=True, regularity=poly),
        "cor32_iid": BoundSpec(theorem="cor32", setting="iid", K4=K4,
                               regularity=kap),
        "cor32_iid_unskewed": BoundSpec(theorem="cor32", setting="iid", K4=K4,
                                        no_skew=True, regularity=kap),
    }


def cmd_figure_data(args) -> int:
    grid = _parse_grid(args.n_grid)
    specs = _figure_specs(args.figure, args.K4, args.kappa, args.C0, args.p)
    names = FIGURE1_CURVES if args.figure == 1 else FIGURE2_CURVES
    rows = []
    for n in grid:
        row = [int(n)]
        for name in names:
            row.append(_fmt6(specs[name].evaluate(int(n)).total))
        rows.append(row)
    payload = _csv_payload(["n"] + names, rows)
    _emit(payload, vars(args) | {"command": "figure-data"})
    return EXIT_OK


def _bound_spec_from_args(args) -> BoundSpec:
    reg = _parse_regularity(args.regularity)
    theorem = {"moment_only": "thm21", "polynomial_tail": "cor31",
               "iid_char_sup": "cor32"}[reg.kind]
    return BoundSpec(theorem=theorem, setting=args.setting,
                     no_skew=args.no_skew, K4=args.K4, K3=args.K3,
                     K3_tilde=args.K3tilde, lambda3=args.lambda3,
                     regularity=None if reg.kind == "moment_only" else reg,
                     eps=args.eps)


def cmd_pvalue(args) -> int:
    profile = _build_profile(args)
    spec = _bound_spec_from_args(args)
    bracket = pvalue_bracket(args.s_n, profile, spec)
    payload = json.dumps({"profile": profile_to_dict(profile),
                          "bracket": bracket.as_dict()})
    _emit(payload, vars(args) | {"command": "pvalue"})
    return EXIT_OK


def cmd_classify(args) -> int:
    profile = _build_profile(args)
    spec = _bound_spec_from_args(args)
    verdict = classify_distortion(args.alpha, profile, spec)
    payload = json.dumps({"profile": profile_to_dict(profile),
                          "verdict": verdict.as_dict()})
    _emit(payload, vars(args) | {"command": "classify"})
    return EXIT_OK


def cmd_constants(args) -> int:
    consts = kernel.all_constants(grid=args.grid)
    payload = json.dumps({"constants": [c.as_dict() for c in consts]})
    _emit(payload, vars(args) | {"command": "constants"})
    return EXIT_OK


def cmd_validate(args) -> int:
    records = []
    if args.suite in ("exact", "all"):
        records += oracle.domination_exact(ns=range(3, args.n_exact_max + 1))
    if args.suite in ("mc", "all"):
        records += oracle.domination_mc(reps=args.reps, seed=args.seed)
    ok = all(r.ok for r in records)
    payload = json.dumps({"suite": args.suite, "ok": ok,
                          "checks": [r.as_dict() for r in records]})
    _emit(payload, vars(args) | {"command": "validate"})
    return EXIT_OK if ok else EXIT_COMPUTATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="edgeworth",
        description="Explicit Edgeworth/Berry-Esseen bounds, test-calibration "
                    "tables, and oracle validation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="evaluate one bound for one profile")
    _profile_args(p)
    p.add_argument("--target", choices=["ee", "be"], default="be")
    p.add_argument("--baseline", choices=["none", "shevtsova"], default="none")
    p.set_defaults(fn=cmd_bound)

    p = sub.add_parser("nmax-table",
                       help="largest uninformative sample sizes per bound/level")
    p.add_argument("--alphas", default="0.10,0.05,0.01")
    p.add_argument("--K4", type=float, default=9.0)
    p.add_argument("--kappa", type=float, default=0.99)
    p.set_defaults(fn=cmd_nmax_table)

    p = sub.add_parser("figure-data", help="bound curves on a log n grid")
    p.add_argument("--figure", type=int, choices=[1, 2], required=True)
    p.add_argument("--n-grid", default="100:10000000:201")
    p.add_argument("--K4", type=float, default=9.0)
    p.add_argument("--kappa", type=float, default=0.99)
    p.add_argument("--C0", type=float, default=1.0)
    p.add_argument("--p", type=float, default=2.0)
    p.set_defaults(fn=cmd_figure_data)

    p = sub.add_parser("pvalue", help="bracket the exact one-sided p-value")
    p.add_argument("--s_n", type=float, required=True)
    _profile_args(p)
    p.set_defaults(fn=cmd_pvalue)

    p = sub.add_parser("classify",
                       help="conservative/liberal verdict for a one-sided test")
    p.add_argument("--alpha", type=float, required=True)
    _profile_args(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("constants",
                       help="re-derive the published kernel constants")
    p.add_argument("--grid", type=int, default=2048)
    p.set_defaults(fn=cmd_constants)

    p = sub.add_parser("validate", help="oracle domination checks")
    p.add_argument("--suite", choices=["exact", "mc", "all"], default="exact")
    p.add_argument("--seed", type=int, default=20240211)
    p.add_argument("--reps", type=int, default=10 ** 6)
    p.add_argument("--n-exact-max", type=int, default=40)
    p.set_defaults(fn=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except ConvolutionLimitError as exc:
        print(f"oracle infeasible: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (InvalidProfileError, SettingMismatchError, DomainError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (QuadratureError, NotFoundError, EdgeworthError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
