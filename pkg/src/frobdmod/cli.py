"""Command-line front end.

    frobdmod dim    --example ex2 --p 2 --gens s2 --i 5..8
    frobdmod growth --example ex1 --p 2 --gens s1,s2 --e-max 7
    frobdmod act    --example ex2 --p 2 --op "D_2" --target "(0,1)"
    frobdmod verify all --p 2 --format json

Exit status: 0 success, 1 verification failure or computation error,
2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from .diffop import min_level, parse_operator
from .fieldpoly import ExponentRangeError, PolyParseError, Prime
from .filtration import growth_series
from .frobmod import (
    FrobModule,
    GeneratorSequence,
    SequenceError,
    format_element,
    generators,
    parse_element,
    validate_sequence,
)
from .verify import CHECKS, CheckReport, run_check

#: Largest modulus the CLI accepts.
MAX_CLI_PRIME = 1000

DIM_COLUMNS = ["i", "dim", "ratio_num", "ratio_den", "formula", "match"]


class UsageError(Exception):
    pass


def parse_range(text: str) -> List[int]:
    """``"a..b"`` (inclusive), comma lists of those, or ``""`` for nothing."""
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo_s, hi_s = part.split("..", 1)
            try:
                lo, hi = int(lo_s), int(hi_s)
            except ValueError:
                raise UsageError(f"bad range {part!r}") from None
            if lo < 0 or hi < 0:
                raise UsageError(f"negative bound in {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            try:
                v = int(part)
            except ValueError:
                raise UsageError(f"bad index {part!r}") from None
            if v < 0:
                raise UsageError(f"negative index {v}")
            out.append(v)
    if any(b <= a for a, b in zip(out, out[1:])):
        raise UsageError("i values must be strictly ascending")
    return out


def _prime(text: str) -> Prime:
    try:
        p = Prime(int(text))
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a prime") from None
    if p > MAX_CLI_PRIME:
        raise argparse.ArgumentTypeError(f"p={int(p)} exceeds the supported maximum {MAX_CLI_PRIME}")
    return p


def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=_prime, default=None, help="prime modulus (default 2)")
    sp.add_argument("--example", choices=["ex1", "ex2"], default=None)
    sp.add_argument("--gseq-file", default=None, help='JSON file {"p": .., "g": [..]} for a custom sequence')
    sp.add_argument("--format", choices=["csv", "json"], default=None)
    sp.add_argument("--out", default=None, help="write output here instead of stdout")
    sp.add_argument("--pretty", action="store_true", help="add rounded float columns")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frobdmod", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"frobdmod {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("dim", "growth"):
        sp = sub.add_parser(name, help=f"{name} of F_i . generators")
        _common(sp)
        sp.add_argument("--gens", default="s2", help="comma list drawn from s1,s2")
        sp.add_argument("--i", default=None, help="indices, e.g. 5..8 or 1,2,4")
        sp.add_argument("--e-max", type=int, default=None, help="use i = p^1..p^e-max")

    sp = sub.add_parser("act", help="apply an operator to a module element")
    _common(sp)
    sp.add_argument("--op", required=True)
    sp.add_argument("--target", required=True, help='element "(f1, f2)"')

    sp = sub.add_parser("verify", help="reproduce published identities")
    _common(sp)
    sp.add_argument("check", choices=list(CHECKS) + ["all"])
    sp.add_argument("--i-min", type=int, default=None)
    sp.add_argument("--i-max", type=int, default=None)
    sp.add_argument("--e-max", type=int, default=None)
    sp.add_argument("--k-max", type=int, default=None)
    sp.add_argument("--budget", type=int, default=None)
    return parser


def load_module(args: argparse.Namespace) -> FrobModule:
    if args.gseq_file:
        if args.example:
            raise UsageError("--example and --gseq-file are mutually exclusive")
        try:
            gseq = GeneratorSequence.from_file(args.gseq_file)
        except OSError as exc:
            raise UsageError(f"cannot read {args.gseq_file}: {exc}") from None
        except (ValueError, TypeError) as exc:
            raise UsageError(f"bad sequence file {args.gseq_file}: {exc}") from None
        if args.p is not None and args.p != gseq.p:
            raise UsageError(f"--p {args.p} disagrees with p={gseq.p} in {args.gseq_file}")
        if gseq.p > MAX_CLI_PRIME:
            raise UsageError(f"p={int(gseq.p)} exceeds the supported maximum {MAX_CLI_PRIME}")
        return FrobModule(gseq)
    p = args.p if args.p is not None else Prime(2)
    return FrobModule(GeneratorSequence(p, args.example or "ex2"))


def require_levels(module: FrobModule, max_order: int) -> None:
    """Validate g_r for every level an operator of order <= max_order touches."""
    rmax = min_level(max_order, module.p) - 1
    if rmax < 0:
        return
    try:
        bad = validate_sequence(module.gseq, rmax)
    except SequenceError as exc:
        raise UsageError(str(exc)) from None
    if bad is not None:
        raise UsageError(f"invalid generator sequence: {bad}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt_bool(v: Optional[bool]) -> str:
    return "" if v is None else ("true" if v else "false")


def dim_rows(module: FrobModule, gens: Sequence[str], i_values: Sequence[int]) -> List[Dict[str, Any]]:
    series = growth_series(module, generators(gens, module.p), i_values)
    return [
        {
            "i": r.i,
            "dim": r.dim,
            "ratio_num": None if r.ratio is None else r.ratio.numerator,
            "ratio_den": None if r.ratio is None else r.ratio.denominator,
            "formula": r.formula_value,
            "match": r.match,
        }
        for r in series.records
    ]


def render_table(rows: List[Dict[str, Any]], fmt: str, meta: Dict[str, Any], pretty: bool = False) -> str:
    columns = list(DIM_COLUMNS)
    if pretty:
        columns.append("ratio_approx")
        rows = [
            {**r, "ratio_approx": None if r["ratio_den"] is None else f"{r['ratio_num'] / r['ratio_den']:.6g}"}
            for r in rows
        ]
    if fmt == "json":
        return json.dumps({**meta, "records": rows}, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# frobdmod {__version__} " + " ".join(f"{k}={_meta_text(v)}" for k, v in meta.items()) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(["" if r[c] is None else (_fmt_bool(r[c]) if isinstance(r[c], bool) else r[c]) for c in columns])
    return buf.getvalue()


def _meta_text(v: Any) -> str:
    if isinstance(v, list):
        return ",".join(map(str, v))
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


def read_csv_table(text: str) -> List[Dict[str, Any]]:
    """Inverse of the CSV rendering, for round-trip checks."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    out = []
    for rec in csv.DictReader(lines):
        row: Dict[str, Any] = {}
        for k, v in rec.items():
            if v == "":
                row[k] = None
            elif v in ("true", "false"):
                row[k] = v == "true"
            elif k == "ratio_approx":
                row[k] = v
            else:
                row[k] = int(v)
        out.append(row)
    return out


def _i_values(args: argparse.Namespace, p: int) -> List[int]:
    if args.i is not None and args.e_max is not None:
        raise UsageError("use either --i or --e-max")
    if args.e_max is not None:
        if args.e_max < 0:
            raise UsageError("--e-max must be non-negative")
        return [p**e for e in range(1, args.e_max + 1)]
    if args.i is None:
        return list(range(0, 17))
    return parse_range(args.i)


def cmd_dim(args: argparse.Namespace) -> int:
    module = load_module(args)
    gens = [g.strip() for g in args.gens.split(",") if g.strip()]
    if not gens or any(g not in ("s1", "s2") for g in gens) or len(set(gens)) != len(gens):
        raise UsageError(f"--gens must be a subset of s1,s2, got {args.gens!r}")
    i_values = _i_values(args, module.p)
    if i_values:
        require_levels(module, max(i_values))
    rows = dim_rows(module, gens, i_values)
    meta: Dict[str, Any] = {
        "command": args.command,
        "p": int(module.p),
        "example": module.gseq.kind,
        "gens": gens,
    }
    if args.command == "growth":
        ratios = [Fraction(r["ratio_num"], r["ratio_den"]) for r in rows if r["ratio_den"]]
        if ratios:
            bound = max(ratios)
            meta["empirical_slope_bound"] = f"{bound.numerator}/{bound.denominator}"
    _emit(render_table(rows, args.format or "csv", meta, args.pretty), args.out)
    return 0


def cmd_act(args: argparse.Namespace) -> int:
    module = load_module(args)
    try:
        op = parse_operator(args.op, module.p)
        target = parse_element(args.target, module.p)
    except (PolyParseError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    require_levels(module, op.order)
    image = module.act(op, target)
    if (args.format or "text") == "json":
        text = json.dumps({"op": args.op, "target": format_element(target), "image": format_element(image)}) + "\n"
    else:
        text = format_element(image) + "\n"
    _emit(text, args.out)
    return 0


def _report_csv(reports: List[CheckReport]) -> str:
    buf = io.StringIO()
    buf.write(f"# frobdmod {__version__}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["check", "p", "case", "inputs", "engine", "oracle", "paper", "verdict"])
    for rep in reports:
        for n, c in enumerate(rep.cases):
            w.writerow(
                [
                    rep.check,
                    rep.p,
                    n,
                    json.dumps(c.get("inputs"), sort_keys=True),
                    _cell(c.get("engine")),
                    _cell(c.get("oracle")),
                    _cell(c.get("paper")),
                    c["verdict"],
                ]
            )
    return buf.getvalue()


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def cmd_verify(args: argparse.Namespace) -> int:
    p = args.p if args.p is not None else Prime(2)
    if args.gseq_file or args.example:
        raise UsageError("verify always uses the built-in examples; drop --example/--gseq-file")
    opts = {
        "imin": args.i_min,
        "imax": args.i_max,
        "emax": args.e_max,
        "kmax": args.k_max,
        "budget": args.budget,
    }
    if args.i_min is not None and args.i_max is not None and args.i_min > args.i_max:
        raise UsageError("--i-min exceeds --i-max")
    names = list(CHECKS) if args.check == "all" else [args.check]
    try:
        reports = [run_check(name, p, **opts) for name in names]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    fmt = args.format or "json"
    if fmt == "json":
        if len(reports) == 1:
            doc: Dict[str, Any] = reports[0].to_dict()
        else:
            totals = dict.fromkeys(reports[0].summary, 0)
            for rep in reports:
                for k, v in rep.summary.items():
                    totals[k] += v
            doc = {"check": "all", "p": int(p), "reports": [r.to_dict() for r in reports], "summary": totals}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = _report_csv(reports)
    _emit(text, args.out)
    if args.out:
        for rep in reports:
            s = rep.summary
            print(
                f"{rep.check:9s} p={rep.p}: match={s['match']} suspected={s['suspected']} "
                f"out_of_range={s['out_of_range']} fail={s['fail']}",
                file=sys.stderr,
            )
    return 0 if all(r.ok for r in reports) else 1


COMMANDS = {"dim": cmd_dim, "growth": cmd_dim, "act": cmd_act, "verify": cmd_verify}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"frobdmod: error: {exc}", file=sys.stderr)
        return 2
    except (ExponentRangeError, SequenceError, ArithmeticError) as exc:
        print(f"frobdmod: computation error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
