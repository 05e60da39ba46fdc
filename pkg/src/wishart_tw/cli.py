"""Command-line interface: ``wishart-tw <subcommand> [options]``.

Exit status is 0 on success, 2 on usage or domain errors and 3 on
numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import ensemble, lgasym, scaling, twlimit
from .errors import DomainError, NumericError

TABLE1_ROWS = (
    "2x2", "5x5", "20x20", "100x100", "8x2", "20x5",
    "80x20", "400x100", "500x5", "5000x5", "1000x10", "10000x10",
)
TABLE2_ROWS = ("10x5", "20x10", "200x100", "20x5", "40x10", "400x100")

VARIANT_NAMES = tuple(v.value for v in scaling.Variant)


def warn_theory_gap(n: int, p: int) -> str | None:
    """Note for (n, p) outside the proven range of the second-order result.

    The error bound is established for even p with n != p; simulations
    suggest the approximation still works elsewhere.
    """
    reasons = []
    if p % 2:
        reasons.append("p is odd")
    if n == p:
        reasons.append("n equals p")
    if not reasons:
        return None
    return (
        f"note: ({n}, {p}): {' and '.join(reasons)}; the N^(-2/3) error bound is only "
        "proven for even p with n != p, although numerical evidence supports the approximation here"
    )


def _emit_warning(n: int, p: int) -> None:
    msg = warn_theory_gap(n, p)
    if msg:
        print(msg, file=sys.stderr)


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        n, p = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise DomainError(f"--rows entries must look like NxP, got {text!r}") from None
    return n, p


def _records_csv(fields: list[str], records: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for rec in records:
        w.writerow(rec)
    return buf.getvalue()


def _render(args, fields: list[str], records: list[dict]) -> str:
    if args.format == "json":
        return json.dumps(records if len(records) != 1 else records[0], indent=None) + "\n"
    return _records_csv(fields, records)


def _fmt(x: float, digits: int = 10) -> str:
    return f"{x:.{digits}g}"


# ---------------------------------------------------------------- handlers


def _cmd_cdf(args) -> str:
    recs = []
    for s in args.s:
        if args.reflected:
            val = twlimit.reflected_cdf(s)
        else:
            val = twlimit.tw_cdf(args.beta, s)
        recs.append({"s": s, "cdf": _fmt(val)})
    if args.format == "json":
        recs = [{"s": r["s"], "cdf": float(r["cdf"])} for r in recs]
    return _render(args, ["s", "cdf"], recs)


def _cmd_quantile(args) -> str:
    recs = [{"q": q, "s": round(twlimit.tw_quantile(args.beta, q), 4)} for q in args.q]
    return _render(args, ["q", "s"], recs)


def _cmd_scale(args) -> str:
    variant = scaling.Variant.parse(args.variant)
    fn = {
        scaling.Variant.Original: scaling.johnstone_constants,
        scaling.Variant.SecondOrder: scaling.second_order_constants,
        scaling.Variant.LogLargest: scaling.log_constants,
        scaling.Variant.LogSmallest: scaling.smallest_log_constants,
    }[variant]
    pair = fn(args.n, args.p)
    rec = {"n": pair.n, "p": pair.p, "variant": variant.value, "center": pair.center, "scale": pair.scale}
    return _render(args, list(rec), [rec])


def _cmd_pvalue(args) -> str:
    variant = scaling.Variant.parse(args.variant)
    _emit_warning(args.n, args.p)
    if variant is scaling.Variant.LogSmallest:
        val = twlimit.smallest_pvalue(args.n, args.p, args.lam)
        tail = "lower"
    else:
        val = twlimit.largest_pvalue(args.n, args.p, args.lam, variant)
        tail = "upper"
    rec = {"n": args.n, "p": args.p, "variant": variant.value, "lambda": args.lam, "tail": tail,
           "pvalue": round(val, 4)}
    return _render(args, list(rec), [rec])


def _report_text(args, report: ensemble.McReport) -> str:
    return report.to_json() + "\n" if args.format == "json" else report.to_csv()


def _cmd_simulate(args) -> str:
    _emit_warning(args.n, args.p)
    which = args.which
    report = ensemble.mc_cdf_at(args.n, args.p, args.reps, args.seed, sorted(args.s), args.variant,
                                which, workers=args.workers)
    return _report_text(args, report)


def _table_cmd(args, rows, default_variant: str, levels) -> str:
    variant = args.variant or default_variant
    reports = []
    for text in rows:
        n, p = _parse_dims(text)
        _emit_warning(n, p)
        reports.append(ensemble.table_row(n, p, args.reps, args.seed, variant, workers=args.workers))
    if args.format == "json":
        return json.dumps([r.to_dict() for r in reports]) + "\n"
    fields = ["row"] + [f"{q:.2f}" for q in levels]
    recs = []
    for text, rep in zip(rows, reports):
        rec = {"row": text}
        for q, (_, c, _) in zip(levels, rep.rows):
            rec[f"{q:.2f}"] = f"{c:.6f}"
        recs.append(rec)
    return _records_csv(fields, recs)


def _cmd_table1(args) -> str:
    return _table_cmd(args, args.rows or TABLE1_ROWS, "second", ensemble.TABLE1_LEVELS)


def _cmd_table2(args) -> str:
    if args.variant not in (None, "small-log"):
        raise DomainError("table2 uses the small-log variant only")
    return _table_cmd(args, args.rows or TABLE2_ROWS, "small-log", ensemble.TABLE2_LEVELS)


def _cmd_relerr(args) -> str:
    _emit_warning(args.n, args.p)
    recs = []
    for alpha in args.alpha:
        r = ensemble.mc_percentile_relative_error(args.n, args.p, args.reps, alpha, args.seed, workers=args.workers)
        recs.append({"n": args.n, "p": args.p, "reps": args.reps, "seed": args.seed, "alpha": alpha,
                     "rel_err": round(r, 6)})
    return _render(args, ["n", "p", "reps", "seed", "alpha", "rel_err"], recs)


def _cmd_asym_check(args) -> str:
    s = np.linspace(args.s_min, 4.0, args.points)
    recs = []
    for N in args.ladder:
        n = 2 * N + 1 if args.n_of_N == "2N+1" else 2 * N
        sups = lgasym.lemma_error_profile(n, N, s)
        factor = N ** (2.0 / 3.0) if args.scaled else 1.0
        rec = {"N": N, "n": n}
        for key, val in zip(("sup_psi", "sup_dpsi", "sup_phi", "sup_dphi"), sups):
            rec[key] = round(val * factor, 8)
        rec["scaled_by_N23"] = int(args.scaled)
        recs.append(rec)
    fields = ["N", "n", "sup_psi", "sup_dpsi", "sup_phi", "sup_dphi", "scaled_by_N23"]
    return _render(args, fields, recs)


def _cmd_kernel_check(args) -> str:
    pair = scaling.second_order_constants(args.n, args.N)
    recs = []
    for a in args.grid:
        for b in args.grid:
            x = pair.center + pair.scale * a
            y = pair.center + pair.scale * b
            c = lgasym.s1_kernel_central(args.n, args.N, x, y)
            t = lgasym.s1_kernel_alt(args.n, args.N, x, y)
            recs.append({"s": a, "t": b, "central": c, "alt": t, "abs_diff": abs(c - t)})
    return _render(args, ["s", "t", "central", "alt", "abs_diff"], recs)


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: usage error: {message}\n")


def _seed(text: str) -> int:
    val = int(text)
    if not 0 <= val < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2^64)")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--out", type=Path, default=None, help="write the report to this file")

    parser = _Parser(prog="wishart-tw", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, allow_abbrev=False)
        p.set_defaults(func=func)
        return p

    p = add("cdf", _cmd_cdf, "Tracy-Widom CDF values")
    p.add_argument("--beta", type=int, choices=(1, 2), default=1)
    p.add_argument("--reflected", action="store_true", help="reflected law G1(s) = 1 - F1(-s)")
    p.add_argument("--s", type=float, nargs="+", required=True)

    p = add("quantile", _cmd_quantile, "Tracy-Widom quantiles")
    p.add_argument("--beta", type=int, choices=(1, 2), default=1)
    p.add_argument("--q", type=float, nargs="+", required=True)

    p = add("scale", _cmd_scale, "centering and scaling constants")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--variant", choices=VARIANT_NAMES, default="second")

    p = add("pvalue", _cmd_pvalue, "approximate p-value of an extreme eigenvalue")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--variant", choices=VARIANT_NAMES, default="second")

    for name, func, help_text in (
        ("simulate", _cmd_simulate, "Monte Carlo CDF of a rescaled extreme eigenvalue"),
        ("table1", _cmd_table1, "reproduce the largest-eigenvalue table"),
        ("table2", _cmd_table2, "reproduce the smallest-eigenvalue table"),
        ("relerr", _cmd_relerr, "relative error of TW percentiles against simulation"),
    ):
        p = add(name, func, help_text)
        p.add_argument("--reps", type=int, default=40000)
        p.add_argument("--workers", type=int, default=1)
        if name in ("simulate", "relerr"):
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--p", type=int, required=True)
        if name == "simulate":
            p.add_argument("--s", type=float, nargs="+", required=True)
            p.add_argument("--variant", choices=VARIANT_NAMES, default="second")
            p.add_argument("--which", choices=("largest", "smallest"), default=None)
        elif name == "relerr":
            p.add_argument("--alpha", type=float, nargs="+", default=[0.95, 0.99])
        else:
            p.add_argument("--rows", type=lambda t: [r for r in t.split(",") if r], default=None,
                           help="comma-separated NxP list")
            p.add_argument("--variant", choices=VARIANT_NAMES, default=None)

    p = add("asym-check", _cmd_asym_check, "Laguerre soft-edge error ladder")
    p.add_argument("--ladder", type=int, nargs="+", default=[10, 20, 40, 80])
    p.add_argument("--n-of-N", choices=("2N+1", "2N"), default="2N+1")
    p.add_argument("--s-min", type=float, default=-4.0)
    p.add_argument("--points", type=int, default=321)
    p.add_argument("--scaled", action="store_true", help="multiply suprema by N^(2/3)")

    p = add("kernel-check", _cmd_kernel_check, "compare two orthogonal-ensemble kernel formulas")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--grid", type=float, nargs="+", default=[-1.0, 0.0, 1.5])
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except DomainError as exc:
        print(f"wishart-tw {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"wishart-tw {args.command}: numeric failure: {exc}", file=sys.stderr)
        return 3
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
