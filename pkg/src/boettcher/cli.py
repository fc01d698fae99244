"""Command-line front end: ``compute``, ``table``, ``analyze`` and ``verify``.

Exit codes: 0 success, 1 a theorem-grade verification failed, 2 usage or
internal error. Output is exact; rationals print as ``num/den``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from boettcher import harness
from boettcher.coordinate import (
    CoefficientGrowthError,
    GermError,
    GermSpec,
    Normalization,
    bottcher_coordinate,
    normalize,
)
from boettcher.germ_syntax import GermSyntaxError, parse_germ
from boettcher.padic import INF, NotPrimeError, radius_exponent_estimate, valuation_profile
from boettcher.serialization import (
    FormatError,
    csv_cell,
    dumps,
    germ_from_json,
    result_to_json,
    series_to_json,
)
from boettcher.series import SeriesError, format_series

DEFAULT_ORDER = 30
ORDER_CEILING = 512

NORMALIZE_CHOICES = {
    "raw": Normalization.RAW,
    "k-factorial": Normalization.OVER_K_FACTORIAL,
    "mk-k-factorial": Normalization.OVER_MK_K_FACTORIAL,
}
_MODE_NAMES = {v.value: k for k, v in NORMALIZE_CHOICES.items()}


class UsageError(Exception):
    pass


# -- shared helpers ---------------------------------------------------------------


def _resolve_order(args, fallback: int = DEFAULT_ORDER) -> int:
    order = fallback if args.order is None else args.order
    if order < 1:
        raise UsageError("--order must be at least 1")
    if order > ORDER_CEILING:
        if not args.allow_large_order:
            raise UsageError(
                f"--order {order} exceeds the ceiling {ORDER_CEILING}; pass --allow-large-order to override"
            )
        print(f"warning: order {order} above {ORDER_CEILING} may need a lot of memory", file=sys.stderr)
    return order


def _load_germ(args) -> tuple[GermSpec, dict]:
    """The germ plus any settings recorded in a ``compute`` output file."""
    if bool(args.germ) == bool(args.germ_file):
        raise UsageError("give exactly one of --germ or --germ-file")
    if args.germ:
        return parse_germ(args.germ), {}
    try:
        with open(args.germ_file, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.germ_file}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.germ_file} is not JSON: {exc}") from exc
    if isinstance(obj, dict) and "germ" in obj:
        recorded = {"order": obj.get("order")}
        if obj.get("normalized"):
            recorded["normalize"] = [_MODE_NAMES[m] for m in obj["normalized"]]
        return germ_from_json(obj["germ"]), recorded
    return germ_from_json(obj), {}


def _write_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([csv_cell(x) for x in row])
    return buf.getvalue()


# -- compute ------------------------------------------------------------------------


def cmd_compute(args) -> int:
    germ, recorded = _load_germ(args)
    order = args.order if args.order is not None else recorded.get("order") or DEFAULT_ORDER
    args.order = order
    order = _resolve_order(args)
    modes = args.normalize if args.normalize is not None else recorded.get("normalize", [])
    res = bottcher_coordinate(germ, order, max_coeff_digits=args.max_coeff_digits)
    normalized = {}
    for name in modes:
        mode = NORMALIZE_CHOICES[name]
        normalized[mode.value] = normalize(res, mode)
    if args.format == "json":
        print(dumps(result_to_json(res, order, normalized)))
    elif args.format == "csv":
        rows = [("series", "k", "coefficient")]
        for name, s in (("f", res.f), ("f_inv", res.f_inv)):
            rows += [(name, k, c) for k, c in enumerate(s.coeffs)]
        for mode, n in normalized.items():
            rows += [(f"a[{_MODE_NAMES[mode]}]", k, a) for k, a in enumerate(n.a)]
        sys.stdout.write(_write_csv(rows))
    else:
        print(f"germ:  {germ}")
        print(f"f     = {format_series(res.f)}")
        print(f"f^-1  = {format_series(res.f_inv)}")
        print(f"verified through x^{res.verified_order}")
        for mode, n in normalized.items():
            print(f"a_k ({_MODE_NAMES[mode]}): {', '.join(str(a) for a in n.a)}")
            status = "all integral" if n.all_integral else f"first non-integral at k={n.first_nonintegral()}"
            print(f"  {status}")
    return 0


# -- table --------------------------------------------------------------------------


def cmd_table(args) -> int:
    if args.order_pos is not None:
        args.order = args.order_pos
    order = _resolve_order(args)
    if not 2 <= args.m_min <= args.m_max:
        raise UsageError("need 2 <= m_min <= m_max")
    rows = []
    for m in range(args.m_min, args.m_max + 1):
        germ = GermSpec.family(m)
        res = bottcher_coordinate(germ, order, with_inverse=False, max_coeff_digits=args.max_coeff_digits)
        rows.append((m, germ, res.f))
    if args.format == "json":
        for m, germ, f in rows:
            print(dumps({"m": m, "germ": str(germ), "f": series_to_json(f)}))
    elif args.format == "csv":
        header = ["m"] + [f"x^{k}" for k in range(1, order + 1)]
        sys.stdout.write(_write_csv([header] + [[m] + list(f.coeffs[1:]) for m, _, f in rows]))
    else:
        for m, germ, f in rows:
            print(f"{germ}: {format_series(f)}")
    return 0


# -- analyze ------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    germ, _ = _load_germ(args)
    if germ.ring is not GermSpec.family(2).ring:
        raise UsageError("analyze needs rational coefficients; specialize t first")
    order = _resolve_order(args)
    mode = NORMALIZE_CHOICES[args.mode]
    res = bottcher_coordinate(germ, order, with_inverse=False, max_coeff_digits=args.max_coeff_digits)
    a = normalize(res, mode).a
    profile = valuation_profile(a, args.p, mode.value, germ.m)
    estimate = radius_exponent_estimate(profile)
    diffs = profile.differences(args.diff_start, args.diff_step) if args.diff_step else None
    if args.format == "json":
        out = {
            "germ": str(germ),
            "profile": profile.to_json(),
            "radius_exponent_estimate": str(estimate),
            "window": list(profile.window),
        }
        if diffs is not None:
            out["differences"] = {
                "start": args.diff_start,
                "step": args.diff_step,
                "values": [[k, "inf" if d is None else d] for k, d in diffs],
            }
        print(dumps(out))
    elif args.format == "csv":
        rows = [("k", "a_k", f"ord_{args.p}")]
        rows += [(k, x, v) for k, (x, v) in enumerate(zip(a, profile.ords))]
        sys.stdout.write(_write_csv(rows))
    else:
        print(f"germ: {germ}   p = {args.p}   normalization: {args.mode}")
        for k, v in enumerate(profile.ords):
            print(f"  k={k:<4} ord={'inf' if v is INF else v}")
        lo, hi = profile.window
        print(f"radius exponent estimate over k in [{lo}, {hi}]: {estimate}")
        if diffs is not None:
            print("differences: " + ", ".join(f"{k}:{'inf' if d is None else d}" for k, d in diffs))
    return 0


# -- verify -------------------------------------------------------------------------

_VERIFY_PARAMS = {
    "p": "p",
    "m": "m",
    "r": "r",
    "trials": "trials",
    "k_max": "k_max",
    "max_power": "max_power",
    "n_max": "n_max",
    "classes": "classes",
    "residual_bound": "residual_bound",
    "germs": "germs",
    "bound": "bound",
}


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _overrides_for(check_id: str, args) -> dict:
    accepted = harness.check_parameters(check_id)
    out = {}
    for flag, name in _VERIFY_PARAMS.items():
        value = getattr(args, flag)
        if value is None or name not in accepted:
            continue
        if isinstance(value, list) and not isinstance(accepted[name], (list, tuple)):
            if len(value) != 1:
                raise UsageError(f"{check_id} takes a single --{flag.replace('_', '-')}")
            value = value[0]
        out[name] = value
    if args.order is not None and "order" in accepted:
        out["order"] = _resolve_order(args)
    return out


def cmd_verify(args) -> int:
    checks = args.check or []
    if args.all or not checks:
        checks = list(harness.CHECK_ORDER)
    for cid in checks:
        if cid not in harness.CHECKS:
            raise harness.UnknownCheckError(cid)
    used = set()
    overrides = {}
    for cid in checks:
        overrides[cid] = _overrides_for(cid, args)
        used |= set(overrides[cid])
    given = {name for flag, name in _VERIFY_PARAMS.items() if getattr(args, flag) is not None}
    unused = given - used
    if unused:
        raise UsageError(f"no selected check takes: {', '.join(sorted(unused))}")
    config = harness.HarnessConfig(tuple(checks), args.seed, overrides, args.workers)
    reports = harness.run_all(config)
    if args.format == "json":
        for r in reports:
            print(dumps(r.to_json()))
    elif args.format == "csv":
        rows = [("check_id", "grade", "status", "witnesses", "runtime_ms")]
        rows += [(r.check_id, harness.CHECKS[r.check_id].grade, r.status, len(r.witnesses), r.runtime_ms)
                 for r in reports]
        sys.stdout.write(_write_csv(rows))
    else:
        for r in reports:
            grade = harness.CHECKS[r.check_id].grade
            print(f"{r.status:<13} {r.check_id:<32} ({grade}, {r.runtime_ms} ms)")
            if r.status == harness.FAIL:
                for w in r.witnesses[:3]:
                    print(f"    {dumps(w)}")
    return 1 if harness.suite_failed(reports) else 0


# -- parser ---------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--order", type=int, default=None, help=f"truncation order (default {DEFAULT_ORDER})")
    common.add_argument("--allow-large-order", action="store_true",
                        help=f"permit --order above {ORDER_CEILING}")
    common.add_argument("--max-coeff-digits", type=int, default=None,
                        help="abort if a coefficient's numerator or denominator exceeds this many digits")
    return common


def _germ_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--germ", help='inline germ, e.g. "x^2+2x^3"')
    p.add_argument("--germ-file", help="germ JSON, or the JSON written by compute")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="boettcher", description="Exact Böttcher coordinates and their p-adic valuations."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", parents=[common], help="Böttcher coordinate and its inverse")
    _germ_source(p)
    p.add_argument("--normalize", action="append", choices=tuple(NORMALIZE_CHOICES),
                   help="also print a_k under this normalization (repeatable)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("table", parents=[common], help="coordinates of x^m + m x^(m+1)")
    p.add_argument("m_min", type=int, nargs="?", default=2)
    p.add_argument("m_max", type=int, nargs="?", default=10)
    p.add_argument("order_pos", type=int, nargs="?", default=None, metavar="order")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("analyze", parents=[common], help="p-adic valuation profile of the a_k")
    _germ_source(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--mode", choices=tuple(NORMALIZE_CHOICES), default="k-factorial")
    p.add_argument("--diff-start", type=int, default=0)
    p.add_argument("--diff-step", type=int, default=0, help="report ord differences with this step")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", parents=[common], help="run verification checks")
    p.add_argument("--check", action="append", metavar="ID", help="check id (repeatable)")
    p.add_argument("--all", action="store_true", help="run every check (the default)")
    p.add_argument("--list", action="store_true", help="list check ids and exit")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--p", type=_int_list, default=None, help="prime or comma-separated primes")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--r", type=_int_list, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--max-power", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--classes", type=lambda s: s.split(","), default=None)
    p.add_argument("--residual-bound", type=int, default=None)
    p.add_argument("--germs", type=int, default=None)
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.command == "verify" and args.list:
        for cid in harness.CHECK_ORDER:
            print(f"{cid:<32} {harness.CHECKS[cid].grade}")
        return 0
    try:
        return args.func(args)
    except (UsageError, GermSyntaxError, FormatError, GermError, NotPrimeError,
            harness.UnknownCheckError, CoefficientGrowthError, SeriesError,
            ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
