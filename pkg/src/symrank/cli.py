"""Command-line front end.

Subcommands: bound, table, gaps, genus, mult, compare, selftest.  JSON is the
default output format; text output is rendered from the same JSON document so
content never diverges; `table` additionally speaks CSV.  All randomness is
seeded (default seed printed with the output), and identical argv produces
byte-identical output.

Exit codes: 0 success, 1 usage error, 2 infeasible input or failed
precondition (structured report on stdout), 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from . import bounds, curves, multiplier, primes
from .bounds import InfeasiblePipelineError
from .multiplier import DEFAULT_SEED, InfeasiblePlanError, VerificationError
from .primes import DEFAULT_SIEVE_LIMIT, PairSelectionError
from .selftest import run_selftest

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFICATION = 3

CSV_HEADER = [
    "p", "n", "field", "method", "value_real", "value_int", "valid",
    "policy", "l_k", "l_k1", "genus", "caveats",
]


def _parse_alpha(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse alpha {text!r}: expected C/D") from exc


def _build_policy(args) -> primes.GapPolicy:
    name = args.policy
    if name == "dudek":
        if args.alpha is not None:
            raise ValueError("alpha is fixed at 2/3 by the dudek policy")
        return primes.GapPolicy.dudek()
    if name == "bhp":
        if args.alpha is not None:
            raise ValueError("alpha is fixed at 21/40 by the bhp policy")
        return primes.GapPolicy.bhp()
    alpha = _parse_alpha(args.alpha) if args.alpha else Fraction(2, 3)
    return primes.GapPolicy.empirical_from_sieve(alpha, args.sieve_limit)


def _render_text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for key, val in doc.items():
            if isinstance(val, (dict, list)) and val:
                lines.append(f"{pad}{key}:")
                lines.append(_render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(val)}")
        return "\n".join(lines)
    if isinstance(doc, list):
        for val in doc:
            if isinstance(val, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_render_text(val, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(val)}")
        return "\n".join(lines)
    return f"{pad}{json.dumps(doc)}"


def _emit(doc, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "text":
        return _render_text(doc) + "\n"
    raise ValueError(f"format {fmt!r} not supported for this command")


def _report_row(report: bounds.BoundReport) -> dict:
    row = {
        "p": report.p, "n": report.n, "field": report.field, "method": report.method,
        "value_real": report.value_real, "value_int": report.value_int,
        "valid": report.valid_unconditional, "policy": report.policy.name,
        "l_k": "", "l_k1": "", "genus": "", "caveats": "; ".join(report.caveats),
    }
    if report.witnesses is not None:
        row["l_k"] = report.witnesses.pair.l_k
        row["l_k1"] = report.witnesses.pair.l_k1
        row["genus"] = report.witnesses.curve.genus
    return row


def _prior_row(pb: bounds.PriorBound, field: str) -> dict:
    return {
        "p": pb.p, "n": pb.n, "field": field, "method": f"prior_{pb.variant}",
        "value_real": pb.value_real, "value_int": math.floor(pb.value_real),
        "valid": True, "policy": "", "l_k": "", "l_k1": "", "genus": "", "caveats": "",
    }


def _cmd_bound(args) -> tuple[str, int]:
    policy = _build_policy(args)
    closed = bounds.closed_form_quadratic if args.field == "p2" else bounds.closed_form_prime
    if args.method == "closed":
        return _emit(closed(args.p, args.n, policy).to_json_dict(), args.format), EXIT_OK
    if args.method == "constructive":
        report = bounds.constructive_bound(args.p, args.n, args.field, policy)
        return _emit(report.to_json_dict(), args.format), EXIT_OK
    # method == "all": the closed form plus the constructive route, which may
    # legitimately be infeasible at small n and is then reported in place
    reports = [closed(args.p, args.n, policy).to_json_dict()]
    try:
        reports.append(bounds.constructive_bound(args.p, args.n, args.field, policy).to_json_dict())
    except InfeasiblePipelineError as exc:
        reports.append(exc.to_json_dict())
    doc = {"p": args.p, "n": args.n, "field": args.field, "reports": reports}
    return _emit(doc, args.format), EXIT_OK


def _table_rows(args, policy) -> list[dict]:
    emp = bounds.default_empirical_policy(args.sieve_limit)
    lo, hi, step = args.n_range
    rows = []
    for p in args.p_set:
        for n in range(lo, hi + 1, step):
            for field, priors, closed in (
                ("p2", ("v", "vi"), bounds.closed_form_quadratic),
                ("p", ("iii", "iv"), bounds.closed_form_prime),
            ):
                for variant in priors:
                    rows.append(_prior_row(bounds.prior_bound(variant, p, n), field))
                rows.append(_report_row(closed(p, n, policy)))
                try:
                    rows.append(_report_row(bounds.constructive_bound(p, n, field, emp)))
                except InfeasiblePipelineError as exc:
                    rows.append({
                        "p": p, "n": n, "field": field, "method": "constructive",
                        "value_real": "", "value_int": "", "valid": False, "policy": emp.name,
                        "l_k": "", "l_k1": "", "genus": "",
                        "caveats": f"infeasible: {exc.failed_check}",
                    })
    return rows


def _cmd_table(args) -> tuple[str, int]:
    policy = _build_policy(args)
    rows = _table_rows(args, policy)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue(), EXIT_OK
    return _emit({"rows": rows}, args.format), EXIT_OK


def _cmd_gaps(args) -> tuple[str, int]:
    alpha = _parse_alpha(args.alpha)
    scan = primes.verify_gaps(args.limit, alpha)
    return _emit(scan.to_json_dict(include_timing=args.timing), args.format), EXIT_OK


def _cmd_genus(args) -> tuple[str, int]:
    if args.N is not None:
        if args.family or args.l or args.p:
            raise ValueError("--N and --family/--l/--p are mutually exclusive")
        return _emit(curves.genus_X0(args.N).to_json_dict(), args.format), EXIT_OK
    if not (args.family and args.l and args.p):
        raise ValueError("family mode requires --family, --l and --p")
    data = curves.family_data(args.p, args.l)
    if data.family != args.family:
        raise ValueError(
            f"family {args.family} is inconsistent with p={args.p}; "
            f"characteristic {args.p} pairs with the {data.family} family"
        )
    return _emit(data.to_json_dict(), args.format), EXIT_OK


def _parse_verify_mode(text: str) -> tuple[str, int]:
    if text in ("auto", "exhaustive"):
        return text, multiplier.DEFAULT_TRIALS
    if text.startswith("random"):
        if text == "random":
            return "random", multiplier.DEFAULT_TRIALS
        head, _, count = text.partition(":")
        if head == "random" and count.isdigit() and int(count) > 0:
            return "random", int(count)
    raise ValueError(f"bad verify mode {text!r}: expected exhaustive, random:N or auto")


def _cmd_mult(args) -> tuple[str, int]:
    mode, trials = _parse_verify_mode(args.verify)
    algo = multiplier.build_algorithm(args.q, args.n, multiplier.plan_evaluation(args.q, args.n, args.allow_deg2))
    report = multiplier.verify(algo, mode, trials, args.seed)
    doc = {
        "q": args.q,
        "n": args.n,
        "modulus": [algo.base.to_int(c) for c in algo.ext.modulus],
        "plan": algo.plan.to_json_dict(algo.base),
        "rank": algo.rank,
        "envelope": {"case": algo.plan.case, "value": algo.envelope()},
        "verification": report.to_json_dict(),
    }
    if args.emit_tensor:
        with open(args.emit_tensor, "w") as fh:
            fh.write(multiplier.emit_tensor(algo))
        doc["tensor_path"] = args.emit_tensor
    return _emit(doc, args.format), EXIT_OK


def _cmd_compare(args) -> tuple[str, int]:
    return _emit(bounds.compare_all(args.p, args.n), args.format), EXIT_OK


def _cmd_selftest(args) -> tuple[str, int]:
    buf = io.StringIO()
    code = run_selftest(buf.write)
    return buf.getvalue(), code


def _add_format(sub, *, csv_ok: bool = False) -> None:
    choices = ["json", "text"] + (["csv"] if csv_ok else [])
    sub.add_argument("--format", choices=choices, default="json")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symrank",
        description="Symmetric multiplication algorithms and tensor-rank bounds "
        "for finite field extensions",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("bound", help="closed-form or constructive rank bound")
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--field", choices=["p", "p2"], default="p2")
    sub.add_argument("--method", choices=["closed", "constructive", "all"], default="all")
    sub.add_argument("--policy", choices=["dudek", "bhp", "empirical"], default="dudek")
    sub.add_argument("--alpha", help="gap exponent C/D (empirical policy only)")
    sub.add_argument("--sieve-limit", type=int, default=DEFAULT_SIEVE_LIMIT)
    _add_format(sub)
    sub.set_defaults(fn=_cmd_bound)

    sub = subs.add_parser("table", help="bound table over a (p, n) grid")
    sub.add_argument("--p-set", type=_parse_p_set, required=True, dest="p_set")
    sub.add_argument("--n-range", type=_parse_n_range, required=True, dest="n_range")
    sub.add_argument("--policy", choices=["dudek", "bhp", "empirical"], default="dudek")
    sub.add_argument("--alpha")
    sub.add_argument("--sieve-limit", type=int, default=DEFAULT_SIEVE_LIMIT)
    _add_format(sub, csv_ok=True)
    sub.set_defaults(fn=_cmd_table)

    sub = subs.add_parser("gaps", help="scan successor gaps against l**alpha")
    sub.add_argument("--limit", type=int, required=True)
    sub.add_argument("--alpha", default="2/3")
    sub.add_argument("--timing", action="store_true", help="include runtime_ms (non-reproducible)")
    _add_format(sub)
    sub.set_defaults(fn=_cmd_gaps)

    sub = subs.add_parser("genus", help="genus of X0(N) or curve-family data")
    sub.add_argument("--N", type=int)
    sub.add_argument("--family", choices=["11l", "23l"])
    sub.add_argument("--l", type=int)
    sub.add_argument("--p", type=int)
    _add_format(sub)
    sub.set_defaults(fn=_cmd_genus)

    sub = subs.add_parser("mult", help="build and verify a multiplication algorithm")
    sub.add_argument("--q", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--allow-deg2", action="store_true")
    sub.add_argument("--verify", default="auto", help="exhaustive | random:N | auto")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sub.add_argument("--emit-tensor", metavar="PATH")
    _add_format(sub)
    sub.set_defaults(fn=_cmd_mult)

    sub = subs.add_parser("compare", help="rank every applicable bound method")
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--n", type=int, required=True)
    _add_format(sub)
    sub.set_defaults(fn=_cmd_compare)

    sub = subs.add_parser("selftest", help="run the invariant suites")
    sub.set_defaults(fn=_cmd_selftest)

    return parser


def _parse_p_set(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad p set {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty p set")
    return values


def _parse_n_range(text: str) -> tuple[int, int, int]:
    parts = text.split(":")
    try:
        if len(parts) == 2:
            lo, hi, step = int(parts[0]), int(parts[1]), 1
        elif len(parts) == 3:
            lo, hi, step = (int(x) for x in parts)
        else:
            raise ValueError
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad n range {text!r}: expected A:B or A:B:STEP") from exc
    if lo > hi or step < 1:
        raise argparse.ArgumentTypeError(f"bad n range {text!r}")
    return lo, hi, step


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        output, code = args.fn(args)
    except (InfeasiblePipelineError, InfeasiblePlanError) as exc:
        sys.stdout.write(json.dumps(exc.to_json_dict(), indent=2) + "\n")
        return EXIT_INFEASIBLE
    except PairSelectionError as exc:
        sys.stdout.write(json.dumps({"error": "infeasible", "reason": str(exc)}, indent=2) + "\n")
        return EXIT_INFEASIBLE
    except VerificationError as exc:
        sys.stdout.write(json.dumps(exc.to_json_dict(), indent=2) + "\n")
        return EXIT_VERIFICATION
    except (ValueError, OSError) as exc:
        sys.stdout.write(json.dumps({"error": "usage", "reason": str(exc)}, indent=2) + "\n")
        return EXIT_USAGE
    sys.stdout.write(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
