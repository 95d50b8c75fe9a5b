"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from . import asymptotics as asy
from .engine import RowTable
from .pipeline import max_oracle_depth, run, validate_table
from .plrs import PLRS, PLRSError, dominant_root, sequence
from .tables import HypothesisError, table_for
from .zeckendorf import ALL, SIGMA, BudgetExceeded, DEFAULT_BUDGET, decompose, enumerate_interval, gap_profile, row_json

CSV_COLUMNS = ["n", "mean", "var", "m3_std", "m4_std", "m6_std", "ks"]


class UsageError(Exception):
    pass


def _plrs(text: str) -> PLRS:
    return PLRS.parse(text)


def _mode(args) -> str | int:
    if getattr(args, "all", False):
        return ALL
    if args.sigma:
        return SIGMA
    if args.g is None:
        raise UsageError("one of --g or --sigma is required")
    return args.g


def _add_mode(p: argparse.ArgumentParser, allow_all: bool = False) -> None:
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--g", type=int, help="gap size")
    grp.add_argument("--sigma", action="store_true", help="count summands instead of gaps")
    if allow_all:
        grp.add_argument("--all", action="store_true", help="every gap size at once")


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_seq(args) -> int:
    seq = sequence(args.plrs, args.n)
    if args.json:
        _emit({"plrs": list(args.plrs.coeffs), "terms": [str(x) for x in seq.terms]})
    else:
        print(" ".join(str(x) for x in seq.terms))
    return 0


def cmd_decompose(args) -> int:
    d = decompose(args.M, args.plrs)
    prof = gap_profile(d)
    idx = d.summand_indices
    gaps = [a - b for a, b in zip(idx, idx[1:])]
    if args.json:
        _emit(
            {
                "plrs": list(args.plrs.coeffs),
                "M": str(args.M),
                "digits": list(d.digits),
                "indices": list(idx),
                "gaps": gaps,
                "gap_counts": {str(k): v for k, v in prof.gap_counts.items()},
                "summands": prof.total_summands,
            }
        )
    else:
        print("digits:  " + " ".join(str(a) for a in d.digits))
        print("indices: " + ",".join(str(i) for i in idx))
        print("gaps:    " + (",".join(str(g) for g in gaps) if gaps else "none"))
        print(f"summands: {prof.total_summands}")
    return 0


def cmd_table(args) -> int:
    _emit(table_for(args.plrs, _mode(args)).to_dict(), args.out)
    return 0


def cmd_enumerate(args) -> int:
    mode = _mode(args)
    counts = enumerate_interval(args.plrs, args.n, mode, args.budget)
    if mode == ALL:
        for g in sorted(counts.rows):
            print(row_json(args.plrs, g, args.n, counts.rows[g]))
        print(row_json(args.plrs, SIGMA, args.n, counts.sigma))
    else:
        print(counts.to_json(mode))
    return 0


def cmd_evolve(args) -> int:
    _, rows = run(args.plrs, _mode(args), args.n, args.budget)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            rows.to_jsonl(fh)
    else:
        rows.to_jsonl(sys.stdout)
    return 0


def cmd_verify(args) -> int:
    mode = _mode(args)
    table = table_for(args.plrs, mode)
    depth = args.depth if args.depth is not None else min(max_oracle_depth(args.plrs, 10**6), 25)
    report = validate_table(table, args.plrs, depth, args.budget)
    if args.json:
        _emit(
            {
                "plrs": list(args.plrs.coeffs),
                "g": mode,
                "depth": depth,
                "rows_checked": len(report.checked),
                "mismatches": [[n, k, str(e), str(r)] for n, k, e, r in report.mismatches],
                "ok": report.ok,
            }
        )
    else:
        status = "PASS" if report.ok else "FAIL"
        print(f"{status} plrs={args.plrs} mode={mode} n={table.n0}..{depth} mismatches={len(report.mismatches)}")
        for n, k, e, r in report.mismatches[:20]:
            print(f"  n={n} k={k} oracle={e} recurrence={r}")
    return 0 if report.ok else 1


def _moment_series(args, rows: RowTable, table, ns) -> asy.MomentSeries:
    if args.recursive:
        return asy.moments_recursive(table, rows, args.mmax, args.n)
    return asy.moments_direct_series(rows, args.mmax, ns)


def _write_csv(diag_rows, out) -> None:
    fh = open(out, "w", newline="", encoding="utf-8") if out else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in diag_rows:
            w.writerow(r)
    finally:
        if out:
            fh.close()


def _csv_row(r: asy.MomentRow, ks: float | None) -> list:
    def std(m):
        if len(r.central) <= m or not r.var > 0:
            return ""
        return repr(r.standardized(m))

    return [r.n, repr(r.mean), repr(r.var), std(3), std(4), std(6), "" if ks is None else repr(ks)]


def cmd_moments(args) -> int:
    table, rows = run(args.plrs, _mode(args), args.n, args.budget)
    ns = [n for n in rows.ns if n <= args.n]
    series = _moment_series(args, rows, table, ns)
    out = []
    for n in series.ns:
        r = series[n]
        ks = asy.ks_distance(asy.distribution(rows, n)) if args.ks and r.var > 0 else None
        out.append(_csv_row(r, ks))
    _write_csv(out, args.out)
    return 0


def cmd_constants(args) -> int:
    mode = _mode(args)
    lam = dominant_root(args.plrs).lambda1
    if mode == SIGMA:
        consts = asy.compute_constants(table_for(args.plrs, SIGMA), lam)
    else:
        consts = asy.check_positivity(args.plrs, mode, lam)
    table, rows = run(args.plrs, mode, args.n, args.budget)
    series = asy.moments_recursive(table, rows, 2, args.n)
    lo = max(series.ns[0], args.n // 2)
    consts = asy.fit_constants(consts, series, (lo, args.n))
    payload = {"plrs": list(args.plrs.coeffs), "g": mode, "fit_window": [lo, args.n]}
    payload.update(consts.to_dict())
    _emit(payload, args.out)
    return 0


def cmd_clt(args) -> int:
    if args.mmax % 2:
        raise UsageError("--mmax must be even")
    table, rows = run(args.plrs, _mode(args), args.n, args.budget)
    series = asy.moments_recursive(table, rows, args.mmax, args.n)
    checkpoints = [n for n in range(args.every, args.n + 1, args.every) if n in series.rows]
    if args.n not in checkpoints:
        checkpoints.append(args.n)
    diag = asy.clt_diagnostics(series, args.mmax, rows, checkpoints)
    out = []
    for d in diag:
        out.append(
            [
                d.n,
                repr(d.mean),
                repr(d.var),
                repr(d.standardized[3]),
                repr(d.standardized[4]),
                repr(d.standardized[6]) if 6 in d.standardized else "",
                repr(d.ks),
            ]
        )
    _write_csv(out, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zeckgaps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--plrs", required=True, help="comma-separated coefficients, e.g. 1,1")
        p.set_defaults(func=func)
        return p

    p = add("seq", cmd_seq, "print G_1..G_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = add("decompose", cmd_decompose, "legal decomposition and gaps of M")
    p.add_argument("M", type=int)
    p.add_argument("--json", action="store_true")

    p = add("table", cmd_table, "coefficient table as JSON")
    _add_mode(p)
    p.add_argument("--out")

    p = add("enumerate", cmd_enumerate, "brute-force rows over [G_n, G_{n+1})")
    _add_mode(p, allow_all=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = add("evolve", cmd_evolve, "evolve rows to n, JSON lines")
    _add_mode(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out")

    p = add("verify", cmd_verify, "recurrence rows vs brute force")
    _add_mode(p)
    p.add_argument("--depth", type=int)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--json", action="store_true")

    p = add("moments", cmd_moments, "per-n moments as CSV")
    _add_mode(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mmax", type=int, default=6)
    p.add_argument("--recursive", action="store_true", help="propagate moments through the recurrence")
    p.add_argument("--ks", action="store_true", help="fill the ks column")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out")

    p = add("constants", cmd_constants, "limit constants and fitted offsets as JSON")
    _add_mode(p)
    p.add_argument("--n", type=int, default=200, help="fit over [n/2, n]")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out")

    p = add("clt", cmd_clt, "standardized moments and KS distance at checkpoints, CSV")
    _add_mode(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mmax", type=int, default=6)
    p.add_argument("--every", type=int, default=100)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.plrs = _plrs(args.plrs)
        if getattr(args, "M", 1) < 1:
            raise UsageError("M must be ≥ 1")
        if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
            raise UsageError("--n must be ≥ 1")
        return args.func(args)
    except (PLRSError, HypothesisError, UsageError, BudgetExceeded, ValueError) as exc:
        print(f"zeckgaps {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
