"""Batch front-end: one subcommand per experiment, reproducible reports.

Every run writes machine-readable reports (JSON and/or CSV) embedding a
manifest of all parameters.  Reports are byte-stable: identical invocations
with the same seed produce identical files, so wall-clock timing goes to
stderr, never into a report.  Exit codes: 0 all checks pass, 1 check failure
(with the failing witness serialized), 2 invalid arguments.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from ._backend import SEARCH_BACKEND
from .certificates import (
    Instance,
    g_closed_form,
    g_sum_form,
    verify_theorem2,
)
from .exactnum import BACKEND, Q, parse_rational, rat_str
from .laurentk import (
    fit_upper_bound_constant,
    lower_bound_condition_threshold,
    sos_rank,
    theoretical_bounds,
)
from .laurentk import first_negative_margin
from .moments import SymmetricAssignment
from .symsos import build_reduced, check_reduced
from .unipoly import alternating_moment, partial_fractions

MAX_WORKERS = min(8, os.cpu_count() or 1)


def _manifest(subcommand: str, parameters: dict, seed=None, checks=None) -> dict:
    return {
        "tool": "soscert",
        "version": __version__,
        "subcommand": subcommand,
        "parameters": parameters,
        "seed": seed,
        "backend": {"rational": BACKEND, "search": SEARCH_BACKEND},
        "checks": checks or {},
    }


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _parallel_map(fn, items: list):
    """Ordered map over a bounded process pool; falls back to serial."""
    if len(items) <= 1 or MAX_WORKERS <= 1:
        return [fn(item) for item in items]
    try:
        with ProcessPoolExecutor(max_workers=MAX_WORKERS) as pool:
            return list(pool.map(fn, items))
    except (OSError, PermissionError):
        return [fn(item) for item in items]


# ---------------------------------------------------------------------------
# theorem2 / theorem2-sweep

_SWEEP_HEADER = [
    "n",
    "d",
    "t",
    "normalization_sum",
    "g_sum",
    "g_closed",
    "reduced_psd",
    "bruteforce_psd",
    "pass",
]


def _theorem2_report_dict(args_tuple) -> dict:
    n, d, skip_bruteforce = args_tuple
    report = verify_theorem2(Instance(n, d), skip_bruteforce=skip_bruteforce)
    return report.to_json_dict()


def _sweep_row(report: dict) -> list:
    return [
        report["n"],
        report["d"],
        report["t"],
        report["normalization_sum"],
        report["g_sum"],
        report["g_closed"],
        report["reduced_psd"]["is_psd"],
        "skipped"
        if report["bruteforce_skipped"]
        else report["bruteforce_psd"]["is_psd"],
        report["pass"],
    ]


def _run_theorem2(args) -> int:
    reports = [_theorem2_report_dict((args.n, args.d, args.skip_bruteforce))]
    ok = all(r["pass"] for r in reports)
    manifest = _manifest(
        "theorem2",
        {"n": args.n, "d": args.d, "skip_bruteforce": args.skip_bruteforce},
        checks={"all_pass": ok},
    )
    payload = {"manifest": manifest, "reports": reports}
    out = Path(args.out)
    stem = f"theorem2_n{args.n}_d{args.d}"
    if args.format in ("json", "both"):
        _write_json(out / f"{stem}.json", payload)
    if args.format in ("csv", "both"):
        _write_csv(out / f"{stem}.csv", _SWEEP_HEADER, [_sweep_row(r) for r in reports])
    for r in reports:
        status = "PASS" if r["pass"] else "FAIL"
        print(
            f"theorem2 n={r['n']} d={r['d']} level={r['t']} "
            f"objective={r['objective_raw']} {status}"
        )
    return 0 if ok else 1


def _run_theorem2_sweep(args) -> int:
    grid = [
        (n, d, args.skip_bruteforce)
        for n in range(3, args.n_max + 1, 2)
        for d in range(1, min(args.d_max, (n - 1) // 2) + 1)
    ]
    if not grid:
        print("empty sweep grid", file=sys.stderr)
        return 2
    reports = _parallel_map(_theorem2_report_dict, grid)
    ok = all(r["pass"] for r in reports)
    manifest = _manifest(
        "theorem2-sweep",
        {
            "n_max": args.n_max,
            "d_max": args.d_max,
            "skip_bruteforce": args.skip_bruteforce,
        },
        checks={"all_pass": ok, "instances": len(reports)},
    )
    payload = {"manifest": manifest, "reports": reports}
    out = Path(args.out)
    if args.format in ("json", "both"):
        _write_json(out / "theorem2_sweep.json", payload)
    if args.format in ("csv", "both"):
        _write_csv(
            out / "theorem2_sweep.csv",
            _SWEEP_HEADER,
            [_sweep_row(r) for r in reports],
        )
    for r in reports:
        status = "PASS" if r["pass"] else "FAIL"
        print(f"theorem2 n={r['n']} d={r['d']} {status}")
    print(f"theorem2-sweep: {len(reports)} instances, all_pass={ok}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# rank-k

_RANK_HEADER = [
    "n",
    "rank",
    "rank_over_n",
    "first_negative_margin_t",
    "lower_search_values",
]


def _rank_report_dict(args_tuple) -> dict:
    n, restarts, seed = args_tuple
    report = sos_rank(n, restarts=restarts, seed=seed)
    return report.to_json_dict()


def _rank_consistency(report: dict) -> list[str]:
    """Internal soundness checks; a failure here is an implementation bug."""
    problems = []
    n = report["n"]
    for level in report["levels"]:
        t = level["t"]
        margin_negative = parse_rational(level["upper_cert_margin"]) < 0
        if margin_negative and level["feasible"]:
            problems.append(f"n={n} t={t}: negative margin but criterion feasible")
        search = level.get("lower_search")
        if search is not None:
            below = parse_rational(search["exact_value"]) < Q(1, 2)
            if level["feasible"] and below:
                problems.append(
                    f"n={n} t={t}: search found {search['exact_value']} < 1/2 "
                    "at a criterion-feasible level"
                )
    return problems


def _run_rank_k(args) -> int:
    if (args.n is None) == (args.n_max is None):
        print("rank-k needs exactly one of --n / --n-max", file=sys.stderr)
        return 2
    ns = [args.n] if args.n is not None else list(range(2, args.n_max + 1))
    reports = _parallel_map(
        _rank_report_dict, [(n, args.restarts, args.seed) for n in ns]
    )
    problems: list[str] = []
    for r in reports:
        problems.extend(_rank_consistency(r))
    monotonicity = [
        f"rank({b['n']}) = {b['rank']} < rank({a['n']}) = {a['rank']}"
        for a, b in zip(reports, reports[1:])
        if b["rank"] < a["rank"]
    ]
    fitted_c = fit_upper_bound_constant() if len(ns) > 1 else None
    bounds = {
        str(r["n"]): list(theoretical_bounds(r["n"]))
        for r in reports
        if r["n"] >= 4
    }
    ok = not problems
    manifest = _manifest(
        "rank-k",
        {"n": args.n, "n_max": args.n_max, "restarts": args.restarts},
        seed=args.seed,
        checks={"consistency": ok, "instances": len(reports)},
    )
    payload = {
        "manifest": manifest,
        "reports": reports,
        "consistency_problems": problems,
        "monotonicity_violations": monotonicity,
        "theoretical_bounds": bounds,
        "fitted_upper_constant": fitted_c,
        "lower_bound_condition_from_n": lower_bound_condition_threshold(),
    }
    out = Path(args.out)
    if args.format in ("json", "both"):
        _write_json(out / "rank_k.json", payload)
    if args.format in ("csv", "both"):
        rows = []
        for r in reports:
            first_neg = first_negative_margin(r["n"])
            packed = ";".join(
                f"t={lv['t']}:{lv['lower_search']['exact_value']}"
                for lv in r["levels"]
                if "lower_search" in lv
            )
            rows.append([r["n"], r["rank"], r["rank_over_n"], first_neg, packed])
        _write_csv(out / "rank_k.csv", _RANK_HEADER, rows)
    for r in reports:
        print(f"rank-k n={r['n']} rank={r['rank']} ({r['status']})")
    if monotonicity:
        print("monotonicity violations: " + "; ".join(monotonicity))
    for p in problems:
        print(f"CONSISTENCY FAILURE: {p}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# criterion

def _run_criterion(args) -> int:
    data = json.loads(Path(args.weights).read_text(encoding="utf-8"))
    try:
        n = int(data["n"])
        weights = [parse_rational(s) for s in data["weights"]]
        assignment = SymmetricAssignment(n, weights)
    except (KeyError, ValueError) as exc:
        print(f"bad weights file: {exc}", file=sys.stderr)
        return 2
    if not 1 <= args.t <= n:
        print(f"--t must be in 1..{n}", file=sys.stderr)
        return 2
    verdict = check_reduced(build_reduced(assignment, args.t))
    manifest = _manifest(
        "criterion",
        {"weights": str(args.weights), "t": args.t, "n": n},
        checks={"criterion_psd": verdict.is_psd},
    )
    payload = {
        "manifest": manifest,
        "n": n,
        "t": args.t,
        "weights": [rat_str(w) for w in assignment.weights],
        "verdict": verdict.to_json_dict(),
    }
    out = Path(args.out)
    if args.format in ("json", "both"):
        _write_json(out / "criterion.json", payload)
    if args.format in ("csv", "both"):
        _write_csv(
            out / "criterion.csv",
            ["n", "t", "is_psd", "failing_h", "failing_kind"],
            [
                [
                    n,
                    args.t,
                    verdict.is_psd,
                    "" if verdict.is_psd else verdict.failing_h,
                    "" if verdict.is_psd else verdict.failing_kind,
                ]
            ],
        )
    if verdict.is_psd:
        print(f"criterion n={n} t={args.t}: PSD")
        return 0
    print(
        f"criterion n={n} t={args.t}: NOT PSD "
        f"(h={verdict.failing_h}, block {verdict.failing_kind}); "
        f"violating sigma_p={verdict.violating.sigma_p.to_json()}, "
        f"sigma_q={verdict.violating.sigma_q.to_json()}"
    )
    return 1


# ---------------------------------------------------------------------------
# identity

def _run_identity(args) -> int:
    mismatches = []
    for m in range(1, args.m_max + 1):
        n = 2 * m + 1
        for d in range(1, min(args.d_max, m) + 1):
            if g_sum_form(d, n) != g_closed_form(d, n):
                mismatches.append({"d": d, "n": n})
    quarter_failures = [
        n
        for n in range(3, 22, 2)
        if g_closed_form(1, n) != Q(-1, 4) or g_sum_form(1, n) != Q(-1, 4)
    ]

    rng = random.Random(args.seed)
    pf_failures = 0
    for _ in range(50):
        a = Q(rng.randint(-20, 20), rng.randint(1, 9))
        b = rng.randint(1, 8)
        decomp = partial_fractions(a, b)
        for _ in range(5):
            x = a + Q(rng.randint(1, 400), 2) + Q(1, 3)  # off the pole lattice
            lhs = 1 / prod_falling(x, a, b)
            if lhs != decomp(x):
                pf_failures += 1

    am_zero_failures = [
        [n, c]
        for n in range(1, 13)
        for c in range(n)
        if alternating_moment(n, c) != 0
    ]
    am_nonzero_failures = [
        n for n in range(1, 13) if alternating_moment(n, n) == 0
    ]

    ok = not (
        mismatches
        or quarter_failures
        or pf_failures
        or am_zero_failures
        or am_nonzero_failures
    )
    manifest = _manifest(
        "identity",
        {"d_max": args.d_max, "m_max": args.m_max},
        seed=args.seed,
        checks={
            "g_sum_equals_closed": not mismatches,
            "g1_is_minus_quarter": not quarter_failures,
            "partial_fractions_pointwise": pf_failures == 0,
            "alternating_moments": not (am_zero_failures or am_nonzero_failures),
        },
    )
    payload = {
        "manifest": manifest,
        "g_identity_mismatches": mismatches,
        "g1_quarter_failures": quarter_failures,
        "partial_fraction_failures": pf_failures,
        "alternating_moment_zero_failures": am_zero_failures,
        "alternating_moment_nonzero_failures": am_nonzero_failures,
        "pass": ok,
    }
    out = Path(args.out)
    if args.format in ("json", "both"):
        _write_json(out / "identity.json", payload)
    if args.format in ("csv", "both"):
        rows = []
        for m in range(1, args.m_max + 1):
            n = 2 * m + 1
            for d in range(1, min(args.d_max, m) + 1):
                rows.append(
                    [
                        d,
                        n,
                        rat_str(g_sum_form(d, n)),
                        rat_str(g_closed_form(d, n)),
                        g_sum_form(d, n) == g_closed_form(d, n),
                    ]
                )
        _write_csv(out / "identity.csv", ["d", "n", "g_sum", "g_closed", "equal"], rows)
    print(f"identity: pass={ok}" + (f" mismatches={mismatches}" if mismatches else ""))
    return 0 if ok else 1


def prod_falling(x, a, b: int):
    """(x-a)(x-a-1)...(x-a-b+1); helper for the partial-fraction check."""
    out = Q(1)
    for i in range(b):
        out *= x - a - i
    return out


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soscert",
        description="Exact SoS-hierarchy certificates: lower-bound levels and empty-hull ranks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--out", default="reports", help="output directory")
        p.add_argument(
            "--format", choices=["json", "csv", "both"], default="both"
        )

    p = sub.add_parser("theorem2", help="verify one (n, d) certificate")
    p.add_argument("--n", type=int, required=True, help="odd number of variables")
    p.add_argument("--d", type=int, required=True, help="half the polynomial degree")
    p.add_argument("--skip-bruteforce", action="store_true")
    common(p)
    p.set_defaults(func=_run_theorem2)

    p = sub.add_parser("theorem2-sweep", help="verify certificates over a grid")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--d-max", type=int, default=10**6)
    p.add_argument("--skip-bruteforce", action="store_true")
    common(p)
    p.set_defaults(func=_run_theorem2_sweep)

    p = sub.add_parser("rank-k", help="empty-polytope rank per level")
    p.add_argument("--n", type=int)
    p.add_argument("--n-max", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--restarts",
        type=int,
        default=0,
        help="numeric lower-bound search restarts per level (0 = skip search)",
    )
    common(p)
    p.set_defaults(func=_run_rank_k)

    p = sub.add_parser("criterion", help="reduced PSD criterion for a weights file")
    p.add_argument("--weights", required=True, help='JSON {"n":..,"weights":["p/q",..]}')
    p.add_argument("--t", type=int, required=True)
    common(p)
    p.set_defaults(func=_run_criterion)

    p = sub.add_parser("identity", help="g-identity and partial-fraction regressions")
    p.add_argument("--d-max", type=int, default=5)
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=_run_identity)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    try:
        code = args.func(args)
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2
    print(
        f"[{args.subcommand}] wall time {time.monotonic() - start:.2f}s",
        file=sys.stderr,
    )
    return code


if __name__ == "__main__":
    raise SystemExit(main())
