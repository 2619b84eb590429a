"""Command-line front end: ``analyze``, ``sweep``, ``verify``, ``montecarlo``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import acceptance
from .ensembles import make_product_family
from .errors import DiscriminationError
from .minerr import chen_analysis, product_family_srm, srm_optimality_check
from .numerics import hermitian_eig
from .unambig import (
    equiprobable_optimum,
    monte_carlo_protocol,
    sequential_protocol_exact,
    solve_ud_primal,
    worker_count,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_IO = 3

SWEEP_HEADER = (
    "s", "lambda_min", "ud_value", "srm_success", "srm_diag_spread",
    "mu11", "mu12", "mu14", "schmidt_rank", "chen_verdict",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _num(x: float) -> float:
    # 12 significant digits, stable across runs
    return float(f"{float(x):.12g}")


def _open_unit(s: float) -> float:
    if not 0.0 < s < 1.0:
        raise UsageError(f"--s must lie in the open interval (0, 1), got {s}")
    return s


def analyze_point(s: float) -> dict:
    """Full pipeline at one overlap, as an ordered dictionary."""
    t0 = time.perf_counter()
    fam = make_product_family(s)
    g = fam.gram()
    lam = hermitian_eig(g).eigenvalues
    srm = product_family_srm(s)
    opt = srm_optimality_check(g)
    ud = solve_ud_primal(g, fam.priors)
    lam_min = equiprobable_optimum(g)
    locc = sequential_protocol_exact(s)
    rep = chen_analysis(s)
    ranks = srm.basis.schmidt_ranks
    elapsed = (time.perf_counter() - t0) * 1e3
    return {
        "s": _num(s),
        "gram_eigenvalues": [_num(x) for x in lam],
        "srm_success": _num(srm.success),
        "srm_optimal": bool(opt.optimal),
        "srm_diag_spread": _num(opt.spread),
        "ud_value": _num(ud.value),
        "ud_gap": _num(ud.gap),
        "lambda_min": _num(lam_min),
        "ud_equals_lambda_min": bool(abs(ud.value - lam_min) <= 1e-6),
        "locc_ud_value": _num(locc.exact_success),
        "locc_ud_attains": bool(abs(locc.exact_success - ud.value) <= 1e-6),
        "chen": {
            "mu11": _num(rep.denominator_components[0].real),
            "mu12": _num(rep.denominator_components[1].real),
            "mu14": _num(rep.denominator_components[2].real),
            "k_ratios": [_num(k.real) for k in rep.k_ratios],
            "ray_is_product": bool(rep.ray_is_product),
            "product_vectors_found": rep.search_found,
            "verdict": rep.verdict,
        },
        "schmidt_rank": min(ranks),
        "timing_ms": _num(elapsed),
    }


def _format_text(report: dict) -> str:
    def fmt(v):
        if isinstance(v, float):
            return f"{v:.6f}"
        if isinstance(v, list):
            return "[" + ", ".join(fmt(x) for x in v) + "]"
        return str(v)

    lines = []
    for key, val in report.items():
        if isinstance(val, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {fmt(v)}" for k, v in val.items())
        else:
            lines.append(f"{key}: {fmt(val)}")
    return "\n".join(lines)


def cmd_analyze(args) -> int:
    s = _open_unit(args.s)
    report = analyze_point(s)
    if args.format == "json":
        if not args.timing:
            report["timing_ms"] = None
        print(json.dumps(report))
    else:
        print(_format_text(report))
    return EXIT_OK


def sweep_row(s: float) -> list:
    fam_report = analyze_point(s)
    chen = fam_report["chen"]
    return [
        fam_report["s"],
        fam_report["lambda_min"],
        fam_report["ud_value"],
        fam_report["srm_success"],
        fam_report["srm_diag_spread"],
        chen["mu11"],
        chen["mu12"],
        chen["mu14"],
        fam_report["schmidt_rank"],
        chen["verdict"],
    ]


def cmd_sweep(args) -> int:
    if not 0.0 < args.s_min < args.s_max < 1.0:
        raise UsageError("need 0 < --s-min < --s-max < 1")
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    grid = [float(x) for x in np.linspace(args.s_min, args.s_max, args.steps)]
    try:
        handle = open(args.out, "w", newline="", encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    workers = min(worker_count(), len(grid))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(sweep_row, grid))
    else:
        rows = [sweep_row(s) for s in grid]
    try:
        with handle:
            w = csv.writer(handle, lineterminator="\r\n")
            w.writerow(SWEEP_HEADER)
            w.writerows(rows)
    except OSError as exc:
        print(f"error: writing {args.out} failed: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = acceptance.FAST_GRID if args.level == "fast" else acceptance.FULL_GRID
    results = acceptance.run_suite(grid, inject_fault=args.inject_fault)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    if failed:
        names = ", ".join(f"[{r.id}] {r.name}" for r in failed)
        print(f"FAILED: {names}")
        return EXIT_VERIFY
    print(f"all {len(results)} criteria passed")
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    s = _open_unit(args.s)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    res = monte_carlo_protocol(s, args.trials, args.seed)
    print(json.dumps({
        "s": _num(res.s),
        "trials": res.trials,
        "seed": res.seed,
        "exact": _num(res.exact_success),
        "empirical": _num(res.empirical_success),
        "stderr": _num(res.stderr),
        "wrong_conclusive_count": res.wrong_conclusive,
    }))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nwe-disc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="run the full pipeline at one overlap")
    a.add_argument("--s", type=float, required=True)
    a.add_argument("--format", choices=("json", "text"), default="text")
    a.add_argument("--timing", action="store_true", help="include wall time in JSON output")
    a.set_defaults(func=cmd_analyze)

    w = sub.add_parser("sweep", help="write a CSV over a grid of overlaps")
    w.add_argument("--s-min", type=float, default=0.1)
    w.add_argument("--s-max", type=float, default=0.9)
    w.add_argument("--steps", type=int, default=9)
    w.add_argument("--out", required=True)
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--level", choices=("fast", "full"), default="fast")
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("montecarlo", help="sample the two-round local protocol")
    m.add_argument("--s", type=float, required=True)
    m.add_argument("--trials", type=int, default=100_000)
    m.add_argument("--seed", type=int, default=0)
    m.set_defaults(func=cmd_montecarlo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DiscriminationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
