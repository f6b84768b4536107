"""Command-line front end.

Subcommands:
  series      exact perimeter-weighted count tables (JSON or CSV)
  counts      verify the built-in reference tables (--check-appendix-b)
  enumerate   brute-force hull-perimeter histograms from small maps
  sample      Monte Carlo hull measurement batches (JSON lines)
  law         CSV grids of the closed-form laws
  check       acceptance suites (fast = exact+numeric, all = adds Monte Carlo)

Exit codes: 0 success, 1 verification mismatch, 2 usage error.  Identical
invocations (including --seed) produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction as Q
from typing import List, Optional

from . import asympt, genfun, numlab, refdata
from .genfun import QUAD, TRI, family_by_name
from .planarmap import MeasureConfig, enumerate_pointed_rooted, measure_hulls
from .planarmap.slices import cut_to_slice, hull_perimeter

USAGE_ERROR = 2
MISMATCH = 1


def _threads_default() -> int:
    env = os.environ.get("HULLMAPS_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _parse_rational(text: str) -> Q:
    return Q(text)


def _family(args) -> genfun.Family:
    return family_by_name(args.family)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- series -------------------------------------------------------------------


def cmd_series(args) -> int:
    family = _family(args)
    try:
        table = genfun.z_single(family, args.d, args.k, args.order)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if args.format == "json":
        _emit(args, json.dumps(table.to_json_dict(), sort_keys=True, indent=2) + "\n")
    else:
        lines = ["family,d,k,N,L,count"]
        lines += [",".join(map(str, row)) for row in table.to_csv_rows()]
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_counts(args) -> int:
    report = genfun.appendix_b_check()
    print(report.summary())
    for kind, d, k, n, l, expected, computed in report.mismatches:
        print(f"  {kind} d={d} k={k} N={n} L={l}: expected {expected}, computed {computed}")
    return 0 if report.ok else MISMATCH


# -- enumeration --------------------------------------------------------------


def cmd_enumerate(args) -> int:
    family = _family(args)
    from collections import defaultdict

    hist = defaultdict(int)
    for m, k in enumerate_pointed_rooted(family.kind, args.faces):
        if k < family.min_k():
            continue
        if args.k is not None and k != args.k:
            continue
        view = cut_to_slice(m, m.v0, m.root_he)
        ds = [args.d] if args.d is not None else range(family.min_d(), k)
        for d in ds:
            if not (family.min_d() <= d <= k - 1):
                continue
            rec = hull_perimeter(view, d, family.kind)
            hist[(d, k, rec.perimeter)] += 1
    lines = ["family,d,k,N,L,count"]
    for (d, k, L), count in sorted(hist.items()):
        lines.append(f"{family.kind},{d},{k},{args.faces},{L},{count}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


# -- sampling -----------------------------------------------------------------


def cmd_sample(args) -> int:
    if args.family not in ("quad", "quadrangulation"):
        print("error: sampling supports quadrangulations only", file=sys.stderr)
        return USAGE_ERROR
    config = MeasureConfig(
        n_faces=args.faces,
        d_list=tuple(args.d),
        samples=args.samples,
        seed=args.seed,
        conditioning_factor=args.conditioning,
        threads=args.threads,
    )
    try:
        batch = measure_hulls(config)
    except (RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    _emit(args, batch.to_jsonl())
    return 0


# -- law grids ----------------------------------------------------------------

LAWS = ("pinf", "pu", "ptilde", "ptilde1", "joint", "cor", "lav", "profile", "ek", "winf")


def _grid(spec: str) -> List[float]:
    start, stop, step = (float(x) for x in spec.split(":"))
    out = []
    x = start
    # endpoint-inclusive grid with stable rounding
    n = int(round((stop - start) / step))
    for i in range(n + 1):
        out.append(round(start + i * step, 12))
    return out


def cmd_law(args) -> int:
    c = float(_parse_rational(args.c)) if args.c else float(QUAD.c)
    grid = _grid(args.grid)
    name = args.law
    header = {
        "law": name,
        "c": c,
        "u": args.u,
        "v": args.v,
        "d": args.d,
        "L1": args.L1,
        "grid": args.grid,
    }
    rows = []
    try:
        for x in grid:
            if name == "pinf":
                y = asympt.pinf_density(x, c)
            elif name == "pu":
                y = asympt.pu_density(x, args.u, c)
            elif name == "ptilde":
                y = asympt.ptilde_density(x, args.u, c)
            elif name == "ptilde1":
                y = asympt.ptilde1_density(x, c)
            elif name == "joint":
                y = asympt.joint_density(args.L1, x, args.v, c)
            elif name == "cor":
                y = asympt.cor(x)
            elif name == "lav":
                y = asympt.lav(x, c)
            elif name == "profile":
                y = asympt.profile(x, c)
            elif name == "ek":
                family = _family(args)
                y = asympt.ek_L(family, int(x), args.k)
            elif name == "winf":
                family = _family(args)
                y = asympt.winf(family, x, args.d)
            else:
                print(f"error: unknown law {name}", file=sys.stderr)
                return USAGE_ERROR
            rows.append((x, y))
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    lines = ["# " + json.dumps(header, sort_keys=True), "x,value"]
    lines += [f"{x:.12g},{y:.16g}" for x, y in rows]
    _emit(args, "\n".join(lines) + "\n")
    return 0


# -- acceptance ---------------------------------------------------------------


def _check_line(name: str, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f" ({detail})" if detail else ""))
    return ok


def run_fast_checks() -> bool:
    ok = True

    report = genfun.appendix_b_check()
    ok &= _check_line("reference series tables", report.ok, report.summary())

    worst = 0.0
    for pair in numlab.TRANSFORM_PAIRS:
        for i in range(40):
            ell = 0.05 + (10 - 0.05) * i / 39
            got = numlab.talbot_ilt(pair.forward, ell)
            want = pair.inverse(ell)
            worst = max(worst, abs(got - want) / abs(want))
    ok &= _check_line("inverse-transform pairs", worst <= 1e-8, f"worst rel {worst:.2e}")

    worst = 0.0
    for c in (1 / 3, 1 / 2):
        for i in range(20):
            L = 0.05 + (5 - 0.05) * i / 19
            got = numlab.talbot_ilt(lambda s: asympt.pinf_laplace(s, c), L)
            worst = max(worst, abs(got - asympt.pinf_density(L, c)))
        for u in (0.25, 0.5, 0.75):
            for i in range(20):
                L = 0.05 + (5 - 0.05) * i / 19
                got = numlab.talbot_ilt(lambda s: asympt.ktau_laplace(s, u, c), L)
                worst = max(worst, abs(got - asympt.pu_density(L, u, c)))
    ok &= _check_line("transform/density dualities", worst <= 1e-7, f"worst abs {worst:.2e}")

    worst = 0.0
    for family in (QUAD, TRI):
        c = float(family.c)
        for tau in (0.5, 1.0, 2.0):
            for u in (0.3, 0.6):
                a = asympt.ktau_from_zeta(family, tau, u)
                b = asympt.ktau_laplace(tau, u, c)
                worst = max(worst, abs(a - b))
    ok &= _check_line("two-route identity", worst <= 1e-6, f"worst abs {worst:.2e}")

    mom_ok = True
    for c in (1 / 3, 1 / 2):
        mean = numlab.integrate(lambda L: L * asympt.pinf_density(L, c), 0, math.inf, tol=1e-10)
        mom_ok &= abs(mean - 1.5 * c) < 1e-7
        lav_err = abs(
            numlab.integrate(lambda L: L * asympt.pu_density(L, 0.5, c), 0, math.inf, tol=1e-10)
            - asympt.lav(0.5, c)
        )
        mom_ok &= lav_err < 1e-7
    ok &= _check_line("moments", mom_ok)

    oracle_ok = True
    from collections import defaultdict

    for family, caps in ((QUAD, (2, 3, 4)), (TRI, (2, 4))):
        hist = defaultdict(lambda: defaultdict(int))
        for n_faces in caps:
            for m, k in enumerate_pointed_rooted(family.kind, n_faces):
                if k < family.min_k():
                    continue
                view = cut_to_slice(m, m.v0, m.root_he)
                for d in range(family.min_d(), k):
                    rec = hull_perimeter(view, d, family.kind)
                    hist[(d, k, n_faces)][rec.perimeter] += 1
        tables = refdata.QUAD_TABLES if family.is_quad else refdata.TRI_TABLES
        for (d, k), table in tables.items():
            for n_faces, row in table.items():
                if n_faces in caps:
                    oracle_ok &= dict(hist.get((d, k, n_faces), {})) == row
    ok &= _check_line("small-map oracle equality", oracle_ok)
    return ok


def run_mc_check(threads: int, samples: int = 2000, n_faces: int = 200_000) -> bool:
    config = MeasureConfig(
        n_faces=n_faces, d_list=(12,), samples=samples, seed=20160614, threads=threads
    )
    batch = measure_hulls(config)
    d = 12
    perims = batch.perimeters(d)
    n = len(perims)
    ok = True
    for alpha in (0.9, 0.95):
        values = [alpha ** L for L in perims]
        mean = sum(values) / n
        var = sum((v - mean) ** 2 for v in values) / (n - 1)
        se = math.sqrt(var / n)
        want = asympt.winf(QUAD, alpha, d)
        tol = 3 * se + 0.05 * want
        ok &= _check_line(
            f"Monte Carlo E[alpha^L], alpha={alpha}",
            abs(mean - want) <= tol,
            f"mean {mean:.5g} vs {want:.5g} +- {tol:.2g}",
        )
    mean_L = sum(perims) / n
    var_L = sum((v - mean_L) ** 2 for v in perims) / (n - 1)
    se_L = math.sqrt(var_L / n)
    want_L = asympt.einf_L(QUAD, d)
    tol_L = 3 * se_L + 0.05 * want_L
    ok &= _check_line(
        "Monte Carlo mean perimeter",
        abs(mean_L - want_L) <= tol_L,
        f"mean {mean_L:.4f} vs {want_L:.4f} +- {tol_L:.2f}",
    )
    return ok


def cmd_check(args) -> int:
    ok = run_fast_checks()
    if args.tier == "all":
        ok &= run_mc_check(args.threads, samples=args.samples, n_faces=args.faces)
    print("all checks passed" if ok else "CHECK FAILURES")
    return 0 if ok else MISMATCH


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hullmaps", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("series", help="exact perimeter-weighted count tables")
    ps.add_argument("--family", required=True)
    ps.add_argument("--d", type=int, required=True)
    ps.add_argument("--k", type=int, required=True)
    ps.add_argument("--order", type=int, required=True)
    ps.add_argument("--format", choices=("json", "csv"), default="json")
    ps.add_argument("--output")
    ps.set_defaults(func=cmd_series)

    pc = sub.add_parser("counts", help="verify built-in reference tables")
    pc.add_argument("--check-appendix-b", action="store_true", required=True)
    pc.set_defaults(func=cmd_counts)

    pe = sub.add_parser("enumerate", help="brute-force perimeter histograms")
    pe.add_argument("--family", required=True)
    pe.add_argument("--faces", type=int, required=True)
    pe.add_argument("--d", type=int)
    pe.add_argument("--k", type=int)
    pe.add_argument("--output")
    pe.set_defaults(func=cmd_enumerate)

    pm = sub.add_parser("sample", help="Monte Carlo hull measurement")
    pm.add_argument("--family", default="quad")
    pm.add_argument("--faces", type=int, required=True)
    pm.add_argument("--d", type=int, nargs="+", required=True)
    pm.add_argument("--samples", type=int, required=True)
    pm.add_argument("--seed", type=int, default=20160614)
    pm.add_argument("--conditioning", type=int, default=5)
    pm.add_argument("--threads", type=int, default=_threads_default())
    pm.add_argument("--output")
    pm.set_defaults(func=cmd_sample)

    pl = sub.add_parser("law", help="CSV grids of the closed-form laws")
    pl.add_argument("law", choices=LAWS)
    pl.add_argument("--c")
    pl.add_argument("--family", default="quad")
    pl.add_argument("--grid", required=True, help="start:stop:step")
    pl.add_argument("--u", type=float, default=0.5)
    pl.add_argument("--v", type=float, default=2.0)
    pl.add_argument("--L1", type=float, default=0.5)
    pl.add_argument("--d", type=int, default=2)
    pl.add_argument("--k", type=int, default=100)
    pl.add_argument("--output")
    pl.set_defaults(func=cmd_law)

    pk = sub.add_parser("check", help="acceptance suites")
    pk.add_argument("tier", choices=("fast", "all"))
    pk.add_argument("--threads", type=int, default=_threads_default())
    pk.add_argument("--samples", type=int, default=2000)
    pk.add_argument("--faces", type=int, default=200_000)
    pk.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
