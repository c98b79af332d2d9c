"""Command-line front end.

    asymdir spectrum CONFIG.json [--out DIR]
    asymdir trace CONFIG.json [--component X|Y] [--domain I|II] [--delta F] [--r-min F] [--r-max F]
    asymdir scan --L-max N --trials N [--seed S]
    asymdir verify
    asymdir product CONFIG.json
    asymdir kernels --L-max N

Every command prints a JSON report and writes it, with its CSV/SVG
artifacts, to ``--out``.  Exit codes: 0 success (findings allowed),
1 invariant failure, 2 I/O or parse error, 3 invalid configuration,
4 invalid flags.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import directions as dirs
from . import kernels as kern
from . import productmethod as prod
from . import tracer as trc
from .charges import DOMAINS, ConfigurationError, load_configuration, moment_order, random_configuration
from .exact import format_rational

EXIT_OK, EXIT_INVARIANT, EXIT_IO, EXIT_CONFIG, EXIT_FLAGS = 0, 1, 2, 3, 4
U64 = 2**64


class FlagError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def _finding(message: str, exact_data=None, severity: str = "finding") -> dict:
    return {"severity": severity, "message": message, "exact_data": exact_data}


class Report:
    def __init__(self, command: str, input_echo):
        self.command = command
        self.input = input_echo
        self.findings: list = []
        self.artifacts: list = []
        self.data: dict = {}

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "input": self.input,
            "findings": self.findings,
            "artifacts": self.artifacts,
            "data": self.data,
        }


def _write_text(report: Report, out_dir: str, name: str, text: str) -> None:
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    report.artifacts.append(path)


def _write_csv(report: Report, out_dir: str, name: str, header, rows) -> None:
    path = os.path.join(out_dir, name)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    report.artifacts.append(path)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_spectrum(config, out_dir: str, report: Report) -> int:
    mt = moment_order(config)
    L = mt.order_L
    report.data["L"] = L
    report.data["coefficients"] = {d: dirs.direction_coefficients(config, d).as_strings() for d in DOMAINS}
    forms = {}
    for comp in dirs.COMPONENTS:
        for d in DOMAINS:
            for v in dirs.VARIANTS:
                dp = dirs.zeroing_form(config, comp, d, v)
                forms[f"{comp}/{d}/{v}"] = {
                    "numerator": [format_rational(c) for c in dp.numerator.coeffs],
                    "half_exponent": dp.half_exponent,
                    "t_valuation": dp.t_valuation,
                }
    report.data["zeroing_forms"] = forms
    ds = dirs.spectrum(config)
    report.data["spectrum"] = ds.to_json()
    report.findings.extend(ds.findings)
    for d, verdict in ds.distinctness.items():
        if not verdict.distinct:
            report.findings.append(
                _finding(f"X and Y share a direction in Type {d}", {"shared": [iv.as_dict() for iv in verdict.shared_roots]})
            )
    comparisons = []
    for comp in dirs.COMPONENTS:
        for d in DOMAINS:
            vr = dirs.variant_comparison(config, comp, d)
            comparisons.append(vr.to_json())
            if not vr.nonzero_root_sets_equal:
                report.findings.append(
                    _finding(f"{comp}/Type {d}: zeroing variants disagree on nonzero roots", vr.details["numerators"])
                )
    report.data["variant_comparison"] = comparisons
    rows = []
    for e in ds.entries.values():
        if e.zero_is_root:
            rows.append([e.component, e.domain, "authoritative", f"{0:.12f}", "0", "0"])
        for iv in e.roots:
            rows.append([e.component, e.domain, "authoritative", f"{iv.midpoint:.12f}", format_rational(iv.lo), format_rational(iv.hi)])
    _write_csv(report, out_dir, "roots.csv", ["component", "domain", "variant", "root", "lo", "hi"], rows)
    return EXIT_OK


def cmd_trace(config, out_dir: str, report: Report, params: trc.TraceParams, components, domains) -> int:
    ds = dirs.spectrum(config)
    g = float(config.gamma_scale)
    runs = []
    for comp in components:
        for d in domains:
            res = trc.trace_and_match(config, comp, d, ds, params)
            runs.append(res.to_json())
            tag = f"{comp}_{d}"
            rows = [
                [i, comp, d, f"{x:.12f}", f"{y:.12f}"] for i, b in enumerate(res.branches) for x, y in b.points
            ]
            _write_csv(report, out_dir, f"branches_{tag}.csv", ["branch_id", "component", "domain", "x", "y"], rows)
            svg = trc.render_svg(res.branches, ds.entry(comp, d).values(), d, params.r_min * g, params.r_max * g)
            _write_text(report, out_dir, f"trace_{tag}.svg", svg)
            for e in res.estimates:
                if not e.matched:
                    report.findings.append(_finding(f"{comp}/Type {d}: branch {e.branch_id} slope {e.slope:.9f} UNMATCHED"))
            for t in res.unmatched_roots:
                report.findings.append(_finding(f"{comp}/Type {d}: root {t:.12f} has no traced branch", severity="info"))
    report.data["runs"] = runs
    return EXIT_OK


def cmd_scan(report: Report, L_max: int, trials: int, seed: int, workers: int) -> int:
    res = dirs.conjecture_scan(L_max, trials, seed, workers=workers)
    report.data["scan"] = res
    n = len(res["counterexamples"]) + len(res["config_counterexamples"])
    if n == 0:
        report.findings.append(_finding("0 counterexamples", severity="info"))
    for row in res["counterexamples"]:
        report.findings.append(_finding(f"counterexample at trial {row['trial']}", row))
    for row in res["config_counterexamples"]:
        report.findings.append(_finding(f"configuration counterexample at trial {row['trial']}", row))
    return EXIT_OK


def run_verify(kernel=kern.kernel_poly, seed: int = 0) -> list[dict]:
    """The invariant suite; ``kernel`` is injectable so a broken one can be exercised."""
    checks = []

    def run(name, fn):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash counts as a failed invariant
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        checks.append({"name": name, "status": "pass" if ok else "fail", "seconds": time.perf_counter() - t0, "detail": detail})

    def oracle():
        bad = [
            f"{k}_{l}"
            for k in kern.KINDS
            for l in range(13)
            if kernel(k, l) != kern.kernel_poly_series_oracle(k, l)
        ]
        return not bad, bad or "l <= 12"

    def identity():
        bad = [l for l in range(1, 13) if not kern.kernel_identity_check(l, kernel)]
        return not bad, f"P_l = l Q_(l-1) (1+t^2) + t Q_l fails for l={bad}" if bad else "1 <= l <= 12"

    def interlace():
        bad = []
        for l in range(1, 11):
            r = kern.kernel_interlacing_check(l, kernel)
            if not (r.all_real and r.strictly_interlacing):
                bad.append(l)
        return not bad, f"fails for l={bad}" if bad else "1 <= l <= 10"

    def series():
        worst = 0.0
        for k in range(50):
            rng = np.random.default_rng([seed, k])
            cfg = random_configuration(rng, int(rng.integers(1, 5)))
            for comp in dirs.COMPONENTS:
                for d in DOMAINS:
                    dp = dirs.zeroing_form(cfg, comp, d)
                    for t in (-0.75, -0.5, -0.25, 0.25, 0.5, 0.75):
                        v = dp(t)
                        s = dirs.series_eval(cfg, comp, d, t, 80)
                        worst = max(worst, abs(s - v) / (1 + abs(v)))
        return worst <= 1e-9, f"max relative gap {worst:.3e}"

    def sigma():
        rng = np.random.default_rng([seed, 7])
        for _ in range(30):
            L = int(rng.integers(0, 7))
            c = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(L + 1)]
            if not any(c):
                continue
            sf = dirs.sigma_conversion(c, L)
            for kind in kern.KINDS:
                a = dirs.sigma_combination(sf.c, kind, L, "c").form()
                b = dirs.sigma_combination(sf.gamma, kind, L, "gamma").form()
                if not a.same_function(b):
                    return False, f"c={[format_rational(v) for v in c]}, kind {kind}"
        return True, "30 random vectors, L <= 6"

    def evenness():
        for k in range(6):
            rng = np.random.default_rng([seed, 11, k])
            cfg = random_configuration(rng, 1 + k % 3)
            for comp in ("X", "Y"):
                for aux in prod.sign_product_expansion(cfg, comp).aux_exponents():
                    if any(e % 2 for e in aux):
                        return False, f"odd chi exponent {aux} for {cfg}"
        return True, "M <= 3"

    def harmonic():
        h = trc.harmonic_demo(5, 3, 4)
        ok = all(3.5 <= r <= 4.5 for r in h["convergence_ratios"]) and h["hessian_max_relative"] <= 1e-8
        return ok, {"ratios": h["convergence_ratios"], "hessian": h["hessian_max_relative"]}

    run("kernel recurrence vs series oracle", oracle)
    run("kernel identity", identity)
    run("kernel interlacing", interlace)
    run("series vs closed form", series)
    run("sigma/gamma path equality", sigma)
    run("product chi evenness", evenness)
    run("harmonic demo", harmonic)
    return checks


def cmd_verify(report: Report, kernel=kern.kernel_poly) -> int:
    checks = run_verify(kernel)
    report.data["checks"] = checks
    failed = [c["name"] for c in checks if c["status"] == "fail"]
    for c in checks:
        if c["status"] == "fail":
            report.findings.append(_finding(f"invariant failed: {c['name']}", c["detail"], "error"))
    return EXIT_INVARIANT if failed else EXIT_OK


def cmd_product(config, out_dir: str, report: Report) -> int:
    if config.M > prod.MAX_M:
        raise FlagError("M exceeds product-method cap")
    polys = prod.product_polynomials(config)
    claim = prod.degree_claim_check(config, polys)
    report.findings.extend(claim.pop("findings"))
    report.data["degrees"] = claim
    report.data["containment"] = prod.containment_check(config, 50, polys=polys)
    for name, poly in (("P", polys.P), ("Q", polys.Q)):
        _write_csv(report, out_dir, f"product_{name}.csv", ["i", "j", "coefficient"], prod.bipoly_rows(poly))
    return EXIT_OK


def cmd_kernels(out_dir: str, report: Report, l_max: int) -> int:
    rows = [(k, l, p, format_rational(c)) for k, l, p, c in kern.kernel_table_rows(l_max)]
    _write_csv(report, out_dir, "kernels.csv", ["kind", "l", "power", "coefficient"], rows)
    report.data["l_max"] = l_max
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", default="asymdir_out", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--delta", type=float, default=0.1)
    common.add_argument("--n-max", type=int, default=80, help="series truncation depth")
    common.add_argument("--r-min", type=float, default=1000.0, help="annulus inner radius, gamma-scale multiples")
    common.add_argument("--r-max", type=float, default=10000.0, help="annulus outer radius, gamma-scale multiples")

    p = _Parser(prog="asymdir", description="Exact asymptotic directions of point-charge field zero sets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("spectrum", parents=[common])
    s.add_argument("input")
    t = sub.add_parser("trace", parents=[common])
    t.add_argument("input")
    t.add_argument("--component", choices=["X", "Y", "both"], default="both")
    t.add_argument("--domain", choices=["I", "II", "both"], default="both")
    sc = sub.add_parser("scan", parents=[common])
    sc.add_argument("--L-max", dest="L_max", type=int, default=5)
    sc.add_argument("--trials", type=int, default=1000)
    sc.add_argument("--workers", type=int, default=1)
    sub.add_parser("verify", parents=[common])
    pr = sub.add_parser("product", parents=[common])
    pr.add_argument("input")
    k = sub.add_parser("kernels", parents=[common])
    k.add_argument("--L-max", dest="L_max", type=int, default=12)
    return p


def _check_flags(args) -> None:
    if not 0 <= args.seed < U64:
        raise FlagError("seed must be a 64-bit unsigned integer")
    if not 0.0 < args.delta < 0.5:
        raise FlagError("delta must lie in (0, 1/2)")
    if args.n_max < 1:
        raise FlagError("n-max must be at least 1")
    if not (math.isfinite(args.r_min) and math.isfinite(args.r_max)) or not 0 < args.r_min < args.r_max:
        raise FlagError("invalid annulus")
    if args.command == "scan":
        if args.trials < 1:
            raise FlagError("empty scan")
        if args.L_max < 0 or args.workers < 1:
            raise FlagError("L-max must be >= 0 and workers >= 1")
    if args.command == "kernels" and not 0 <= args.L_max <= kern.DEFAULT_CAP:
        raise FlagError(f"L-max must lie in [0, {kern.DEFAULT_CAP}]")


def main(argv=None, *, kernel=kern.kernel_poly) -> int:
    args = build_parser().parse_args(argv)
    report = Report(args.command, {k: v for k, v in sorted(vars(args).items()) if k != "out"})
    try:
        _check_flags(args)
        os.makedirs(args.out, exist_ok=True)
        config = load_configuration(args.input) if hasattr(args, "input") else None
        if args.command == "spectrum":
            code = cmd_spectrum(config, args.out, report)
        elif args.command == "trace":
            params = trc.TraceParams(delta=args.delta, r_min=args.r_min, r_max=args.r_max)
            comps = ["X", "Y"] if args.component == "both" else [args.component]
            doms = list(DOMAINS) if args.domain == "both" else [args.domain]
            code = cmd_trace(config, args.out, report, params, comps, doms)
        elif args.command == "scan":
            code = cmd_scan(report, args.L_max, args.trials, args.seed, args.workers)
        elif args.command == "verify":
            code = cmd_verify(report, kernel)
        elif args.command == "product":
            code = cmd_product(config, args.out, report)
        else:
            code = cmd_kernels(args.out, report, args.L_max)
    except FlagError as exc:
        print(f"asymdir: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except ConfigurationError as exc:
        print(f"asymdir: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        print(f"asymdir: cannot read input: {exc}", file=sys.stderr)
        return EXIT_IO
    path = os.path.join(args.out, f"report_{args.command}.json")
    report.artifacts.append(path)
    text = json.dumps(report.to_json(), indent=2, sort_keys=True, default=str)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
