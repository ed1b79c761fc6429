"""Command-line harness: ``chemolab exponents | run | sweep``.

``exponents`` prints the threshold quantities and the bootstrap chain for a
parameter triple.  ``run`` integrates one configured scenario and writes
``timeseries.csv`` plus ``report.txt``.  ``sweep`` executes a (chi, k) grid
of runs, optionally across a worker pool, and writes ``sweep_summary.csv``
with one row per grid point in deterministic chi-major order regardless of
the parallelism level (override with the CHEMOLAB_THREADS variable).

All real numbers in CSV output carry 17 significant digits, so files are
round-trippable and byte-comparable across repeated and parallel runs.

Exit codes: 0 success (run: completed with all checks passing), 1 malformed
input or configuration, 2 exponents outside the applicable chi range,
3 run completed but a check failed, 4 suspected blow-up, 5 dt collapse.
"""

from __future__ import annotations

import argparse
import math
import multiprocessing
import os
import sys
from pathlib import Path

from .diagnostics import (
    MonitorConfig,
    dissipation_check,
    gronwall_check,
    min_v_floor_check,
)
from .errors import ConfigError, DomainError, InsufficientRows, NotApplicable
from .exponents import (
    ModelParams,
    bootstrap,
    center_ratio_bounds,
    chi_star,
    is_below_threshold,
    p_max,
)
from .runconfig import (
    SweepSpec,
    build_initial,
    build_mesh,
    build_params,
    build_scheme,
    load_run_config,
    load_sweep_spec,
    point_config,
    resolve_monitors,
)
from .solver import STATUS_BLOWUP, STATUS_COMPLETED, RunReport
from .solver import run as run_solver


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _label(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# exponents
# ---------------------------------------------------------------------------


def cmd_exponents(args) -> int:
    params = ModelParams(chi=args.chi, k=args.k, n=args.n)
    threshold = chi_star(params.k, params.n)
    print(f"chi_star(k={_label(params.k)}, n={params.n}) = {_fmt(threshold)}")
    print(f"p_max = {_fmt(p_max(params.chi, params.k))}")
    if params.n >= 3 and is_below_threshold(params.chi, params.k, params.n):
        bounds = center_ratio_bounds(params.chi, params.k, params.n)
        print(f"c0 = {_fmt(bounds.c0)}")
        print(f"c_sup = {_fmt(bounds.c_sup)}")
    else:
        print("c0 = n/a")
        print("c_sup = n/a")
    if not is_below_threshold(params.chi, params.k, params.n):
        print(f"chi = {_label(params.chi)} is not below the threshold: not applicable")
        return 2
    print(f"chi = {_label(params.chi)} is below the threshold: applicable")

    chain = bootstrap(params, theta=args.theta, max_steps=args.max_steps)
    print(f"bootstrap chain (theta = {_label(args.theta)}):")
    header = f"{'l':>4} {'p':>22} {'r':>22} {'q':>22} {'upper_used':>22}"
    print(header)
    for idx, step_rec in enumerate(chain.steps):
        print(
            f"{idx:>4} {step_rec.p:>22.12g} {step_rec.r:>22.12g} "
            f"{step_rec.q:>22.12g} {step_rec.upper_used:>22.12g}"
        )
    if chain.terminated:
        print(f"terminated after {len(chain.steps)} step(s); final q = {_fmt(chain.final_q)}")
    else:
        print(f"did not terminate within {args.max_steps} steps")
    if args.csv:
        lines = ["l,p,r,q,upper_used"]
        for idx, step_rec in enumerate(chain.steps):
            lines.append(
                f"{idx},{_fmt(step_rec.p)},{_fmt(step_rec.r)},"
                f"{_fmt(step_rec.q)},{_fmt(step_rec.upper_used)}"
            )
        Path(args.csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def timeseries_csv(series, monitors: MonitorConfig) -> str:
    cols = ["t", "mass", "min_v", "max_u"]
    cols += [f"u_Lq_{_label(q)}" for q in monitors.q_list]
    for p, r in monitors.pr_pairs:
        cols += [f"E_{_label(p)}_{_label(r)}", f"D_{_label(p)}_{_label(r)}"]
    cols += [f"v_L{_label(s)}" for s in monitors.v_orders]
    lines = [",".join(cols)]
    for row in series:
        vals = [row.t, row.mass, row.min_v, row.max_u]
        vals += [row.lq_norms[q] for q in monitors.q_list]
        for pair in monitors.pr_pairs:
            vals += [row.energies[pair], row.dissipations[pair]]
        vals += [row.v_norms[s] for s in monitors.v_orders]
        lines.append(",".join(_fmt(v) for v in vals))
    return "\n".join(lines) + "\n"


def evaluate_checks(report: RunReport, monitors: MonitorConfig):
    """(all_passed, worst_gronwall, gronwall, dissipation, floor) verdict strings."""
    worst_gronwall = math.nan
    gronwall_ok = True
    dissipation_state = "pass"
    for pair in monitors.pr_pairs:
        verdict = gronwall_check(report.series, pair, monitors.tolerance_rel)
        gronwall_ok = gronwall_ok and verdict.passed
        if math.isnan(worst_gronwall) or verdict.worst > worst_gronwall:
            worst_gronwall = verdict.worst
        try:
            if not dissipation_check(report.series, pair, monitors.tolerance_rel).passed:
                dissipation_state = "fail"
        except InsufficientRows:
            if dissipation_state == "pass":
                dissipation_state = "skipped"
    floor = min_v_floor_check(report.series)
    all_passed = gronwall_ok and dissipation_state != "fail" and floor.passed
    return (
        all_passed,
        worst_gronwall,
        "pass" if gronwall_ok else "fail",
        dissipation_state,
        "pass" if floor.passed else "fail",
    )


def report_text(report: RunReport, checks) -> str:
    _, worst_gronwall, gronwall_state, dissipation_state, floor_state = checks
    return (
        f"status: {report.status}\n"
        f"t_final: {_fmt(report.t_final)}\n"
        f"max_u_over_run: {_fmt(report.max_u_over_run)}\n"
        f"min_v_over_run: {_fmt(report.min_v_over_run)}\n"
        f"worst_gronwall_ratio: {_fmt(worst_gronwall)}\n"
        f"gronwall: {gronwall_state}\n"
        f"dissipation: {dissipation_state}\n"
        f"min_v_floor: {floor_state}\n"
    )


def cmd_run(args) -> int:
    cfg = load_run_config(args.config)
    params = build_params(cfg)
    mesh = build_mesh(cfg)
    monitors = resolve_monitors(cfg, params)
    init = build_initial(cfg, mesh)
    report = run_solver(init, params, mesh, build_scheme(cfg), monitors)

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "timeseries.csv").write_text(timeseries_csv(report.series, monitors), encoding="utf-8")
    checks = evaluate_checks(report, monitors)
    (outdir / "report.txt").write_text(report_text(report, checks), encoding="utf-8")

    if report.status == STATUS_COMPLETED:
        return 0 if checks[0] else 3
    return 4 if report.status == STATUS_BLOWUP else 5


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _sweep_point(task) -> str:
    """One grid point -> one CSV row; failures are recorded, never raised."""
    spec, chi, k = task
    n = spec.base.n
    threshold = chi_star(k, n)
    below = chi < threshold * (1.0 - 1e-12)
    try:
        cfg = point_config(spec, chi, k)
        params = build_params(cfg)
        mesh = build_mesh(cfg)
        monitors = resolve_monitors(cfg, params, missing_ok=True)
        init = build_initial(cfg, mesh)
        report = run_solver(init, params, mesh, build_scheme(cfg), monitors)
        worst = math.nan
        for pair in monitors.pr_pairs:
            verdict = gronwall_check(report.series, pair, monitors.tolerance_rel)
            if math.isnan(worst) or verdict.worst > worst:
                worst = verdict.worst
        status = report.status
        max_u = report.max_u_over_run
    except Exception as exc:  # per-point failures stay in-row
        status = f"error:{type(exc).__name__}"
        max_u = math.nan
        worst = math.nan
    below_text = "true" if below else "false"
    return (
        f"{_fmt(chi)},{_fmt(k)},{_fmt(threshold)},{below_text},"
        f"{status},{_fmt(max_u)},{_fmt(worst)}"
    )


def _resolve_parallelism(spec: SweepSpec) -> int:
    env = os.environ.get("CHEMOLAB_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"CHEMOLAB_THREADS must be an integer, got {env!r}") from None
        if value < 1:
            raise ConfigError(f"CHEMOLAB_THREADS must be >= 1, got {value}")
        return value
    return spec.parallelism


def cmd_sweep(args) -> int:
    spec = load_sweep_spec(args.spec)
    parallelism = _resolve_parallelism(spec)
    tasks = [(spec, chi, k) for chi, k in spec.points]
    if parallelism > 1:
        with multiprocessing.Pool(parallelism) as pool:
            rows = pool.map(_sweep_point, tasks)
    else:
        rows = [_sweep_point(t) for t in tasks]
    header = "chi,k,chi_star,below_threshold,status,max_u_over_run,worst_gronwall_ratio"
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "sweep_summary.csv").write_text("\n".join([header] + rows) + "\n", encoding="utf-8")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chemolab",
        description="Exponent calculus and finite-volume runs for the "
        "singular-sensitivity chemotaxis system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_exp = sub.add_parser("exponents", help="thresholds and the bootstrap chain")
    p_exp.add_argument("--chi", type=float, required=True, help="chemotactic sensitivity")
    p_exp.add_argument("--k", type=float, required=True, help="chemical diffusivity")
    p_exp.add_argument("--n", type=int, required=True, help="space dimension")
    p_exp.add_argument("--theta", type=float, default=0.5, help="interval selection fraction")
    p_exp.add_argument("--max-steps", type=int, default=50)
    p_exp.add_argument("--csv", help="also write the chain rows to this CSV path")

    p_run = sub.add_parser("run", help="integrate one configured scenario")
    p_run.add_argument("config", help="run configuration file")
    p_run.add_argument("--outdir", default=".", help="where to write timeseries.csv and report.txt")

    p_sweep = sub.add_parser("sweep", help="grid of runs over (chi, k)")
    p_sweep.add_argument("spec", help="sweep specification file")
    p_sweep.add_argument("--outdir", default=".", help="where to write sweep_summary.csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    handlers = {"exponents": cmd_exponents, "run": cmd_run, "sweep": cmd_sweep}
    try:
        return handlers[args.command](args)
    except (ConfigError, DomainError, NotApplicable, OSError) as exc:
        print(f"chemolab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
