"""Command-line front door: plan design, table export, simulation, service.

Every command is deterministic given its flags (simulations given their
seed). Artifacts are CSV (comma-separated, header row, LF endings) or
JSON with full round-trip float precision, so repeated runs are
byte-identical. Exit codes: 0 success, 2 validation failure, 3 internal
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .plans import (
    FixedPlan,
    InvalidParameterError,
    PlanParams,
    ThresholdKind,
    acceptance_threshold,
    plan_sweep,
    rejection_threshold,
    sample_size,
)
from .simulate import (
    FiniteLot,
    InfiniteLot,
    MissingPerRepCountsError,
    SampleExceedsLotError,
    SimConfig,
    SimReport,
    compare_plans,
    simulate_fixed_plan,
    simulate_sequential,
)
from .sprt import SprtConfig
from .stats import DegenerateVarianceError
from .tables import PlanCase, export_plan_table_csv


EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INTERNAL = 3


class CliValidationError(Exception):
    """Flag-level validation failure; names the offending flag."""

    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


@dataclass
class CommandOutcome:
    exit_code: int
    artifacts: list[Path] = field(default_factory=list)
    summary: str = ""


def _write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path


def _write_json(path: Path, doc: dict) -> Path:
    return _write_text(path, json.dumps(doc, indent=2) + "\n")


def _out_dir(args) -> Path:
    return Path(args.out)


def _reraise_as_flag(exc: InvalidParameterError, flag_by_field: dict[str, str]) -> None:
    flag = flag_by_field.get(exc.field or "", exc.field or "parameters")
    raise CliValidationError(flag, str(exc)) from exc


def cmd_design(args) -> CommandOutcome:
    flags = {
        "alpha": "--alpha",
        "p0": "--p0",
        "delta": "--delta",
        "z_half_alpha": "--z",
        "reliability": "--reliability",
    }
    try:
        params = PlanParams(
            alpha=args.alpha, p0=args.p0, delta=args.delta, z_half_alpha=args.z
        )
        n = sample_size(params)
        if args.mode == "rejection":
            plan = rejection_threshold(n, args.p0, args.alpha)
        else:
            plan = acceptance_threshold(n, args.p0, args.reliability)
    except InvalidParameterError as exc:
        _reraise_as_flag(exc, flags)
    doc = {
        "params": {
            "alpha": args.alpha,
            "p0": args.p0,
            "delta": args.delta,
            "z": args.z,
            "mode": args.mode,
            "reliability": args.reliability if args.mode == "acceptance" else None,
        },
        **plan.to_json_dict(),
    }
    artifact = _write_json(_out_dir(args) / "plan.json", doc)
    if args.json:
        print(json.dumps(doc, indent=2))
    reading = "reject at defects >=" if plan.kind is ThresholdKind.REJECTION else "accept at defects <"
    return CommandOutcome(
        EXIT_OK, [artifact], f"n={plan.n} k_star={plan.k_star} ({reading} {plan.k_star})"
    )


def cmd_sweep(args) -> CommandOutcome:
    if args.steps < 2:
        raise CliValidationError("--steps", f"must be >= 2, got {args.steps}")
    if not args.delta_min < args.delta_max:
        raise CliValidationError(
            "--delta-min/--delta-max",
            f"need delta_min < delta_max, got {args.delta_min} and {args.delta_max}",
        )
    width = (args.delta_max - args.delta_min) / (args.steps - 1)
    deltas = [args.delta_min + i * width for i in range(args.steps)]
    try:
        rows = plan_sweep(args.p0, args.alpha, deltas)
    except InvalidParameterError as exc:
        _reraise_as_flag(exc, {"p0": "--p0", "alpha": "--alpha", "deltas": "--delta-min/--delta-max"})
    lines = ["delta,n,k_star"]
    lines += [f"{repr(delta)},{n},{k}" for delta, n, k in rows]
    artifact = _write_text(_out_dir(args) / "sweep.csv", "\n".join(lines) + "\n")
    if args.json:
        print(json.dumps([{"delta": d, "n": n, "k_star": k} for d, n, k in rows], indent=2))
    return CommandOutcome(
        EXIT_OK, [artifact], f"{len(rows)} plans, n from {rows[0][1]} down to {rows[-1][1]}"
    )


def cmd_tables(args) -> CommandOutcome:
    case = PlanCase.CASE_I if args.case == "I" else PlanCase.CASE_II
    csv_text = export_plan_table_csv(case)
    name = "aql_case_i.csv" if case is PlanCase.CASE_I else "aql_case_ii.csv"
    artifact = _write_text(_out_dir(args) / name, csv_text)
    if args.json:
        header, *rows = csv_text.strip().split("\n")
        keys = header.split(",")
        print(json.dumps([dict(zip(keys, r.split(","))) for r in rows], indent=2))
    return CommandOutcome(EXIT_OK, [artifact], f"exported {case.value} table to {artifact}")


def _lot_from_args(args):
    if args.lot_size is not None:
        if args.lot_defects is not None:
            return FiniteLot(size=args.lot_size, defectives=args.lot_defects)
        if args.lot_rate is not None:
            return FiniteLot.from_rate(args.lot_size, args.lot_rate)
        raise CliValidationError(
            "--lot-defects/--lot-rate", "finite lots need a defect count or rate"
        )
    if args.lot_rate is not None:
        return InfiniteLot(rate=args.lot_rate)
    raise CliValidationError("--lot-size/--lot-rate", "no lot specified")


def cmd_simulate(args) -> CommandOutcome:
    flags = {
        "size": "--lot-size",
        "defectives": "--lot-defects",
        "rate": "--lot-rate",
        "replications": "--reps",
        "seed": "--seed",
        "workers": "--workers",
        "p0": "--p0",
        "p1": "--p1",
        "alpha": "--alpha",
        "beta": "--beta",
        "n_max": "--n-max",
        "k_star": "--k-star",
        "n": "--plan-n",
    }
    try:
        lot = _lot_from_args(args)
        sim = SimConfig(
            replications=args.reps,
            seed=args.seed,
            lot=lot,
            keep_counts=args.keep_counts,
            workers=args.workers,
        )
        if args.method == "fixed":
            if args.plan_n is None or args.plan_k is None:
                raise CliValidationError("--plan-n/--plan-k", "fixed plans need both")
            kind = (
                ThresholdKind.REJECTION
                if args.plan_kind == "rejection"
                else ThresholdKind.ACCEPTANCE
            )
            lam = args.plan_n * args.p0 if args.p0 is not None else 0.0
            plan = FixedPlan(n=args.plan_n, k_star=args.plan_k, kind=kind, lam=lam)
            report = simulate_fixed_plan(plan, sim)
            method_doc = {"method": "fixed", "plan": plan.to_json_dict()}
        else:
            if args.p0 is None:
                raise CliValidationError("--p0", "sequential tests need a null rate")
            p1 = args.p1
            if p1 is None:
                if args.delta is None:
                    raise CliValidationError(
                        "--p1/--delta", "sequential tests need --p1 or --delta (p1 = p0 + delta)"
                    )
                p1 = args.p0 + args.delta
            if args.alpha is None or args.beta is None:
                raise CliValidationError("--alpha/--beta", "sequential tests need both")
            if args.n_max is None or args.k_star is None:
                raise CliValidationError("--n-max/--k-star", "sequential tests need both")
            config = SprtConfig(
                p0=args.p0,
                p1=p1,
                alpha=args.alpha,
                beta=args.beta,
                n_max=args.n_max,
                k_star=args.k_star,
            )
            report = simulate_sequential(config, sim)
            method_doc = {"method": "sequential", "config": config.to_json_dict()}
    except (InvalidParameterError,) as exc:
        _reraise_as_flag(exc, flags)
    except SampleExceedsLotError as exc:
        raise CliValidationError("--lot-size", str(exc)) from exc
    doc = {**method_doc, **report.to_json_dict()}
    out = _out_dir(args)
    artifacts = [
        _write_json(out / "report.json", doc),
        _write_text(out / "histogram.csv", report.histogram_csv()),
    ]
    if args.json:
        print(json.dumps(doc, indent=2))
    return CommandOutcome(
        EXIT_OK,
        artifacts,
        f"accept_rate={report.accept_rate} mean_samples={report.sample_count_mean}",
    )


def cmd_compare(args) -> CommandOutcome:
    reports = []
    for path_s in (args.fixed_report, args.sequential_report):
        path = Path(path_s)
        if not path.is_file():
            raise CliValidationError("report path", f"{path} does not exist")
        try:
            reports.append(SimReport.from_json_dict(json.loads(path.read_text())))
        except (KeyError, ValueError) as exc:
            raise CliValidationError("report path", f"{path} is not a simulate artifact: {exc}") from exc
    try:
        comparison = compare_plans(reports[0], reports[1])
    except MissingPerRepCountsError as exc:
        raise CliValidationError("report path", str(exc)) from exc
    except DegenerateVarianceError as exc:
        raise CliValidationError("report data", str(exc)) from exc
    doc = {
        "fixed_report": str(args.fixed_report),
        "sequential_report": str(args.sequential_report),
        "fixed_mean": sum(reports[0].per_rep_counts) / len(reports[0].per_rep_counts),
        "sequential_mean": sum(reports[1].per_rep_counts) / len(reports[1].per_rep_counts),
        **comparison.to_json_dict(),
    }
    artifact = _write_json(_out_dir(args) / "comparison.json", doc)
    if args.json:
        print(json.dumps(doc, indent=2))
    return CommandOutcome(
        EXIT_OK,
        [artifact],
        f"mean_difference={comparison.mean_difference}"
        f" t={comparison.ttest.t_statistic} p={comparison.ttest.p_value}",
    )


def cmd_serve(args) -> CommandOutcome:
    import uvicorn

    from .service import create_app

    static_dir = Path(args.static_dir) if args.static_dir else None
    if static_dir is None and Path("frontend/dist").is_dir():
        static_dir = Path("frontend/dist")
    app = create_app(Path(args.data_dir), static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return CommandOutcome(EXIT_OK, [], "server stopped")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="print machine-readable output")
    parser.add_argument("--out", default=".", help="directory for artifacts")
    parser.add_argument("--seed", type=int, default=0, help="master seed (unsigned 64-bit)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lotsampler",
        description="Design, simulate, and serve acceptance-sampling inspection plans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="fixed-sample plan from alpha/p0/delta/z")
    _add_common(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--mode", choices=["rejection", "acceptance"], default="rejection")
    p.add_argument("--reliability", type=float, default=0.90)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("sweep", help="plan family over a tolerance range")
    _add_common(p)
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta-min", type=float, required=True)
    p.add_argument("--delta-max", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tables", help="export an embedded batch plan table as CSV")
    _add_common(p)
    p.add_argument("--case", choices=["I", "II"], required=True)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("simulate", help="Monte Carlo run of a fixed or sequential plan")
    _add_common(p)
    p.add_argument("--method", choices=["fixed", "sequential"], required=True)
    p.add_argument("--plan-n", type=int)
    p.add_argument("--plan-k", type=int)
    p.add_argument("--plan-kind", choices=["rejection", "acceptance"], default="rejection")
    p.add_argument("--p0", type=float)
    p.add_argument("--p1", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--n-max", type=int)
    p.add_argument("--k-star", type=int)
    p.add_argument("--lot-size", type=int)
    p.add_argument("--lot-defects", type=int)
    p.add_argument("--lot-rate", type=float)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument(
        "--no-per-rep",
        dest="keep_counts",
        action="store_false",
        help="drop per-replication counts from the report",
    )
    p.set_defaults(func=cmd_simulate, keep_counts=True)

    p = sub.add_parser("compare", help="Welch t-test between two simulate artifacts")
    _add_common(p)
    p.add_argument("fixed_report")
    p.add_argument("sequential_report")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("serve", help="run the live inspection session service")
    _add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8710)
    p.add_argument("--data-dir", default="./sessions")
    p.add_argument("--static-dir", default=None, help="console bundle to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def run(argv: list[str] | None = None) -> CommandOutcome:
    """Parse argv and execute; returns the outcome instead of exiting."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_VALIDATION, [], str(exc))
    except Exception as exc:  # simulation/IO internals
        print(f"internal error: {exc}", file=sys.stderr)
        return CommandOutcome(EXIT_INTERNAL, [], str(exc))


def main(argv: list[str] | None = None) -> int:
    outcome = run(argv)
    if outcome.summary and outcome.exit_code == EXIT_OK:
        print(outcome.summary)
    return outcome.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
