"""Command-line front end.

Subcommands: ``estimate``, ``simulate``, ``experiment``, ``ratestudy`` and
``kernel-table``. Data goes to files, diagnostics to stderr. Every output
embeds the resolved configuration; the worker count is left out because it
never changes results.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .exceptions import FrontierError
from .experiments import (
    ExperimentConfig,
    rate_study,
    resolve_parameters,
    run_replications,
)
from .frontier import ScheduleParams, estimate_grid
from .io import (
    curve_to_dict,
    read_sample_csv,
    write_curve_csv,
    write_json,
    write_sample_csv,
)
from .kernels import KernelKind, KernelSpec, build_moment_table
from .simgen import SimulationModel, generate_sample, make_rng

log = logging.getLogger("hpfrontier")

SCHEMA_VERSION = 1


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _sizes(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hpfrontier",
        description="Frontier estimation by local polynomials on power-transformed data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output_required=True):
        p.add_argument("--output", required=output_required, type=Path)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    def estimator(p):
        p.add_argument("--k", type=int, default=1, help="local polynomial degree")
        p.add_argument("--h", type=float, help="bandwidth (overrides the rule)")
        p.add_argument("--p", type=float, help="power (overrides the rule)")
        p.add_argument("--rule", choices=("practical", "schedule"), default="practical")
        p.add_argument("--tau", type=float, default=ScheduleParams.tau)
        p.add_argument("--c-h", type=float, default=ScheduleParams.c_h)
        p.add_argument("--c-p", type=float, default=ScheduleParams.c_p)
        p.add_argument("--kernel", choices=[k.value for k in KernelKind],
                       default=KernelKind.COSINE_SQUARED.value)

    p = sub.add_parser("estimate", help="estimate the frontier of a sample CSV")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--grid-size", type=_positive_int, default=201)
    common(p)
    estimator(p)

    p = sub.add_parser("simulate", help="draw a sample from the test model")
    p.add_argument("--n", type=_positive_int, default=500)
    p.add_argument("--gamma", type=float, default=1.0)
    common(p)

    p = sub.add_parser("experiment", help="replicated L1 study with best/worst curves")
    p.add_argument("--n", type=_positive_int, default=500)
    p.add_argument("--m", type=_positive_int, default=100)
    p.add_argument("--full", action="store_true", help="use m=500 replications")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--grid-size", type=_positive_int, default=201)
    p.add_argument("--threads", type=_positive_int, default=1)
    common(p)
    estimator(p)

    p = sub.add_parser("ratestudy", help="pointwise RMSE along a ladder of sizes")
    p.add_argument("--sizes", type=_sizes, default=[1000, 4000, 16000])
    p.add_argument("--reps", type=_positive_int, default=200)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--x0", type=float, default=0.2)
    p.add_argument("--threads", type=_positive_int, default=1)
    common(p)
    estimator(p)

    p = sub.add_parser("kernel-table", help="kernel moments, S, S*, u and C")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--kernel", choices=[k.value for k in KernelKind],
                   default=KernelKind.COSINE_SQUARED.value)
    p.add_argument("--output", type=Path)
    return parser


def _schedule(args):
    return ScheduleParams(args.tau, args.c_h, args.c_p)


def cmd_estimate(args):
    sample = read_sample_csv(args.input)
    rule = args.rule
    if args.h is not None and args.p is not None:
        rule = "fixed"
    cfg = resolve_parameters(
        sample, rule, args.k, KernelSpec(args.kernel), args.h, args.p, _schedule(args)
    )
    grid = np.linspace(sample.x.min(), sample.x.max(), args.grid_size)
    curve = estimate_grid(sample, grid, cfg)
    counts = curve.flag_counts()
    log.info("h=%r p=%r k=%d kernel=%s", cfg.bandwidth, cfg.power, cfg.degree, cfg.kernel.name)
    log.info("flags: %s", ", ".join(f"{k}={v}" for k, v in counts.items()))
    if counts["empty_window"]:
        log.warning("%d grid points have an empty window", counts["empty_window"])
    config = {
        "command": "estimate",
        "input": str(args.input),
        "rule": args.rule,
        "grid_size": args.grid_size,
        "schedule": _schedule(args).to_dict(),
        "estimator": cfg.to_dict(),
    }
    if args.format == "json":
        write_json(
            {"schema_version": SCHEMA_VERSION, "config": config, "curve": curve_to_dict(curve)},
            args.output,
        )
    else:
        write_curve_csv(curve, args.output, config)
    return 0


def cmd_simulate(args):
    model = SimulationModel(gamma=args.gamma)
    sample = generate_sample(model, args.n, make_rng(args.seed))
    config = {"command": "simulate", "n": args.n, "seed": args.seed, "model": model.to_dict()}
    if args.format == "json":
        write_json(
            {"schema_version": SCHEMA_VERSION, "config": config,
             "x": sample.x.tolist(), "y": sample.y.tolist()},
            args.output,
        )
    else:
        write_sample_csv(sample, args.output, config)
    log.info("wrote %d observations to %s", args.n, args.output)
    return 0


def _experiment_config(args):
    rule = args.rule
    if args.h is not None and args.p is not None:
        rule = "fixed"
    return ExperimentConfig(
        model=SimulationModel(gamma=args.gamma),
        n=args.n,
        m=500 if args.full else args.m,
        grid_size=args.grid_size,
        degree=args.k,
        kernel=KernelSpec(args.kernel),
        rule=rule,
        h=args.h,
        p=args.p,
        schedule=_schedule(args),
        base_seed=args.seed,
    )


def cmd_experiment(args):
    cfg = _experiment_config(args)
    report = run_replications(cfg, workers=args.threads)
    out = args.output
    out.mkdir(parents=True, exist_ok=True)
    doc = report.to_dict()
    write_json(doc, out / "report.json")
    meta = {"command": "experiment", **cfg.to_dict()}
    if report.best_index is None:
        log.warning("every replication had an empty curve; no best/worst files written")
        return 0
    write_curve_csv(report.best_curve, out / "best_curve.csv",
                    {**meta, "replication": report.best_index})
    write_curve_csv(report.worst_curve, out / "worst_curve.csv",
                    {**meta, "replication": report.worst_index})
    with open(out / "frontier.csv", "w") as fh:
        fh.write("grid,value\n")
        for g in cfg.grid:
            fh.write(f"{g:.17g},{cfg.model.frontier(g):.17g}\n")
    errs = report.l1_errors
    log.info(
        "m=%d median L1=%.6g best=%d (%.6g) worst=%d (%.6g)",
        cfg.m, float(np.nanmedian(errs)), report.best_index, errs[report.best_index],
        report.worst_index, errs[report.worst_index],
    )
    return 0


def cmd_ratestudy(args):
    report = rate_study(
        SimulationModel(gamma=args.gamma),
        args.sizes,
        k=args.k,
        params=_schedule(args),
        reps=args.reps,
        base_seed=args.seed,
        x0=args.x0,
        kernel=KernelSpec(args.kernel),
        workers=args.threads,
    )
    write_json(report.to_dict(), args.output)
    log.info("fitted slope %.4f", report.fitted_slope)
    return 0


def cmd_kernel_table(args):
    table = build_moment_table(KernelSpec(args.kernel), args.k)
    doc = {"schema_version": SCHEMA_VERSION, **table.to_dict()}
    if args.output is None:
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        write_json(doc, args.output)
    return 0


COMMANDS = {
    "estimate": cmd_estimate,
    "simulate": cmd_simulate,
    "experiment": cmd_experiment,
    "ratestudy": cmd_ratestudy,
    "kernel-table": cmd_kernel_table,
}


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s",
                        stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OSError as exc:
        name = exc.filename if exc.filename is not None else ""
        log.error("I/O error: %s %s", exc.strerror or exc, name)
        return 1
    except (FrontierError, ValueError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
