# Copyright (c) 2026 mcspeedup developers, MIT License
"""
Command-line interface.

::

    mcspeedup {speedup,optimal,simulate,advise} [--preset NAME]
              [--config PATH] [--out DIR] [--plot] [--format FMT] [-v|-q]

``--preset`` and ``--config`` are merged in this order over the defaults
(see :mod:`mcspeedup.configuring`). Datasets are written below ``--out``;
``advise`` also prints its advice to stdout and ``simulate`` a summary of
the measured intensities. Logs go to stderr.

Exit codes: 0 on success, 2 on an invalid configuration, 3 when a
solver or a simulation fails.
"""

import argparse
import logging
import sys
from dataclasses import asdict
from logging import getLogger

from . import __version__
from .configuring import PRESETS, ConfigError, load_config
from .modeling import ChipBudget, ModelDomainError, SimulationError, SolverError, SpeedupCurve
from .optimizing import advise_schedule, sweep_max_speedup_vs_sync, sweep_optimal_r_vs_f
from .saving import dumps, out_dir, save_curves, save_fig, save_json, save_table
from .simulating import speedup_curve_sim, trace_table

__all__ = [
    "speedup_curves",
    "cmd_speedup",
    "cmd_optimal",
    "cmd_simulate",
    "cmd_advise",
    "main",
]

logger = getLogger(__package__)

EXIT_CONFIG = 2
"""int: Exit code of an invalid configuration."""
EXIT_FAILURE = 3
"""int: Exit code of a failed solver or simulation."""


def speedup_curves(config):
    """
    Speedup versus core size of every configured model and fraction.

    Returns
    -------
    list[SpeedupCurve]
        ``<model>__f=<f>`` series, grouped by ``f``.
    """
    rs = config.rs
    nc = ChipBudget(config.n, rs).cores(config.topology)
    curves = []
    for f in config.fs:
        for model in config.models:
            handle = config.suite.handle(model, config.n, float(f), config.topology)
            curves.append(SpeedupCurve(f"{model}__f={f:g}", rs, rs, nc, handle(rs)))
    return curves


def cmd_speedup(config, plot=None):
    """Writes ``speedup_<topology>.csv``; returns the written paths."""
    curves = speedup_curves(config)
    for curve in curves:
        r, value = curve.peak()
        logger.info(f"{curve.label}: peak speedup {value:.6g} at r={r:.6g}")
    name = f"speedup_{config.topology}"
    paths = [save_curves(curves, name)]
    if plot:
        from .plotting import plot_panels

        paths.append(save_fig(plot_panels(curves, name), format=plot))
    return paths


def cmd_optimal(config, plot=None):
    """
    Writes the optimization sweep datasets; returns the written paths.

    ``optimal_q_<topology>.csv`` holds the maximum speedup versus the
    synchronization exponent, ``optimal_r_<topology>.csv`` and
    ``optimal_speedup_<topology>.csv`` the optimal core size and its
    speedup versus ``f``.
    """
    opt = config.optimal
    common = dict(
        topology=config.topology,
        law=config.law,
        grid_size=opt.grid_size,
        rtol=opt.rtol,
        workers=opt.workers,
    )
    if opt.sweep == "sync":
        curves = sweep_max_speedup_vs_sync(config.n, opt.fs, opt.qs, opt.sync_coeff, **common)
        datasets = {f"optimal_q_{config.topology}": (curves, "maximum speedup", "panel")}
    else:
        curves = sweep_optimal_r_vs_f(config.n, opt.fs, opt.presets, **common)
        speedups = [
            SpeedupCurve(c.label, c.x, c.r, c.nc, c.meta["speedup_max"], axis=c.axis)
            for c in curves
        ]
        datasets = {
            f"optimal_r_{config.topology}": (curves, "optimal core size $r$", None),
            f"optimal_speedup_{config.topology}": (speedups, "maximum speedup", None),
        }
    paths = []
    for name, (series, ylabel, by) in datasets.items():
        paths.append(save_curves(series, name))
        if plot:
            from .plotting import plot_panels

            paths.append(save_fig(plot_panels(series, name, ylabel, by), format=plot))
    return paths


def cmd_simulate(config, plot=None, stdout=None):
    """
    Simulates every configured workload over the divisors of ``n``.

    Writes ``sim_<workload>.csv`` (measured series and the model
    overlay), ``sim_<workload>.json`` (the reports) and, when enabled,
    one trace per run. Prints a summary line per workload.
    """
    sim = config.simulate
    stdout = stdout or sys.stdout
    paths = []
    for workload in sim.workloads:
        sweep = speedup_curve_sim(
            workload,
            sim.N,
            n=sim.n,
            perf_exponent=config.law.exponent,
            transfer_cost=sim.transfer_cost,
            hop_cost=sim.hop_cost,
            seed=sim.seed,
        )
        name = f"sim_{workload}"
        paths.append(save_curves(list(sweep.curves), name))
        record = {
            "workload": workload,
            "N": sim.N,
            "n": sim.n,
            "runs": [
                {
                    "core_size": run.config.core_size,
                    "cores": run.config.cores,
                    "report": run.report.to_dict(),
                }
                for run in sweep.runs
            ],
        }
        paths.append(save_json(record, name))
        if sim.trace:
            for run in sweep.runs:
                header, rows = trace_table(run)
                paths.append(save_table(header, rows, f"trace_{workload}_r{run.config.core_size}"))
        if plot:
            from .plotting import plot_sweep

            paths.append(save_fig(plot_sweep(sweep), format=plot))

        r_peak, s_peak = sweep.speedup.peak()
        f2 = sweep.runs[0].report.f2_measured
        print(
            f"{workload}: f2_measured={f2:.6g} peak speedup {s_peak:.6g} at r={r_peak:g}",
            file=stdout,
        )
    return paths


def cmd_advise(config, plot=None, stdout=None):
    """Writes ``advice.json``, one advice per ``f``, and prints it."""
    advice = [
        dict(
            f=float(f),
            **asdict(
                advise_schedule(
                    config.n,
                    config.suite.workload(float(f)),
                    config.topology,
                    config.law,
                    config.optimal.grid_size,
                    config.optimal.rtol,
                )
            ),
        )
        for f in config.fs
    ]
    path = save_json(advice, "advice")
    print(dumps(advice), file=stdout or sys.stdout)
    return [path]


COMMANDS = {
    "speedup": cmd_speedup,
    "optimal": cmd_optimal,
    "simulate": cmd_simulate,
    "advise": cmd_advise,
}
"""dict: Command functions by name."""


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mcspeedup",
        description="Multicore speedup models, sweeps and simulations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS, help="what to compute")
    parser.add_argument("--config", help="JSON experiment configuration")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="built-in experiment")
    parser.add_argument("--out", default=".", help="output directory (default: CWD)")
    parser.add_argument("--plot", action="store_true", help="also render figures")
    parser.add_argument("--format", default="png", help="figure format (default: png)")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug output")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    return parser


def main(argv=None):
    """
    Runs the command line.

    Returns
    -------
    int
        The exit code.
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s: %(message)s")

    spec = [s for s in (args.preset, args.config) if s is not None]
    try:
        config = load_config(spec)
        with out_dir(args.out):
            COMMANDS[args.command](config, plot=args.format if args.plot else None)
    except (ConfigError, ModelDomainError) as e:
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, SimulationError) as e:
        print(f"{parser.prog}: failed: {e}", file=sys.stderr)
        return EXIT_FAILURE
    return 0
