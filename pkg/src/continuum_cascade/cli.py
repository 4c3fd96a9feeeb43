"""Command-line surface tying the modules together.

Seven subcommands: recurse, front, simulate, graph, brw, compare,
alpha-scan.  Parameters may come from a flat key=value config file
(--config); explicit flags win over the file, the file wins over builtin
defaults.  Every run writes its CSV artifacts plus a manifest.json with
checksums into --out (default: $CONTINUUM_CASCADE_OUTDIR or the current
directory).

Exit codes: 0 success, 2 configuration error, 3 numeric/fit error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from typing import Callable

from . import fronts, graphs, martingale, recursion, simulate
from .errors import CascadeError, ConfigurationError
from .output import RunWriter

ENV_OUTDIR = "CONTINUUM_CASCADE_OUTDIR"


def parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def parse_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


@dataclass(frozen=True)
class Option:
    name: str
    cast: Callable
    default: object
    help: str


COMMON = [
    Option("out", str, None, "output directory (default: $%s or '.')" % ENV_OUTDIR),
    Option("config", str, None, "key=value config file; explicit flags win"),
]

COMMANDS: dict[str, list[Option]] = {
    "recurse": [
        Option("delta", float, 0.01, "grid spacing"),
        Option("xmax", float, None, "domain upper bound (default: front clearance)"),
        Option("nmax", int, 100, "number of generations"),
        Option("snapshots", parse_ints, [], "comma-separated generations to emit"),
        Option("mode", str, "trapezoid", "quadrature: trapezoid or riemann"),
    ],
    "front": [
        Option("delta", float, 0.01, "grid spacing"),
        Option("xmax", float, None, "domain upper bound (default: front clearance)"),
        Option("nmax", int, 400, "number of generations"),
        Option("level", float, 0.5, "front crossing level"),
        Option("mode", str, "trapezoid", "quadrature: trapezoid or riemann"),
        Option("fit-lo", int, None, "fit window lower generation"),
        Option("fit-hi", int, None, "fit window upper generation"),
        Option("fit", str, "fixed", "log fit flavor: fixed (extrapolated v) or joint"),
    ],
    "simulate": [
        Option("x", float, 1.0, "interval length / barrier"),
        Option("trials", int, 100000, "Monte Carlo trials"),
        Option("seed", int, 0, "base RNG seed"),
        Option("ncap", int, 40, "largest height tracked in the CDF table"),
        Option("pcap", int, simulate.DEFAULT_PARTICLE_CAP, "particle cap per trial"),
        Option("workers", int, 1, "worker processes (result is worker-independent)"),
    ],
    "graph": [
        Option("n-vertices", int, 2000, "number of vertices"),
        Option("c", float, 0.001, "edge probability"),
        Option("trials", int, 10000, "Monte Carlo trials"),
        Option("seed", int, 0, "base RNG seed"),
        Option("ncap", int, 40, "largest path length tracked"),
    ],
    "brw": [
        Option("trials", int, 0, "martingale trajectories to simulate"),
        Option("n", int, 40, "generations per trajectory"),
        Option("vmax", float, martingale.DEFAULT_V_MAX, "displacement support cutoff"),
        Option("prune-window", float, None, "moving kill barrier offset (see docs)"),
        Option("pcap", int, 1000000, "particle cap per trajectory"),
        Option("seed", int, 0, "base RNG seed"),
    ],
    "compare": [
        Option("n-vertices", int, 2000, "number of vertices"),
        Option("x", float, 2.0, "interval length; edge probability is x/n"),
        Option("trials", int, 20000, "trials per side"),
        Option("seed", int, 0, "base RNG seed"),
    ],
    "alpha-scan": [
        Option("deltas", parse_floats, [0.01], "comma-separated grid spacings"),
        Option("nmax", int, 100, "generations per recursion run"),
        Option("emit-probe", bool, False, "also write the probe series per delta"),
    ],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascade",
        description="continuum cascade model: recursion, fronts, Monte Carlo",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, options in COMMANDS.items():
        p = sub.add_parser(command)
        for opt in options + COMMON:
            flag = "--" + opt.name
            if opt.cast is bool:
                p.add_argument(flag, action="store_const", const=True, default=None,
                               help=opt.help)
            else:
                p.add_argument(flag, type=opt.cast, default=None, help=opt.help)
    return parser


def resolve_params(command: str, args: argparse.Namespace) -> dict:
    """Merge builtin defaults, config file values, and explicit flags."""
    options = {opt.name: opt for opt in COMMANDS[command] + COMMON}
    params = {name: opt.default for name, opt in options.items()}

    config_path = getattr(args, "config")
    if config_path is not None:
        with open(config_path) as fh:
            lines = fh.readlines()
        for lineno, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigurationError(f"{config_path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip().replace("_", "-")
            if key not in options or key == "config":
                raise ConfigurationError(f"{config_path}:{lineno}: unknown key '{key}'")
            cast = options[key].cast
            try:
                params[key] = (value.strip().lower() in ("1", "true", "yes")
                               if cast is bool else cast(value.strip()))
            except ValueError as exc:
                raise ConfigurationError(f"{config_path}:{lineno}: {exc}") from exc

    for name in options:
        if name == "config":
            continue
        cli_value = getattr(args, name.replace("-", "_"))
        if cli_value is not None:
            params[name] = cli_value

    if params["out"] is None:
        params["out"] = os.environ.get(ENV_OUTDIR) or "."
    return params


def _quadrature(mode: str) -> recursion.Quadrature:
    try:
        return recursion.Quadrature(mode)
    except ValueError:
        raise ConfigurationError(f"unknown quadrature mode '{mode}'") from None


def _xmax(params: dict) -> float:
    if params["xmax"] is not None:
        return params["xmax"]
    return recursion.front_clearance_xmax(params["nmax"])


def cmd_recurse(params: dict, writer: RunWriter) -> None:
    config = recursion.RecursionConfig(
        delta=params["delta"], x_max=_xmax(params), n_max=params["nmax"],
        quadrature=_quadrature(params["mode"]),
    )
    snaps = params["snapshots"] or [params["nmax"]]
    result = recursion.run_recursion(config, snapshot_generations=snaps)
    for snap in result.snapshots:
        writer.write_csv(
            f"pn_{snap.generation}.csv", "x,p",
            zip(snap.grid_x().tolist(), snap.values.tolist()),
        )


def cmd_front(params: dict, writer: RunWriter) -> None:
    config = recursion.RecursionConfig(
        delta=params["delta"], x_max=_xmax(params), n_max=params["nmax"],
        quadrature=_quadrature(params["mode"]),
    )
    result = recursion.run_recursion(config, front_levels=(params["level"],))
    trace = result.front_traces[0]
    writer.write_csv(
        "front_trace.csv", "n,x_front",
        zip(trace.generations.tolist(), trace.positions.tolist()),
    )
    lo, hi = params["fit-lo"], params["fit-hi"]
    if (lo is None) != (hi is None):
        raise ConfigurationError("--fit-lo and --fit-hi must be given together")
    if lo is not None:
        if params["fit"] == "joint":
            fit = fronts.log_correction_fit(trace, (lo, hi))
        elif params["fit"] == "fixed":
            v = fronts.richardson_velocity(trace, (lo, hi))
            fit = fronts.log_correction_fit(trace, (lo, hi), v_fixed=v)
        else:
            raise ConfigurationError(f"unknown fit flavor '{params['fit']}'")
        writer.write_csv(
            "front_fit.csv", "v,b,a,residual_rms,n_lo,n_hi",
            [(fit.v, fit.b, fit.a, fit.residual_rms, fit.fit_window[0], fit.fit_window[1])],
        )


def _write_cdf(writer: RunWriter, name: str, cdf: simulate.EmpiricalCdf) -> None:
    rows = zip(
        range(len(cdf.counts)),
        cdf.counts.tolist(),
        cdf.p_hat.tolist(),
        cdf.stderr.tolist(),
    )
    writer.write_csv(name, "n,count,p_hat,stderr", rows)


def cmd_simulate(params: dict, writer: RunWriter) -> None:
    config = simulate.SimConfig(
        x=params["x"], trials=params["trials"], n_cap=params["ncap"],
        particle_cap=params["pcap"], seed=params["seed"],
    )
    cdf = simulate.empirical_cdf(config, workers=params["workers"])
    cdf.check_accounting()
    _write_cdf(writer, "height_cdf.csv", cdf)


def cmd_graph(params: dict, writer: RunWriter) -> None:
    n, c = params["n-vertices"], params["c"]
    trials, n_cap = params["trials"], params["ncap"]
    counts = [0] * (n_cap + 1)
    for i in range(trials):
        rng = simulate.trial_rng(params["seed"], simulate.GRAPH_STREAM, i)
        length = graphs.sample_cascade_graph(n, c, rng).longest_path_from_1
        if length <= n_cap:
            counts[length] += 1
    cum = 0
    rows = []
    for k, cnt in enumerate(counts):
        cum += cnt
        p = cum / trials
        rows.append((k, cum, p, math.sqrt(p * (1.0 - p) / trials)))
    writer.write_csv("ln_cdf.csv", "n,count,p_hat,stderr", rows)


def cmd_brw(params: dict, writer: RunWriter) -> None:
    report = martingale.verify_boundary_conditions()
    writer.write_csv(
        "moments.csv", "m1_residual,m2_residual,m4_value",
        [(report.m1_residual, report.m2_residual, report.m4_value)],
    )
    if params["trials"] > 0:
        rows = []
        for i in range(params["trials"]):
            rng = simulate.trial_rng(params["seed"], 2, i)
            traj = martingale.simulate_Dn(
                params["n"], rng, v_max=params["vmax"],
                particle_cap=params["pcap"], prune_window=params["prune-window"],
            )
            for gen in range(len(traj.values)):
                rows.append((i, gen, float(traj.values[gen]),
                             int(traj.generation_sizes[gen]), int(traj.truncated)))
        writer.write_csv("trajectories.csv", "trial,generation,D,alive_count,truncated", rows)


def cmd_compare(params: dict, writer: RunWriter) -> None:
    report = graphs.compare_discrete_continuum(
        params["n-vertices"], params["x"], params["trials"], seed=params["seed"],
    )
    rows = [
        (k, report.cdf_discrete[k], report.cdf_continuum[k])
        for k in range(len(report.cdf_discrete))
    ]
    critical = graphs.ks_critical_value(report.trials, report.trials, alpha=0.01)
    rows.append(("KS", report.ks_statistic, critical))
    writer.write_csv("compare.csv", "n,p_discrete,p_continuum", rows)


def cmd_alpha_scan(params: dict, writer: RunWriter) -> None:
    results = fronts.alpha_scan(params["deltas"], n_max=params["nmax"])
    writer.write_csv(
        "alpha_scan.csv", "delta,alpha_star",
        [(r.delta, r.alpha_star) for r in results],
    )
    if params["emit-probe"]:
        for r in results:
            writer.write_csv(
                f"probe_{r.delta:g}.csv", "n,value",
                zip(r.probe_generations.tolist(), r.probe_values.tolist()),
            )


HANDLERS = {
    "recurse": cmd_recurse,
    "front": cmd_front,
    "simulate": cmd_simulate,
    "graph": cmd_graph,
    "brw": cmd_brw,
    "compare": cmd_compare,
    "alpha-scan": cmd_alpha_scan,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        params = resolve_params(args.command, args)
        writer = RunWriter(params["out"])
        HANDLERS[args.command](params, writer)
        # workers is an execution detail: results are worker-independent
        manifest_params = {
            k: v for k, v in params.items() if k not in ("out", "config", "workers")
        }
        writer.write_manifest(args.command, manifest_params, params.get("seed"))
    except CascadeError as exc:
        print(f"cascade: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"cascade: i/o error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
