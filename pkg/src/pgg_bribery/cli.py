"""Command-line interface.

Every subcommand reads a flat key-value configuration (``--config`` file
and/or repeated ``--set key=value`` overrides) and emits deterministic
CSV files into ``--out``.  Exit codes: 0 success, 1 configuration or
validation failure, 2 verification failure, 3 I/O failure.

The optional environment variable ``PGG_BRIBERY_WORKERS`` sets the
worker-pool size for Monte Carlo subcommands; leaving it unset selects
automatically and no setting changes any emitted value.
"""

from __future__ import annotations

import argparse
import os
import sys

from .analysis import (
    KnifeEdgeError,
    RegimeKind,
    avg_payoff,
    classify_regime,
    gradient_of_selection,
    q_function,
    thresholds,
)
from .config import ConfigError, RunConfig, config_from_pairs, parse_pairs
from .dynamics import basin_of_cooperation, integrate
from .games import ParameterError, payoff_c_bg, payoff_c_ipgg, payoff_d_bg, payoff_d_ipgg
from .games import BriberyParams, GroupComposition
from .montecarlo import RngSeed, estimate_avg_payoff
from .output import fmt_float, fmt_quantity, render_csv_plot, write_csv
from .sweeps import SWEEP_DEFAULTS, regime_grid, sweep_root
from .verify import run_battery

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY = 2
EXIT_IO = 3

WORKERS_ENV = "PGG_BRIBERY_WORKERS"

SUBCOMMANDS = (
    "gradient",
    "payoffs",
    "thresholds",
    "roots",
    "basins",
    "sweep",
    "grid",
    "integrate",
    "simulate",
    "verify",
    "plot",
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgg-bribery",
        description="Replicator dynamics of institutional punishment and bribery games",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="path to a flat key=value configuration file")
        sp.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override or supply a configuration key (repeatable)",
        )
        sp.add_argument("--out", default=".", help="output directory for emitted files")

    sp = sub.add_parser("gradient", help="emit x, Q(x), G(x) over a uniform grid")
    common(sp)
    sp.add_argument("--points", type=int, default=1001)

    sp = sub.add_parser("payoffs", help="emit per-composition payoffs of both strategies")
    common(sp)

    for name, text in (
        ("thresholds", "print f_min, f_max and the regime"),
        ("roots", "print the interior root or why none exists"),
        ("basins", "print the basin of full cooperation"),
    ):
        sp = sub.add_parser(name, help=text)
        common(sp)

    sp = sub.add_parser("sweep", help="classify and locate x* along a parameter sweep")
    common(sp)
    sp.add_argument("--param", choices=("f", "r_p"), required=True)
    sp.add_argument("--lo", type=float)
    sp.add_argument("--hi", type=float)
    sp.add_argument("--steps", type=int, default=200)

    sp = sub.add_parser("grid", help="basin of cooperation over an (f, r_p) grid")
    common(sp)
    sp.add_argument("--f-lo", type=float, default=SWEEP_DEFAULTS["f"][0])
    sp.add_argument("--f-hi", type=float, default=SWEEP_DEFAULTS["f"][1])
    sp.add_argument("--rp-lo", type=float, default=SWEEP_DEFAULTS["r_p"][0])
    sp.add_argument("--rp-hi", type=float, default=SWEEP_DEFAULTS["r_p"][1])
    sp.add_argument("--f-steps", type=int, default=41)
    sp.add_argument("--rp-steps", type=int, default=41)

    sp = sub.add_parser("integrate", help="integrate the replicator equation from x0")
    common(sp)
    sp.add_argument("--x0", type=float, required=True)

    sp = sub.add_parser("simulate", help="Monte Carlo estimates of the average payoffs")
    common(sp)
    sp.add_argument("--x", type=float, default=0.5, help="cooperator fraction")

    sp = sub.add_parser("verify", help="run the oracle-agreement battery")
    common(sp)

    sp = sub.add_parser("plot", help="render an emitted CSV as a standalone SVG")
    sp.add_argument("csv_path")
    sp.add_argument("--out-svg", help="output SVG path (default: CSV path with .svg)")
    return parser


def _load_config(args) -> RunConfig:
    pairs = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as err:
            raise _IOFailure(f"cannot read config {args.config}: {err}") from err
        pairs = parse_pairs(text)
    for override in args.overrides:
        if "=" not in override:
            raise ConfigError(f"--set expects KEY=VALUE, got {override!r}")
        key, value = override.split("=", 1)
        pairs[key.strip().lower()] = (value.strip(), None)
    config = config_from_pairs(pairs)
    for warning in config.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return config


class _IOFailure(Exception):
    pass


def _workers() -> int | None:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return None
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV} must be >= 1, got {workers}")
    return workers


def _meta(config: RunConfig, command: str, extras: list[tuple[str, str]] = ()) -> list[str]:
    lines = [f"pgg-bribery {command}"]
    lines.append(" ".join(f"{key}={value}" for key, value in config.metadata_items()))
    if extras:
        lines.append(" ".join(f"{key}={value}" for key, value in extras))
    return lines


def _out_path(args, filename: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, filename)


def _regime_token(model) -> str:
    try:
        return classify_regime(model).token
    except KnifeEdgeError:
        return "knife_edge"


def _cmd_gradient(config: RunConfig, args) -> int:
    if args.points < 2:
        raise ConfigError(f"--points must be >= 2, got {args.points}")
    model = config.build_model()
    rows = []
    for i in range(args.points):
        x = i / (args.points - 1)
        rows.append((x, q_function(model, x), gradient_of_selection(model, x)))
    path = _out_path(args, "gradient.csv")
    write_csv(path, ["x", "q", "g"], rows, _meta(config, "gradient", [("points", str(args.points))]))
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_payoffs(config: RunConfig, args) -> int:
    model = config.build_model()
    rows = []
    for n_c in range(config.n):
        comp = GroupComposition(n_c, config.n - 1 - n_c)
        if isinstance(model, BriberyParams):
            pi_c, pi_d = payoff_c_bg(model, comp), payoff_d_bg(model, comp)
        else:
            pi_c, pi_d = payoff_c_ipgg(model, comp), payoff_d_ipgg(model, comp)
        rows.append((n_c, comp.n_d, pi_c, pi_d))
    path = _out_path(args, "payoffs.csv")
    write_csv(path, ["n_c", "n_d", "pi_c", "pi_d"], rows, _meta(config, "payoffs"))
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_thresholds(config: RunConfig, args) -> int:
    model = config.build_model()
    th = thresholds(model)
    token = _regime_token(model)
    line = f"f_min={fmt_quantity(th.f_min)} f_max={fmt_quantity(th.f_max)} regime={token}"
    try:
        if classify_regime(model).degenerate:
            line += " degenerate=1"
    except KnifeEdgeError:
        pass
    print(line)
    return EXIT_OK


def _cmd_roots(config: RunConfig, args) -> int:
    model = config.build_model()
    try:
        regime = classify_regime(model)
    except KnifeEdgeError as err:
        print(f"no interior root: {err}")
        return EXIT_OK
    if regime.kind is RegimeKind.BISTABLE:
        print(f"x_star={fmt_quantity(regime.x_star)}")
    elif regime.kind is RegimeKind.DEFECTION_DOMINANT:
        print("no interior root: F below f_min")
    else:
        print("no interior root: F above f_max")
    return EXIT_OK


def _cmd_basins(config: RunConfig, args) -> int:
    model = config.build_model()
    try:
        print(f"basin={fmt_quantity(basin_of_cooperation(model))}")
    except KnifeEdgeError as err:
        print(f"basin undefined: {err}")
    return EXIT_OK


def _cmd_sweep(config: RunConfig, args) -> int:
    lo, hi = SWEEP_DEFAULTS[args.param]
    lo = args.lo if args.lo is not None else lo
    hi = args.hi if args.hi is not None else hi
    result = sweep_root(config.build_model(), args.param, lo, hi, args.steps)
    rows = []
    for pt in result.points:
        token = pt.regime.token if pt.regime is not None else "knife_edge"
        rows.append((pt.value, token, pt.x_star, pt.basin))
    path = _out_path(args, "sweep.csv")
    extras = [("param", args.param), ("lo", fmt_float(lo)), ("hi", fmt_float(hi)), ("steps", str(args.steps))]
    write_csv(path, ["param", "regime", "x_star", "basin"], rows, _meta(config, "sweep", extras))
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_grid(config: RunConfig, args) -> int:
    grid = regime_grid(
        config.build_model(), args.f_lo, args.f_hi, args.rp_lo, args.rp_hi,
        args.f_steps, args.rp_steps,
    )
    rows = []
    for row in grid.cells:
        for cell in row:
            token = cell.regime.token if cell.regime is not None else "knife_edge"
            rows.append((cell.f, cell.r_p, token, cell.basin))
    path = _out_path(args, "grid.csv")
    extras = [
        ("f_lo", fmt_float(args.f_lo)), ("f_hi", fmt_float(args.f_hi)),
        ("rp_lo", fmt_float(args.rp_lo)), ("rp_hi", fmt_float(args.rp_hi)),
        ("f_steps", str(args.f_steps)), ("rp_steps", str(args.rp_steps)),
    ]
    write_csv(path, ["f", "r_p", "regime", "basin"], rows, _meta(config, "grid", extras))
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_integrate(config: RunConfig, args) -> int:
    model = config.build_model()
    trajectory = integrate(
        model, args.x0, step=config.step, t_max=config.t_max, conv_tol=config.conv_tol
    )
    rows = list(zip(trajectory.times, trajectory.states))
    path = _out_path(args, "trajectory.csv")
    extras = [("x0", fmt_float(args.x0))]
    write_csv(path, ["t", "x"], rows, _meta(config, "integrate", extras))
    target = "none" if trajectory.converged_to is None else fmt_quantity(trajectory.converged_to)
    print(f"wrote {path}")
    print(f"converged_to={target}")
    return EXIT_OK


def _cmd_simulate(config: RunConfig, args) -> int:
    if not 0 <= args.x <= 1:
        raise ConfigError(f"--x must be in [0, 1], got {args.x}")
    model = config.build_model()
    workers = _workers()
    rows = []
    for stream, strategy in enumerate(("C", "D")):
        estimate = estimate_avg_payoff(
            model, args.x, strategy, config.samples, RngSeed(config.seed, stream), workers=workers
        )
        closed = avg_payoff(model, args.x, strategy)
        rows.append((strategy, args.x, estimate.mean, estimate.std_error, estimate.n_samples, closed))
        print(
            f"{strategy}: mean={fmt_quantity(estimate.mean)} "
            f"std_error={fmt_quantity(estimate.std_error)} closed_form={fmt_quantity(closed)}"
        )
    path = _out_path(args, "simulate.csv")
    extras = [("x", fmt_float(args.x))]
    write_csv(
        path,
        ["strategy", "x", "mean", "std_error", "n_samples", "closed_form"],
        rows,
        _meta(config, "simulate", extras),
    )
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_verify(config: RunConfig, args) -> int:
    suites = run_battery(samples=config.samples, seed=config.seed, workers=_workers())
    rows = []
    for suite in suites:
        print(f"{'ok  ' if suite.passed else 'FAIL'} {suite.name}: {suite.detail}")
        for row in suite.rows:
            rows.append((row.suite, row.case, row.value, row.bound, "ok" if row.ok else "fail"))
    path = _out_path(args, "verify_checks.csv")
    write_csv(path, ["suite", "case", "value", "bound", "status"], rows, _meta(config, "verify"))
    print(f"wrote {path}")
    if all(suite.passed for suite in suites):
        print("verify: PASS")
        return EXIT_OK
    print("verify: FAIL")
    return EXIT_VERIFY


def _cmd_plot(args) -> int:
    try:
        svg = render_csv_plot(args.csv_path)
    except OSError as err:
        raise _IOFailure(f"cannot read {args.csv_path}: {err}") from err
    out_path = args.out_svg or os.path.splitext(args.csv_path)[0] + ".svg"
    try:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(svg)
    except OSError as err:
        raise _IOFailure(f"cannot write {out_path}: {err}") from err
    print(f"wrote {out_path}")
    return EXIT_OK


_HANDLERS = {
    "gradient": _cmd_gradient,
    "payoffs": _cmd_payoffs,
    "thresholds": _cmd_thresholds,
    "roots": _cmd_roots,
    "basins": _cmd_basins,
    "sweep": _cmd_sweep,
    "grid": _cmd_grid,
    "integrate": _cmd_integrate,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "plot":
            return _cmd_plot(args)
        config = _load_config(args)
        return _HANDLERS[args.command](config, args)
    except (ConfigError, ParameterError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except _IOFailure as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
