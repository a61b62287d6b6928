"""Command-line front end: simulate scenarios to CSV, run parameter sweeps
(optionally in parallel), and execute the acceptance checks.

Exit codes: 0 success, 1 failed check, 2 configuration error, 3 integration
instability, 4 I/O error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import math
import os
import sys

from . import config as config_mod
from .errors import ConfigError, IntegrationUnstableError, QPulseError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_UNSTABLE = 3
EXIT_IO = 4

# short parameter names accepted by --sweep in addition to dotted paths
_SWEEP_ALIASES = {
    "big-gamma": "photocell.big-gamma",
    "gamma": "two-level.gamma",
    "gamma01": "photocell.gamma01",
    "gamma12": "photocell.gamma12",
    "gamma30": "photocell.gamma30",
    "mean-photons": "pulse.mean-photons",
    "bandwidth": "pulse.bandwidth",
    "spacing-periods": "pulse.spacing-periods",
    "jitter-fraction": "pulse.jitter-fraction",
    "dt": "integration.dt",
    "t-end-periods": "integration.t-end-periods",
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="qpulse",
        description="Lindblad dynamics of pulse-driven few-level systems "
                    "with thermodynamic bookkeeping.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--preset", help="bundled scenario name "
                       f"({', '.join(config_mod.PRESET_NAMES)})")
        p.add_argument("--config", help="YAML scenario file")
        p.add_argument("--output", help="output CSV path (simulate) or directory (sweep)")
        p.add_argument("--dt", type=float, help="integration step in 1/omega0")
        p.add_argument("--t-end", type=float, dest="t_end",
                       help="end time in carrier periods")
        p.add_argument("--record-every", type=int, dest="record_every",
                       help="steps between records")
        p.add_argument("--seed", type=int, help="pulse jitter seed")

    p_sim = sub.add_parser("simulate", help="run one scenario and write a CSV")
    add_common(p_sim)

    p_sweep = sub.add_parser("sweep", help="run one scenario per parameter value")
    add_common(p_sweep)
    p_sweep.add_argument("--sweep", required=True, metavar="PARAM=V1,V2,...",
                         help="parameter name (dotted config path or alias) "
                              "and comma-separated values")
    p_sweep.add_argument("--jobs", type=int, default=1,
                         help="concurrent runs (default 1)")

    p_check = sub.add_parser("check", help="run the acceptance criteria table")
    p_check.add_argument("--skip-slow", action="store_true",
                         help="skip the multi-minute criteria (development aid)")

    sub.add_parser("presets", help="list bundled scenario names")
    return parser


def _load_config(args):
    if args.preset and args.config:
        raise ConfigError("give either --preset or --config, not both")
    if args.preset:
        cfg = config_mod.preset_config(args.preset)
    elif args.config:
        try:
            cfg = config_mod.load_file(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except Exception as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"cannot parse config file: {exc}") from exc
    else:
        raise ConfigError("a scenario is required: --preset NAME or --config PATH")
    overrides = {}
    if args.dt is not None:
        overrides["integration.dt"] = args.dt
    if args.t_end is not None:
        overrides["integration.t-end-periods"] = args.t_end
    if args.record_every is not None:
        overrides["integration.record-every"] = args.record_every
    if args.seed is not None:
        overrides["pulse.seed"] = args.seed
    if overrides:
        cfg = config_mod.apply_overrides(cfg, overrides)
    return config_mod.validate(cfg)


def _default_output(args, suffix):
    if args.output:
        return args.output
    base = os.environ.get("QPULSE_OUTPUT_DIR", ".")
    name = args.preset or "run"
    return os.path.join(base, f"{name}{suffix}")


def _cmd_simulate(args):
    from .runner import run_scenario, summary_text, write_csv

    cfg = _load_config(args)
    out_path = args.output or cfg.output or _default_output(args, ".csv")
    result = run_scenario(cfg)
    try:
        os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
        write_csv(result, out_path)
    except OSError as exc:
        print(f"error: cannot write {out_path}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(summary_text(result))
    print(f"wrote {out_path}")
    return EXIT_OK


def _resolve_sweep_param(name):
    if "." in name:
        return name
    if name in _SWEEP_ALIASES:
        return _SWEEP_ALIASES[name]
    raise ConfigError(
        f"unknown sweep parameter {name!r}; use a dotted config path "
        "(e.g. photocell.big-gamma) or one of: " + ", ".join(_SWEEP_ALIASES)
    )


def _sweep_worker(payload):
    """One sweep run; returns an aggregate row. Must stay picklable."""
    from .runner import run_scenario, write_csv

    cfg_dict, param, value, csv_path = payload
    row = {"param": param, "value": value, "status": "OK",
           "final_w": math.nan, "final_q": math.nan,
           "min_sigma": math.nan, "final_eta": math.nan}
    try:
        cfg = config_mod.from_dict(cfg_dict)
        cfg = config_mod.apply_overrides(cfg, {param: value})
        config_mod.validate(cfg)
        result = run_scenario(cfg)
        write_csv(result, csv_path)
        d = result.diagnostics
        row["final_w"] = d["final_work"]
        row["final_q"] = d["final_heat"]
        row["min_sigma"] = d.get("min_sigma", math.nan)
        row["final_eta"] = d.get("final_eta", math.nan)
    except QPulseError as exc:
        row["status"] = f"FAILED: {exc}"
    return row


def _cmd_sweep(args):
    cfg = _load_config(args)
    try:
        name, _, values_text = args.sweep.partition("=")
        if not values_text:
            raise ConfigError("--sweep needs PARAM=V1,V2,...")
        param = _resolve_sweep_param(name.strip())
        values = [float(v) for v in values_text.split(",") if v.strip() != ""]
        if not values:
            raise ConfigError("--sweep needs at least one value")
    except ValueError as exc:
        raise ConfigError(f"--sweep values must be numeric: {exc}") from exc

    out_dir = args.output or _default_output(args, "-sweep")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {out_dir}: {exc}", file=sys.stderr)
        return EXIT_IO

    cfg_dict = config_mod.to_dict(cfg)
    field = param.rsplit(".", 1)[-1]
    payloads = [
        (cfg_dict, param, v, os.path.join(out_dir, f"{field}={v:g}.csv"))
        for v in values
    ]
    jobs = max(1, args.jobs)
    if jobs == 1:
        rows = [_sweep_worker(p) for p in payloads]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_worker, payloads))

    agg_path = os.path.join(out_dir, "aggregate.csv")
    def fmt(x):
        return "" if isinstance(x, float) and math.isnan(x) else format(x, ".17g")
    try:
        with open(agg_path, "w", encoding="utf-8") as fh:
            fh.write("param,value,status,final_W,final_Q,min_sigma,final_eta\n")
            for row in rows:
                status = row["status"].replace(",", ";")
                fh.write(",".join([
                    row["param"], format(row["value"], ".17g"), status,
                    fmt(row["final_w"]), fmt(row["final_q"]),
                    fmt(row["min_sigma"]), fmt(row["final_eta"]),
                ]) + "\n")
    except OSError as exc:
        print(f"error: cannot write {agg_path}: {exc}", file=sys.stderr)
        return EXIT_IO

    n_failed = sum(1 for r in rows if r["status"] != "OK")
    for row in rows:
        print(f"{row['param']}={row['value']:g}: {row['status']}")
    print(f"wrote {agg_path} ({len(rows)} runs, {n_failed} failed)")
    return EXIT_OK


def _cmd_check(args):
    from .acceptance import format_table, run_all

    results = run_all(skip_slow=args.skip_slow)
    print(format_table(results))
    n_failed = sum(1 for r in results if not r.passed)
    if n_failed:
        print(f"{n_failed} criterion(s) FAILED")
        return EXIT_CHECK_FAILED
    print("all criteria passed")
    return EXIT_OK


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "presets":
            for name in config_mod.PRESET_NAMES:
                print(name)
            return EXIT_OK
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationUnstableError as exc:
        print(f"integration unstable: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
