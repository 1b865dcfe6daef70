"""Command-line front end.

Examples
--------
  python -m threelevel run --config qfi_weak_coupling.json --out results
  python -m threelevel sweep --config qfi_omega0_sweep.json --out results --format json
  python -m threelevel verify --config qfi_weak_coupling.json --tolerance 1e-6
  python -m threelevel interference --config dark_state.json

Exit codes: 0 success, 1 configuration error, 2 verification failure,
3 numerical failure.
"""
import argparse
import json
import os
import sys
import time

from . import __version__
from .errors import ConfigError, ThreeLevelError
from .oracle import IntegratorConfig
from .scenario import load_config, merge_sweep, run_scenario, run_sweep, verify, interference_report, write_atomic

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3


def _emit(record, config, args, stem, wall, extra=None):
    text = record.to_csv() if args.format == "csv" else record.to_json()
    if args.out is None:
        sys.stdout.write(text)
        return
    path = os.path.join(args.out, f"{stem}.{args.format}")
    write_atomic(path, text)
    sidecar = {"name": config.name, "parameters": config.to_dict(), "version": __version__,
               "wall_time_s": wall, "columns": list(record.columns)}
    if extra:
        sidecar.update(extra)
    if args.format == "csv":
        write_atomic(os.path.join(args.out, f"{stem}.summary.json"), json.dumps(sidecar, indent=2) + "\n")
    print(f"wrote {path}", file=sys.stderr)


def cmd_run(args, config):
    start = time.perf_counter()
    record = run_scenario(config, args.force_branch)
    _emit(record, config, args, config.name, time.perf_counter() - start)
    return EXIT_OK


def cmd_sweep(args, config):
    start = time.perf_counter()
    results = run_sweep(config, args.force_branch)
    if args.out is not None:
        for i, (value, rec) in enumerate(results):
            _emit(rec, config, args, f"{config.name}_{i:03d}", time.perf_counter() - start,
                  {"sweep_point": {config.sweep["parameter"]: value}})
    merged = merge_sweep(config, results)
    _emit(merged, config, args, f"{config.name}_sweep", time.perf_counter() - start)
    return EXIT_OK


def _corrupt(column):
    def perturb(series):
        if column not in series:
            raise ConfigError({"--corrupt": f"no column {column!r}"})
        series = dict(series)
        series[column] = series[column] + 1e-3
        return series
    return perturb


def cmd_verify(args, config):
    integ = IntegratorConfig(step_size=args.step)
    perturb = _corrupt(args.corrupt) if args.corrupt else None
    report = verify(config, integ, args.force_branch, perturb=perturb)
    failures = report.failures(args.tolerance)
    payload = {"tolerance": args.tolerance, "max_error": report.max_error,
               "errors": report.errors, "failed": sorted(failures), "passed": not failures}
    print(json.dumps(payload, indent=2))
    for name, err in sorted(failures.items()):
        print(f"FAIL {name}: max |analytic - oracle| = {err:.3e} >= {args.tolerance:g}", file=sys.stderr)
    return EXIT_OK if not failures else EXIT_VERIFY


def cmd_interference(args, config):
    text = json.dumps(interference_report(config, args.force_branch), indent=2) + "\n"
    if args.out is not None:
        write_atomic(os.path.join(args.out, f"{config.name}.interference.json"), text)
    sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="threelevel", description=__doc__.split("\n\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="scenario JSON file")
    common.add_argument("--out", default=None, help="output directory (default: stdout)")
    common.add_argument("--force-branch", choices=("generic", "double", "triple"), default=None,
                        help="override root classification of the V-type propagator")
    for name, fn, help_ in (("run", cmd_run, "evaluate observables on the time grid"),
                            ("sweep", cmd_sweep, "repeat run over the sweep values"),
                            ("verify", cmd_verify, "compare closed form with the ODE oracle"),
                            ("interference", cmd_interference, "print interference diagnostics")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        if name in ("run", "sweep"):
            p.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "verify":
            p.add_argument("--tolerance", type=float, default=1e-6)
            p.add_argument("--step", type=float, default=1e-4, help="RK4 step in gamma*t")
            p.add_argument("--corrupt", default=None, help=argparse.SUPPRESS)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ThreeLevelError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
