"""Command-line driver: ``solve``, ``verify``, and ``sweep``.

Exit codes: 0 success, 1 verification property failure, 2 configuration
or usage error (the message names the offending field), 3 solver guard
failure (the message names the guard).

Configs are JSON documents validated against a schema before any
computation runs; ``GEVREY_NLS_OUTPUT_DIR`` overrides the configured
output directory.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import math
import os
import sys
import time
from pathlib import Path

import jsonschema

from . import constants
from .diagnostics import (
    BootstrapParams,
    bootstrap_monitor,
    bootstrap_sigma,
    check_growth_envelope,
    defect_bound_ratio,
    estimate_radius,
    segment_records,
    sigma_final,
)
from .errors import ConfigError, GevreyNlsError, InsufficientModes
from .gevrey import GevreyParams
from .reporting import (
    write_energy_csv,
    write_solve_plot_script,
    write_summary_json,
    write_sweep_csv,
    write_sweep_plot_script,
    write_trajectory_npz,
)
from .solver import (
    GridSpec,
    InitialDataSpec,
    SolverConfig,
    make_initial_data,
    splitstep_solve,
)
from .verification import SUITE_NAMES, run_suite

import numpy as np

OUTPUT_DIR_ENV = "GEVREY_NLS_OUTPUT_DIR"

SWEEP_AXES = ("sigma", "theta", "T", "p", "amplitude")

SWEEP_COLUMNS = (
    "axis",
    "value",
    "status",
    "s0",
    "s_final",
    "nbound_plain",
    "nbound_grad",
    "sigma_est_final",
    "budget_sigma",
    "sigma_final",
)

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["initial_data", "grid", "gevrey", "bootstrap"],
    "properties": {
        "initial_data": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {
                    "enum": [
                        "gaussian",
                        "sech",
                        "lorentzian",
                        "plane_wave",
                        "random_bandlimited",
                    ]
                },
                "amplitude": {"type": "number"},
                "width": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["n_modes"],
            "properties": {
                "n_modes": {"type": "integer", "minimum": 2},
                "half_length": {"type": "number", "exclusiveMinimum": 0},
                "dealias_pad": {"type": "number", "minimum": 1},
            },
        },
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "p": {"type": "integer", "minimum": 3, "not": {"multipleOf": 2}},
                "contraction_constant": {"type": "number", "exclusiveMinimum": 0},
                "picard_tol": {"type": "number", "exclusiveMinimum": 0},
                "max_picard_iters": {"type": "integer", "minimum": 1},
                "quadrature_nodes": {"type": "integer", "minimum": 3},
                "dt_reference": {"type": "number", "exclusiveMinimum": 0},
                "blowup_ceiling": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "gevrey": {
            "type": "object",
            "additionalProperties": False,
            "required": ["sigma"],
            "properties": {
                "sigma": {"type": "number", "minimum": 0},
                "s": {"type": "number"},
            },
        },
        "bootstrap": {
            "type": "object",
            "additionalProperties": False,
            "required": ["theta", "t_final"],
            "properties": {
                "theta": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "exclusiveMaximum": 1,
                },
                "c_boot": {"type": "number", "exclusiveMinimum": 0},
                "t_final": {"type": "number", "exclusiveMinimum": 0},
                "epsilon": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "output_dir": {"type": "string", "minLength": 1},
        "seed": {"type": "integer", "minimum": 0},
    },
}


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Validated experiment definition."""

    initial_data: InitialDataSpec
    grid: GridSpec
    solver: SolverConfig
    gevrey: GevreyParams
    theta: float
    c_boot: float
    t_final: float
    epsilon: float
    output_dir: Path
    seed: int
    raw: dict


def _build_section(name: str, factory, kwargs: dict):
    try:
        return factory(**kwargs)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"config section {name!r}: {exc}") from exc


def parse_run_config(doc: dict) -> RunConfig:
    """Validate a config document and build the component objects.

    Raises ConfigError naming the failing field; performs no computation.
    """
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config field {exc.json_path}: {exc.message}") from exc
    data = _build_section("initial_data", InitialDataSpec, doc["initial_data"])
    grid = _build_section("grid", GridSpec, doc["grid"])
    solver = _build_section("solver", SolverConfig, doc.get("solver", {}))
    gevrey = _build_section("gevrey", GevreyParams, doc["gevrey"])
    boot = dict(doc["bootstrap"])
    theta = boot["theta"]
    c_boot = boot.get("c_boot", constants.C_BOOT)
    t_final = boot["t_final"]
    epsilon = boot.get("epsilon", 1.0)
    out = Path(os.environ.get(OUTPUT_DIR_ENV) or doc.get("output_dir", "gevrey-nls-out"))
    return RunConfig(
        initial_data=data,
        grid=grid,
        solver=solver,
        gevrey=gevrey,
        theta=theta,
        c_boot=c_boot,
        t_final=t_final,
        epsilon=epsilon,
        output_dir=out,
        seed=int(doc.get("seed", 0)),
        raw=doc,
    )


def load_run_config(path: str) -> RunConfig:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    return parse_run_config(doc)


def _jsonable(obj):
    """Replace non-finite floats so the summary stays strict JSON."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    return obj


def _solve_pipeline(rc: RunConfig) -> tuple[dict, list, object]:
    """Run the integrator and the continuation diagnostics.

    Returns (summary, energy records, trajectory); raises GevreyNlsError
    subclasses on guard failures.
    """
    p = rc.solver.p
    sigma = rc.gevrey.sigma
    rng = np.random.default_rng(rc.seed)
    f = make_initial_data(rc.initial_data, rc.grid, rng)
    traj = splitstep_solve(f, rc.t_final, rc.solver, params=rc.gevrey)
    records = segment_records(traj, sigma, p, indices=range(len(traj)))
    s0 = records[0].S
    verdicts: dict = {}
    budget = None
    sigma_kept = None
    if s0 > 0.0:
        monitor = bootstrap_monitor(traj, sigma, p, s0)
        margins = check_growth_envelope(traj, sigma, rc.theta, rc.c_boot, p)
        bp = BootstrapParams(rc.theta, rc.c_boot, s0, rc.t_final, rc.epsilon)
        budget = bootstrap_sigma(bp, p)
        if sigma > 0.0:
            sigma_kept = sigma_final(sigma, bp, p)
        verdicts = {
            "hypothesis_holds": bool(monitor.hypothesis_ok.all()),
            "conclusion_holds": monitor.passed,
            "first_failure_time": monitor.first_failure_time,
            "envelope_min_margin": float(margins.min()),
            "envelope_closes": bool(margins.min() >= 0.0),
        }
    else:
        # zero datum: nothing to bound, the run is trivially consistent
        verdicts = {
            "hypothesis_holds": True,
            "conclusion_holds": True,
            "first_failure_time": None,
            "envelope_min_margin": None,
            "envelope_closes": True,
        }
    summary = {
        "verdicts": verdicts,
        "s0": s0,
        "s_final": records[-1].S,
        "sigma_run": sigma,
        "sigma_budget": budget,
        "sigma_final": sigma_kept,
        "sigma_est_final": records[-1].sigma_est,
        "samples": len(records),
        "config": rc.raw,
    }
    return summary, records, traj


def cmd_solve(args: argparse.Namespace) -> int:
    try:
        rc = load_run_config(args.config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    try:
        summary, records, traj = _solve_pipeline(rc)
    except GevreyNlsError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    summary["wall_seconds"] = time.perf_counter() - t0
    out = rc.output_dir
    out.mkdir(parents=True, exist_ok=True)
    write_energy_csv(out / "energy.csv", records)
    write_trajectory_npz(out / "trajectory.npz", traj)
    write_solve_plot_script(out / "plot.gp", "energy.csv")
    write_summary_json(out / "summary.json", _jsonable(summary))
    verdict = "PASS" if summary["verdicts"]["conclusion_holds"] else "FAIL"
    print(f"{verdict}: S0={summary['s0']:.6g}, S(T)={summary['s_final']:.6g}, "
          f"artifacts in {out}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        result = run_suite(args.suite, seed=args.seed, trials=args.trials)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for line in result.lines:
        print(line)
    status = "PASS" if result.passed else "FAIL"
    print(f"{status}: suite {result.name}, {result.trials} trials, "
          f"{result.stats['seconds']:.2f}s")
    if result.passed:
        return 0
    out = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    out.mkdir(parents=True, exist_ok=True)
    case_path = out / f"violating_case_{result.name}.json"
    with case_path.open("w") as fh:
        json.dump(_jsonable(result.violating_case), fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"violating case written to {case_path}", file=sys.stderr)
    return 1


def _apply_axis(doc: dict, axis: str, value: float) -> dict:
    out = json.loads(json.dumps(doc))
    if axis == "sigma":
        out["gevrey"]["sigma"] = value
    elif axis == "theta":
        out["bootstrap"]["theta"] = value
    elif axis == "T":
        out["bootstrap"]["t_final"] = value
    elif axis == "p":
        if value != int(value):
            raise ConfigError(f"axis 'p' needs integer values, got {value}")
        out.setdefault("solver", {})["p"] = int(value)
    elif axis == "amplitude":
        out.setdefault("initial_data", {})["amplitude"] = value
    else:
        raise ConfigError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")
    return out


def _sweep_case(doc: dict, axis: str, value: float) -> list:
    nan = float("nan")
    try:
        rc = parse_run_config(_apply_axis(doc, axis, value))
        summary, records, traj = _solve_pipeline(rc)
    except (ConfigError, GevreyNlsError, ValueError) as exc:
        return [axis, float(value), f"error:{type(exc).__name__}",
                nan, nan, nan, nan, nan, nan, nan]
    sigma = rc.gevrey.sigma
    p = rc.solver.p
    f0 = traj.states[0]
    if sigma > 0.0:
        nb_plain = defect_bound_ratio(f0, sigma, p, rc.theta)
        nb_grad = defect_bound_ratio(f0, sigma, p, rc.theta, gradient=True)
    else:
        nb_plain = nan
        nb_grad = nan
    try:
        est = estimate_radius(traj.final_state)
    except InsufficientModes:
        est = nan
    return [
        axis,
        float(value),
        "ok",
        summary["s0"],
        summary["s_final"],
        nb_plain,
        nb_grad,
        est,
        summary["sigma_budget"] if summary["sigma_budget"] is not None else nan,
        summary["sigma_final"] if summary["sigma_final"] is not None else nan,
    ]


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        rc = load_run_config(args.config)
        values = [float(v) for v in args.values.split(",") if v.strip()]
        if not values:
            raise ConfigError("sweep needs at least one value")
        if args.axis not in SWEEP_AXES:
            raise ConfigError(
                f"unknown sweep axis {args.axis!r}; choose from {SWEEP_AXES}"
            )
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: bad --values list: {exc}", file=sys.stderr)
        return 2
    workers = min(len(values), os.cpu_count() or 1, 4)
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_sweep_case, rc.raw, args.axis, v) for v in values]
        rows = [fut.result() for fut in futures]  # submission order
    out = rc.output_dir
    out.mkdir(parents=True, exist_ok=True)
    write_sweep_csv(out / "sweep.csv", SWEEP_COLUMNS, rows)
    write_sweep_plot_script(out / "sweep.gp", "sweep.csv", args.axis, args.axis == "T")
    failures = sum(1 for row in rows if row[2] != "ok")
    print(f"{len(rows)} cases, {failures} failed, artifacts in {out}")
    return 0 if failures == 0 else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gevrey-nls",
        description="Spectral solver and inequality checks for the "
        "analyticity-radius continuation argument.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one configured experiment")
    p_solve.add_argument("--config", required=True, help="JSON config path")
    p_solve.set_defaults(fn=cmd_solve)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--trials", type=int, default=None)
    p_verify.set_defaults(fn=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="solve across one parameter axis")
    p_sweep.add_argument("--config", required=True, help="JSON config path")
    p_sweep.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated numeric list")
    p_sweep.set_defaults(fn=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
