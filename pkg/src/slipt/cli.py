"""Command-line front end.

Exit codes: 0 success, 1 usage or config error, 2 infeasible scenario,
3 oracle check outside tolerance.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, ScenarioConfig, load_config, resolve, DEFAULT_PRESET
from .optimizer import TS, TSBO, PolicySolution, brute_force_oracle, OracleGrid
from .results import metadata, write_json, write_table, render_table
from .scenario import (PolicySpec, Scenario, build_scenario, policy_specs, run_policy,
                       sweep_neighbor_count, sweep_rate_threshold, crossover_neighbor_count)

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_GAP = 0, 1, 2, 3
ORACLE_GAP_TOL = 0.005


def _load(args: argparse.Namespace) -> ScenarioConfig:
    config = load_config(args.config, args.preset)
    changes = {}
    if getattr(args, "rth", None) is not None:
        if args.rth < 0:
            raise ConfigError("must be non-negative", "--rth")
        changes["rate_threshold"] = args.rth
    if getattr(args, "neighbors", None) is not None:
        if args.neighbors < 0:
            raise ConfigError("must be non-negative", "--neighbors")
        changes["num_neighbors"] = args.neighbors
    return dataclasses.replace(config, **changes) if changes else config


def _fmt_solution(sol: PolicySolution, scenario: Scenario, label: str) -> list[str]:
    lines = [f"policy: {label}", f"feasible: {'yes' if sol.feasible else 'no'}"]
    if sol.feasible:
        p = sol.operating_point
        lines += [
            f"T: {p.time_fraction:.6g}",
            f"A1 [A]: {p.peak_amplitude:.6g}",
            f"B1 [A]: {p.dc_bias:.6g}",
            f"FOV phase 1 [deg]: {math.degrees(scenario.rx.fov(p.fov_phase1)):g}",
            f"FOV phase 2 [deg]: {math.degrees(scenario.rx.fov(p.fov_phase2)):g}",
            f"harvested energy [J]: {sol.harvested_energy:.6g}",
            f"rate [bit/s/Hz]: {sol.achieved_rate:.6g}",
            f"SINR: {sol.achieved_sinr:.6g} ({10 * math.log10(sol.achieved_sinr) if sol.achieved_sinr > 0 else -math.inf:.2f} dB)",
        ]
    else:
        lines.append(f"binding constraint: {sol.reason}")
    return lines


def cmd_solve(args: argparse.Namespace) -> int:
    config = _load(args)
    scenario = build_scenario(config)
    if args.policy == "baseline":
        fov = math.radians(args.baseline_fov) if args.baseline_fov is not None else config.baseline_fovs[0]
        try:
            scenario.fov_index(fov)
        except ValueError as exc:
            raise ConfigError(str(exc), "--baseline-fov") from exc
        spec = PolicySpec(f"baseline-{math.degrees(fov):g}", "BASELINE", fov)
    else:
        spec = PolicySpec(args.policy, TS if args.policy == "ts" else TSBO)
    sol = run_policy(spec, scenario, config)
    print("\n".join(_fmt_solution(sol, scenario, spec.name)))
    return EXIT_OK if sol.feasible else EXIT_INFEASIBLE


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load(args)
    specs = policy_specs(config)
    if args.axis == "rth":
        values = config.rth_values
        if not values:
            raise ConfigError("sweep list is empty", "sweep.rth_values")
        records = sweep_rate_threshold(config, values, specs)
        figure = "fig3.csv"
    else:
        values = config.n_values
        if not values:
            raise ConfigError("sweep list is empty", "sweep.n_values")
        records = sweep_neighbor_count(config, values, specs)
        figure = "fig4.csv"
    meta = metadata(config.preset, config.digest, {"axis": args.axis})

    out = args.out or config.csv_path
    if out:
        write_table(out, records, meta)
        print(f"wrote {len(records)} rows to {out}", file=sys.stderr)
    else:
        sys.stdout.write(render_table(records, meta))
    json_path = args.json or config.json_path
    if json_path:
        write_json(json_path, records, meta)
    plot_dir = args.plot_data or config.plot_data_dir
    if plot_dir:
        write_table(Path(plot_dir) / figure, records, meta)
    if args.axis == "n":
        for spec in specs:
            n = crossover_neighbor_count(records, spec.name)
            if n is not None:
                print(f"{spec.name}: phase-2 FOV widens at N = {n}", file=sys.stderr)
    return EXIT_OK


def _gap(closed: PolicySolution, oracle: PolicySolution) -> float:
    if not closed.feasible and not oracle.feasible:
        return 0.0
    if closed.feasible != oracle.feasible:
        return math.inf
    return abs(closed.harvested_energy - oracle.harvested_energy) / oracle.harvested_energy


def cmd_oracle_check(args: argparse.Namespace) -> int:
    config = _load(args)
    scenario = build_scenario(config)
    grid = OracleGrid.uniform(args.grid or config.oracle_grid)
    worst = 0.0
    for tag, closed in ((TS, run_policy(PolicySpec("ts", TS), scenario, config)),
                        (TSBO, run_policy(PolicySpec("tsbo", TSBO), scenario, config))):
        oracle = brute_force_oracle(scenario, grid, shape=tag)
        gap = _gap(closed, oracle)
        worst = max(worst, gap)

        def energy(s: PolicySolution) -> str:
            return f"{s.harvested_energy:.6g}" if s.feasible else "infeasible"

        print(f"{tag}: closed-form {energy(closed)}  oracle {energy(oracle)}  gap {gap:.3%}")
    ok = worst <= ORACLE_GAP_TOL
    print(f"grid {grid.t_points}x{grid.amplitude_points}x{grid.bias_points}: "
          f"{'PASS' if ok else 'FAIL'} (tolerance {ORACLE_GAP_TOL:.1%})")
    return EXIT_OK if ok else EXIT_GAP


def cmd_preset_dump(args: argparse.Namespace) -> int:
    merged = resolve({}, args.preset or DEFAULT_PRESET)
    print(json.dumps(merged, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slipt", description="SLIPT link optimization toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON scenario config")
    common.add_argument("--preset", metavar="NAME", help=f"named preset (default {DEFAULT_PRESET})")
    common.add_argument("--rth", type=float, help="override the rate threshold [bit/s/Hz]")
    common.add_argument("--neighbors", type=int, help="override the number of neighbor LEDs")

    p = sub.add_parser("solve", parents=[common], help="solve one scenario")
    p.add_argument("--policy", choices=("ts", "tsbo", "baseline"), default="tsbo")
    p.add_argument("--baseline-fov", type=float, metavar="DEG", help="baseline FOV (default: first in config)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", parents=[common], help="sweep R_th or N and write a CSV table")
    p.add_argument("--axis", choices=("rth", "n"), default="rth")
    p.add_argument("--out", metavar="PATH", help="CSV output (default: config output.csv, else stdout)")
    p.add_argument("--json", metavar="PATH", help="also write a JSON mirror")
    p.add_argument("--plot-data", metavar="DIR", help="write fig3.csv / fig4.csv into DIR")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle-check", parents=[common], help="compare closed-form solvers with the grid oracle")
    p.add_argument("--grid", type=int, metavar="INT", help="grid points per axis")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("preset-dump", help="print a preset as JSON")
    p.add_argument("--preset", metavar="NAME")
    p.set_defaults(func=cmd_preset_dump)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if getattr(args, "grid", None) is not None and args.grid < 2:
        print("error: --grid needs at least 2 points", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
