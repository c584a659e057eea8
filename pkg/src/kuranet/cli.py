"""Command line interface.

    kuranet run <config.json>      [--outdir D] [--seed-override S] [--dt X] [--delta D]
    kuranet preset <name>          [--outdir D] [--seed-override S] [--dt X] [--delta D]
    kuranet sweep <sweep.json>     [--outdir D]
    kuranet validate <config.json>

Exit codes: 0 success, 2 configuration error, 3 simulation error,
4 acceptance assertion failure (a run violated a theoretical bound it
asserts).  The default output directory is ./runs, overridable with
--outdir or the KURANET_OUTDIR environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from .errors import AcceptanceError, ConfigError, KuranetError
from .scenario import (
    PRESETS,
    preset_scenario,
    run_scenario,
    run_sweep,
    validate_scenario,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SIMULATION = 3
EXIT_ACCEPTANCE = 4

ENV_OUTDIR = "KURANET_OUTDIR"


def _default_outdir(flag: Optional[str]) -> Path:
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_OUTDIR)
    return Path(env) if env else Path("runs")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kuranet",
        description="Simulate and control complex-valued Kuramoto networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shadow_flags(p):
        p.add_argument("--outdir", help="output directory (default ./runs "
                                        f"or ${ENV_OUTDIR})")
        p.add_argument("--seed-override", type=int, default=None,
                       help="rebind every seed from this master seed")
        p.add_argument("--dt", type=float, default=None,
                       help="override the integration step (s)")
        p.add_argument("--delta", type=float, default=None,
                       help="override the signum boundary layer width")

    p_run = sub.add_parser("run", help="execute one scenario config")
    p_run.add_argument("config", help="scenario JSON file")
    add_shadow_flags(p_run)

    p_pre = sub.add_parser("preset", help="execute a canonical scenario")
    p_pre.add_argument("name", choices=sorted(PRESETS),
                       help="preset scenario name")
    add_shadow_flags(p_pre)

    p_swp = sub.add_parser("sweep", help="run a parameter sweep")
    p_swp.add_argument("config", help="sweep JSON file")
    p_swp.add_argument("--outdir", help="output directory")

    p_val = sub.add_parser("validate", help="parse a config and check gain "
                                            "conditions without simulating")
    p_val.add_argument("config", help="scenario JSON file")
    return parser


def _print_summary(summary) -> None:
    print(f"scenario   : {summary.name}  [{summary.controller}]")
    print(f"hash       : {summary.scenario_hash}")
    print(f"network    : n={summary.n} edges={summary.n_edges} "
          f"connected={summary.connected}")
    if summary.reaching_measured is not None or summary.reaching_bound is not None:
        meas = ("-" if summary.reaching_measured is None
                else f"{summary.reaching_measured:.4f}s")
        bnd = ("-" if summary.reaching_bound is None
               else f"{summary.reaching_bound:.4f}s")
        print(f"reaching   : measured {meas}  bound {bnd}  "
              f"tol {summary.reaching_tol:.4g}")
    line = f"tail |r|   : {summary.tail_mean_r:.6f} (synced={summary.synced})"
    if summary.real_tail_mean_r is not None:
        line += (f"   real model {summary.real_tail_mean_r:.6f} "
                 f"(synced={summary.real_synced})")
    print(line)
    if summary.final_e is not None:
        print(f"phase error: final {summary.final_e:.3e}  "
              f"steady {summary.steady_e:.3e}  "
              f"tail drift {summary.tail_e_drift:.3e} rad/s")
    if summary.gain_margin_eps2 is not None:
        print(f"gain margin: eps2={summary.gain_margin_eps2:.4f} "
              f"(condition ok={summary.gain_condition_ok})")
    if summary.n_resets or summary.n_guard_trips:
        print(f"events     : resets={summary.n_resets} "
              f"guard_trips={summary.n_guard_trips}")
    print(f"wall clock : {summary.wall_clock_s:.2f}s")
    if summary.outdir:
        print(f"artifacts  : {summary.outdir} ({len(summary.files)} files)")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            outdir = _default_outdir(args.outdir)
            summary = run_scenario(
                args.config,
                outdir=outdir / Path(args.config).stem,
                seed_override=args.seed_override,
                dt=args.dt,
                delta=args.delta,
            )
            _print_summary(summary)
        elif args.command == "preset":
            outdir = _default_outdir(args.outdir)
            scen = preset_scenario(args.name)
            summary = run_scenario(
                scen.raw,
                outdir=outdir / args.name,
                seed_override=args.seed_override,
                dt=args.dt,
                delta=args.delta,
            )
            _print_summary(summary)
        elif args.command == "sweep":
            outdir = _default_outdir(args.outdir)
            rows = run_sweep(args.config, outdir=outdir)
            n_err = sum(1 for r in rows if r["status"] != "ok")
            print(f"sweep: {len(rows)} runs, {n_err} failed; "
                  f"aggregate at {outdir / 'aggregate.csv'}")
            if n_err:
                return EXIT_SIMULATION
        elif args.command == "validate":
            report = validate_scenario(args.config)
            print(json.dumps(report, indent=2, sort_keys=True))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AcceptanceError as exc:
        print(f"acceptance assertion failed: {exc}", file=sys.stderr)
        return EXIT_ACCEPTANCE
    except KuranetError as exc:
        print(f"simulation error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SIMULATION
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
