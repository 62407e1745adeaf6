"""Command-line entry point.

Commands: ``gate``, ``sweep``, ``purity``, ``spectral`` take a JSON config;
``preset`` runs a named built-in study.  Exit codes: 0 success, 1
configuration error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import (gate_spec_dict, parse_config, spectral_grid_from_config)
from .errors import ConfigError, IntegrationError
from .presets import PRESET_NAMES, run_preset
from .pulses import GateSpec
from .runner import SweepSpec, purity_trace, run_gate, spectral_report, sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dotgate",
        description="Optical phase gates on quantum-dot spins: "
                    "master-equation runs, sweeps and reports.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gate", help="run one gate and print its metrics")
    p.add_argument("config")
    p.add_argument("--traj", help="write the sampled trajectory CSV here")
    p.add_argument("--json", dest="json_out", help="write a metrics JSON here")

    p = sub.add_parser("sweep", help="run a parameter sweep to CSV")
    p.add_argument("config")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--traj-dir", help="directory for per-point trajectories")

    p = sub.add_parser("purity", help="write the purity/population trace")
    p.add_argument("config")
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("spectral", help="tabulate the phonon spectral density")
    p.add_argument("config")
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("preset", help="run a built-in study")
    p.add_argument("name", choices=PRESET_NAMES)
    p.add_argument("--out", default="preset_out", help="output directory")
    p.add_argument("--threads", type=int, default=1)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "gate":
            spec = parse_config(args.config)
            if not isinstance(spec, GateSpec):
                raise ConfigError("'gate' expects a config without a sweep block")
            record = run_gate(spec, trajectory_path=args.traj)
            for name in sorted(record.metrics):
                print(f"{name} = {record.metrics[name]!r}")
            if args.json_out:
                payload = {"config": gate_spec_dict(record.spec),
                           "metrics": record.metrics,
                           "trajectory_path": record.trajectory_path}
                with open(args.json_out, "w", encoding="utf-8") as fh:
                    json.dump(payload, fh, sort_keys=True, indent=2)
                    fh.write("\n")

        elif args.command == "sweep":
            spec = parse_config(args.config)
            if not isinstance(spec, SweepSpec):
                raise ConfigError("'sweep' expects a config with a sweep block")
            records = sweep(spec, threads=max(1, args.threads),
                            out_path=args.out, trajectory_dir=args.traj_dir)
            failures = sum(1 for r in records if r.error is not None)
            print(f"wrote {args.out} ({len(records)} points, {failures} failed)")

        elif args.command == "purity":
            spec = parse_config(args.config)
            if not isinstance(spec, GateSpec):
                raise ConfigError("'purity' expects a config without a sweep block")
            purity_trace(spec, args.out)
            print(f"wrote {args.out}")

        elif args.command == "spectral":
            spec = parse_config(args.config)
            if not isinstance(spec, GateSpec):
                raise ConfigError("'spectral' expects a config without a sweep block")
            grid = spectral_grid_from_config(args.config)
            spectral_report(spec.material, grid, spec.temperature, args.out)
            print(f"wrote {args.out}")

        else:  # preset
            written = run_preset(args.name, args.out, threads=max(1, args.threads))
            for path in written:
                print(f"wrote {path}")

    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
