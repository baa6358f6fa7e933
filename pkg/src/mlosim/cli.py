"""Command-line interface: single runs and preset sweeps."""

from __future__ import annotations

import argparse
import sys

from .scenarios import (
    ConfigError,
    ScenarioConfig,
    parse_config_text,
    preset_names,
    run_scenario,
    sweep,
)
from .traffic_metrics import CSV_HEADER, row_to_csv

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value config file; flags override it")
    parser.add_argument("--mode", choices=["slo", "str", "emlsr"], type=str.lower)
    parser.add_argument("--nStations", type=int, dest="nStations")
    parser.add_argument("--nSldLink1", type=int, dest="nSldLink1")
    parser.add_argument("--nSldLink2", type=int, dest="nSldLink2")
    parser.add_argument("--mcs1", type=int)
    parser.add_argument("--mcs2", type=int)
    parser.add_argument("--width1", type=int)
    parser.add_argument("--width2", type=int)
    parser.add_argument("--lambda", type=float, dest="lam")
    parser.add_argument("--lambdaSld", type=float, dest="lambdaSld")
    parser.add_argument("--payload", type=int)
    parser.add_argument("--duration", type=float, help="simulated seconds")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--switchDelayUs", type=float, dest="switchDelayUs")
    parser.add_argument("--out", help="CSV output path (default: stdout)")


_FLAG_TO_ATTR = {
    "mode": "mode",
    "nStations": "n_stations",
    "nSldLink1": "n_sld_link1",
    "nSldLink2": "n_sld_link2",
    "mcs1": "mcs1",
    "mcs2": "mcs2",
    "width1": "width1",
    "width2": "width2",
    "lam": "lam",
    "lambdaSld": "lambda_sld",
    "payload": "payload_bytes",
    "duration": "duration_s",
    "seed": "seed",
    "switchDelayUs": "switch_delay_us",
}


def _build_config(args: argparse.Namespace) -> ScenarioConfig:
    cfg = ScenarioConfig(scenario="custom")
    if args.config:
        try:
            text = open(args.config).read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        cfg = parse_config_text(text, base=cfg)
    for flag, attr in _FLAG_TO_ATTR.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    cfg.validate()
    return cfg


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    result = run_scenario(cfg)
    text = CSV_HEADER + "\n" + row_to_csv(result.row) + "\n"
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    target = sweep(
        args.preset,
        args.out,
        base_seed=args.seed,
        duration_s=args.duration,
        jobs=args.jobs,
    )
    print(f"wrote {target}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlosim",
        description="Multi-link Wi-Fi channel-access simulator (SLO, STR, EMLSR)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario and emit one CSV row")
    _add_run_flags(run_p)
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="run a preset experiment family")
    sweep_p.add_argument("--preset", required=True, help=f"one of: {', '.join(preset_names())}")
    sweep_p.add_argument("--out", required=True, help="output directory or .csv path")
    sweep_p.add_argument("--seed", type=int, default=1)
    sweep_p.add_argument("--duration", type=float, default=10.0, help="simulated seconds per run")
    sweep_p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    sweep_p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
