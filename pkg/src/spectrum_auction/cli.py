"""Command-line entry points.

Subcommands:
    generate  Draw a device population and write it to a JSON file.
    run       Run one configured scenario and write its metrics CSV.
    sweep     Channel-budget sweep with compression on and off.
    compare   Payment-rule comparison on identical allocations.
    verify    Run the solver-oracle, truthfulness and rationality suites.

All commands exit 0 on success.  On failure they print a single
machine-readable JSON line to stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import harness, verification
from .devices import generate_population, save_population
from .errors import SpectrumAuctionError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectrum-auction",
        description="Compression-aware spectrum auction simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, needs_out: bool = True) -> None:
        p.add_argument("--config", help="scenario config JSON (defaults built in)")
        p.add_argument("--seed", type=int, help="override the base seed")
        if needs_out:
            p.add_argument("--out", required=True, help="output file path")
        p.add_argument(
            "--payment",
            choices=["clarke-pivot", "paper-literal", "clearing"],
            help="override the configured payment rule(s) with a single rule",
        )
        p.add_argument(
            "--clearing-variant",
            choices=list(harness.CLEARING_VARIANTS),
            help="price used by the clearing rule",
        )
        p.add_argument(
            "--compression",
            choices=list(harness.COMPRESSION_MODES),
            help="override the compression setting",
        )

    p_generate = sub.add_parser("generate", help="emit a population file")
    add_common(p_generate)

    p_run = sub.add_parser("run", help="run one scenario and write CSV")
    add_common(p_run)

    p_sweep = sub.add_parser("sweep", help="budget sweep, compression on vs off")
    add_common(p_sweep)

    p_compare = sub.add_parser("compare", help="compare payment rules")
    add_common(p_compare)

    p_verify = sub.add_parser("verify", help="run the property suites")
    p_verify.add_argument("--instances", type=int, default=300,
                          help="instances per suite (default 300)")
    p_verify.add_argument("--seed", type=int, default=2024)
    return parser


def _load_scenario(args: argparse.Namespace) -> harness.ScenarioConfig:
    if args.config:
        config = harness.load_config(args.config)
    elif args.command == "compare":
        config = harness.default_compare_config()
    else:
        config = harness.default_config()
    if args.seed is not None:
        config = replace(config, base_seed=args.seed)
    if args.payment:
        config = replace(config, payment_rules=(args.payment,))
    if args.clearing_variant:
        config = replace(config, clearing_variant=args.clearing_variant)
    if args.compression:
        config = replace(config, compression=args.compression)
    return config


def _write_outputs(rows, config: harness.ScenarioConfig, out: str) -> None:
    harness.emit_csv(rows, out)
    meta = harness.scenario_metadata(config)
    with open(out + ".meta.json", "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")
    print(f"wrote {len(rows)} rows to {out}")


def _cmd_generate(args: argparse.Namespace) -> int:
    config = _load_scenario(args)
    population = config.population
    if args.seed is not None:
        population = replace(population, seed=args.seed)
    devices = generate_population(population)
    save_population(devices, args.out)
    print(f"wrote {len(devices)} devices to {args.out}")
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    config = _load_scenario(args)
    rows = harness.run_scenario(config)
    _write_outputs(rows, config, args.out)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_scenario(args)
    if args.compression is None:
        config = replace(config, compression="both")
    rows = harness.run_scenario(config)
    _write_outputs(rows, config, args.out)
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    config = _load_scenario(args)
    if len(set(config.rule_tags())) < 2:
        config = replace(config, payment_rules=("clarke-pivot", "clearing"))
    rows = harness.compare_payment_rules(config)
    _write_outputs(rows, config, args.out)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    reports = [
        verification.check_oracle_equivalence(instances=args.instances, seed=args.seed),
        verification.check_incentive_compatibility(
            instances=max(1, args.instances // 2), seed=args.seed
        ),
        verification.check_individual_rationality(
            instances=max(1, args.instances // 2), seed=args.seed
        ),
    ]
    failed = False
    for report in reports:
        print(report.summary())
        for violation in report.violations[:10]:
            print(f"  {violation}")
        failed = failed or not report.ok
    return 1 if failed else 0


_COMMANDS = {
    "generate": _cmd_generate,
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SpectrumAuctionError as exc:
        print(json.dumps({"error": str(exc), "kind": type(exc).__name__}), file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": str(exc), "kind": "io-error"}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
