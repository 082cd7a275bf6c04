"""Scenario configuration, the two comparative experiments, and CSV emission.

A scenario sweeps seeds x channel budgets x compression settings x payment
rules.  Each cell runs one full auction round: generate the population,
optionally compress, size demands, value bundles, bid truthfully, determine
winners, charge, settle.  Rows come out in a deterministic sort order so a
scenario always produces byte-identical CSV.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from typing import Any, Iterable, Sequence

from .auction import (
    CLEARING_VARIANTS,
    PAYMENT_MODES,
    AuctionInstance,
    AuctionOutcome,
    WdpSolution,
    clearing_payments,
    settle,
    solve_wdp,
    vcg_payments,
)
from .channel import CAPACITY_LOG_BASE, channel_capacity, transmission_latency
from .compression import RateAccuracyCurve, compress
from .devices import (
    Device,
    PopulationConfig,
    Range,
    generate_population,
    select_demand,
    with_compression,
)
from .errors import ConfigError
from .valuation import total_valuation

CONFIG_SCHEMA_VERSION = 1

COMPRESSION_MODES = ("on", "off", "both")
PAYMENT_RULES = PAYMENT_MODES + ("clearing",)

CSV_COLUMNS = (
    "budget",
    "compression",
    "payment_rule",
    "winner_count",
    "social_welfare",
    "total_device_utility",
    "ssp_utility",
    "mean_winner_latency_s",
    "seed",
)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one experiment needs; see README for the file schema."""

    population: PopulationConfig
    budgets: tuple[int, ...] = (5, 10, 15, 20, 25, 30)
    compression: str = "both"
    payment_rules: tuple[str, ...] = ("clarke-pivot",)
    clearing_variant: str = "lowest-winning-bid"
    compression_ratio: float = 0.1
    curve: RateAccuracyCurve = RateAccuracyCurve.default()
    compression_cost_coeff: float = 0.02
    ssp_cost: float = 0.0
    normalize_gain_terms: bool = False
    replications: int = 100
    base_seed: int = 0

    def __post_init__(self) -> None:
        if not self.budgets:
            raise ConfigError("budgets must be a non-empty list")
        if any(b < 0 for b in self.budgets):
            raise ConfigError("budgets must be >= 0")
        if self.compression not in COMPRESSION_MODES:
            raise ConfigError(f"compression must be one of {COMPRESSION_MODES}")
        if not self.payment_rules:
            raise ConfigError("payment_rules must be non-empty")
        for rule in self.payment_rules:
            if rule not in PAYMENT_RULES:
                raise ConfigError(f"unknown payment rule {rule!r}")
        if self.clearing_variant not in CLEARING_VARIANTS:
            raise ConfigError(f"clearing_variant must be one of {CLEARING_VARIANTS}")
        if not 0.0 < self.compression_ratio <= 1.0:
            raise ConfigError("compression_ratio must be in (0, 1]")
        if self.compression_cost_coeff < 0:
            raise ConfigError("compression_cost_coeff must be >= 0")
        if self.ssp_cost < 0:
            raise ConfigError("ssp_cost must be >= 0")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")

    def seeds(self) -> list[int]:
        return [self.base_seed + k for k in range(self.replications)]

    def rule_tags(self) -> list[str]:
        """Payment rules expanded with the clearing variant, as written to CSV."""
        return [
            f"clearing-{self.clearing_variant}" if rule == "clearing" else rule
            for rule in self.payment_rules
        ]


@dataclass(frozen=True)
class MetricsRow:
    """One auction's aggregate metrics; one CSV line."""

    budget: int
    compression: str
    payment_rule: str
    winner_count: int
    social_welfare: float
    total_device_utility: float
    ssp_utility: float
    mean_winner_latency_s: float
    seed: int


@dataclass(frozen=True)
class AuctionRound:
    """A solved auction for one (population, compression, budget) cell."""

    devices: list[Device]
    demands: tuple[int, ...]
    instance: AuctionInstance
    solution: WdpSolution

    def outcome(self, rule_tag: str, breakdowns: Sequence[Any]) -> AuctionOutcome:
        if rule_tag in PAYMENT_MODES:
            payments = vcg_payments(self.instance, rule_tag, self.solution)
        elif rule_tag.startswith("clearing-"):
            payments = clearing_payments(
                self.instance, rule_tag.removeprefix("clearing-"), self.solution
            )
        else:
            raise ConfigError(f"unknown payment rule tag {rule_tag!r}")
        return settle(self.instance, self.solution.allocation, breakdowns, payments, rule_tag)


def _apply_compression(devices: list[Device], config: ScenarioConfig) -> list[Device]:
    return with_compression(
        devices,
        lambda d: compress(
            d.raw_size_bits,
            config.curve,
            config.compression_ratio,
            config.compression_cost_coeff,
        ),
    )


def _mean_winner_latency(devices: list[Device], demands, allocation) -> float:
    latencies = [
        transmission_latency(d.transmit_size_bits, channel_capacity(d.link), c)
        for d, c, won in zip(devices, demands, allocation)
        if won
    ]
    if not latencies:
        return 0.0
    return sum(latencies) / len(latencies)


def run_scenario(config: ScenarioConfig) -> list[MetricsRow]:
    """Run the full grid of the scenario and return its metric rows.

    For every (seed, compression setting, budget, payment rule): the winner
    set is solved once per budget and shared across payment rules, so rules
    differ only in payments and utilities.  Output order is sorted by
    (seed, budget, compression, payment rule) and is reproducible bit-for-bit.
    """
    modes = ["off", "on"] if config.compression == "both" else [config.compression]
    rows: list[MetricsRow] = []
    for seed in config.seeds():
        base_devices = generate_population(replace(config.population, seed=seed))
        for mode in modes:
            devices = _apply_compression(base_devices, config) if mode == "on" else base_devices
            demands = tuple(select_demand(d, mode == "on") for d in devices)
            breakdowns = [
                total_valuation(d, c, normalize=config.normalize_gain_terms)
                for d, c in zip(devices, demands)
            ]
            bids = tuple(b.net_value for b in breakdowns)
            for budget in config.budgets:
                instance = AuctionInstance(bids, demands, budget, config.ssp_cost)
                round_ = AuctionRound(devices, demands, instance, solve_wdp(instance))
                for rule_tag in config.rule_tags():
                    outcome = round_.outcome(rule_tag, breakdowns)
                    rows.append(
                        MetricsRow(
                            budget=budget,
                            compression=mode,
                            payment_rule=rule_tag,
                            winner_count=sum(outcome.allocation),
                            social_welfare=outcome.social_welfare,
                            total_device_utility=sum(outcome.device_utilities),
                            ssp_utility=outcome.ssp_utility,
                            mean_winner_latency_s=_mean_winner_latency(
                                devices, demands, outcome.allocation
                            ),
                            seed=seed,
                        )
                    )
    rows.sort(key=lambda r: (r.seed, r.budget, r.compression, r.payment_rule))
    return rows


def compare_payment_rules(config: ScenarioConfig) -> list[MetricsRow]:
    """Fig.-4-style comparison: same allocations, different payment rules."""
    if len(set(config.rule_tags())) < 2:
        raise ConfigError("payment-rule comparison needs at least two distinct rules")
    return run_scenario(config)


def emit_csv(rows: Iterable[MetricsRow], path: str) -> None:
    """Write rows as CSV; floats use repr so parsing recovers them exactly."""
    rows = list(rows)
    if not rows:
        raise ConfigError("refusing to emit an empty metrics CSV")
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    row.budget,
                    row.compression,
                    row.payment_rule,
                    row.winner_count,
                    repr(row.social_welfare),
                    repr(row.total_device_utility),
                    repr(row.ssp_utility),
                    repr(row.mean_winner_latency_s),
                    row.seed,
                ]
            )


def parse_metrics_csv(path: str) -> list[MetricsRow]:
    """Inverse of :func:`emit_csv`."""
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ConfigError(f"unexpected CSV header {header!r}")
        rows = []
        for record in reader:
            rows.append(
                MetricsRow(
                    budget=int(record[0]),
                    compression=record[1],
                    payment_rule=record[2],
                    winner_count=int(record[3]),
                    social_welfare=float(record[4]),
                    total_device_utility=float(record[5]),
                    ssp_utility=float(record[6]),
                    mean_winner_latency_s=float(record[7]),
                    seed=int(record[8]),
                )
            )
    return rows


def scenario_metadata(config: ScenarioConfig) -> dict[str, Any]:
    """Conventions a consumer needs to interpret the CSV."""
    return {
        "schema_version": CONFIG_SCHEMA_VERSION,
        "capacity_log_base": CAPACITY_LOG_BASE,
        "ssp_cost_in_social_welfare": "subtracted",
        "clearing_variant": config.clearing_variant,
        "columns": list(CSV_COLUMNS),
    }


def _range_from_json(value: Any, name: str) -> Range:
    if isinstance(value, (int, float)):
        return Range(float(value), float(value))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Range(float(value[0]), float(value[1]))
    raise ConfigError(f"{name}: expected a number or [low, high], got {value!r}")


_POPULATION_RANGE_FIELDS = (
    "raw_size_bits",
    "fill_rate_inverse_s",
    "queue_size",
    "bandwidth_per_channel_hz",
    "channel_gain",
    "transmit_power_w",
    "noise_psd",
    "energy_cost_per_unit",
    "latency_requirement_s",
)


def population_config_from_dict(data: dict[str, Any]) -> PopulationConfig:
    kwargs: dict[str, Any] = {}
    for key, value in data.items():
        if key == "device_count":
            kwargs["device_count"] = int(value)
        elif key == "seed":
            kwargs["seed"] = int(value)
        elif key in _POPULATION_RANGE_FIELDS:
            kwargs[key] = _range_from_json(value, f"population.{key}")
        else:
            raise ConfigError(f"unknown population field {key!r}")
    return PopulationConfig(**kwargs)


def scenario_config_from_dict(data: dict[str, Any]) -> ScenarioConfig:
    if data.get("schema_version") != CONFIG_SCHEMA_VERSION:
        raise ConfigError(
            f"config schema_version must be {CONFIG_SCHEMA_VERSION}, "
            f"got {data.get('schema_version')!r}"
        )
    known = {
        "schema_version",
        "population",
        "budgets",
        "compression",
        "payment_rules",
        "clearing_variant",
        "compression_ratio",
        "curve",
        "compression_cost_coeff",
        "ssp_cost",
        "normalize_gain_terms",
        "replications",
        "base_seed",
    }
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    kwargs: dict[str, Any] = {
        "population": population_config_from_dict(data.get("population", {})),
    }
    if "budgets" in data:
        kwargs["budgets"] = tuple(int(b) for b in data["budgets"])
    if "compression" in data:
        kwargs["compression"] = str(data["compression"])
    if "payment_rules" in data:
        kwargs["payment_rules"] = tuple(str(r) for r in data["payment_rules"])
    if "clearing_variant" in data:
        kwargs["clearing_variant"] = str(data["clearing_variant"])
    if "compression_ratio" in data:
        kwargs["compression_ratio"] = float(data["compression_ratio"])
    if "curve" in data:
        kwargs["curve"] = RateAccuracyCurve(tuple((float(r), float(a)) for r, a in data["curve"]))
    if "compression_cost_coeff" in data:
        kwargs["compression_cost_coeff"] = float(data["compression_cost_coeff"])
    if "ssp_cost" in data:
        kwargs["ssp_cost"] = float(data["ssp_cost"])
    if "normalize_gain_terms" in data:
        kwargs["normalize_gain_terms"] = bool(data["normalize_gain_terms"])
    if "replications" in data:
        kwargs["replications"] = int(data["replications"])
    if "base_seed" in data:
        kwargs["base_seed"] = int(data["base_seed"])
    try:
        return ScenarioConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> ScenarioConfig:
    """Load a scenario config from a JSON document."""
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return scenario_config_from_dict(data)


def default_config() -> ScenarioConfig:
    """Built-in defaults used when no config file is given."""
    return ScenarioConfig(population=PopulationConfig())


def default_compare_config() -> ScenarioConfig:
    """Defaults for the payment-rule comparison: contested budgets, both rules."""
    return ScenarioConfig(
        population=PopulationConfig(),
        budgets=(8, 10, 12),
        compression="on",
        payment_rules=("clarke-pivot", "clearing"),
        clearing_variant="lowest-winning-bid",
    )
