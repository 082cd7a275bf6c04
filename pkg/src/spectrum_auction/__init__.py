"""Compression-aware spectrum auction simulator.

Devices compress their payloads with a modeled autoencoder, size their
channel demands to a latency requirement, and bid their net value; the
seller solves a knapsack for the welfare-maximizing winner set and charges
VCG (Clarke pivot) or uniform clearing prices.
"""

from .auction import (
    AuctionInstance,
    AuctionOutcome,
    WdpSolution,
    clearing_payments,
    settle,
    solve_wdp,
    vcg_payments,
    wdp_bruteforce,
)
from .channel import (
    NO_TRANSMISSION,
    LinkParams,
    QueueParams,
    channel_capacity,
    success_probability,
    transmission_latency,
)
from .compression import CompressionProfile, RateAccuracyCurve, compress
from .devices import Device, PopulationConfig, Range, generate_population, select_demand
from .harness import (
    MetricsRow,
    ScenarioConfig,
    compare_payment_rules,
    emit_csv,
    load_config,
    parse_metrics_csv,
    run_scenario,
)
from .valuation import (
    ValuationBreakdown,
    channel_valuation,
    compression_gain,
    total_valuation,
)

__all__ = [
    "AuctionInstance",
    "AuctionOutcome",
    "CompressionProfile",
    "Device",
    "LinkParams",
    "MetricsRow",
    "NO_TRANSMISSION",
    "PopulationConfig",
    "QueueParams",
    "Range",
    "RateAccuracyCurve",
    "ScenarioConfig",
    "ValuationBreakdown",
    "WdpSolution",
    "channel_capacity",
    "channel_valuation",
    "clearing_payments",
    "compare_payment_rules",
    "compress",
    "compression_gain",
    "emit_csv",
    "generate_population",
    "load_config",
    "parse_metrics_csv",
    "run_scenario",
    "select_demand",
    "settle",
    "solve_wdp",
    "success_probability",
    "total_valuation",
    "transmission_latency",
    "vcg_payments",
    "wdp_bruteforce",
]

__version__ = "0.1.0"
