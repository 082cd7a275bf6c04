"""Bidder population: device definition, seeded generation, channel demand.

A device is single-minded: it computes the smallest channel bundle that meets
its latency requirement and bids for exactly that bundle.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, replace
from typing import Any, Callable

from .channel import LinkParams, QueueParams, channel_capacity, transmission_latency
from .compression import CompressionProfile, compressed_size_bits
from .errors import ConfigError, NoFeasibleDemandError, ParameterError

WEIGHT_TOLERANCE = 1e-9

POPULATION_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Device:
    """One IoT bidder.

    Attributes:
        id: Index of the device within its population.
        raw_size_bits: Size of the data waiting in the queue, > 0.
        queue: Queue fill parameters.
        queue_size: Number of queued packets (bookkeeping only; no formula
            currently reads it).
        link: Radio link towards the serving base station.
        weights: Relative importance (size saved, latency saved, accuracy
            kept) when valuing compression; must sum to 1.
        energy_cost_per_unit: Transmission energy price per capacity unit.
        latency_requirement_s: Upper bound the device wants on its uplink time.
        compression: Profile of the compressor the device runs, or None if it
            transmits raw data.
    """

    id: int
    raw_size_bits: float
    queue: QueueParams
    queue_size: int
    link: LinkParams
    weights: tuple[float, float, float]
    energy_cost_per_unit: float
    latency_requirement_s: float
    compression: CompressionProfile | None = None

    def __post_init__(self) -> None:
        if self.raw_size_bits <= 0 or not math.isfinite(self.raw_size_bits):
            raise ParameterError(f"raw_size_bits must be > 0, got {self.raw_size_bits!r}")
        if self.queue_size < 0:
            raise ParameterError(f"queue_size must be >= 0, got {self.queue_size!r}")
        if len(self.weights) != 3 or any(w < 0 for w in self.weights):
            raise ParameterError(f"weights must be three non-negative reals, got {self.weights!r}")
        if abs(sum(self.weights) - 1.0) > WEIGHT_TOLERANCE:
            raise ParameterError(f"weights must sum to 1, got {self.weights!r}")
        if self.energy_cost_per_unit < 0:
            raise ParameterError("energy_cost_per_unit must be >= 0")
        if self.latency_requirement_s <= 0 or not math.isfinite(self.latency_requirement_s):
            raise ParameterError("latency_requirement_s must be > 0")

    @property
    def transmit_size_bits(self) -> float:
        """Bits actually sent over the air (compressed size if compressing)."""
        return compressed_size_bits(self.raw_size_bits, self.compression)


def select_demand(device: Device, use_compression: bool) -> int:
    """Smallest channel count meeting the device's latency requirement.

    The achieved latency at the returned count never exceeds the requirement,
    and one channel less (when possible) would exceed it.

    Args:
        device: The bidder.
        use_compression: Size the demand for the compressed payload; requires
            the device to carry a compression profile.

    Raises:
        NoFeasibleDemandError: The link has zero capacity.
        ParameterError: ``use_compression`` without a compression profile.
    """
    rate = channel_capacity(device.link)
    if rate <= 0:
        raise NoFeasibleDemandError(
            f"device {device.id} has zero channel capacity; no demand is feasible"
        )
    if use_compression:
        if device.compression is None:
            raise ParameterError(f"device {device.id} has no compression profile")
        size = device.compression.ratio * device.raw_size_bits
    else:
        size = device.raw_size_bits
    t_req = device.latency_requirement_s
    channels = max(1, math.ceil(size / (rate * t_req)))
    # ceil can land one off under float rounding; settle minimality exactly.
    while channels > 1 and transmission_latency(size, rate, channels - 1) <= t_req:
        channels -= 1
    while transmission_latency(size, rate, channels) > t_req:
        channels += 1
    return channels


@dataclass(frozen=True)
class Range:
    """Closed interval sampled uniformly; ``low == high`` pins a constant."""

    low: float
    high: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            raise ConfigError(f"range bounds must be finite, got {self!r}")
        if self.low > self.high:
            raise ConfigError(f"range low must be <= high, got {self!r}")

    def sample(self, rng: random.Random) -> float:
        if self.low == self.high:
            return self.low
        return rng.uniform(self.low, self.high)

    def sample_int(self, rng: random.Random) -> int:
        if self.low == self.high:
            return int(self.low)
        return rng.randint(int(self.low), int(self.high))


def _rng_weights(rng: random.Random) -> tuple[float, float, float]:
    # Exponential draws normalised to the simplex: uniform over weight triples.
    draws = [rng.expovariate(1.0) for _ in range(3)]
    total = sum(draws)
    if total <= 0:
        return (1 / 3, 1 / 3, 1 / 3)
    w1, w2, w3 = (d / total for d in draws)
    return (w1, w2, 1.0 - w1 - w2)


@dataclass(frozen=True)
class PopulationConfig:
    """Sampling ranges for every randomized device field, plus the seed."""

    device_count: int = 15
    seed: int = 0
    raw_size_bits: Range = field(default_factory=lambda: Range(2e5, 2e6))
    fill_rate_inverse_s: Range = field(default_factory=lambda: Range(0.05, 0.5))
    queue_size: Range = field(default_factory=lambda: Range(0, 100))
    bandwidth_per_channel_hz: Range = field(default_factory=lambda: Range(1e6, 1e6))
    channel_gain: Range = field(default_factory=lambda: Range(1e-4, 1e-3))
    transmit_power_w: Range = field(default_factory=lambda: Range(0.1, 0.1))
    noise_psd: Range = field(default_factory=lambda: Range(1e-7, 1e-7))
    energy_cost_per_unit: Range = field(default_factory=lambda: Range(1e-9, 4e-8))
    latency_requirement_s: Range = field(default_factory=lambda: Range(0.01, 0.08))

    def __post_init__(self) -> None:
        if self.device_count < 1:
            raise ConfigError(f"device_count must be >= 1, got {self.device_count!r}")
        for name in ("raw_size_bits", "fill_rate_inverse_s", "bandwidth_per_channel_hz",
                     "transmit_power_w", "noise_psd", "latency_requirement_s"):
            if getattr(self, name).low <= 0:
                raise ConfigError(f"population range {name} must be strictly positive")
        if self.channel_gain.low < 0 or self.energy_cost_per_unit.low < 0:
            raise ConfigError("channel_gain and energy_cost_per_unit must be >= 0")
        if self.queue_size.low < 0:
            raise ConfigError("queue_size range must be >= 0")


def generate_population(config: PopulationConfig) -> list[Device]:
    """Draw ``config.device_count`` devices, deterministically for a given seed.

    All fields are sampled independently and uniformly over their configured
    ranges; the weight triple is sampled uniformly over the simplex.  Devices
    are created without a compression profile; scenarios attach one with
    :func:`with_compression`.
    """
    rng = random.Random(config.seed)
    devices = []
    for i in range(config.device_count):
        devices.append(
            Device(
                id=i,
                raw_size_bits=config.raw_size_bits.sample(rng),
                queue=QueueParams(config.fill_rate_inverse_s.sample(rng)),
                queue_size=config.queue_size.sample_int(rng),
                link=LinkParams(
                    bandwidth_per_channel_hz=config.bandwidth_per_channel_hz.sample(rng),
                    channel_gain=config.channel_gain.sample(rng),
                    transmit_power_w=config.transmit_power_w.sample(rng),
                    noise_psd=config.noise_psd.sample(rng),
                ),
                weights=_rng_weights(rng),
                energy_cost_per_unit=config.energy_cost_per_unit.sample(rng),
                latency_requirement_s=config.latency_requirement_s.sample(rng),
            )
        )
    return devices


def with_compression(
    devices: list[Device], profile_for: Callable[[Device], CompressionProfile]
) -> list[Device]:
    """Copies of ``devices`` with a compression profile attached to each."""
    return [replace(d, compression=profile_for(d)) for d in devices]


def device_to_dict(device: Device) -> dict:
    d: dict[str, Any] = {
        "id": device.id,
        "raw_size_bits": device.raw_size_bits,
        "fill_rate_inverse_s": device.queue.fill_rate_inverse,
        "queue_size": device.queue_size,
        "link": {
            "bandwidth_per_channel_hz": device.link.bandwidth_per_channel_hz,
            "channel_gain": device.link.channel_gain,
            "transmit_power_w": device.link.transmit_power_w,
            "noise_psd": device.link.noise_psd,
        },
        "weights": list(device.weights),
        "energy_cost_per_unit": device.energy_cost_per_unit,
        "latency_requirement_s": device.latency_requirement_s,
        "compression": None,
    }
    if device.compression is not None:
        d["compression"] = {
            "ratio": device.compression.ratio,
            "accuracy": device.compression.accuracy,
            "compute_cost": device.compression.compute_cost,
        }
    return d


def device_from_dict(data: dict) -> Device:
    comp = data.get("compression")
    return Device(
        id=int(data["id"]),
        raw_size_bits=float(data["raw_size_bits"]),
        queue=QueueParams(float(data["fill_rate_inverse_s"])),
        queue_size=int(data["queue_size"]),
        link=LinkParams(
            bandwidth_per_channel_hz=float(data["link"]["bandwidth_per_channel_hz"]),
            channel_gain=float(data["link"]["channel_gain"]),
            transmit_power_w=float(data["link"]["transmit_power_w"]),
            noise_psd=float(data["link"]["noise_psd"]),
        ),
        weights=tuple(float(w) for w in data["weights"]),
        energy_cost_per_unit=float(data["energy_cost_per_unit"]),
        latency_requirement_s=float(data["latency_requirement_s"]),
        compression=None
        if comp is None
        else CompressionProfile(
            ratio=float(comp["ratio"]),
            accuracy=float(comp["accuracy"]),
            compute_cost=float(comp["compute_cost"]),
        ),
    )


def save_population(devices: list[Device], path: str) -> None:
    """Write a population to a JSON file that :func:`load_population` recovers exactly."""
    payload = {
        "schema_version": POPULATION_SCHEMA_VERSION,
        "devices": [device_to_dict(d) for d in devices],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")


def load_population(path: str) -> list[Device]:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    if payload.get("schema_version") != POPULATION_SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported population schema_version {payload.get('schema_version')!r}"
        )
    return [device_from_dict(d) for d in payload["devices"]]
