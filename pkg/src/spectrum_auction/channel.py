"""Uplink channel model: Shannon capacity, transmission latency, success probability.

A device transmitting a payload of ``d`` bits over ``C`` parallel channels of
per-channel capacity ``r`` finishes after ``d / (r * C)`` seconds.  The data
queue behind the radio fills at a constant rate, so the probability that the
transmission completes before the queue overflows decays exponentially with
the transmission time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateChannelError, ParameterError

# Capacity is reported in bits/second, i.e. the Shannon formula is evaluated
# with a base-2 logarithm.  Exported so experiment outputs can record it.
CAPACITY_LOG_BASE = 2.0


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ParameterError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class LinkParams:
    """Radio parameters of one device-to-base-station link.

    Attributes:
        bandwidth_per_channel_hz: Bandwidth of a single channel (Hz), > 0.
        channel_gain: Power gain of the link, >= 0 (0 means no signal).
        transmit_power_w: Device transmit power (W), > 0.
        noise_psd: Noise power spectral density at the receiver, > 0.
    """

    bandwidth_per_channel_hz: float
    channel_gain: float
    transmit_power_w: float
    noise_psd: float

    def __post_init__(self) -> None:
        for name in ("bandwidth_per_channel_hz", "transmit_power_w", "noise_psd"):
            value = getattr(self, name)
            _require_finite(name, value)
            if value <= 0:
                raise ParameterError(f"{name} must be > 0, got {value!r}")
        _require_finite("channel_gain", self.channel_gain)
        if self.channel_gain < 0:
            raise ParameterError(f"channel_gain must be >= 0, got {self.channel_gain!r}")


@dataclass(frozen=True)
class QueueParams:
    """Data-queue parameters: the queue fills once every ``fill_rate_inverse`` seconds."""

    fill_rate_inverse: float

    def __post_init__(self) -> None:
        _require_finite("fill_rate_inverse", self.fill_rate_inverse)
        if self.fill_rate_inverse <= 0:
            raise ParameterError(
                f"fill_rate_inverse must be > 0, got {self.fill_rate_inverse!r}"
            )


class NoTransmission:
    """Marker for 'no channels allocated': latency is unbounded, not a number.

    Kept as a singleton (:data:`NO_TRANSMISSION`) so it can be passed to
    :func:`success_probability`, which maps it to probability 0, without
    letting infinities leak into valuation arithmetic.
    """

    _instance: "NoTransmission | None" = None

    def __new__(cls) -> "NoTransmission":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NO_TRANSMISSION"


NO_TRANSMISSION = NoTransmission()


def channel_capacity(link: LinkParams) -> float:
    """Achievable rate of one channel, in bits/second.

    Computes ``M * log2(1 + g * P / N0)`` for bandwidth ``M``, gain ``g``,
    transmit power ``P`` and noise PSD ``N0``.  Zero iff the gain is zero.
    """
    snr = link.channel_gain * link.transmit_power_w / link.noise_psd
    return link.bandwidth_per_channel_hz * math.log2(1.0 + snr)


def transmission_latency(
    compressed_size_bits: float, rate: float, channels: int
) -> float:
    """Uplink transmission time, in seconds, of a payload over ``channels`` channels.

    Args:
        compressed_size_bits: Payload size actually transmitted, >= 0.
        rate: Per-channel capacity in bits/second, > 0.
        channels: Number of allocated channels, >= 1.

    Raises:
        DegenerateChannelError: If ``channels`` is 0 or ``rate`` is 0; use
            :data:`NO_TRANSMISSION` to represent the unallocated case instead.
    """
    _require_finite("compressed_size_bits", compressed_size_bits)
    if compressed_size_bits < 0:
        raise ParameterError(f"payload size must be >= 0, got {compressed_size_bits!r}")
    if channels == 0 or rate == 0:
        raise DegenerateChannelError(
            "latency is undefined for zero channels or a zero-rate link"
        )
    if channels < 0 or not isinstance(channels, int):
        raise ParameterError(f"channels must be a positive integer, got {channels!r}")
    if not math.isfinite(rate) or rate < 0:
        raise ParameterError(f"rate must be positive and finite, got {rate!r}")
    return compressed_size_bits / (rate * channels)


def success_probability(
    latency: float | NoTransmission, queue: QueueParams
) -> float:
    """Probability that a transmission of duration ``latency`` succeeds.

    Returns ``exp(-T / lambda)``: 1 for an instantaneous transfer, decaying as
    the transfer time grows relative to the queue fill interval ``lambda``.
    A :data:`NO_TRANSMISSION` latency yields probability 0.
    """
    if isinstance(latency, NoTransmission):
        return 0.0
    _require_finite("latency", latency)
    if latency < 0:
        raise ParameterError(f"latency must be >= 0, got {latency!r}")
    return math.exp(-latency / queue.fill_rate_inverse)
