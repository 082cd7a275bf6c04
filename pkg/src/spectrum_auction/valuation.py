"""Device-side economics: what a channel bundle is worth and what it costs.

The value of a bundle has two parts: the bundle itself, discounted by the
probability the transmission completes in time, and (for compressing devices)
the benefit of compression — bits saved, seconds saved, accuracy kept,
weighted by the device's preferences.  Costs are transmission energy plus the
compressor's compute cost.  The net value is what a truthful device bids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import channel_capacity, success_probability, transmission_latency
from .devices import Device
from .errors import ParameterError


@dataclass(frozen=True)
class ValuationBreakdown:
    """All value and cost terms for one device at one channel count.

    ``total_value = channel_value + compression_gain``,
    ``total_cost = transmission_cost + compute_cost`` and
    ``net_value = total_value - total_cost`` hold by construction.
    """

    channel_value: float
    compression_gain: float
    total_value: float
    transmission_cost: float
    compute_cost: float
    total_cost: float
    net_value: float


def channel_valuation(device: Device, channels: int) -> float:
    """Value of ``channels`` channels: the count discounted by success probability.

    The latency entering the discount is the achieved one at this allocation,
    for the payload the device actually transmits.
    """
    if channels < 1:
        raise ParameterError(f"channels must be >= 1, got {channels!r}")
    rate = channel_capacity(device.link)
    latency = transmission_latency(device.transmit_size_bits, rate, channels)
    return channels * success_probability(latency, device.queue)


def compression_gain(device: Device, channels: int, normalize: bool = False) -> float:
    """Weighted benefit of compressing before transmission.

    Sums the size reduction, the latency reduction relative to sending raw
    data over the same ``channels``, and the retained accuracy, each scaled
    by the device's weights.  Devices without a compression profile accrue no
    benefit and get 0.

    Args:
        normalize: Divide the size term by the raw size and the latency term
            by the raw-transmission latency, making all three terms unitless.
            Off by default; the raw mixed-unit sum is the reference behavior.
    """
    if device.compression is None:
        return 0.0
    if channels < 1:
        raise ParameterError(f"channels must be >= 1, got {channels!r}")
    w_size, w_latency, w_accuracy = device.weights
    rate = channel_capacity(device.link)
    raw = device.raw_size_bits
    compressed = device.transmit_size_bits
    t_compressed = transmission_latency(compressed, rate, channels)
    t_raw = transmission_latency(raw, rate, channels)
    size_term = raw - compressed
    latency_term = t_raw - t_compressed
    if normalize:
        size_term /= raw
        if t_raw > 0:
            latency_term /= t_raw
    return (
        w_size * size_term
        + w_latency * latency_term
        + w_accuracy * device.compression.accuracy
    )


def total_valuation(device: Device, channels: int, normalize: bool = False) -> ValuationBreakdown:
    """Full value/cost breakdown for ``device`` holding ``channels`` channels.

    Transmission cost is ``rate * channels * energy_cost_per_unit``; compute
    cost comes from the device's compression profile (0 when transmitting raw).
    """
    rate = channel_capacity(device.link)
    v_channel = channel_valuation(device, channels)
    v_gain = compression_gain(device, channels, normalize=normalize)
    c_trans = rate * channels * device.energy_cost_per_unit
    c_compute = 0.0 if device.compression is None else device.compression.compute_cost
    total_value = v_channel + v_gain
    total_cost = c_trans + c_compute
    breakdown = ValuationBreakdown(
        channel_value=v_channel,
        compression_gain=v_gain,
        total_value=total_value,
        transmission_cost=c_trans,
        compute_cost=c_compute,
        total_cost=total_cost,
        net_value=total_value - total_cost,
    )
    if not all(map(math.isfinite, (total_value, total_cost))):
        raise ParameterError(f"non-finite valuation for device {device.id}")
    return breakdown
