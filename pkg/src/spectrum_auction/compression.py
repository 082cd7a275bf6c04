"""Parametric stand-in for a learned autoencoder compressor.

The encoder/decoder pair is treated as a black box described by a
rate-accuracy curve: for a chosen compression ratio it reports how much of
the task-relevant information survives decoding.  Compressing never produces
a larger payload, and keeping more of the payload never hurts accuracy.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

from .errors import ParameterError

INTERPOLATION_RULES = ("linear",)

# Plausible default shape; scenario configs are expected to override it.
DEFAULT_CURVE_ANCHORS = ((0.05, 0.90), (0.1, 0.95), (0.5, 0.99), (1.0, 1.0))


@dataclass(frozen=True)
class CompressionProfile:
    """Outcome of compressing one payload.

    Attributes:
        ratio: Compressed size divided by raw size, in (0, 1].
        accuracy: Score in [0, 1] for the information retained after decoding.
        compute_cost: Cost of running the compressor, in payment units, >= 0.
    """

    ratio: float
    accuracy: float
    compute_cost: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.ratio) and 0.0 < self.ratio <= 1.0):
            raise ParameterError(f"ratio must be in (0, 1], got {self.ratio!r}")
        if not (math.isfinite(self.accuracy) and 0.0 <= self.accuracy <= 1.0):
            raise ParameterError(f"accuracy must be in [0, 1], got {self.accuracy!r}")
        if not (math.isfinite(self.compute_cost) and self.compute_cost >= 0.0):
            raise ParameterError(f"compute_cost must be >= 0, got {self.compute_cost!r}")
        if self.ratio == 1.0 and (self.accuracy != 1.0 or self.compute_cost != 0.0):
            raise ParameterError(
                "ratio 1.0 is the identity profile: accuracy must be 1 and cost 0"
            )


@dataclass(frozen=True)
class RateAccuracyCurve:
    """Anchor points of the achievable (ratio, accuracy) trade-off.

    Anchors must have strictly increasing ratios in (0, 1], non-decreasing
    accuracies, and end at the identity point (1.0, 1.0).  Accuracy between
    anchors is interpolated; only the "linear" rule is currently defined.
    """

    anchors: tuple[tuple[float, float], ...]
    interpolation: str = "linear"

    def __post_init__(self) -> None:
        if self.interpolation not in INTERPOLATION_RULES:
            raise ParameterError(f"unknown interpolation rule {self.interpolation!r}")
        if not self.anchors:
            raise ParameterError("curve needs at least the (1.0, 1.0) anchor")
        anchors = tuple((float(r), float(a)) for r, a in self.anchors)
        object.__setattr__(self, "anchors", anchors)
        prev_ratio, prev_acc = 0.0, None
        for ratio, acc in anchors:
            if not (math.isfinite(ratio) and 0.0 < ratio <= 1.0):
                raise ParameterError(f"anchor ratio must be in (0, 1], got {ratio!r}")
            if ratio <= prev_ratio:
                raise ParameterError("anchor ratios must be strictly increasing")
            if not (math.isfinite(acc) and 0.0 <= acc <= 1.0):
                raise ParameterError(f"anchor accuracy must be in [0, 1], got {acc!r}")
            if prev_acc is not None and acc < prev_acc:
                raise ParameterError("anchor accuracies must be non-decreasing")
            prev_ratio, prev_acc = ratio, acc
        if anchors[-1] != (1.0, 1.0):
            raise ParameterError("curve must end at the identity anchor (1.0, 1.0)")

    @classmethod
    def default(cls) -> "RateAccuracyCurve":
        return cls(DEFAULT_CURVE_ANCHORS)

    @property
    def min_ratio(self) -> float:
        return self.anchors[0][0]

    def accuracy_at(self, ratio: float) -> float:
        """Interpolated accuracy at ``ratio``; defined on [min anchor ratio, 1]."""
        if not (math.isfinite(ratio) and 0.0 < ratio <= 1.0):
            raise ParameterError(f"ratio must be in (0, 1], got {ratio!r}")
        if ratio < self.min_ratio:
            raise ParameterError(
                f"ratio {ratio!r} below the curve's smallest anchor {self.min_ratio!r}"
            )
        ratios = [r for r, _ in self.anchors]
        idx = bisect_left(ratios, ratio)
        if self.anchors[idx][0] == ratio:
            return self.anchors[idx][1]
        r_lo, a_lo = self.anchors[idx - 1]
        r_hi, a_hi = self.anchors[idx]
        t = (ratio - r_lo) / (r_hi - r_lo)
        return a_lo + t * (a_hi - a_lo)


def compress(
    raw_size_bits: float,
    curve: RateAccuracyCurve,
    ratio: float,
    cost_coeff: float = 0.0,
) -> CompressionProfile:
    """Compress a payload of ``raw_size_bits`` down to ``ratio`` of its size.

    The compute cost is ``cost_coeff * raw_size_bits * (1 - ratio)``: it
    vanishes when nothing is compressed and grows with the work done.

    Args:
        raw_size_bits: Raw payload size, > 0.
        curve: Rate-accuracy trade-off achievable by the compressor.
        ratio: Target size ratio, within the curve's domain.
        cost_coeff: Cost per bit of size reduction, >= 0.

    Returns:
        The profile ``(ratio, accuracy, compute_cost)``; the compressed size
        itself is ``ratio * raw_size_bits``.
    """
    if not (math.isfinite(raw_size_bits) and raw_size_bits > 0):
        raise ParameterError(f"raw_size_bits must be > 0, got {raw_size_bits!r}")
    if not (math.isfinite(cost_coeff) and cost_coeff >= 0):
        raise ParameterError(f"cost_coeff must be >= 0, got {cost_coeff!r}")
    accuracy = curve.accuracy_at(ratio)
    cost = cost_coeff * raw_size_bits * (1.0 - ratio)
    return CompressionProfile(ratio=ratio, accuracy=accuracy, compute_cost=cost)


def compressed_size_bits(raw_size_bits: float, profile: CompressionProfile | None) -> float:
    """Payload size actually transmitted: ``ratio * raw`` or the raw size itself."""
    if profile is None:
        return raw_size_bits
    return profile.ratio * raw_size_bits
