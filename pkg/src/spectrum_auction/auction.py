"""Winner determination and payment rules for the channel auction.

Bidders are single-minded: device ``i`` reports one bid ``b_i`` for exactly
``C_i`` channels.  The seller maximizes the total reported value subject to
the channel budget — a 0/1 knapsack — then charges winners under one of
three payment rules:

* ``clarke-pivot``: each winner pays the welfare loss its presence imposes on
  everyone else (truthful; the default).
* ``paper-literal``: each winner pays its own marginal contribution
  ``W* - W_without_k`` (not generally truthful; kept for comparison).
* clearing: every winner pays one uniform price, either the lowest winning
  bid or the highest losing bid.

Ties between equal-value allocations are broken toward fewer channels used,
then toward the lexicographically smallest winner id set, so the dynamic
program and the exhaustive oracle are comparable outcome-for-outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import OracleSizeError, ParameterError
from .valuation import ValuationBreakdown

PAYMENT_MODES = ("clarke-pivot", "paper-literal")
CLEARING_VARIANTS = ("lowest-winning-bid", "highest-losing-bid")

BRUTEFORCE_MAX_DEVICES = 20

AUCTION_RECORD_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class AuctionInstance:
    """Sealed bids and demands handed to the seller.

    Attributes:
        bids: Reported net value per device (finite, any sign).
        demands: Channels requested by each device, >= 1.
        budget: Total channels for sale, >= 0.
        ssp_cost: Seller's fixed service cost, subtracted from social welfare.
    """

    bids: tuple[float, ...]
    demands: tuple[int, ...]
    budget: int
    ssp_cost: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "bids", tuple(float(b) for b in self.bids))
        object.__setattr__(self, "demands", tuple(int(c) for c in self.demands))
        if len(self.bids) != len(self.demands):
            raise ParameterError(
                f"{len(self.bids)} bids vs {len(self.demands)} demands"
            )
        if any(not math.isfinite(b) for b in self.bids):
            raise ParameterError("bids must be finite")
        if any(c < 1 for c in self.demands):
            raise ParameterError("every demand must be >= 1 channel")
        if self.budget < 0 or not isinstance(self.budget, int):
            raise ParameterError(f"budget must be a non-negative integer, got {self.budget!r}")
        if not math.isfinite(self.ssp_cost) or self.ssp_cost < 0:
            raise ParameterError(f"ssp_cost must be >= 0 and finite, got {self.ssp_cost!r}")

    @property
    def size(self) -> int:
        return len(self.bids)


@dataclass(frozen=True)
class WdpSolution:
    """Winner set maximizing total reported value under the channel budget.

    ``objective`` is the winning-bid sum alone; ``social_welfare`` subtracts
    the seller's fixed cost.  The winner set never depends on that constant.
    """

    allocation: tuple[int, ...]
    winners: tuple[int, ...]
    objective: float
    social_welfare: float
    channels_used: int


@dataclass(frozen=True)
class AuctionOutcome:
    """Allocation, payments and settled utilities of one auction."""

    allocation: tuple[int, ...]
    payments: tuple[float, ...]
    social_welfare: float
    device_utilities: tuple[float, ...]
    ssp_utility: float
    payment_rule: str


def _solution_from_winners(
    instance: AuctionInstance, winners: tuple[int, ...]
) -> WdpSolution:
    # Objective summed in increasing id order, matching the DP's accumulation,
    # so solver and oracle agree bit-for-bit on the same winner set.
    objective = 0.0
    for i in winners:
        objective += instance.bids[i]
    winner_set = set(winners)
    allocation = tuple(1 if i in winner_set else 0 for i in range(instance.size))
    return WdpSolution(
        allocation=allocation,
        winners=winners,
        objective=objective,
        social_welfare=objective - instance.ssp_cost,
        channels_used=sum(instance.demands[i] for i in winners),
    )


def solve_wdp(instance: AuctionInstance) -> WdpSolution:
    """Exact winner determination via dynamic programming over the budget.

    O(N * B) over devices and channel budget.  Devices with non-positive bids
    can only lower the objective and are never selected.  Deterministic under
    the documented tie-break (max value, then fewest channels, then smallest
    winner id set).
    """
    budget = instance.budget
    # dp cell w: best (value, winner tuple) using exactly w channels.
    values: list[float] = [0.0] * (budget + 1)
    winners: list[tuple[int, ...] | None] = [None] * (budget + 1)
    winners[0] = ()
    for i in range(instance.size):
        bid = instance.bids[i]
        demand = instance.demands[i]
        if bid <= 0.0 or demand > budget:
            continue
        for w in range(budget, demand - 1, -1):
            base = winners[w - demand]
            if base is None:
                continue
            candidate_value = values[w - demand] + bid
            if winners[w] is None or candidate_value > values[w]:
                values[w] = candidate_value
                winners[w] = base + (i,)
            elif candidate_value == values[w]:
                candidate = base + (i,)
                if candidate < winners[w]:
                    winners[w] = candidate
    best_w = 0
    for w in range(1, budget + 1):
        if winners[w] is not None and values[w] > values[best_w]:
            best_w = w
    return _solution_from_winners(instance, winners[best_w])


_subset_bits_cache: dict[int, np.ndarray] = {}


def _subset_bits(n: int) -> np.ndarray:
    """(2^n, n) 0/1 matrix whose row k is the binary expansion of k."""
    if n not in _subset_bits_cache:
        masks = np.arange(1 << n, dtype=np.int64)
        _subset_bits_cache[n] = ((masks[:, None] >> np.arange(n)) & 1).astype(np.float64)
    return _subset_bits_cache[n]


def wdp_bruteforce(instance: AuctionInstance) -> WdpSolution:
    """Exhaustive enumeration of all 2^N allocations; the test oracle for solve_wdp.

    Applies the same tie-break as the dynamic program.  Guarded to
    N <= 20 devices.
    """
    n = instance.size
    if n > BRUTEFORCE_MAX_DEVICES:
        raise OracleSizeError(
            f"brute force capped at {BRUTEFORCE_MAX_DEVICES} devices, got {n}"
        )
    if n == 0:
        return _solution_from_winners(instance, ())
    bits = _subset_bits(n)
    subset_values = bits @ np.asarray(instance.bids)
    subset_weights = bits @ np.asarray(instance.demands, dtype=np.float64)
    feasible = subset_weights <= instance.budget
    best_value = subset_values[feasible].max()
    candidates = np.flatnonzero(feasible & (subset_values == best_value))
    best: tuple[float, tuple[int, ...]] | None = None
    for mask in candidates.tolist():
        members = tuple(i for i in range(n) if mask >> i & 1)
        key = (subset_weights[mask], members)
        if best is None or key < best:
            best = key
    return _solution_from_winners(instance, best[1])


def _without_device(instance: AuctionInstance, device: int) -> AuctionInstance:
    # Zeroing the bid removes the device: non-positive bids are never selected.
    bids = list(instance.bids)
    bids[device] = 0.0
    return AuctionInstance(tuple(bids), instance.demands, instance.budget, instance.ssp_cost)


def vcg_payments(
    instance: AuctionInstance,
    mode: str = "clarke-pivot",
    solution: WdpSolution | None = None,
) -> tuple[float, ...]:
    """Per-device payments under the VCG family; losers pay 0.

    ``clarke-pivot`` charges winner ``k`` the harm it causes the others:
    ``W_without_k - (W* - b_k)``.  ``paper-literal`` charges the winner's own
    marginal contribution ``W* - W_without_k`` instead.  Both differences are
    taken over winning-bid sums, so the seller's fixed cost cancels.

    Args:
        solution: Winner determination for the full instance, if already solved.
    """
    if mode not in PAYMENT_MODES:
        raise ParameterError(f"unknown payment mode {mode!r}")
    if solution is None:
        solution = solve_wdp(instance)
    payments = [0.0] * instance.size
    for k in solution.winners:
        welfare_without_k = solve_wdp(_without_device(instance, k)).objective
        if mode == "clarke-pivot":
            payments[k] = welfare_without_k - (solution.objective - instance.bids[k])
        else:
            payments[k] = solution.objective - welfare_without_k
    return tuple(payments)


def clearing_payments(
    instance: AuctionInstance,
    variant: str = "lowest-winning-bid",
    solution: WdpSolution | None = None,
) -> tuple[float, ...]:
    """Uniform-price payments: all winners pay the same price, losers pay 0.

    The price is the lowest bid among winners, or the highest bid among
    losers (0 when nobody loses), depending on ``variant``.
    """
    if variant not in CLEARING_VARIANTS:
        raise ParameterError(f"unknown clearing variant {variant!r}")
    if solution is None:
        solution = solve_wdp(instance)
    winner_set = set(solution.winners)
    if not winner_set:
        return (0.0,) * instance.size
    if variant == "lowest-winning-bid":
        price = min(instance.bids[i] for i in winner_set)
    else:
        losing_bids = [b for i, b in enumerate(instance.bids) if i not in winner_set]
        price = max(losing_bids) if losing_bids else 0.0
    return tuple(price if i in winner_set else 0.0 for i in range(instance.size))


def settle(
    instance: AuctionInstance,
    allocation: Sequence[int],
    valuations: Sequence[ValuationBreakdown],
    payments: Sequence[float],
    payment_rule: str = "",
) -> AuctionOutcome:
    """Combine allocation, true valuations and payments into utilities.

    A winner's utility is value minus payment minus cost; losers get exactly
    0.  The seller's utility is the payments collected minus its fixed cost.
    Social welfare is the winners' net value minus the seller's fixed cost,
    independent of the payment rule.
    """
    n = instance.size
    if not (len(allocation) == len(valuations) == len(payments) == n):
        raise ParameterError(
            "allocation, valuations and payments must all match the instance size"
        )
    if any(a not in (0, 1) for a in allocation):
        raise ParameterError("allocation entries must be 0 or 1")
    if sum(a * c for a, c in zip(allocation, instance.demands)) > instance.budget:
        raise ParameterError("allocation exceeds the channel budget")
    utilities = []
    ssp_income = 0.0
    welfare = 0.0
    for won, breakdown, payment in zip(allocation, valuations, payments):
        if won:
            utilities.append(breakdown.net_value - payment)
            ssp_income += payment
            welfare += breakdown.net_value
        else:
            if payment != 0.0:
                raise ParameterError("losers must pay exactly 0")
            utilities.append(0.0)
    return AuctionOutcome(
        allocation=tuple(int(a) for a in allocation),
        payments=tuple(float(p) for p in payments),
        social_welfare=welfare - instance.ssp_cost,
        device_utilities=tuple(utilities),
        ssp_utility=ssp_income - instance.ssp_cost,
        payment_rule=payment_rule,
    )


def instance_to_record(instance: AuctionInstance) -> dict[str, Any]:
    return {
        "schema_version": AUCTION_RECORD_SCHEMA_VERSION,
        "bids": list(instance.bids),
        "demands": list(instance.demands),
        "budget": instance.budget,
        "ssp_cost": instance.ssp_cost,
    }


def instance_from_record(record: dict[str, Any]) -> AuctionInstance:
    return AuctionInstance(
        bids=tuple(record["bids"]),
        demands=tuple(record["demands"]),
        budget=int(record["budget"]),
        ssp_cost=float(record.get("ssp_cost", 0.0)),
    )


def outcome_to_record(outcome: AuctionOutcome) -> dict[str, Any]:
    return {
        "schema_version": AUCTION_RECORD_SCHEMA_VERSION,
        "allocation": list(outcome.allocation),
        "payments": list(outcome.payments),
        "social_welfare": outcome.social_welfare,
        "device_utilities": list(outcome.device_utilities),
        "ssp_utility": outcome.ssp_utility,
        "payment_rule": outcome.payment_rule,
    }


def outcome_from_record(record: dict[str, Any]) -> AuctionOutcome:
    return AuctionOutcome(
        allocation=tuple(int(a) for a in record["allocation"]),
        payments=tuple(float(p) for p in record["payments"]),
        social_welfare=float(record["social_welfare"]),
        device_utilities=tuple(float(u) for u in record["device_utilities"]),
        ssp_utility=float(record["ssp_utility"]),
        payment_rule=str(record["payment_rule"]),
    )
