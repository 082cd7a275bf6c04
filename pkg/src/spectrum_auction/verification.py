"""Randomized property suites: solver-vs-oracle equivalence, truthfulness, rationality.

These checks back the ``verify`` CLI subcommand and the acceptance tests.
Each suite draws seeded random instances, so a report is reproducible from
its seed, and returns the violations it found rather than raising.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .auction import AuctionInstance, solve_wdp, vcg_payments, wdp_bruteforce

# Truthful bids are perturbed by these relative amounts, both up and down.
MISREPORT_FACTORS = (0.1, 0.3, 0.5, 0.7, 0.9)

UTILITY_TOLERANCE = 1e-9


@dataclass
class CheckReport:
    """Outcome of one property suite."""

    name: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        status = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        return f"{self.name}: {self.checked} checks, {status}"


def random_instance(
    rng: random.Random,
    max_devices: int = 15,
    max_budget: int = 50,
    integer_bids: bool | None = None,
) -> AuctionInstance:
    """One random auction instance.

    Bid scales vary across instances; roughly a quarter use integer bids so
    exact value ties (and the tie-break rules) actually get exercised.
    A small fraction of bids is negative.
    """
    n = rng.randint(1, max_devices)
    budget = rng.randint(0, max_budget)
    if integer_bids is None:
        integer_bids = rng.random() < 0.25
    scale = 10.0 ** rng.randint(0, 3)
    bids = []
    for _ in range(n):
        value = rng.uniform(0.0, scale)
        if rng.random() < 0.05:
            value = -rng.uniform(0.0, scale / 10)
        bids.append(float(round(value)) if integer_bids else value)
    demands = [rng.randint(1, max(1, max_budget // 3)) for _ in range(n)]
    return AuctionInstance(tuple(bids), tuple(demands), budget)


def check_oracle_equivalence(
    instances: int = 1000,
    seed: int = 2024,
    max_devices: int = 15,
    max_budget: int = 50,
) -> CheckReport:
    """Dynamic program vs exhaustive enumeration: identical objective and winners."""
    rng = random.Random(seed)
    report = CheckReport("oracle-equivalence")
    for k in range(instances):
        instance = random_instance(rng, max_devices, max_budget)
        fast = solve_wdp(instance)
        oracle = wdp_bruteforce(instance)
        report.checked += 1
        if fast.objective != oracle.objective:
            report.violations.append(
                f"instance {k}: objective {fast.objective!r} != oracle {oracle.objective!r}"
            )
        elif fast.winners != oracle.winners:
            report.violations.append(
                f"instance {k}: winners {fast.winners} != oracle {oracle.winners}"
            )
    return report


def _truthful_utilities(
    instance: AuctionInstance,
) -> tuple[tuple[int, ...], tuple[float, ...], tuple[float, ...]]:
    solution = solve_wdp(instance)
    payments = vcg_payments(instance, "clarke-pivot", solution)
    utilities = tuple(
        instance.bids[i] - payments[i] if allocated else 0.0
        for i, allocated in enumerate(solution.allocation)
    )
    return solution.allocation, payments, utilities


def _welfare_without(instance: AuctionInstance, device: int) -> float:
    bids = tuple(b if j != device else 0.0 for j, b in enumerate(instance.bids))
    return solve_wdp(
        AuctionInstance(bids, instance.demands, instance.budget, instance.ssp_cost)
    ).objective


def check_incentive_compatibility(
    instances: int = 500,
    seed: int = 4242,
    max_devices: int = 10,
    max_budget: int = 30,
) -> CheckReport:
    """No device gains by misreporting its bid under clarke-pivot payments.

    For every device of every instance, every misreport on the
    ±``MISREPORT_FACTORS`` grid around the true bid must yield at most the
    truthful utility (within tolerance).  Utilities are always evaluated at
    the true bid; only the report changes.
    """
    rng = random.Random(seed)
    report = CheckReport("incentive-compatibility")
    for k in range(instances):
        instance = random_instance(rng, max_devices, max_budget)
        _, _, truthful = _truthful_utilities(instance)
        for i in range(instance.size):
            true_bid = instance.bids[i]
            # The optimum with device i silenced does not depend on i's report.
            welfare_without = _welfare_without(instance, i)
            for factor in MISREPORT_FACTORS:
                for direction in (1.0, -1.0):
                    misreport = true_bid * (1.0 + direction * factor)
                    if misreport == true_bid:
                        continue
                    bids = list(instance.bids)
                    bids[i] = misreport
                    reported = AuctionInstance(
                        tuple(bids), instance.demands, instance.budget, instance.ssp_cost
                    )
                    solution = solve_wdp(reported)
                    report.checked += 1
                    if not solution.allocation[i]:
                        utility = 0.0
                    else:
                        payment = welfare_without - (solution.objective - misreport)
                        utility = true_bid - payment
                    if utility > truthful[i] + UTILITY_TOLERANCE:
                        report.violations.append(
                            f"instance {k}, device {i}: misreport {misreport!r} "
                            f"yields {utility!r} > truthful {truthful[i]!r}"
                        )
    return report


def check_individual_rationality(
    instances: int = 500,
    seed: int = 4242,
    max_devices: int = 10,
    max_budget: int = 30,
) -> CheckReport:
    """Truthful clarke-pivot play never hurts: winners' utility >= 0, losers' exactly 0.

    Also checks that no winner is charged more than its bid.
    """
    rng = random.Random(seed)
    report = CheckReport("individual-rationality")
    for k in range(instances):
        instance = random_instance(rng, max_devices, max_budget)
        allocation, payments, utilities = _truthful_utilities(instance)
        report.checked += 1
        for i, allocated in enumerate(allocation):
            if allocated:
                if utilities[i] < 0.0:
                    report.violations.append(
                        f"instance {k}, device {i}: winner utility {utilities[i]!r} < 0"
                    )
                if payments[i] > instance.bids[i]:
                    report.violations.append(
                        f"instance {k}, device {i}: payment {payments[i]!r} above bid"
                    )
            elif utilities[i] != 0.0 or payments[i] != 0.0:
                report.violations.append(
                    f"instance {k}, device {i}: loser not settled at exactly 0"
                )
    return report
