"""Seeded Monte Carlo engine for fixed and sequential inspection plans.

Finite lots are sampled without replacement (hypergeometric paths), rate
lots with i.i.d. Bernoulli items. Every replication derives its own
counter-based random stream (Philox keyed by (master seed, replication
index)), so reports are bit-identical regardless of execution order or
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .plans import FixedPlan, InvalidParameterError, ThresholdKind
from .sprt import ItemResult, SprtConfig, SprtState, step
from .stats import TTestResult, welch_t

_SEED_MAX = 2**64


class SampleExceedsLotError(ValueError):
    """A plan asks for more items than the finite lot contains."""


class MissingPerRepCountsError(ValueError):
    """A report lacks the per-replication counts a comparison needs."""


@dataclass(frozen=True)
class FiniteLot:
    """A concrete lot of ``size`` items containing ``defectives`` bad ones."""

    size: int
    defectives: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise InvalidParameterError(
                f"lot size must be >= 1, got {self.size}", field="size"
            )
        if not 0 <= self.defectives <= self.size:
            raise InvalidParameterError(
                f"defectives must be in [0, size], got {self.defectives}",
                field="defectives",
            )

    @classmethod
    def from_rate(cls, size: int, rate: float) -> "FiniteLot":
        """Materialize a rate-specified lot: defectives = round(size * rate)."""
        if not 0.0 <= rate <= 1.0:
            raise InvalidParameterError(f"rate must be in [0,1], got {rate}", field="rate")
        return cls(size=size, defectives=round(size * rate))

    def to_json_dict(self) -> dict:
        return {"kind": "finite", "size": self.size, "defectives": self.defectives}


@dataclass(frozen=True)
class InfiniteLot:
    """An unbounded item stream with a fixed defective rate."""

    rate: float

    def __post_init__(self) -> None:
        if not 0.0 < self.rate < 1.0:
            raise InvalidParameterError(
                f"rate must be in (0,1), got {self.rate}", field="rate"
            )

    def to_json_dict(self) -> dict:
        return {"kind": "infinite", "rate": self.rate}


Lot = Union[FiniteLot, InfiniteLot]


def lot_from_json_dict(payload: dict) -> Lot:
    if payload.get("kind") == "finite":
        return FiniteLot(size=int(payload["size"]), defectives=int(payload["defectives"]))
    if payload.get("kind") == "infinite":
        return InfiniteLot(rate=float(payload["rate"]))
    raise InvalidParameterError(f"unknown lot kind: {payload.get('kind')!r}", field="lot")


@dataclass(frozen=True)
class SimConfig:
    """Replication count, master seed, and the lot to draw from."""

    replications: int
    seed: int
    lot: Lot
    keep_counts: bool = True
    workers: int = 1

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise InvalidParameterError(
                f"replications must be >= 1, got {self.replications}",
                field="replications",
            )
        if not 0 <= self.seed < _SEED_MAX:
            raise InvalidParameterError(
                f"seed must be an unsigned 64-bit integer, got {self.seed}", field="seed"
            )
        if self.workers < 1:
            raise InvalidParameterError(
                f"workers must be >= 1, got {self.workers}", field="workers"
            )


@dataclass(frozen=True)
class SimReport:
    """Monte Carlo output for one simulated plan."""

    replications: int
    seed: int
    accept_rate: float
    reject_rate: float
    sample_count_mean: float
    sample_count_var: float
    stopping_histogram: dict[int, int]
    lot: Lot
    per_rep_counts: list[int] | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "replications": self.replications,
            "seed": self.seed,
            "accept_rate": self.accept_rate,
            "reject_rate": self.reject_rate,
            "sample_count_mean": self.sample_count_mean,
            "sample_count_var": self.sample_count_var,
            "stopping_histogram": {
                str(k): self.stopping_histogram[k]
                for k in sorted(self.stopping_histogram)
            },
            "lot": self.lot.to_json_dict(),
        }
        if self.per_rep_counts is not None:
            doc["per_rep_counts"] = list(self.per_rep_counts)
        return doc

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SimReport":
        counts = doc.get("per_rep_counts")
        return cls(
            replications=int(doc["replications"]),
            seed=int(doc["seed"]),
            accept_rate=float(doc["accept_rate"]),
            reject_rate=float(doc["reject_rate"]),
            sample_count_mean=float(doc["sample_count_mean"]),
            sample_count_var=float(doc["sample_count_var"]),
            stopping_histogram={
                int(k): int(v) for k, v in doc["stopping_histogram"].items()
            },
            lot=lot_from_json_dict(doc["lot"]),
            per_rep_counts=None if counts is None else [int(c) for c in counts],
        )

    def histogram_csv(self) -> str:
        lines = ["stop_index,count"]
        for k in sorted(self.stopping_histogram):
            lines.append(f"{k},{self.stopping_histogram[k]}")
        return "\n".join(lines) + "\n"


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    """Counter-based stream for one replication, independent of run order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, rep))))


def draw_defects(rng: np.random.Generator, lot: Lot, n: int) -> int:
    """Defect count in one sample of n items from the lot.

    Finite lots draw without replacement (hypergeometric); infinite lots
    draw binomially.
    """
    if n < 0:
        raise InvalidParameterError(f"n must be >= 0, got {n}", field="n")
    if isinstance(lot, FiniteLot):
        if n > lot.size:
            raise SampleExceedsLotError(
                f"sample of {n} exceeds lot size {lot.size}"
            )
        if n == 0:
            return 0
        return int(rng.hypergeometric(lot.defectives, lot.size - lot.defectives, n))
    return int(rng.binomial(n, lot.rate))


def _item_stream(rng: np.random.Generator, lot: Lot, n: int) -> Callable[[int, int], bool]:
    """Per-item defect decision function over pre-drawn uniforms.

    Finite lots condition on what has been removed so far: item i is
    defective with probability (remaining defectives) / (remaining items).
    """
    u = rng.random(n)
    if isinstance(lot, FiniteLot):
        size, defectives = lot.size, lot.defectives

        def is_defect(i: int, seen_defects: int) -> bool:
            return u[i] * (size - i) < (defectives - seen_defects)

    else:
        rate = lot.rate

        def is_defect(i: int, seen_defects: int) -> bool:
            return u[i] < rate

    return is_defect


def _fixed_replication(plan: FixedPlan, lot: Lot, rng: np.random.Generator) -> tuple[bool, int]:
    """One fixed-plan inspection: (accepted, stopping index).

    Rejection-threshold plans stop as soon as defects reach k_star;
    acceptance-threshold plans always inspect the full sample.
    """
    is_defect = _item_stream(rng, lot, plan.n)
    defects = 0
    for i in range(plan.n):
        if is_defect(i, defects):
            defects += 1
        # Checked after every item so k_star = 0 rejects at index 1, never 0.
        if plan.kind is ThresholdKind.REJECTION and defects >= plan.k_star:
            return False, i + 1
    return not plan.rejects(defects), plan.n


def _sequential_replication(
    config: SprtConfig, lot: Lot, rng: np.random.Generator
) -> tuple[bool, int]:
    """One sequential inspection driven through the test engine."""
    is_defect = _item_stream(rng, lot, config.n_max)
    state = SprtState()
    for i in range(config.n_max):
        result = ItemResult.DEFECT if is_defect(i, state.defects) else ItemResult.PASS
        step(state, config, result)
        if state.verdict.decided:
            return state.verdict.accepts, state.n_seen
    raise AssertionError("sequential test failed to decide by n_max")  # pragma: no cover


def _run_replications(
    sim: SimConfig, replicate: Callable[[np.random.Generator], tuple[bool, int]]
) -> SimReport:
    reps = sim.replications
    counts = [0] * reps
    accepted = [False] * reps

    def run_range(lo: int, hi: int) -> None:
        for rep in range(lo, hi):
            rng = replication_rng(sim.seed, rep)
            accepted[rep], counts[rep] = replicate(rng)

    if sim.workers == 1:
        run_range(0, reps)
    else:
        chunk = math.ceil(reps / sim.workers)
        spans = [(lo, min(lo + chunk, reps)) for lo in range(0, reps, chunk)]
        with ThreadPoolExecutor(max_workers=sim.workers) as pool:
            for future in [pool.submit(run_range, lo, hi) for lo, hi in spans]:
                future.result()

    # Reduction runs in replication order whatever the worker count.
    histogram: dict[int, int] = {}
    for c in counts:
        histogram[c] = histogram.get(c, 0) + 1
    n_accept = sum(accepted)
    mean = sum(counts) / reps  # integer sum: exact
    var = (
        math.fsum((c - mean) ** 2 for c in counts) / (reps - 1) if reps > 1 else 0.0
    )
    return SimReport(
        replications=reps,
        seed=sim.seed,
        accept_rate=n_accept / reps,
        reject_rate=(reps - n_accept) / reps,
        sample_count_mean=mean,
        sample_count_var=var,
        stopping_histogram=histogram,
        lot=sim.lot,
        per_rep_counts=list(counts) if sim.keep_counts else None,
    )


def simulate_fixed_plan(plan: FixedPlan, sim: SimConfig) -> SimReport:
    """Monte Carlo run of a fixed-sample plan against a lot."""
    if isinstance(sim.lot, FiniteLot) and plan.n > sim.lot.size:
        raise SampleExceedsLotError(
            f"plan sample size {plan.n} exceeds lot size {sim.lot.size}"
        )
    return _run_replications(sim, lambda rng: _fixed_replication(plan, sim.lot, rng))


def simulate_sequential(config: SprtConfig, sim: SimConfig) -> SimReport:
    """Monte Carlo run of a truncated sequential test against a lot."""
    if isinstance(sim.lot, FiniteLot) and config.n_max > sim.lot.size:
        raise SampleExceedsLotError(
            f"n_max {config.n_max} exceeds lot size {sim.lot.size}"
        )
    return _run_replications(
        sim, lambda rng: _sequential_replication(config, sim.lot, rng)
    )


@dataclass(frozen=True)
class PlanComparison:
    """Sample-count comparison between a fixed and a sequential report."""

    mean_difference: float  # fixed mean minus sequential mean
    ttest: TTestResult

    def to_json_dict(self) -> dict:
        return {"mean_difference": self.mean_difference, **self.ttest.to_json_dict()}


def _summary(counts: list[int]) -> tuple[float, float, int]:
    n = len(counts)
    mean = sum(counts) / n
    var = math.fsum((c - mean) ** 2 for c in counts) / (n - 1) if n > 1 else 0.0
    return mean, var, n


def compare_plans(fixed: SimReport, sequential: SimReport) -> PlanComparison:
    """Welch two-sided t-test on the per-replication sample counts."""
    for name, report in (("fixed", fixed), ("sequential", sequential)):
        if report.per_rep_counts is None:
            raise MissingPerRepCountsError(
                f"{name} report has no per-replication counts; rerun with keep_counts"
            )
    mean_f, var_f, n_f = _summary(fixed.per_rep_counts)
    mean_s, var_s, n_s = _summary(sequential.per_rep_counts)
    result = welch_t(mean_f, var_f, n_f, mean_s, var_s, n_s)
    return PlanComparison(mean_difference=mean_f - mean_s, ttest=result)
