"""Truncated sequential probability ratio test over pass/defect inspections.

Items are inspected one at a time. The accumulated log-likelihood ratio of
"defective rate is p1" against "defective rate is p0" is compared to the
Wald boundaries A = beta/(1-alpha) and B = (1-beta)/alpha; the test is
additionally truncated at a sample-size ceiling n_max and short-circuited
by an early-reject defect count k_star. All arithmetic stays in log space:
the raw likelihood ratio underflows for sample sizes in the hundreds and
is exposed only for display as exp(log_lr).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .plans import FixedPlan, InvalidParameterError


class Verdict(Enum):
    """Outcome of a sequential inspection so far."""

    CONTINUE = "continue"
    ACCEPT = "accept"
    REJECT = "reject"
    TRUNCATED_ACCEPT = "truncated_accept"
    TRUNCATED_REJECT = "truncated_reject"

    @property
    def decided(self) -> bool:
        return self is not Verdict.CONTINUE

    @property
    def accepts(self) -> bool:
        return self in (Verdict.ACCEPT, Verdict.TRUNCATED_ACCEPT)

    @property
    def rejects(self) -> bool:
        return self in (Verdict.REJECT, Verdict.TRUNCATED_REJECT)


class ItemResult(Enum):
    """One inspected item."""

    PASS = "pass"
    DEFECT = "defect"


class SteppedAfterStopError(RuntimeError):
    """An item was recorded on a test that has already reached a verdict."""


def boundaries(alpha: float, beta: float) -> tuple[float, float]:
    """Wald decision bounds (A, B): accept at ratio <= A, reject at >= B."""
    for name, value in (("alpha", alpha), ("beta", beta)):
        if not 0.0 < value < 1.0:
            raise InvalidParameterError(
                f"{name} must be in (0,1), got {value!r}", field=name
            )
    return beta / (1.0 - alpha), (1.0 - beta) / alpha


def log_likelihood_ratio(n: int, x: int, p0: float, p1: float) -> float:
    """log of [p1^x (1-p1)^(n-x)] / [p0^x (1-p0)^(n-x)] for x defects in n items."""
    if not 0 <= x <= n:
        raise InvalidParameterError(f"x must be in [0, n], got x={x}, n={n}", field="x")
    for name, value in (("p0", p0), ("p1", p1)):
        if not 0.0 < value < 1.0:
            raise InvalidParameterError(
                f"{name} must be in (0,1), got {value!r}", field=name
            )
    return x * math.log(p1 / p0) + (n - x) * math.log((1.0 - p1) / (1.0 - p0))


@dataclass(frozen=True)
class SprtConfig:
    """Parameters of a truncated sequential test.

    p0 and p1 are the defective rates under the null and alternative
    hypotheses, alpha and beta the error-probability caps, n_max the
    sample-size ceiling, and k_star the defect count that forces an
    immediate reject.
    """

    p0: float
    p1: float
    alpha: float
    beta: float
    n_max: int
    k_star: int

    def __post_init__(self) -> None:
        for name in ("p0", "p1", "alpha", "beta"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not 0.0 < value < 1.0:
                raise InvalidParameterError(
                    f"{name} must be in (0,1), got {value!r}", field=name
                )
        if self.p1 <= self.p0:
            raise InvalidParameterError(
                f"p1 must exceed p0, got p0={self.p0}, p1={self.p1}", field="p1"
            )
        if self.n_max < 1:
            raise InvalidParameterError(
                f"n_max must be >= 1, got {self.n_max}", field="n_max"
            )
        if not 0 <= self.k_star <= self.n_max:
            raise InvalidParameterError(
                f"k_star must be in [0, n_max], got {self.k_star}", field="k_star"
            )

    @property
    def log_a(self) -> float:
        """Accept boundary in log space: ln(beta / (1 - alpha))."""
        return math.log(self.beta / (1.0 - self.alpha))

    @property
    def log_b(self) -> float:
        """Reject boundary in log space: ln((1 - beta) / alpha)."""
        return math.log((1.0 - self.beta) / self.alpha)

    @property
    def pass_increment(self) -> float:
        return math.log((1.0 - self.p1) / (1.0 - self.p0))

    @property
    def defect_increment(self) -> float:
        return math.log(self.p1 / self.p0)

    @classmethod
    def from_fixed_plan(
        cls,
        plan: FixedPlan,
        p0: float,
        p1: float | None = None,
        boundary_eps: float = 1e-12,
    ) -> "SprtConfig":
        """Degenerate config replaying a fixed plan sequentially.

        Boundaries are pushed so far out (alpha = beta = boundary_eps) that
        only the early-reject count and the truncation decision can fire,
        reproducing the fixed plan's behavior item by item.
        """
        return cls(
            p0=p0,
            p1=p1 if p1 is not None else min(2 * p0, (1.0 + p0) / 2.0),
            alpha=boundary_eps,
            beta=boundary_eps,
            n_max=plan.n,
            k_star=plan.k_star,
        )

    def to_json_dict(self) -> dict:
        return {
            "p0": self.p0,
            "p1": self.p1,
            "alpha": self.alpha,
            "beta": self.beta,
            "n_max": self.n_max,
            "k_star": self.k_star,
        }


@dataclass
class SprtState:
    """Evolving inspection state; drive it with step(). Single-writer."""

    n_seen: int = 0
    defects: int = 0
    log_lr: float = 0.0
    verdict: Verdict = Verdict.CONTINUE

    def to_record(self) -> dict:
        """Flat record for wire/persistence use; lossless round-trip."""
        return {
            "n_seen": self.n_seen,
            "defects": self.defects,
            "log_lr": self.log_lr,
            "verdict": self.verdict.value,
        }

    @classmethod
    def from_record(cls, record: dict) -> "SprtState":
        return cls(
            n_seen=int(record["n_seen"]),
            defects=int(record["defects"]),
            log_lr=float(record["log_lr"]),
            verdict=Verdict(record["verdict"]),
        )


def _classify(config: SprtConfig, n_seen: int, defects: int, log_lr: float) -> Verdict:
    """Stopping rules, in fixed precedence order.

    The early-reject count is checked first (it is the one rule phrased as
    an equality trigger), then the accept boundary, the reject boundary,
    and finally truncation, which falls back to the fixed-plan decision.
    """
    if defects >= config.k_star:
        return Verdict.REJECT
    if log_lr <= config.log_a:
        return Verdict.ACCEPT
    if log_lr >= config.log_b:
        return Verdict.REJECT
    if n_seen >= config.n_max:
        return (
            Verdict.TRUNCATED_ACCEPT
            if defects < config.k_star
            else Verdict.TRUNCATED_REJECT
        )
    return Verdict.CONTINUE


def step(state: SprtState, config: SprtConfig, result: ItemResult) -> SprtState:
    """Record one inspected item, mutating and returning the state."""
    if state.verdict.decided:
        raise SteppedAfterStopError(
            f"test already decided ({state.verdict.value}); no further items accepted"
        )
    state.n_seen += 1
    if result is ItemResult.DEFECT:
        state.defects += 1
        state.log_lr += config.defect_increment
    else:
        state.log_lr += config.pass_increment
    state.verdict = _classify(config, state.n_seen, state.defects, state.log_lr)
    return state


def run_sequence(
    config: SprtConfig, results: Sequence[ItemResult] | Iterable[ItemResult]
) -> tuple[SprtState, int]:
    """Replay results through step until a verdict or the list runs out.

    Returns (final state, items consumed). Items past the stopping index
    are never touched. A returned verdict of CONTINUE signals the sequence
    was exhausted before the test could decide.
    """
    results = list(results)
    if not results:
        raise InvalidParameterError("results must be non-empty", field="results")
    state = SprtState()
    consumed = 0
    for result in results:
        step(state, config, result)
        consumed += 1
        if state.verdict.decided:
            break
    return state, consumed


@dataclass(frozen=True)
class SprtPerformance:
    """Exact operating characteristics of a config at one true defect rate."""

    accept_prob: float
    reject_prob: float
    asn: float


def exact_performance(config: SprtConfig, true_p: float) -> SprtPerformance:
    """Exact accept/reject probabilities and average sample number.

    Dynamic program over reachable (items seen, defects) states: the
    verdict depends only on that pair, so probability mass can be pushed
    forward one item at a time, branching to a defect with probability
    true_p. Truncated verdicts fold into their accept/reject sides. Exact
    up to floating-point summation.
    """
    if not 0.0 < true_p < 1.0:
        raise InvalidParameterError(
            f"true_p must be in (0,1), got {true_p!r}", field="true_p"
        )
    pinc = config.pass_increment
    dinc = config.defect_increment
    accept = 0.0
    reject = 0.0
    asn = 0.0
    alive: dict[int, float] = {0: 1.0}  # defects -> mass among continuing states
    for n in range(1, config.n_max + 1):
        nxt: dict[int, float] = {}
        for x, mass in sorted(alive.items()):
            for defective, p_branch in ((True, true_p), (False, 1.0 - true_p)):
                x2 = x + 1 if defective else x
                m2 = mass * p_branch
                log_lr = x2 * dinc + (n - x2) * pinc
                verdict = _classify(config, n, x2, log_lr)
                if verdict is Verdict.CONTINUE:
                    nxt[x2] = nxt.get(x2, 0.0) + m2
                else:
                    asn += n * m2
                    if verdict.accepts:
                        accept += m2
                    else:
                        reject += m2
        alive = nxt
        if not alive:
            break
    return SprtPerformance(accept_prob=accept, reject_prob=reject, asn=asn)
