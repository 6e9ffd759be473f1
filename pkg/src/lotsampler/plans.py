"""Fixed-sample-size inspection plan design.

Sample sizes come from the normal-approximation formula
``n = ceil(z^2 * p0 * (1 - p0) / delta^2)`` and defect-count thresholds
from the Poisson approximation to the sampling distribution: a sample of
``n`` items from a process with defective rate ``p0`` sees a defect count
that is approximately Poisson with mean ``lambda = n * p0``, and the
threshold is the smallest count meeting a tail bound (rejection plans) or
a coverage requirement (acceptance plans) on that Poisson CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from statistics import NormalDist
from typing import Sequence


class InvalidParameterError(ValueError):
    """A plan or test parameter is outside its valid domain.

    ``field`` names the offending parameter when known, so callers (CLI,
    HTTP service) can point at the input that failed.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


_NORMAL = NormalDist()

# Printed z tables round to two or three decimals (1.96, 1.645), so a
# supplied z can only be required to match the exact quantile this loosely.
Z_ALPHA_TOLERANCE = 5e-3


def normal_quantile(p: float) -> float:
    """Upper-tail-free standard normal quantile: x with Phi(x) = p."""
    if not 0.0 < p < 1.0:
        raise InvalidParameterError(f"quantile argument must be in (0,1), got {p}")
    return _NORMAL.inv_cdf(p)


def normal_cdf(x: float) -> float:
    """Standard normal CDF Phi(x)."""
    return _NORMAL.cdf(x)


def _check_unit_interval(name: str, value: float) -> None:
    if not isinstance(value, (int, float)) or math.isnan(value) or not 0.0 < value < 1.0:
        raise InvalidParameterError(f"{name} must be in (0,1), got {value!r}", field=name)


class ThresholdKind(Enum):
    """How a plan's threshold is read against the observed defect count."""

    REJECTION = "rejection"  # reject the lot when defects >= k_star
    ACCEPTANCE = "acceptance"  # accept the lot when defects < k_star


@dataclass(frozen=True)
class PlanParams:
    """Inputs to the sample-size formula.

    alpha is the producer's risk, p0 the nominal defective rate, delta the
    allowable error rate, and z_half_alpha the upper alpha/2 standard
    normal quantile (supplied explicitly, as plan tables print it, and
    validated against the built-in quantile).
    """

    alpha: float
    p0: float
    delta: float
    z_half_alpha: float

    def __post_init__(self) -> None:
        _check_unit_interval("alpha", self.alpha)
        _check_unit_interval("p0", self.p0)
        _check_unit_interval("delta", self.delta)
        if self.z_half_alpha <= 0:
            raise InvalidParameterError(
                f"z_half_alpha must be > 0, got {self.z_half_alpha!r}",
                field="z_half_alpha",
            )
        exact = normal_quantile(1.0 - self.alpha / 2.0)
        if abs(self.z_half_alpha - exact) > Z_ALPHA_TOLERANCE:
            raise InvalidParameterError(
                f"z_half_alpha={self.z_half_alpha} inconsistent with alpha={self.alpha}"
                f" (expected about {exact:.6f})",
                field="z_half_alpha",
            )


@dataclass(frozen=True)
class FixedPlan:
    """A fixed-sample-size plan: inspect ``n`` items, compare defects to ``k_star``.

    ``kind`` fixes the reading: REJECTION rejects at defects >= k_star,
    ACCEPTANCE accepts at defects < k_star. ``lam`` is the Poisson mean
    n * p0 the threshold was derived from.
    """

    n: int
    k_star: int
    kind: ThresholdKind
    lam: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidParameterError(f"n must be >= 1, got {self.n}", field="n")
        if not 0 <= self.k_star <= self.n:
            raise InvalidParameterError(
                f"k_star must be in [0, n], got {self.k_star} with n={self.n}",
                field="k_star",
            )
        if self.lam < 0:
            raise InvalidParameterError(f"lambda must be >= 0, got {self.lam}", field="lambda")

    def rejects(self, defects: int) -> bool:
        """Decision for an observed defect count (both kinds reject at >= k_star)."""
        return defects >= self.k_star

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k_star": self.k_star,
            "kind": self.kind.value,
            "lambda": self.lam,
        }


def poisson_cdf(k: int, lam: float) -> float:
    """Poisson CDF ``P(X <= k)`` for mean ``lam``.

    Terms follow the recurrence t_{i+1} = t_i * lam / (i+1) outward from
    the distribution mode, with the mode term pinned at 1: the arbitrary
    scale cancels when the partial sum is divided by the total mass, which
    sidesteps both overflow and the absolute error a computed e^-lam
    prefactor would carry. Sums are reduced with math.fsum. Absolute error
    stays below 1e-13 for lam up to ~1e4.
    """
    if isinstance(lam, float) and math.isnan(lam) or lam < 0:
        raise InvalidParameterError(f"lambda must be >= 0, got {lam!r}", field="lambda")
    if k < 0:
        raise InvalidParameterError(f"k must be >= 0, got {k}", field="k")
    if lam == 0.0:
        return 1.0
    k = int(k)
    mode = int(lam)
    cutoff = 1e-22  # relative to the unit mode term
    upto_k: list[float] = []
    everything: list[float] = []
    term = 1.0
    i = mode
    while i >= 0 and term >= cutoff:  # sweep down: t_{i-1} = t_i * i / lam
        everything.append(term)
        if i <= k:
            upto_k.append(term)
        term *= i / lam
        i -= 1
    term = 1.0
    i = mode + 1
    while True:  # sweep up: t_i = t_{i-1} * lam / i; ratio < 1 above the mode
        term *= lam / i
        if term < cutoff:
            break
        everything.append(term)
        if i <= k:
            upto_k.append(term)
        i += 1
    return min(1.0, math.fsum(upto_k) / math.fsum(everything))


def sample_size(params: PlanParams) -> int:
    """Number of items to inspect: ceil(z^2 * p0 * (1-p0) / delta^2), at least 1."""
    raw = params.z_half_alpha**2 * params.p0 * (1.0 - params.p0) / params.delta**2
    return max(1, math.ceil(raw))


def _upper_tail(k: int, lam: float) -> float:
    """P(X >= k) under Poisson(lam); k=0 gives 1 exactly."""
    if k <= 0:
        return 1.0
    return 1.0 - poisson_cdf(k - 1, lam)


def rejection_threshold(n: int, p0: float, alpha: float) -> FixedPlan:
    """Smallest k with P(X >= k) <= alpha under Poisson(n * p0).

    The plan rejects the lot when the observed defect count reaches k_star.
    """
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}", field="n")
    _check_unit_interval("p0", p0)
    _check_unit_interval("alpha", alpha)
    lam = n * p0
    for k in range(0, n + 1):
        if _upper_tail(k, lam) <= alpha:
            return FixedPlan(n=n, k_star=k, kind=ThresholdKind.REJECTION, lam=lam)
    raise InvalidParameterError(
        f"no rejection threshold within sample size n={n} meets alpha={alpha}"
        f" (Poisson mean {lam})"
    )


def acceptance_threshold(n: int, p0: float, reliability: float) -> FixedPlan:
    """Smallest k with P(X <= k-1) >= reliability under Poisson(n * p0).

    The plan accepts the lot when the observed defect count stays below k_star.
    """
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}", field="n")
    _check_unit_interval("p0", p0)
    _check_unit_interval("reliability", reliability)
    lam = n * p0
    for k in range(1, n + 1):
        if poisson_cdf(k - 1, lam) >= reliability:
            return FixedPlan(n=n, k_star=k, kind=ThresholdKind.ACCEPTANCE, lam=lam)
    raise InvalidParameterError(
        f"no acceptance threshold within sample size n={n} reaches"
        f" reliability={reliability} (Poisson mean {lam})"
    )


def plan_sweep(
    p0: float, alpha: float, deltas: Sequence[float]
) -> list[tuple[float, int, int]]:
    """Apply sample_size then rejection_threshold per delta.

    Returns (delta, n, k_star) triples in input order. Deltas must be
    strictly increasing; errors identify the offending delta.
    """
    _check_unit_interval("p0", p0)
    _check_unit_interval("alpha", alpha)
    if not deltas:
        raise InvalidParameterError("deltas must be non-empty", field="deltas")
    for lo, hi in zip(deltas, deltas[1:]):
        if not lo < hi:
            raise InvalidParameterError(
                f"deltas must be strictly increasing, got {lo} before {hi}",
                field="deltas",
            )
    z = normal_quantile(1.0 - alpha / 2.0)
    out: list[tuple[float, int, int]] = []
    for delta in deltas:
        try:
            params = PlanParams(alpha=alpha, p0=p0, delta=delta, z_half_alpha=z)
            n = sample_size(params)
            plan = rejection_threshold(n, p0, alpha)
        except InvalidParameterError as exc:
            raise InvalidParameterError(f"delta={delta!r}: {exc}", field="deltas") from exc
        out.append((delta, n, plan.k_star))
    return out
