"""Monte-Carlo reward curves and Nash / average regret.

The per-round expected reward E[mu_{I_t}] is estimated by averaging the
*true means* of the pulled arms across runs.  Everything is carried in
log space with extended-range accumulation (per-round log-sum-exp over
runs) so instances whose means underflow doubles - the adversarial
two-arm instance reaches ln(mu) ~ -1693 - aggregate exactly.  Estimates
below FLOOR are floored and the curve flagged; the floor is what keeps
the geometric mean finite when every run pulls such an arm in the same
round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .envs import BanditInstance
from .exceptions import DomainError, ShapeError

__all__ = [
    "FLOOR",
    "RunTrace",
    "MeanRewardCurve",
    "RegretReport",
    "PhaseOneStats",
    "aggregate_runs",
    "aggregate_log_means",
    "nash_regret",
    "average_regret",
    "exploration_budget_S",
]

FLOOR = 1e-300
LOG_FLOOR = math.log(FLOOR)


@dataclass(frozen=True)
class RunTrace:
    """Per-round record of one run: arm pulled, raw reward observed, and
    ln(true mean) of the pulled arm."""

    arms: np.ndarray
    rewards: np.ndarray
    log_means: np.ndarray

    @classmethod
    def from_run(cls, arms: np.ndarray, rewards: np.ndarray, instance: BanditInstance) -> "RunTrace":
        log_means = np.asarray(instance.log_means, dtype=np.float64)[arms]
        return cls(arms=arms, rewards=rewards, log_means=log_means)

    @property
    def T(self) -> int:
        return len(self.arms)


@dataclass(frozen=True)
class MeanRewardCurve:
    """ln E-hat[mu_{I_t}] per round, after flooring."""

    log_values: np.ndarray
    runs: int
    floored_rounds: int = 0

    @property
    def T(self) -> int:
        return len(self.log_values)

    @property
    def floored(self) -> bool:
        return self.floored_rounds > 0


def aggregate_log_means(logm: np.ndarray) -> MeanRewardCurve:
    """Aggregate an (R, T) matrix of per-round ln(true mean) values.

    E-hat[mu_{I_t}] = (1/R) * sum_r mu_{I_t^(r)}, accumulated as a
    per-round log-sum-exp so that sub-double-range means contribute
    exactly; values below FLOOR are floored and counted.
    """
    logm = np.atleast_2d(np.asarray(logm, dtype=np.float64))
    if logm.shape[0] < 1 or logm.shape[1] < 1:
        raise ShapeError("need at least one run and one round to aggregate")
    high = logm.max(axis=0)
    log_mean = high + np.log(np.exp(logm - high).sum(axis=0)) - math.log(logm.shape[0])
    floored = log_mean < LOG_FLOOR
    n_floored = int(floored.sum())
    if n_floored:
        log_mean = np.where(floored, LOG_FLOOR, log_mean)
    return MeanRewardCurve(log_values=log_mean, runs=logm.shape[0], floored_rounds=n_floored)


def aggregate_runs(traces: Sequence[RunTrace]) -> MeanRewardCurve:
    """Average the per-round true means across run traces (see
    :func:`aggregate_log_means` for the accumulation details)."""
    if len(traces) < 1:
        raise ShapeError("need at least one run to aggregate")
    T = traces[0].T
    for tr in traces:
        if tr.T != T:
            raise ShapeError(f"mismatched horizons: {tr.T} != {T}")
    return aggregate_log_means(np.stack([tr.log_means for tr in traces]))


def nash_regret(curve: MeanRewardCurve, mu_star: float) -> float:
    """mu* minus the geometric mean of the per-round estimates."""
    if not 0.0 < mu_star <= 1.0:
        raise DomainError(f"mu_star must lie in (0, 1], got {mu_star}")
    if np.any(~np.isfinite(curve.log_values)):
        raise DomainError("curve contains non-finite estimates")
    return mu_star - math.exp(float(np.mean(curve.log_values)))


def average_regret(curve: MeanRewardCurve, mu_star: float) -> float:
    """mu* minus the arithmetic mean of the per-round estimates."""
    if not 0.0 < mu_star <= 1.0:
        raise DomainError(f"mu_star must lie in (0, 1], got {mu_star}")
    return mu_star - float(np.mean(np.exp(curve.log_values)))


@dataclass(frozen=True)
class RegretReport:
    """One experiment cell's regret summary.

    The AM-GM ordering nash >= avg (Nash regret is the stricter metric)
    is validated on construction; violating inputs indicate a broken
    aggregation and are rejected.
    """

    algorithm: str
    epsilon: float
    k: int
    T: int
    runs: int
    mu_star: float
    nash_regret: float
    nash_regret_std: float
    avg_regret: float
    avg_regret_std: float
    floored_rounds: int
    seed: int

    def __post_init__(self):
        if self.nash_regret < self.avg_regret - 1e-9:
            raise DomainError(
                f"AM-GM violated: nash={self.nash_regret} < avg={self.avg_regret}"
            )
        if self.nash_regret > self.mu_star or self.avg_regret > self.mu_star:
            raise DomainError("regret cannot exceed mu_star")


@dataclass(frozen=True)
class PhaseOneStats:
    """Observed uniform-exploration lengths against the theory budget S."""

    taus: np.ndarray
    S: float
    k: int
    T: int

    def fraction_within(self, multiple: float) -> float:
        """Fraction of runs with tau <= multiple * k * S (horizon-capped)."""
        bound = multiple * self.k * self.S
        return float(np.mean(self.taus <= bound))


def exploration_budget_S(
    mu_star: float, T: int, epsilon: float, model: str, c: float = 3.0
) -> float:
    """Instance-dependent exploration budget.

    global:  c^2*lnT/mu* + (lnT)^2/(mu**eps)
    local:   c^2*lnT/mu* + (lnT/(mu**eps))^2
    """
    if not 0.0 < mu_star <= 1.0:
        raise DomainError(f"mu_star must lie in (0, 1], got {mu_star}")
    if not epsilon > 0.0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    log_t = math.log(T)
    base = c * c * log_t / mu_star
    if model == "global":
        return base + log_t * log_t / (mu_star * epsilon)
    if model == "local":
        return base + (log_t / (mu_star * epsilon)) ** 2
    raise DomainError(f"model must be 'global' or 'local', got {model!r}")
