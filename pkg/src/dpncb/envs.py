"""Bandit instances: arm distributions on [0, 1] and replay tapes.

Arms are specified analytically so that every instance knows its true
means exactly; regret is always computed against these analytic means,
never against empirical averages.  Means may be supplied directly in log
space, which keeps the adversarial two-arm instance (one arm's mean
decays like exp(-T(1+ln 2)), far below double-precision range) fully
representable: the float mean harmlessly underflows to 0 while the log
mean stays finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from scipy.special import betaincinv

from .exceptions import ConfigError, DomainError
from .rng import RngStream

__all__ = [
    "ArmSpec",
    "BanditInstance",
    "ReplayTape",
    "bernoulli",
    "bernoulli_log_mean",
    "beta",
    "two_point",
    "uniform01",
    "constant",
    "true_mean",
    "sample_reward",
    "replay_reward",
    "make_figure_instance",
]

ARM_KINDS = ("bernoulli", "beta", "two_point", "uniform01", "constant")

# Bernoulli success probabilities below this are treated as exactly zero.
TINY_MEAN = 1e-300


@dataclass(frozen=True)
class ArmSpec:
    """One arm: a named distribution on [0, 1] with its analytic mean.

    ``log_mean`` is ln(mean) and stays finite even when ``mean`` itself
    underflows to zero.
    """

    kind: str
    params: tuple
    mean: float
    log_mean: float

    def __post_init__(self):
        if self.kind not in ARM_KINDS:
            raise ConfigError(f"unknown arm kind {self.kind!r}")
        if not math.isfinite(self.log_mean) or self.log_mean > 0.0:
            raise DomainError(f"arm mean must lie in (0, 1]: ln mean = {self.log_mean}")


def _validate_prob(p: float, what: str) -> None:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{what} must lie in [0, 1], got {p}")


def bernoulli(p: float) -> ArmSpec:
    _validate_prob(p, "bernoulli mean")
    if p <= 0.0:
        raise DomainError("bernoulli mean must be positive (use bernoulli_log_mean for tiny means)")
    return ArmSpec("bernoulli", (p,), p, math.log(p))


def bernoulli_log_mean(log_p: float) -> ArmSpec:
    """Bernoulli arm whose mean is given as ln p (p may underflow doubles)."""
    if log_p > 0.0:
        raise DomainError(f"ln p must be <= 0, got {log_p}")
    p = math.exp(log_p)  # may underflow to 0.0; sampling then never succeeds
    return ArmSpec("bernoulli", (p,), p, log_p)


def beta(a: float, b: float) -> ArmSpec:
    if a <= 0.0 or b <= 0.0:
        raise DomainError(f"beta parameters must be positive, got ({a}, {b})")
    m = a / (a + b)
    return ArmSpec("beta", (a, b), m, math.log(m))


def two_point(lo: float, hi: float, p: float) -> ArmSpec:
    """Mass p on ``hi`` and 1-p on ``lo``."""
    _validate_prob(p, "two_point probability")
    _validate_prob(lo, "two_point low value")
    _validate_prob(hi, "two_point high value")
    if lo >= hi:
        raise DomainError(f"two_point requires lo < hi, got ({lo}, {hi})")
    m = lo * (1.0 - p) + hi * p
    if m <= 0.0:
        raise DomainError("two_point mean must be positive")
    return ArmSpec("two_point", (lo, hi, p), m, math.log(m))


def uniform01() -> ArmSpec:
    return ArmSpec("uniform01", (), 0.5, math.log(0.5))


def constant(v: float) -> ArmSpec:
    _validate_prob(v, "constant value")
    if v <= 0.0:
        raise DomainError("constant arm value must be positive")
    return ArmSpec("constant", (v,), v, math.log(v))


def true_mean(spec: ArmSpec) -> float:
    """Analytic mean of the arm's distribution (validated at construction)."""
    return spec.mean


@dataclass(frozen=True)
class BanditInstance:
    """An ordered collection of arms with cached optimum statistics."""

    arms: tuple
    name: str = "custom"
    mu_star: float = field(init=False)
    log_mu_star: float = field(init=False)

    def __post_init__(self):
        if len(self.arms) < 2:
            raise ConfigError(f"an instance needs k >= 2 arms, got {len(self.arms)}")
        best = max(self.arms, key=lambda a: a.log_mean)
        object.__setattr__(self, "mu_star", best.mean)
        object.__setattr__(self, "log_mu_star", best.log_mean)

    @property
    def k(self) -> int:
        return len(self.arms)

    @property
    def means(self) -> list:
        return [a.mean for a in self.arms]

    @property
    def log_means(self) -> list:
        return [a.log_mean for a in self.arms]


def sample_reward(instance: BanditInstance, arm: int, stream: RngStream) -> float:
    """One i.i.d. reward from ``instance.arms[arm]``.

    Every draw consumes exactly one uniform regardless of the arm kind,
    so replay alignment is independent of which arms a policy visits.
    """
    if not 0 <= arm < instance.k:
        raise IndexError(f"arm {arm} out of range for k={instance.k}")
    spec = instance.arms[arm]
    u = stream.uniform()
    return _reward_from_uniform(spec, u)


def _reward_from_uniform(spec: ArmSpec, u: float) -> float:
    kind = spec.kind
    if kind == "bernoulli":
        p = spec.params[0]
        return 1.0 if (p >= TINY_MEAN and u < p) else 0.0
    if kind == "uniform01":
        return u
    if kind == "two_point":
        lo, hi, p = spec.params
        return hi if u < p else lo
    if kind == "constant":
        return spec.params[0]
    # beta: exact inverse-CDF through the regularised incomplete beta
    a, b = spec.params
    return float(betaincinv(a, b, u if u > 0.0 else 2.0**-53))


@dataclass(frozen=True)
class ReplayTape:
    """A fixed reward sequence X_1..X_T delivered independently of the arm.

    This is the object the global-privacy definition quantifies over: the
    reward of round t is X_t whatever arm is pulled, so two tapes differing
    in one entry are neighbouring inputs of the full bandit mechanism.
    """

    rewards: tuple

    def __post_init__(self):
        for x in self.rewards:
            if not 0.0 <= x <= 1.0:
                raise DomainError(f"tape rewards must lie in [0, 1], got {x}")

    def __len__(self) -> int:
        return len(self.rewards)


def replay_reward(tape: ReplayTape, t: int) -> float:
    """Reward of user ``t`` (1-based round index)."""
    if not 1 <= t <= len(tape):
        raise IndexError(f"round {t} outside tape of length {len(tape)}")
    return tape.rewards[t - 1]


def neighboring(tape: ReplayTape, tape_prime: ReplayTape) -> bool:
    """True iff the tapes have equal length and differ at exactly one index."""
    if len(tape) != len(tape_prime):
        return False
    return sum(1 for a, b in zip(tape.rewards, tape_prime.rewards) if a != b) == 1


# ---------------------------------------------------------------------------
# Named instances used by the experiment harness.
# ---------------------------------------------------------------------------


def make_figure_instance(
    preset: str,
    *,
    horizon: Optional[int] = None,
    seed: Optional[int] = None,
) -> BanditInstance:
    """Construct one of the named experiment instances.

    ``adversarial(T)``
        k=2 Bernoulli arms: ln(mean_1) = -T(1 + ln 2) and mean_2 = 1.  The
        first arm's mean is held in log space; one pull of it costs the
        Nash welfare a constant factor 1/(2e) at horizon T.
    ``bern50(seed)``
        50 Bernoulli arms with means drawn uniformly from (0.005, 1).
    ``mixed50(seed)``
        50 arms with labels drawn as in bern50, but the label picks the
        distribution family by bucket: >= 0.75 Bernoulli(label);
        [0.5, 0.75) Beta(4, 1); [0.25, 0.5) two-point {0.4, 1};
        < 0.25 Uniform(0, 1).  Each arm's true mean is the chosen
        distribution's analytic mean (for Beta(4,1) that is 0.8, for the
        two-point law 0.7, for Uniform 0.5 - the label only selects the
        family).
    """
    if preset == "adversarial":
        if horizon is None or horizon < 1:
            raise ConfigError("adversarial preset needs a positive horizon")
        log_m1 = -float(horizon) * (1.0 + math.log(2.0))
        return BanditInstance(
            (bernoulli_log_mean(log_m1), bernoulli(1.0)),
            name=f"adversarial(T={horizon})",
        )
    if preset in ("bern50", "mixed50"):
        if seed is None:
            raise ConfigError(f"{preset} preset needs a seed")
        stream = RngStream(seed, 0)
        labels = [0.005 + 0.995 * stream.uniform_open() for _ in range(50)]
        if preset == "bern50":
            arms = tuple(bernoulli(m) for m in labels)
        else:
            arms = tuple(_mixed_arm(m) for m in labels)
        return BanditInstance(arms, name=f"{preset}(seed={seed})")
    raise ConfigError(f"unknown instance preset {preset!r}")


def _mixed_arm(label: float) -> ArmSpec:
    if label >= 0.75:
        return bernoulli(label)
    if label >= 0.5:
        return beta(4.0, 1.0)
    if label >= 0.25:
        return two_point(0.4, 1.0, 0.5)
    return uniform01()


def instance_from_spec(spec: dict) -> BanditInstance:
    """Build an instance from a config-file dictionary."""
    if not isinstance(spec, dict) or "preset" not in spec:
        raise ConfigError("instance spec must be a dict with a 'preset' key")
    preset = spec["preset"]
    if preset == "custom":
        arms = []
        for a in spec.get("arms", []):
            kind = a.get("kind")
            if kind == "bernoulli":
                if "log_mean" in a:
                    arms.append(bernoulli_log_mean(a["log_mean"]))
                else:
                    arms.append(bernoulli(a["p"]))
            elif kind == "beta":
                arms.append(beta(a["a"], a["b"]))
            elif kind == "two_point":
                arms.append(two_point(a["lo"], a["hi"], a["p"]))
            elif kind == "uniform01":
                arms.append(uniform01())
            elif kind == "constant":
                arms.append(constant(a["value"]))
            else:
                raise ConfigError(f"unknown arm kind {kind!r}")
        return BanditInstance(tuple(arms), name=spec.get("name", "custom"))
    return make_figure_instance(preset, horizon=spec.get("horizon"), seed=spec.get("seed"))
