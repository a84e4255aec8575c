"""Bandit policies: the private NCB algorithms, their anytime wrapper,
and comparison baselines, all behind one select/observe interface.

Driving protocol (enforced):  ``arm = policy.select_arm()`` then
``policy.observe_reward(arm, x)``, strictly alternating, for rounds
``1..T``.  Policies in the local model (``requires_privatized_rewards``)
must never see a raw reward; the run driver privatises each reward with
``local_privatize`` before the policy touches it.

Randomness: a policy draws from the single per-run stream it was
constructed with (uniform arm picks and its own Laplace releases).  The
per-round draw order is fixed - select, environment reward, optional
local privatisation, observe-side noise - so runs replay exactly.

Baselines ``ucb1``, ``adap_ucb`` and ``ldp_ucb`` are approximations of
the published algorithms they are named after: they keep the
episodic-forgetting / per-reward-privatisation structure and the stated
index shapes but make no attempt to replicate the originally published
constants.  ``adap_ucb`` warm-starts every arm with WARM_START_PULLS
deterministic pulls before its first private release; releases on fewer
samples are dominated by the Lap(1/(eps*n)) noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import indices
from .exceptions import ConfigError, DomainError, StateError
from .rng import RngStream, sample_laplace

__all__ = [
    "PolicyParams",
    "POLICY_NAMES",
    "make_policy",
    "local_privatize",
    "GdpNcbPolicy",
    "LdpNcbPolicy",
    "AnytimePolicy",
    "AdapUcbPolicy",
    "LdpUcbPolicy",
    "Ucb1Policy",
]

POLICY_NAMES = (
    "gdp_ncb",
    "ldp_ncb",
    "anytime_gdp",
    "anytime_ldp",
    "ncb",
    "adap_ucb",
    "ldp_ucb",
    "ucb1",
)

WARM_START_PULLS = 4  # adap_ucb deterministic pulls per arm before release


@dataclass(frozen=True)
class PolicyParams:
    """Shared policy configuration; ``c`` and ``alpha`` default to the
    values used throughout the experiments and are overridable."""

    k: int
    T: int
    epsilon: float
    c: float = 3.0
    alpha: float = 3.1

    def __post_init__(self):
        if self.k < 2:
            raise ConfigError(f"need k >= 2 arms, got {self.k}")
        if self.T < 1:
            raise ConfigError(f"need T >= 1, got {self.T}")
        if not self.epsilon > 0.0:
            raise ConfigError(f"privacy budget must be positive, got {self.epsilon}")
        if self.c <= 0.0 or self.alpha <= 0.0:
            raise ConfigError("c and alpha must be positive")


def local_privatize(x: float, epsilon: float, stream: RngStream) -> float:
    """User-side Laplace perturbation x + Lap(1/epsilon).

    Applied by the run driver before a local-model policy sees the reward;
    the output is unbounded.  epsilon = inf is the no-noise limit and
    consumes no randomness.
    """
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"reward must lie in [0, 1], got {x}")
    if not epsilon > 0.0:
        raise DomainError(f"privacy budget must be positive, got {epsilon}")
    if math.isinf(epsilon):
        return x
    return x + sample_laplace(stream, 1.0 / epsilon)


def _clip01(v: float) -> float:
    return min(1.0, max(0.0, v))


class _BasePolicy:
    """Alternation bookkeeping shared by every policy."""

    requires_privatized_rewards = False
    #: rounds spent in uniform exploration; None until Phase I ends
    tau = None

    def __init__(self, params: PolicyParams, stream: RngStream):
        self.params = params
        self.stream = stream
        self.t = 1
        self._pending = None

    # -- protocol guards ----------------------------------------------------

    def _begin_select(self) -> None:
        if self._pending is not None:
            raise StateError("select_arm called twice without observe_reward")

    def _end_select(self, arm: int) -> int:
        self._pending = arm
        return arm

    def _begin_observe(self, arm: int) -> None:
        if self._pending is None:
            raise StateError("observe_reward called before select_arm")
        if arm != self._pending:
            raise StateError(f"observed arm {arm} does not match selected arm {self._pending}")
        self._pending = None

    def _check_horizon(self) -> None:
        if self.t > self.params.T:
            raise StateError(f"round {self.t} exceeds horizon T={self.params.T}")

    def _check_raw_reward(self, x: float) -> None:
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"raw reward must lie in [0, 1], got {x}")


class _Episode:
    __slots__ = ("arm", "target", "pulls", "mean")

    def __init__(self, arm: int, target: int, pulls: int, mean: float):
        self.arm = arm
        self.target = target
        self.pulls = pulls
        self.mean = mean


class GdpNcbPolicy(_BasePolicy):
    """Two-phase episodic algorithm for the trusted-learner (global) model.

    Phase I pulls arms uniformly, keeping per-arm raw means and, after
    every pull, a freshly perturbed private mean mu_tilde = mu_hat +
    Lap(lnT/(eps*n)); it ends once some arm's n*mu_tilde reaches the
    threshold 1600*(c^2*lnT + (lnT)^2/eps) (or the horizon runs out).
    Phase II runs per-arm doubling episodes: the arm with the highest
    private index is pulled for 2*n_s rounds, its episode mean restarts
    from the Phase-I mean (earlier episodes are forgotten), and a single
    clipped Laplace release per episode refreshes the index inputs.

    With epsilon = inf all noise and privacy terms vanish and the same
    machinery is the non-private ``ncb`` baseline (threshold 1600*c^2*lnT).
    """

    def __init__(self, params: PolicyParams, stream: RngStream):
        super().__init__(params, stream)
        if params.T < 2:
            raise ConfigError("gdp_ncb needs T >= 2 (lnT > 0)")
        k = params.k
        self.private = math.isfinite(params.epsilon)
        self.log_T = math.log(params.T)
        self.threshold = indices.phase1_threshold_gdp(params.T, params.epsilon, params.c)
        self.phase = 1
        self.N1 = [0] * k
        self.mu_hat = [0.0] * k
        self.mu_tilde = [0.0] * k
        self.n_rel = [0] * k
        self.N2 = [0] * k
        self.episode = None
        self.releases = [0] * k
        self.last_release = None  # (arm, n, pre-noise mean, stored mu_tilde)

    def _index(self, i: int) -> float:
        if self.n_rel[i] == 0:
            return math.inf
        return indices.ncb_gdp(
            self.mu_tilde[i],
            self.n_rel[i],
            self.params.T,
            self.params.epsilon,
            self.params.c,
            self.params.alpha,
        )

    def select_arm(self) -> int:
        self._begin_select()
        self._check_horizon()
        if self.phase == 1:
            return self._end_select(self.stream.integer(self.params.k))
        if self.episode is None:
            best = -math.inf
            best_i = 0
            for i in range(self.params.k):
                v = self._index(i)
                if v > best:
                    best = v
                    best_i = i
            n_s = self.N2[best_i]
            self.episode = _Episode(best_i, 2 * n_s, 0, self.mu_hat[best_i])
            self.N2[best_i] = 0
            return self._end_select(best_i)
        return self._end_select(self.episode.arm)

    def observe_reward(self, arm: int, x: float) -> None:
        self._begin_observe(arm)
        self._check_raw_reward(x)
        if self.phase == 1:
            self.N1[arm] += 1
            n = self.N1[arm]
            self.mu_hat[arm] = self.mu_hat[arm] * ((n - 1) / n) + x / n
            if self.private:
                scale = indices.gdp_release_scale(self.params.T, self.params.epsilon, n)
                self.mu_tilde[arm] = self.mu_hat[arm] + sample_laplace(self.stream, scale)
            else:
                self.mu_tilde[arm] = self.mu_hat[arm]
            self.t += 1
            # Only the updated arm's product changed, so testing it alone is
            # equivalent to testing the max over arms.
            if self.N1[arm] * self.mu_tilde[arm] >= self.threshold or self.t > self.params.T:
                self._enter_phase2()
            return
        ep = self.episode
        self.N2[arm] += 1
        n_a = self.N1[arm] + self.N2[arm]
        ep.mean = ep.mean * ((n_a - 1) / n_a) + x / n_a
        ep.pulls += 1
        self.t += 1
        if ep.pulls == ep.target:
            pre_noise = ep.mean
            if self.private:
                scale = indices.gdp_release_scale(self.params.T, self.params.epsilon, n_a)
                released = pre_noise + sample_laplace(self.stream, scale)
            else:
                released = pre_noise
            self.mu_tilde[arm] = _clip01(released)
            self.n_rel[arm] = n_a
            self.releases[arm] += 1
            self.last_release = (arm, n_a, pre_noise, self.mu_tilde[arm])
            self.episode = None

    def _enter_phase2(self) -> None:
        self.phase = 2
        self.tau = self.t - 1
        for i in range(self.params.k):
            self.mu_tilde[i] = _clip01(self.mu_tilde[i])
            self.n_rel[i] = self.N1[i]
            self.N2[i] = 1
        self.episode = None


class LdpNcbPolicy(_BasePolicy):
    """Two-phase sequential algorithm for the local model.

    The policy only ever sees rewards already perturbed with Lap(1/eps)
    (the driver applies the perturbation - trust boundary).  Phase I pulls
    uniformly and keeps per-arm running means of the privatised rewards,
    unclipped; it ends once some arm passes the guarded stopping test (see
    ``indices.phase1_crossed_ldp``) or the horizon runs out.  Phase II is
    ordinary index maximisation, with the running mean clipped to [0, 1]
    after every update.
    """

    requires_privatized_rewards = True

    def __init__(self, params: PolicyParams, stream: RngStream):
        super().__init__(params, stream)
        if params.T < 2:
            raise ConfigError("ldp_ncb needs T >= 2 (lnT > 0)")
        k = params.k
        self.phase = 1
        self.N = [0] * k
        self.mu_tilde = [0.0] * k

    def _index(self, i: int) -> float:
        if self.N[i] == 0:
            return math.inf
        return indices.ncb_ldp(
            self.mu_tilde[i],
            self.N[i],
            self.params.T,
            self.params.epsilon,
            self.params.c,
            self.params.alpha,
        )

    def select_arm(self) -> int:
        self._begin_select()
        self._check_horizon()
        if self.phase == 1:
            return self._end_select(self.stream.integer(self.params.k))
        best = -math.inf
        best_i = 0
        for i in range(self.params.k):
            v = self._index(i)
            if v > best:
                best = v
                best_i = i
        return self._end_select(best_i)

    def observe_reward(self, arm: int, x: float) -> None:
        self._begin_observe(arm)
        if not math.isfinite(x):
            raise DomainError(f"privatised reward must be finite, got {x}")
        self.N[arm] += 1
        n = self.N[arm]
        self.mu_tilde[arm] = self.mu_tilde[arm] * ((n - 1) / n) + x / n
        if self.phase == 2:
            self.mu_tilde[arm] = _clip01(self.mu_tilde[arm])
        self.t += 1
        if self.phase == 1:
            crossed = indices.phase1_crossed_ldp(
                n,
                self.mu_tilde[arm],
                self.params.T,
                self.params.epsilon,
                self.params.c,
                self.params.alpha,
            )
            if crossed or self.t > self.params.T:
                self.phase = 2
                self.tau = self.t - 1
                for i in range(self.params.k):
                    self.mu_tilde[i] = _clip01(self.mu_tilde[i])


class AnytimePolicy(_BasePolicy):
    """Horizon-free wrapper: doubling windows around the fixed-horizon core.

    Epoch h lasts W_h = 2^(h-1) rounds (so the rounds before epoch h sum
    to W_h - 1).  At each epoch start the policy flips a coin: with
    probability 1/W^2 the whole epoch is uniform exploration, otherwise a
    fresh fixed-horizon policy with horizon W plays the epoch.  The first
    epoch (W = 1) is always uniform.
    """

    def __init__(self, params: PolicyParams, stream: RngStream, inner_kind: str):
        super().__init__(params, stream)
        if inner_kind not in ("gdp", "ldp"):
            raise ConfigError(f"unknown anytime inner kind {inner_kind!r}")
        self.inner_kind = inner_kind
        self.requires_privatized_rewards = inner_kind == "ldp"
        self.W = 1
        self.epoch = 1
        self.rounds_before_epoch = 0
        self.rounds_left = 1
        self.flag = None  # 'uniform' | 'dpncb'; None until the epoch coin flip
        self.inner = None

    def _check_horizon(self) -> None:
        pass  # anytime: no horizon

    def _start_epoch_if_needed(self) -> None:
        if self.flag is not None:
            return
        u = self.stream.uniform()
        if u < 1.0 / (self.W * self.W):
            self.flag = "uniform"
            self.inner = None
        else:
            self.flag = "dpncb"
            inner_params = replace(self.params, T=self.W)
            if self.inner_kind == "gdp":
                self.inner = GdpNcbPolicy(inner_params, self.stream)
            else:
                self.inner = LdpNcbPolicy(inner_params, self.stream)

    def select_arm(self) -> int:
        self._begin_select()
        self._start_epoch_if_needed()
        if self.flag == "uniform":
            return self._end_select(self.stream.integer(self.params.k))
        return self._end_select(self.inner.select_arm())

    def observe_reward(self, arm: int, x: float) -> None:
        self._begin_observe(arm)
        if self.flag == "dpncb":
            self.inner.observe_reward(arm, x)
        elif self.inner_kind == "gdp":
            self._check_raw_reward(x)  # uniform epochs still see raw rewards
        self.t += 1
        self.rounds_left -= 1
        if self.rounds_left == 0:
            self.rounds_before_epoch += self.W
            self.W *= 2
            self.epoch += 1
            self.rounds_left = self.W
            self.flag = None
            self.inner = None


class AdapUcbPolicy(_BasePolicy):
    """Episodic private UCB baseline (trusted-learner model).

    Deterministic warm start (WARM_START_PULLS per arm, in arm order),
    then doubling episodes: the index argmax is pulled for twice its
    release count, the episode mean over those pulls alone (forgetting)
    is released with Lap(1/(eps*n)) noise, unclipped.  Index:
    mu + sqrt(ln t/n) + ln t/(eps*n) at the episode boundary.
    """

    def __init__(self, params: PolicyParams, stream: RngStream):
        super().__init__(params, stream)
        k = params.k
        self.n = [0] * k
        self.mu_t = [0.0] * k
        self.warm_sum = 0.0
        self.episode = None

    def _warm_arm(self) -> int:
        # rounds 1..WARM*k pull arm 0 WARM times, then arm 1, ...
        return (self.t - 1) // WARM_START_PULLS

    def select_arm(self) -> int:
        self._begin_select()
        self._check_horizon()
        if self.t <= WARM_START_PULLS * self.params.k:
            return self._end_select(self._warm_arm())
        if self.episode is None:
            best = -math.inf
            best_i = 0
            for i in range(self.params.k):
                v = indices.adap_ucb_index(self.mu_t[i], self.n[i], self.t, self.params.epsilon)
                if v > best:
                    best = v
                    best_i = i
            self.episode = _Episode(best_i, 2 * self.n[best_i], 0, 0.0)
            return self._end_select(best_i)
        return self._end_select(self.episode.arm)

    def _release(self, arm: int, total: float, count: int) -> None:
        released = total / count
        if math.isfinite(self.params.epsilon):
            released += sample_laplace(self.stream, 1.0 / (self.params.epsilon * count))
        self.mu_t[arm] = released
        self.n[arm] = count

    def observe_reward(self, arm: int, x: float) -> None:
        self._begin_observe(arm)
        self._check_raw_reward(x)
        if self.t <= WARM_START_PULLS * self.params.k:
            self.warm_sum += x
            if self.t % WARM_START_PULLS == 0:
                self._release(arm, self.warm_sum, WARM_START_PULLS)
                self.warm_sum = 0.0
            self.t += 1
            return
        ep = self.episode
        ep.mean += x  # running episode sum
        ep.pulls += 1
        self.t += 1
        if ep.pulls == ep.target:
            self._release(arm, ep.mean, ep.target)
            self.episode = None


class LdpUcbPolicy(_BasePolicy):
    """Sequential UCB baseline on per-reward privatised observations."""

    requires_privatized_rewards = True

    def __init__(self, params: PolicyParams, stream: RngStream):
        super().__init__(params, stream)
        self.n = [0] * params.k
        self.mu_t = [0.0] * params.k

    def select_arm(self) -> int:
        self._begin_select()
        self._check_horizon()
        if self.t <= self.params.k:
            return self._end_select(self.t - 1)
        best = -math.inf
        best_i = 0
        for i in range(self.params.k):
            v = indices.ldp_ucb_index(self.mu_t[i], self.n[i], self.t, self.params.epsilon)
            if v > best:
                best = v
                best_i = i
        return self._end_select(best_i)

    def observe_reward(self, arm: int, x: float) -> None:
        self._begin_observe(arm)
        if not math.isfinite(x):
            raise DomainError(f"privatised reward must be finite, got {x}")
        self.n[arm] += 1
        n = self.n[arm]
        self.mu_t[arm] = self.mu_t[arm] * ((n - 1) / n) + x / n
        self.t += 1


class Ucb1Policy(_BasePolicy):
    """Classic non-private UCB: mu + sqrt(2 ln t / n)."""

    def __init__(self, params: PolicyParams, stream: RngStream):
        super().__init__(params, stream)
        self.n = [0] * params.k
        self.mu_hat = [0.0] * params.k

    def select_arm(self) -> int:
        self._begin_select()
        self._check_horizon()
        if self.t <= self.params.k:
            return self._end_select(self.t - 1)
        best = -math.inf
        best_i = 0
        for i in range(self.params.k):
            v = indices.ucb1_index(self.mu_hat[i], self.n[i], self.t)
            if v > best:
                best = v
                best_i = i
        return self._end_select(best_i)

    def observe_reward(self, arm: int, x: float) -> None:
        self._begin_observe(arm)
        self._check_raw_reward(x)
        self.n[arm] += 1
        n = self.n[arm]
        self.mu_hat[arm] = self.mu_hat[arm] * ((n - 1) / n) + x / n
        self.t += 1


def make_policy(name: str, params: PolicyParams, stream: RngStream):
    """Construct a fully initialised policy state by registry name."""
    if name == "gdp_ncb":
        return GdpNcbPolicy(params, stream)
    if name == "ncb":
        return GdpNcbPolicy(replace(params, epsilon=math.inf), stream)
    if name == "ldp_ncb":
        return LdpNcbPolicy(params, stream)
    if name == "anytime_gdp":
        return AnytimePolicy(params, stream, "gdp")
    if name == "anytime_ldp":
        return AnytimePolicy(params, stream, "ldp")
    if name == "adap_ucb":
        return AdapUcbPolicy(params, stream)
    if name == "ldp_ucb":
        return LdpUcbPolicy(params, stream)
    if name == "ucb1":
        return Ucb1Policy(params, stream)
    raise ConfigError(f"unknown policy {name!r}; known: {', '.join(POLICY_NAMES)}")
