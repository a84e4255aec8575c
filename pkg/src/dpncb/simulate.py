"""Run drivers: fixed-horizon simulation and replay for audits.

``run_policy_python`` is the reference driver; the compiled kernel in
``dpncb._kernel`` reproduces it bit-for-bit for the policies it covers
(see ``dpncb.backends``).  Per round the draw order is fixed:

    1. select_arm            (uniform phases: one uniform; else none)
    2. environment reward    (one uniform, every arm kind)
    3. local privatisation   (one uniform, local-model policies only)
    4. observe-side noise    (policy-internal Laplace releases)

all against the single per-run stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envs import BanditInstance, ReplayTape, replay_reward, sample_reward
from .exceptions import ConfigError
from .policies import PolicyParams, local_privatize, make_policy
from .rng import RngStream

__all__ = ["SimResult", "run_policy_python", "replay_policy"]


@dataclass
class SimResult:
    """Raw outcome of one run: pulled arms, environment rewards, and the
    number of uniform-exploration rounds (tau = T when Phase I never ended,
    -1 for policies without a phase structure)."""

    arms: np.ndarray
    rewards: np.ndarray
    tau: int

    @property
    def T(self) -> int:
        return len(self.arms)


def run_policy_python(
    policy_name: str,
    params: PolicyParams,
    instance: BanditInstance,
    T: int,
    stream: RngStream,
) -> SimResult:
    """Simulate ``T`` rounds of one policy on one instance (pure Python)."""
    if instance.k != params.k:
        raise ConfigError(f"instance has k={instance.k} but params.k={params.k}")
    policy = make_policy(policy_name, params, stream)
    privatize = policy.requires_privatized_rewards
    epsilon = params.epsilon
    arms = np.empty(T, dtype=np.int64)
    rewards = np.empty(T, dtype=np.float64)
    for t in range(T):
        a = policy.select_arm()
        x = sample_reward(instance, a, stream)
        obs = local_privatize(x, epsilon, stream) if privatize else x
        policy.observe_reward(a, obs)
        arms[t] = a
        rewards[t] = x
    tau = policy.tau
    if tau is None:
        tau = T if hasattr(policy, "phase") else -1
    return SimResult(arms=arms, rewards=rewards, tau=tau)


def replay_policy(
    policy_name: str,
    params: PolicyParams,
    tape: ReplayTape,
    stream: RngStream,
) -> np.ndarray:
    """Run one policy against a fixed reward tape; returns the arm sequence.

    Replay semantics of the global-privacy definition: the reward of round
    t is the tape entry X_t regardless of which arm was pulled.
    """
    T = len(tape)
    if params.T != T:
        raise ConfigError(f"params.T={params.T} must equal tape length {T}")
    policy = make_policy(policy_name, params, stream)
    privatize = policy.requires_privatized_rewards
    arms = np.empty(T, dtype=np.int64)
    for t in range(1, T + 1):
        a = policy.select_arm()
        x = replay_reward(tape, t)
        obs = local_privatize(x, params.epsilon, stream) if privatize else x
        policy.observe_reward(a, obs)
        arms[t - 1] = a
    return arms
