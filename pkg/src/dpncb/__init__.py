"""Differentially private, fairness-aware multi-armed bandits.

Library + CLI for simulating the private Nash-confidence-bound algorithms
(global and local privacy models, plus an anytime wrapper) against
standard baselines, measuring Nash and average regret by Monte Carlo, and
empirically auditing the privacy of the implemented mechanisms.
"""

from .audit import (
    ArmSequences,
    AuditConfig,
    AuditReport,
    ScalarBins,
    audit_bandit_global,
    audit_scalar_mechanism,
    laplace_mechanism,
)
from .backends import available_backends, default_backend, simulate_run
from .envs import (
    ArmSpec,
    BanditInstance,
    ReplayTape,
    make_figure_instance,
    replay_reward,
    sample_reward,
    true_mean,
)
from .exceptions import AuditError, ConfigError, DomainError, ShapeError, StateError
from .harness import AlgorithmSpec, ExperimentConfig, run_experiment
from .metrics import (
    MeanRewardCurve,
    PhaseOneStats,
    RegretReport,
    RunTrace,
    aggregate_runs,
    average_regret,
    exploration_budget_S,
    nash_regret,
)
from .plotting import PlotSpec, emit_plot
from .policies import PolicyParams, local_privatize, make_policy
from .presets import audit_preset, figure_preset
from .rng import RngStream, derive_stream, laplace_quantile, sample_laplace
from .simulate import SimResult, replay_policy, run_policy_python

__version__ = "0.1.0"
