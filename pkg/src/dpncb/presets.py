"""Named experiment and audit presets.

Figure presets pin the published experiment parameters (instances,
epsilon = 0.2, 50 runs, c = 3, alpha = 3.1).  Horizon grids and the
epsilon sweep grid are artifact choices: the sources give ranges, not
grid points.  fig_a rebuilds its horizon-coupled adversarial instance at
every grid point.
"""

from __future__ import annotations

import math

from .audit import ArmSequences, AuditConfig, ScalarBins
from .envs import ReplayTape
from .exceptions import ConfigError
from .harness import ExperimentConfig
from .policies import PolicyParams

__all__ = ["FIGURE_PRESETS", "AUDIT_PRESETS", "figure_preset", "audit_preset"]

_EPS_SWEEP = (0.1, 0.2, 0.5, 1.0)

_T_GRID_MAIN = (10_000, 30_000, 100_000, 200_000)
_T_GRID_DECAY = (10_000, 30_000, 100_000, 300_000)
_T_GRID_SWEEP = (10_000, 30_000, 100_000)

FIGURE_PRESETS = ("fig_a", "fig_b", "fig_c", "fig_d", "fig_e", "fig_f")


def figure_preset(name: str, **overrides) -> ExperimentConfig:
    """Fully expanded config for one of the named figures.

    ``overrides`` may replace runs_per_cell, master_seed, output_dir or
    threads (CLI flags route through here).
    """
    base = dict(runs_per_cell=50, master_seed=1, output_dir="out", name=name)
    if name == "fig_a":
        doc = dict(
            instance={"preset": "adversarial"},
            algorithms=[{"name": "gdp_ncb"}, {"name": "adap_ucb"}],
            epsilon_list=[0.2],
            T_grid=list(range(50, 1001, 50)),
        )
    elif name == "fig_b":
        doc = dict(
            instance={"preset": "bern50", "seed": 1},
            algorithms=[
                {"name": "ncb"},
                {"name": "adap_ucb"},
                {"name": "ldp_ucb"},
                {"name": "gdp_ncb"},
                {"name": "ldp_ncb"},
            ],
            epsilon_list=[0.2],
            T_grid=list(_T_GRID_MAIN),
        )
    elif name == "fig_c":
        doc = dict(
            instance={"preset": "bern50", "seed": 1},
            algorithms=[{"name": "gdp_ncb"}],
            epsilon_list=list(_EPS_SWEEP),
            T_grid=list(_T_GRID_SWEEP),
        )
    elif name == "fig_d":
        doc = dict(
            instance={"preset": "bern50", "seed": 1},
            algorithms=[{"name": "ldp_ncb"}],
            epsilon_list=list(_EPS_SWEEP),
            T_grid=list(_T_GRID_SWEEP),
        )
    elif name == "fig_e":
        doc = dict(
            instance={"preset": "bern50", "seed": 1},
            algorithms=[{"name": "ncb"}, {"name": "gdp_ncb"}, {"name": "ldp_ncb"}],
            epsilon_list=[0.2],
            T_grid=list(_T_GRID_DECAY),
        )
    elif name == "fig_f":
        doc = dict(
            instance={"preset": "mixed50", "seed": 1},
            algorithms=[{"name": "ncb"}, {"name": "gdp_ncb"}, {"name": "ldp_ncb"}],
            epsilon_list=[0.2],
            T_grid=list(_T_GRID_DECAY),
        )
    else:
        raise ConfigError(f"unknown figure preset {name!r}; known: {', '.join(FIGURE_PRESETS)}")
    base.update(doc)
    base.update(overrides)
    return ExperimentConfig.from_dict(base)


# ---------------------------------------------------------------------------
# Audit presets.
# ---------------------------------------------------------------------------

AUDIT_PRESETS = ("scalar_laplace", "scalar_laplace_broken", "gdp_sequences", "ncb_deterministic")


def audit_preset(name: str, trials: int | None = None, master_seed: int = 0) -> dict:
    """Assemble the inputs for one named audit; returns a kwargs dict for
    the matching audit entry point plus bookkeeping fields.

    ``scalar_laplace``      the honest per-reward mechanism at eps = 1
    ``scalar_laplace_broken``  same mechanism at half the noise scale
                               (true leakage 2*eps) - must be flagged
    ``gdp_sequences``       arm-sequence audit of gdp_ncb at eps = 2, T = 6
    ``ncb_deterministic``   the noise-free policy with its stopping
                            threshold scaled into the replayable range, to
                            expose the deterministic reward dependence
    """
    if name in ("scalar_laplace", "scalar_laplace_broken"):
        n = trials if trials is not None else 1_000_000
        # min_count 1000 keeps per-bin ratio noise ~5% at this trial count
        config = AuditConfig(
            trials=n,
            outcome=ScalarBins(n_bins=100, lo=-8.0, hi=9.0),
            min_count=1000,
            slack=0.1,
        )
        return dict(
            kind="scalar",
            epsilon=1.0,
            scale_factor=1.0 if name == "scalar_laplace" else 0.5,
            x=0.0,
            x_prime=1.0,
            epsilon_target=1.0,
            config=config,
            master_seed=master_seed,
        )
    if name == "gdp_sequences":
        n = trials if trials is not None else 200_000
        config = AuditConfig(
            trials=n, outcome=ArmSequences(T=6), min_count=20, slack=0.1
        )
        return dict(
            kind="sequence",
            policy="gdp_ncb",
            params=PolicyParams(k=2, T=6, epsilon=2.0),
            tape=ReplayTape((1.0, 1.0, 1.0, 1.0, 1.0, 1.0)),
            tape_prime=ReplayTape((0.0, 1.0, 1.0, 1.0, 1.0, 1.0)),
            epsilon_target=2.0,
            config=config,
            master_seed=master_seed,
        )
    if name == "ncb_deterministic":
        n = trials if trials is not None else 200_000
        config = AuditConfig(
            trials=n, outcome=ArmSequences(T=6), min_count=20, slack=0.1
        )
        # c chosen so 1600*c^2*ln(6) = 0.5: the stopping test then hinges
        # on the first tape entry and the arm sequence reveals it.
        c = math.sqrt(0.5 / (1600.0 * math.log(6.0)))
        return dict(
            kind="sequence",
            policy="ncb",
            params=PolicyParams(k=2, T=6, epsilon=1.0, c=c),
            tape=ReplayTape((1.0, 0.9, 0.9, 0.9, 0.9, 0.9)),
            tape_prime=ReplayTape((0.0, 0.9, 0.9, 0.9, 0.9, 0.9)),
            epsilon_target=1.0,
            config=config,
            master_seed=master_seed,
        )
    raise ConfigError(f"unknown audit preset {name!r}; known: {', '.join(AUDIT_PRESETS)}")
