"""Confidence-bound indices and Phase-I stopping rules.

All functions here are scalar-pure and written with the exact arithmetic
the compiled kernel mirrors, so the two simulation backends produce
bit-identical traces.  ``epsilon`` may be ``math.inf``; every privacy
compensation term then collapses to zero and the formulas reduce to their
noise-free counterparts.
"""

from __future__ import annotations

import math

from .exceptions import DomainError

__all__ = [
    "ncb_nonprivate",
    "ncb_gdp",
    "ncb_ldp",
    "gdp_release_scale",
    "phase1_threshold_gdp",
    "phase1_crossed_gdp",
    "phase1_crossed_ldp",
    "ucb1_index",
    "adap_ucb_index",
    "ldp_ucb_index",
]


def ncb_nonprivate(mu_hat: float, n: int, T: float) -> float:
    """Optimistic index from the raw empirical mean: mu + 4*sqrt(mu*lnT/n)."""
    if mu_hat < 0.0:
        raise DomainError(f"empirical mean must be non-negative, got {mu_hat}")
    if n < 1:
        raise DomainError(f"sample count must be >= 1, got {n}")
    if T < 2:
        raise DomainError(f"horizon must be >= 2, got {T}")
    log_t = math.log(T)
    return mu_hat + 4.0 * math.sqrt(mu_hat * log_t / n)


def ncb_gdp(mu_tilde: float, n: int, T: float, epsilon: float, c: float, alpha: float) -> float:
    """Index on the episodic private mean in the trusted-learner model.

    mu + 2c*sqrt(2*mu*lnT/n) + alpha*(lnT)^2/(eps*n)
       + 4*sqrt(2*alpha/eps)*(lnT)^{3/2}/n
    """
    if not 0.0 <= mu_tilde <= 1.0:
        raise DomainError(f"private mean must be clipped to [0, 1], got {mu_tilde}")
    if n < 1:
        raise DomainError(f"sample count must be >= 1, got {n}")
    log_t = math.log(T)
    return (
        mu_tilde
        + 2.0 * c * math.sqrt(2.0 * mu_tilde * log_t / n)
        + alpha * log_t * log_t / (epsilon * n)
        + 4.0 * math.sqrt(2.0 * alpha / epsilon) * log_t**1.5 / n
    )


def ncb_ldp(mu_tilde: float, n: int, T: float, epsilon: float, c: float, alpha: float) -> float:
    """Index on the locally privatised running mean.

    mu + 2c*sqrt(2*mu*lnT/n) + (1/eps)*sqrt(8*alpha*lnT/n)
       + 4c*(2*alpha)^{1/4}*(lnT)^{3/4}/(sqrt(eps)*n^{3/4})
    """
    if not 0.0 <= mu_tilde <= 1.0:
        raise DomainError(f"private mean must be clipped to [0, 1], got {mu_tilde}")
    if n < 1:
        raise DomainError(f"sample count must be >= 1, got {n}")
    log_t = math.log(T)
    return (
        mu_tilde
        + 2.0 * c * math.sqrt(2.0 * mu_tilde * log_t / n)
        + math.sqrt(8.0 * alpha * log_t / n) / epsilon
        + 4.0 * c * (2.0 * alpha) ** 0.25 * log_t**0.75 / (math.sqrt(epsilon) * n**0.75)
    )


def gdp_release_scale(T: float, epsilon: float, n: int) -> float:
    """Laplace scale lnT/(eps*n) of a private-mean release over n samples."""
    return math.log(T) / (epsilon * n)


def phase1_threshold_gdp(T: float, epsilon: float, c: float) -> float:
    """Stopping threshold 1600*(c^2*lnT + (lnT)^2/eps) on n_i * mu_tilde_i.

    With epsilon = inf this is the noise-free policy's 1600*c^2*lnT.
    """
    log_t = math.log(T)
    return 1600.0 * (c * c * log_t + log_t * log_t / epsilon)


def phase1_crossed_gdp(product: float, threshold: float) -> bool:
    """True once some arm's noisy cumulative reward reaches the threshold."""
    return product >= threshold


def phase1_crossed_ldp(
    n: int, mu_tilde: float, T: float, epsilon: float, c: float, alpha: float
) -> bool:
    """Per-arm stopping test for the local model.

    Stop once  n*mu >= g + 1600*(c^2*lnT + n*(lnT)^2 / ((n*mu - g)*eps^2))
    with g = sqrt(8*n*alpha*lnT)/eps.  The guard n*mu > g is evaluated
    first; it keeps the divisor positive, so the division is unreachable
    otherwise (and the condition cannot hold there anyway, since the
    right-hand side always exceeds g).
    """
    if n < 1:
        return False
    log_t = math.log(T)
    lhs = n * mu_tilde
    g = math.sqrt(8.0 * n * alpha * log_t) / epsilon
    if lhs - g <= 0.0:
        return False
    rhs = g + 1600.0 * (c * c * log_t + n * log_t * log_t / ((lhs - g) * epsilon * epsilon))
    return lhs >= rhs


# ---------------------------------------------------------------------------
# Baseline indices.  These back artifact-defined approximations of published
# private/non-private UCB baselines; constants are not claimed to replicate
# the cited algorithms exactly (see the policies module docstring).
# ---------------------------------------------------------------------------


def ucb1_index(mu_hat: float, n: int, t: int) -> float:
    return mu_hat + math.sqrt(2.0 * math.log(t) / n)


def adap_ucb_index(mu_tilde: float, n: int, t: int, epsilon: float) -> float:
    log_t = math.log(t)
    return mu_tilde + math.sqrt(log_t / n) + log_t / (epsilon * n)


def ldp_ucb_index(mu_tilde: float, n: int, t: int, epsilon: float) -> float:
    return mu_tilde + (1.0 + 1.0 / epsilon) * math.sqrt(2.0 * math.log(t) / n)
