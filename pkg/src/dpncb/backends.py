"""Simulation backend selection.

Two interchangeable drivers exist:

``python``
    The reference implementation: drives the policy objects in
    ``dpncb.policies`` round by round.
``compiled``
    The Cython kernel (``dpncb._kernel``), a bit-for-bit mirror of the
    reference driver for the fixed-horizon policies.  Selected by default
    when the extension imported successfully.

Traces are identical across backends (asserted in the test suite), so
backend choice affects speed only.  Set ``DPNCB_BACKEND=python`` or
``=compiled`` to force one; the anytime wrapper always runs on the
Python driver.
"""

from __future__ import annotations

import os

import numpy as np

from .envs import BanditInstance
from .exceptions import ConfigError
from .policies import PolicyParams
from .rng import RngStream
from .simulate import SimResult, run_policy_python

__all__ = [
    "available_backends",
    "default_backend",
    "simulate_run",
    "KERNEL_POLICIES",
]

try:
    from . import _kernel

    _HAVE_KERNEL = True
    KERNEL_POLICIES = tuple(_kernel.KERNEL_POLICIES)
except ImportError:  # pure-Python fallback
    _kernel = None
    _HAVE_KERNEL = False
    KERNEL_POLICIES = ()

_KIND_CODES = {"bernoulli": 0, "beta": 1, "two_point": 2, "uniform01": 3, "constant": 4}


def available_backends() -> tuple:
    return ("python", "compiled") if _HAVE_KERNEL else ("python",)


def default_backend() -> str:
    forced = os.environ.get("DPNCB_BACKEND")
    if forced:
        if forced not in ("python", "compiled"):
            raise ConfigError(f"DPNCB_BACKEND must be 'python' or 'compiled', got {forced!r}")
        if forced == "compiled" and not _HAVE_KERNEL:
            raise ConfigError("DPNCB_BACKEND=compiled but the kernel is not built")
        return forced
    return "compiled" if _HAVE_KERNEL else "python"


def _encode_instance(instance: BanditInstance):
    k = instance.k
    kinds = np.zeros(k, dtype=np.int32)
    pa = np.zeros(k, dtype=np.float64)
    pb = np.zeros(k, dtype=np.float64)
    pc = np.zeros(k, dtype=np.float64)
    for i, arm in enumerate(instance.arms):
        kinds[i] = _KIND_CODES[arm.kind]
        params = arm.params
        if len(params) > 0:
            pa[i] = params[0]
        if len(params) > 1:
            pb[i] = params[1]
        if len(params) > 2:
            pc[i] = params[2]
    return kinds, pa, pb, pc


def simulate_run(
    policy_name: str,
    params: PolicyParams,
    instance: BanditInstance,
    T: int,
    stream: RngStream,
    backend: str | None = None,
) -> SimResult:
    """Simulate one run on the requested (or default) backend.

    The anytime policies transparently fall back to the Python driver.
    """
    if backend is None:
        backend = default_backend()
    if backend == "compiled" and not _HAVE_KERNEL:
        raise ConfigError("compiled backend requested but the kernel is not built")
    if backend == "compiled" and policy_name in KERNEL_POLICIES:
        if instance.k != params.k:
            raise ConfigError(f"instance has k={instance.k} but params.k={params.k}")
        kinds, pa, pb, pc = _encode_instance(instance)
        arms, rewards, tau = _kernel.run_policy(
            policy_name,
            params.k,
            T,
            params.epsilon,
            params.c,
            params.alpha,
            kinds,
            pa,
            pb,
            pc,
            stream.bit_generator(),
        )
        return SimResult(arms=arms, rewards=rewards, tau=tau)
    if backend not in ("python", "compiled"):
        raise ConfigError(f"unknown backend {backend!r}")
    return run_policy_python(policy_name, params, instance, T, stream)
