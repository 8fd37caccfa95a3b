"""Nested-cube homeomorphisms of [-1, 1]^n, their Cantor sets and gauge
Hausdorff measures.

Gauge and tau specifications are plain dicts in the same form as the
command line configs, e.g. ``{"n": 2, "tau": {"family": "log"}}``.
"""

import json as _json

from . import _core
from ._core import (
    ConfigError,
    DomainError,
    PonomarevError,
    PonomarevMap,
    RidgeSetError,
    SequencePack,
    center,
    code_z,
    default_eps_grid,
    diameter_constant,
    dyadic_preimage,
    grand_norm_report,
    lebesgue_level,
    shell_integral,
    sobolev_norm,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "PonomarevError",
    "PonomarevMap",
    "RidgeSetError",
    "SequencePack",
    "center",
    "code_z",
    "default_eps_grid",
    "diameter_constant",
    "dyadic_preimage",
    "eval_h",
    "eval_tau",
    "grand_norm_report",
    "hausdorff_upper_sum",
    "lebesgue_level",
    "shell_integral",
    "sobolev_norm",
    "tau_root",
    "thm1_sequence",
    "thm2_sequence",
]


def _dump(spec):
    return spec if isinstance(spec, str) else _json.dumps(spec)


def eval_h(gauge, t):
    return _core.eval_h(_dump(gauge), t)


def eval_tau(tau, t):
    return _core.eval_tau(_dump(tau), t)


def tau_root(tau, p, n, tol=1e-14):
    return _core.tau_root(_dump(tau), p, n, tol)


def thm1_sequence(tau, n, depth):
    """a_0 = 1 and a_k solving a^n tau(2^-k a) = 1."""
    return _core.thm1_sequence(_dump(tau), n, depth)


def thm2_sequence(gauge, depth, safety=0.5):
    """Largest halving-compatible a_k with h(c_n 2^-k a_k) <= safety 2^(-2nk)."""
    return _core.thm2_sequence(_dump(gauge), depth, safety)


def hausdorff_upper_sum(gauge, pack, k):
    return _core.hausdorff_upper_sum(_dump(gauge), pack, k)
