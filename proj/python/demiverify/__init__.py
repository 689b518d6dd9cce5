"""Numerical verification of demimartingale inequalities.

Generators are given as dicts of the ``generator.*`` config keys without the
prefix, e.g. ``{"family": "iid", "law": "rademacher", "horizon": "10"}``.
"""

import json
from pathlib import Path

from ._core import (
    ConfigError,
    DomainError,
    PreconditionError,
    bernstein_tail,
    clt_diagnose,
    complete_convergence,
    doob_max_bound,
    generate,
    h1,
    h1_lower,
    ks_critical_value,
    ks_distance_normal,
    lp_max_bound,
    mgf_log_bound,
    moment_bound,
    phi,
    phi_bound,
    psi_sup,
    registry,
    run_config_json,
    run_suite_json,
    tail_probability,
    terminal_law,
)


def run_config(text):
    """Run one experiment from config text and return the report as a dict."""
    return json.loads(run_config_json(text))


def run_suite(directory, out=None):
    """Run every *.cfg in ``directory``; returns (exit_code, summary dict)."""
    code, summary = run_suite_json(Path(directory), None if out is None else Path(out))
    return code, json.loads(summary)


__all__ = [
    "ConfigError",
    "DomainError",
    "PreconditionError",
    "bernstein_tail",
    "clt_diagnose",
    "complete_convergence",
    "doob_max_bound",
    "generate",
    "h1",
    "h1_lower",
    "ks_critical_value",
    "ks_distance_normal",
    "lp_max_bound",
    "mgf_log_bound",
    "moment_bound",
    "phi",
    "phi_bound",
    "psi_sup",
    "registry",
    "run_config",
    "run_suite",
    "tail_probability",
    "terminal_law",
]
