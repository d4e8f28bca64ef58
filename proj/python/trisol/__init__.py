"""Three weak solutions of a singular Sobolev problem: constants, hypothesis checks, critical points."""

import json as _json
from typing import Any, Mapping, Union

from ._trisol import (
    ConfigError,
    NumericalError,
    PreconditionError,
    ball_volume,
    chi_upper_bound,
    critical_exponent,
    embedding_bound,
    k1_k2,
    kappa,
    phi_u_beta_closed,
    u_beta_profile,
)
from . import _trisol

__all__ = [
    "ConfigError",
    "NumericalError",
    "PreconditionError",
    "ball_volume",
    "ball_example_config",
    "check",
    "chi_upper_bound",
    "compute_constants",
    "config_hash",
    "constants",
    "critical_exponent",
    "embedding_bound",
    "k1_k2",
    "kappa",
    "normalize_config",
    "phi_u_beta_closed",
    "reproduce",
    "solve",
    "u_beta_profile",
]

Config = Union[str, Mapping[str, Any]]


def _text(config: Config) -> str:
    return config if isinstance(config, str) else _json.dumps(config)


def _result(raw):
    code, report, summary = raw
    return {"exit_code": code, "report": _json.loads(report), "summary": summary}


def compute_constants(n: int, measure: float, d: float, q: float) -> dict:
    return _json.loads(_trisol.compute_constants(n, measure, d, q))


def normalize_config(config: Config) -> dict:
    return _json.loads(_trisol.normalize_config(_text(config)))


def config_hash(config: Config) -> str:
    return _trisol.config_hash(_text(config))


def ball_example_config() -> dict:
    return _json.loads(_trisol.ball_example_config())


def constants(config: Config) -> dict:
    return _result(_trisol.run_constants(_text(config)))


def check(config: Config) -> dict:
    return _result(_trisol.run_check(_text(config)))


def solve(config: Config) -> dict:
    return _result(_trisol.run_solve(_text(config)))


def reproduce(seed: int = 42) -> dict:
    return _result(_trisol.run_reproduce(seed))
