"""Run configuration with file and environment overrides.

Resolution order: built-in defaults, then a JSON config file, then
environment variables prefixed ZTAU_ (e.g. ZTAU_GRID_POINTS), then explicit
overrides such as CLI flags.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace

from .errors import ParseError

ENV_PREFIX = "ZTAU_"


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 128
    grid_points: int = 256
    max_dims: int = 6
    term_budget: int = 10**6
    tolerance: float = 1e-8
    prime_bound: int = 10**6

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"config field {f.name} must be positive")
        if self.tolerance >= 1:
            raise ValueError("tolerance must be below 1")
        if self.precision_bits < 53:
            raise ValueError("precision_bits must be at least 53")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _coerce(name: str, raw, target_type) -> object:
    try:
        return target_type(raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"config value {name}={raw!r} is not a valid {target_type.__name__}") from exc


def load_config(
    config_path: str | None = None,
    env: dict | None = None,
    **overrides,
) -> RunConfig:
    cfg = RunConfig()
    types = {f.name: f.type for f in fields(RunConfig)}
    typemap = {"int": int, "float": float}

    def apply(source: dict, origin: str) -> None:
        nonlocal cfg
        updates = {}
        for key, raw in source.items():
            if key not in types:
                raise ParseError(f"unknown config key {key!r} in {origin}")
            updates[key] = _coerce(key, raw, typemap[types[key]])
        if updates:
            try:
                cfg = replace(cfg, **updates)
            except ValueError as exc:
                raise ParseError(f"invalid config in {origin}: {exc}") from exc

    if config_path is not None:
        try:
            with open(config_path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ParseError(f"cannot read config file {config_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"config file {config_path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ParseError(f"config file {config_path} must hold a JSON object")
        apply(data, config_path)

    env = os.environ if env is None else env
    env_updates = {}
    for key in types:
        var = ENV_PREFIX + key.upper()
        if var in env:
            env_updates[key] = env[var]
    apply(env_updates, "environment")

    apply({k: v for k, v in overrides.items() if v is not None}, "overrides")
    return cfg
