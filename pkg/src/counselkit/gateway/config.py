"""Service configuration: file, then environment, then explicit overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from ..fusion import FusionConfig

ENV_PREFIX = "COUNSELKIT_"

LOOPBACK_HOSTS = ("127.0.0.1", "localhost", "::1")


@dataclass(frozen=True)
class GatewayConfig:
    store_root: str = "./sessions"
    host: str = "127.0.0.1"
    port: int = 8715
    fusion: FusionConfig = field(default_factory=FusionConfig)
    generator_url: str | None = None
    generator_model: str | None = None
    generator_timeout_s: float = 10.0
    dashboard_dir: str | None = None
    allow_non_loopback: bool = False

    def require_bindable(self) -> None:
        if self.host not in LOOPBACK_HOSTS and not self.allow_non_loopback:
            raise ValueError(
                f"refusing to bind non-loopback host {self.host!r} without "
                "allow_non_loopback"
            )


_FIELD_PARSERS = {
    "store_root": str,
    "host": str,
    "port": int,
    "generator_url": str,
    "generator_model": str,
    "generator_timeout_s": float,
    "dashboard_dir": str,
    "allow_non_loopback": lambda v: str(v).lower() in ("1", "true", "yes", "on"),
}


def _apply(config: GatewayConfig, values: dict) -> GatewayConfig:
    known = {f.name for f in fields(GatewayConfig)}
    updates = {}
    for key, value in values.items():
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        if value is None:
            continue
        if key == "fusion":
            updates[key] = value if isinstance(value, FusionConfig) else FusionConfig(**value)
        else:
            updates[key] = _FIELD_PARSERS[key](value)
    return replace(config, **updates)


def load_config(
    path: str | Path | None = None,
    env: dict | None = None,
    overrides: dict | None = None,
) -> GatewayConfig:
    """Layered configuration: overrides beat environment beats file."""
    config = GatewayConfig()
    if path is not None:
        config = _apply(config, json.loads(Path(path).read_text(encoding="utf-8")))
    env = os.environ if env is None else env
    env_values = {}
    for f in fields(GatewayConfig):
        if f.name == "fusion":
            continue
        raw = env.get(ENV_PREFIX + f.name.upper())
        if raw is not None:
            env_values[f.name] = raw
    config = _apply(config, env_values)
    if overrides:
        config = _apply(config, overrides)
    return config
