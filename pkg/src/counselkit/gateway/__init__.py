"""HTTP gateway and command-line entry points."""

from .app import ApiException, HttpTextGenerator, create_app, serve
from .cli import cli, main
from .config import ENV_PREFIX, GatewayConfig, load_config

__all__ = [
    "ApiException",
    "ENV_PREFIX",
    "GatewayConfig",
    "HttpTextGenerator",
    "cli",
    "create_app",
    "load_config",
    "main",
    "serve",
]
