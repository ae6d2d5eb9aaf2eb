"""Runtime configuration for the CLI and the API server.

Configuration lives in a JSON file; environment variables fill gateway
settings that the file leaves blank.  Mock mode needs no configuration at
all, so every field has a usable default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import DomainError
from .gateways import (
    GatewaySettings,
    HttpTextGateway,
    HttpVideoGateway,
    MockTextGateway,
    MockVideoGateway,
    gateway_settings_from_env,
)

MODE_MOCK = "mock"
MODE_LIVE = "live"


class BadConfig(DomainError):
    code = "bad_config"


@dataclass(frozen=True, slots=True)
class AppConfig:
    project_dir: str = "projects"
    mode: str = MODE_MOCK
    host: str = "127.0.0.1"
    port: int = 8080
    cors_origins: tuple[str, ...] = ()
    gateway: GatewaySettings = field(default_factory=GatewaySettings)


_TOP_KEYS = {"project_dir", "mode", "host", "port", "cors_origins", "gateway"}
_GATEWAY_KEYS = {"text_endpoint", "text_api_key", "video_endpoint",
                 "video_api_key", "timeout_s", "retries",
                 "render_parallelism"}


def load_config(path: str | Path | None = None,
                env: dict | None = None) -> AppConfig:
    """Build an AppConfig from a JSON file plus environment fallbacks.

    File values win over environment values; fields absent from both keep
    their defaults.
    """
    gateway = gateway_settings_from_env(env)
    if path is None:
        return AppConfig(gateway=gateway)
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise BadConfig(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise BadConfig(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise BadConfig("config top level must be an object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise BadConfig(f"unknown config keys: {sorted(unknown)}")

    gw_data = data.get("gateway", {})
    if not isinstance(gw_data, dict):
        raise BadConfig("gateway section must be an object")
    bad = set(gw_data) - _GATEWAY_KEYS
    if bad:
        raise BadConfig(f"unknown gateway keys: {sorted(bad)}")
    if gw_data:
        gateway = replace(gateway, **gw_data)

    mode = data.get("mode", MODE_MOCK)
    if mode not in (MODE_MOCK, MODE_LIVE):
        raise BadConfig(f"mode must be {MODE_MOCK!r} or {MODE_LIVE!r}")
    cors = data.get("cors_origins", ())
    if not isinstance(cors, (list, tuple)) or not all(
            isinstance(o, str) for o in cors):
        raise BadConfig("cors_origins must be a list of strings")
    try:
        return AppConfig(
            project_dir=str(data.get("project_dir", "projects")),
            mode=mode,
            host=str(data.get("host", "127.0.0.1")),
            port=int(data.get("port", 8080)),
            cors_origins=tuple(cors),
            gateway=gateway,
        )
    except (TypeError, ValueError) as exc:
        raise BadConfig(f"bad config value: {exc}") from exc


def build_gateways(config: AppConfig):
    """(text_gateway, video_gateway) for the configured mode."""
    if config.mode == MODE_MOCK:
        return MockTextGateway(), MockVideoGateway()
    missing = [name for name, value in (
        ("text_endpoint", config.gateway.text_endpoint),
        ("video_endpoint", config.gateway.video_endpoint),
    ) if not value]
    if missing:
        raise BadConfig(f"live mode needs gateway endpoints: {missing}")
    return (HttpTextGateway(config.gateway),
            HttpVideoGateway(config.gateway))
