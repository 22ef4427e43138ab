"""Service/CLI configuration: JSON file plus environment-variable overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

ENV_PREFIX = "INFOMORPH"


@dataclass
class ProviderConfig:
    kind: str = "mock"  # "mock" | "http"
    endpoint: str = ""
    token: str = ""
    name: str = "main"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8787
    data_dir: str = "data"
    provider: ProviderConfig = field(default_factory=ProviderConfig)

    @property
    def data_path(self) -> Path:
        return Path(self.data_dir)


def load_config(path: str | None = None, env: dict | None = None) -> ServiceConfig:
    env = env if env is not None else dict(os.environ)
    raw: dict = {}
    if path:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    provider_raw = raw.get("provider", {})
    config = ServiceConfig(
        host=raw.get("host", "127.0.0.1"),
        port=int(raw.get("port", 8787)),
        data_dir=raw.get("data_dir", "data"),
        provider=ProviderConfig(
            kind=provider_raw.get("kind", "mock"),
            endpoint=provider_raw.get("endpoint", ""),
            token=provider_raw.get("token", ""),
            name=provider_raw.get("name", "main"),
        ),
    )
    if f"{ENV_PREFIX}_PORT" in env:
        config.port = int(env[f"{ENV_PREFIX}_PORT"])
    if f"{ENV_PREFIX}_DATA_DIR" in env:
        config.data_dir = env[f"{ENV_PREFIX}_DATA_DIR"]
    if f"{ENV_PREFIX}_PROVIDER_ENDPOINT" in env:
        config.provider.endpoint = env[f"{ENV_PREFIX}_PROVIDER_ENDPOINT"]
        config.provider.kind = "http"
    if f"{ENV_PREFIX}_PROVIDER_TOKEN" in env:
        config.provider.token = env[f"{ENV_PREFIX}_PROVIDER_TOKEN"]
    return config
