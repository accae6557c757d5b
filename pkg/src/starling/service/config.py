"""Service configuration: explicit overrides, then environment, then defaults."""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_PORT = 8000
DEFAULT_JOB_TTL = 7 * 24 * 3600
DEFAULT_MAX_SOURCE = 1 << 20
DEFAULT_STORE = "starling.db"


@dataclass(frozen=True, slots=True)
class ServiceConfig:
    port: int = DEFAULT_PORT
    workers: int = 0  # 0 means one per processor core
    job_ttl: int = DEFAULT_JOB_TTL
    max_source: int = DEFAULT_MAX_SOURCE
    store: str = DEFAULT_STORE
    host: str = "127.0.0.1"

    @property
    def worker_count(self) -> int:
        return self.workers if self.workers > 0 else (os.cpu_count() or 1)


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}")


def load_config(
    port: int | None = None,
    workers: int | None = None,
    job_ttl: int | None = None,
    max_source: int | None = None,
    store: str | None = None,
    host: str | None = None,
) -> ServiceConfig:
    """Resolve configuration; None arguments fall back to the environment."""
    return ServiceConfig(
        port=port if port is not None else _env_int("STARLING_PORT", DEFAULT_PORT),
        workers=workers if workers is not None else _env_int("STARLING_WORKERS", 0),
        job_ttl=job_ttl
        if job_ttl is not None
        else _env_int("STARLING_JOB_TTL", DEFAULT_JOB_TTL),
        max_source=max_source
        if max_source is not None
        else _env_int("STARLING_MAX_SOURCE", DEFAULT_MAX_SOURCE),
        store=store or os.environ.get("STARLING_STORE", DEFAULT_STORE),
        host=host or os.environ.get("STARLING_HOST", "127.0.0.1"),
    )
