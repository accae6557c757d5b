"""HTTP platform: job queue, story repository, comments, token auth."""

from .config import ServiceConfig, load_config
from .store import Store
from .worker import WorkerPool

__all__ = ["ServiceConfig", "load_config", "Store", "WorkerPool"]
